#include "lbsn/profiles.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <random>

namespace lbsn {

size_t Corpus::total_tokens() const {
    size_t n = 0;
    for (const auto& doc : docs) n += doc.tokens.size();
    return n;
}

Corpus build_corpus(std::span<const LabeledCheckIn> labeled, const VenueCatalog& venues,
                    const std::string& city, Label cls) {
    std::map<std::string, std::vector<std::string>> by_user;
    for (const auto& lc : labeled) {
        if (lc.city != city || lc.label != cls) continue;
        auto it = venues.find(lc.checkin.venue_id);
        if (it == venues.end()) continue;
        by_user[lc.checkin.user_id].push_back(it->second.subcategory);
    }
    Corpus corpus;
    std::vector<std::string> vocab;
    for (auto& [user_id, tokens] : by_user) {
        for (const auto& t : tokens) vocab.push_back(t);
        corpus.docs.push_back({user_id, std::move(tokens)});
    }
    std::sort(vocab.begin(), vocab.end());
    vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
    corpus.vocabulary = std::move(vocab);
    return corpus;
}

double TopicModel::topic_word_prob(int k, size_t w) const {
    const double V = static_cast<double>(vocabulary.size());
    return (static_cast<double>(topic_word[static_cast<size_t>(k)][w]) + beta) /
           (static_cast<double>(topic_total[static_cast<size_t>(k)]) + V * beta);
}

bool TopicModel::counts_consistent(size_t expected_tokens) const {
    int64_t grand_tw = 0, grand_dt = 0;
    for (int k = 0; k < K; ++k) {
        int64_t row = 0;
        for (size_t w = 0; w < vocabulary.size(); ++w) {
            const int64_t c = topic_word[static_cast<size_t>(k)][w];
            if (c < 0) return false;
            row += c;
        }
        if (row != topic_total[static_cast<size_t>(k)]) return false;
        grand_tw += row;
    }
    for (const auto& row : doc_topic) {
        for (int64_t c : row) {
            if (c < 0) return false;
            grand_dt += c;
        }
    }
    return grand_tw == static_cast<int64_t>(expected_tokens) &&
           grand_dt == static_cast<int64_t>(expected_tokens);
}

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Portable uniform in [0, 1); mt19937_64 output is specified bit-exactly.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

TopicModel fit_lda(const Corpus& corpus, const LdaConfig& config,
                   const std::function<void(const TopicModel&, int sweep)>& on_sweep) {
    if (config.topics < 1) throw ConfigError("fit_lda: K must be >= 1");
    if (config.iterations < 1) throw ConfigError("fit_lda: iterations must be >= 1");
    if (corpus.docs.empty()) throw DataError("fit_lda: empty corpus");
    if (corpus.vocabulary.empty()) throw DataError("fit_lda: empty vocabulary");

    const int K = config.topics;
    const size_t V = corpus.vocabulary.size();
    const size_t D = corpus.docs.size();
    const double alpha = config.effective_alpha();
    const double beta = config.beta;
    const size_t total = corpus.total_tokens();
    if (static_cast<size_t>(K) > total)
        log_warn("fit_lda: K = " + std::to_string(K) + " exceeds corpus size " +
                 std::to_string(total) + ", proceeding");

    // Documents are processed in user-id order regardless of input order.
    std::vector<size_t> doc_order(D);
    for (size_t d = 0; d < D; ++d) doc_order[d] = d;
    std::sort(doc_order.begin(), doc_order.end(), [&](size_t a, size_t b) {
        return corpus.docs[a].user_id < corpus.docs[b].user_id;
    });

    std::map<std::string, size_t> word_index;
    for (size_t w = 0; w < V; ++w) word_index[corpus.vocabulary[w]] = w;

    TopicModel model;
    model.K = K;
    model.alpha = alpha;
    model.beta = beta;
    model.vocabulary = corpus.vocabulary;
    model.topic_word.assign(static_cast<size_t>(K), std::vector<int64_t>(V, 0));
    model.topic_total.assign(static_cast<size_t>(K), 0);
    model.doc_topic.assign(D, std::vector<int64_t>(static_cast<size_t>(K), 0));
    model.doc_ids.resize(D);

    std::vector<std::vector<size_t>> doc_words(D);
    std::vector<std::vector<int>> assignments(D);
    std::vector<std::mt19937_64> doc_rng;
    doc_rng.reserve(D);

    for (size_t pos = 0; pos < D; ++pos) {
        const size_t d = doc_order[pos];
        const UserDocument& doc = corpus.docs[d];
        model.doc_ids[pos] = doc.user_id;
        doc_rng.emplace_back(splitmix64(config.seed ^ fnv1a64(doc.user_id)));
        auto& words = doc_words[pos];
        words.reserve(doc.tokens.size());
        for (const auto& t : doc.tokens) words.push_back(word_index.at(t));
    }

    // Initialization: each token gets a topic from its document's stream.
    for (size_t pos = 0; pos < D; ++pos) {
        auto& rng = doc_rng[pos];
        auto& z = assignments[pos];
        z.reserve(doc_words[pos].size());
        for (size_t w : doc_words[pos]) {
            const int k = static_cast<int>(uniform01(rng) * K);
            const int topic = k >= K ? K - 1 : k;
            z.push_back(topic);
            ++model.topic_word[static_cast<size_t>(topic)][w];
            ++model.topic_total[static_cast<size_t>(topic)];
            ++model.doc_topic[pos][static_cast<size_t>(topic)];
        }
    }

    std::vector<double> weights(static_cast<size_t>(K));
    const double vbeta = static_cast<double>(V) * beta;

    for (int sweep = 0; sweep < config.iterations; ++sweep) {
        for (size_t pos = 0; pos < D; ++pos) {
            auto& rng = doc_rng[pos];
            auto& z = assignments[pos];
            const auto& words = doc_words[pos];
            auto& ndk = model.doc_topic[pos];
            for (size_t i = 0; i < words.size(); ++i) {
                const size_t w = words[i];
                const int old_topic = z[i];
                --model.topic_word[static_cast<size_t>(old_topic)][w];
                --model.topic_total[static_cast<size_t>(old_topic)];
                --ndk[static_cast<size_t>(old_topic)];

                double sum = 0.0;
                for (int k = 0; k < K; ++k) {
                    const size_t ks = static_cast<size_t>(k);
                    const double p =
                        (static_cast<double>(ndk[ks]) + alpha) *
                        (static_cast<double>(model.topic_word[ks][w]) + beta) /
                        (static_cast<double>(model.topic_total[ks]) + vbeta);
                    weights[ks] = p;
                    sum += p;
                }
                double u = uniform01(rng) * sum;
                int new_topic = K - 1;
                for (int k = 0; k < K; ++k) {
                    u -= weights[static_cast<size_t>(k)];
                    if (u <= 0.0) {
                        new_topic = k;
                        break;
                    }
                }
                z[i] = new_topic;
                ++model.topic_word[static_cast<size_t>(new_topic)][w];
                ++model.topic_total[static_cast<size_t>(new_topic)];
                ++ndk[static_cast<size_t>(new_topic)];
            }
        }
        if (on_sweep) on_sweep(model, sweep);
    }
    return model;
}

std::vector<ProfileEntry> top_subcategories(const TopicModel& model, int m) {
    if (m < 1) throw ConfigError("top_subcategories: m must be >= 1");
    std::vector<ProfileEntry> report;
    for (int k = 0; k < model.K; ++k) {
        std::vector<std::pair<std::string, double>> ranked;
        ranked.reserve(model.vocabulary.size());
        for (size_t w = 0; w < model.vocabulary.size(); ++w)
            ranked.emplace_back(model.vocabulary[w], model.topic_word_prob(k, w));
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        const size_t take = std::min(static_cast<size_t>(m), ranked.size());
        for (size_t i = 0; i < take; ++i) {
            report.push_back({k, static_cast<int>(i + 1), ranked[i].first, ranked[i].second});
        }
    }
    return report;
}

void dump_model(std::ostream& out, const TopicModel& model) {
    out << "lda_model v1\n";
    out << "K " << model.K << "\n";
    out << "alpha " << format_double(model.alpha) << "\n";
    out << "beta " << format_double(model.beta) << "\n";
    out << "V " << model.vocabulary.size() << "\n";
    out << "D " << model.doc_ids.size() << "\n";
    for (size_t w = 0; w < model.vocabulary.size(); ++w)
        out << "word " << w << " " << model.vocabulary[w] << "\n";
    for (int k = 0; k < model.K; ++k) {
        out << "topic_total " << k << " " << model.topic_total[static_cast<size_t>(k)]
            << "\n";
        for (size_t w = 0; w < model.vocabulary.size(); ++w) {
            const int64_t c = model.topic_word[static_cast<size_t>(k)][w];
            if (c != 0) out << "topic_word " << k << " " << w << " " << c << "\n";
        }
    }
    for (size_t d = 0; d < model.doc_ids.size(); ++d) {
        out << "doc " << d << " " << model.doc_ids[d];
        for (int k = 0; k < model.K; ++k) out << " " << model.doc_topic[d][static_cast<size_t>(k)];
        out << "\n";
    }
}

}  // namespace lbsn
