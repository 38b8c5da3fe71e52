#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lbsn/classify.hpp"

namespace lbsn {

struct UserDocument {
    std::string user_id;
    std::vector<std::string> tokens;  // one subcategory label per check-in
};

struct Corpus {
    std::vector<UserDocument> docs;        // sorted by user_id
    std::vector<std::string> vocabulary;   // sorted unique tokens
    size_t total_tokens() const;
};

/// One document per user with at least one labeled check-in in (city, class);
/// tokens are raw venue subcategories, repeats kept.
Corpus build_corpus(std::span<const LabeledCheckIn> labeled, const VenueCatalog& venues,
                    const std::string& city, Label cls);

struct LdaConfig {
    int topics = 3;
    double alpha = -1.0;  // < 0 means 50 / K
    double beta = 0.01;
    int iterations = 1000;
    uint64_t seed = 42;

    double effective_alpha() const { return alpha < 0 ? 50.0 / topics : alpha; }
};

struct TopicModel {
    int K = 0;
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<std::string> vocabulary;
    std::vector<std::string> doc_ids;
    std::vector<std::vector<int64_t>> topic_word;  // K x V
    std::vector<int64_t> topic_total;              // K
    std::vector<std::vector<int64_t>> doc_topic;   // D x K

    /// Smoothed probability (count + beta) / (total + V * beta).
    double topic_word_prob(int k, size_t w) const;

    /// Integer count-table identities: per-document and per-topic marginals
    /// plus matching grand totals.
    bool counts_consistent(size_t expected_tokens) const;
};

/// Collapsed Gibbs sampler. Deterministic given the seed; documents get
/// independent random substreams keyed by user id, and sweeps visit documents
/// in user-id order, so input document order never matters. The observer, when
/// set, runs after every full sweep.
TopicModel fit_lda(const Corpus& corpus, const LdaConfig& config,
                   const std::function<void(const TopicModel&, int sweep)>& on_sweep = {});

struct ProfileEntry {
    int topic = 0;
    int rank = 1;
    std::string subcategory;
    double probability = 0.0;
};

/// Per topic, the top-m subcategories by smoothed probability, ties broken by
/// label ascending.
std::vector<ProfileEntry> top_subcategories(const TopicModel& model, int m);

/// Flat text dump of the fitted state (header, vocabulary, count tables).
void dump_model(std::ostream& out, const TopicModel& model);

}  // namespace lbsn
