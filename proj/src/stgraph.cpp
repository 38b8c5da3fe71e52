#include "lbsn/stgraph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <ostream>
#include <queue>

#include "lbsn/csv.hpp"

namespace lbsn {

size_t MobilityGraph::edge_count() const {
    size_t n = 0;
    for (const auto& adj : out_edges) n += adj.size();
    return n;
}

uint64_t MobilityGraph::total_weight() const {
    uint64_t w = 0;
    for (const auto& adj : out_edges)
        for (const auto& [to, weight] : adj) w += weight;
    return w;
}

int MobilityGraph::index_of(const STNodeKey& key) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), key);
    if (it == nodes.end() || !(*it == key)) return -1;
    return static_cast<int>(it - nodes.begin());
}

MobilityGraph build_graph(std::span<const LabeledCheckIn> labeled, const std::string& city,
                          Label cls, int anchor_hour) {
    if (anchor_hour < 0 || anchor_hour > 23)
        throw ConfigError("build_graph: anchor hour must be in [0, 23]");

    // Accumulate transition counts keyed by (from, to) node keys.
    std::map<std::pair<STNodeKey, STNodeKey>, uint64_t> weights;
    const LabeledCheckIn* prev = nullptr;
    for (const auto& lc : labeled) {
        if (lc.city != city || lc.label != cls) {
            // A check-in outside the slice does not break the chain; chains are
            // over the filtered per-user sequence.
            continue;
        }
        if (prev && prev->checkin.user_id == lc.checkin.user_id &&
            prev->checkin.timestamp.anchored_day(anchor_hour) ==
                lc.checkin.timestamp.anchored_day(anchor_hour)) {
            STNodeKey from{prev->checkin.venue_id, prev->checkin.timestamp.local_hour()};
            STNodeKey to{lc.checkin.venue_id, lc.checkin.timestamp.local_hour()};
            ++weights[{std::move(from), std::move(to)}];
        }
        prev = &lc;
    }

    MobilityGraph g;
    g.city = city;
    g.cls = cls;
    for (const auto& [edge, w] : weights) {
        g.nodes.push_back(edge.first);
        g.nodes.push_back(edge.second);
    }
    std::sort(g.nodes.begin(), g.nodes.end());
    g.nodes.erase(std::unique(g.nodes.begin(), g.nodes.end()), g.nodes.end());

    g.out_edges.assign(g.nodes.size(), {});
    g.in_edges.assign(g.nodes.size(), {});
    for (const auto& [edge, w] : weights) {
        const int from = g.index_of(edge.first);
        const int to = g.index_of(edge.second);
        g.out_edges[static_cast<size_t>(from)].emplace_back(to, w);
        g.in_edges[static_cast<size_t>(to)].emplace_back(from, w);
    }
    for (auto& adj : g.out_edges) std::sort(adj.begin(), adj.end());
    for (auto& adj : g.in_edges) std::sort(adj.begin(), adj.end());
    return g;
}

uint64_t count_same_day_pairs(std::span<const LabeledCheckIn> labeled,
                              const std::string& city, Label cls, int anchor_hour) {
    uint64_t count = 0;
    const LabeledCheckIn* prev = nullptr;
    for (const auto& lc : labeled) {
        if (lc.city != city || lc.label != cls) continue;
        if (prev && prev->checkin.user_id == lc.checkin.user_id &&
            prev->checkin.timestamp.anchored_day(anchor_hour) ==
                lc.checkin.timestamp.anchored_day(anchor_hour))
            ++count;
        prev = &lc;
    }
    return count;
}

std::vector<double> degree_centrality(const MobilityGraph& g) {
    const size_t n = g.node_count();
    std::vector<double> scores(n, 0.0);
    if (n == 0) return scores;
    size_t max_degree = 0;
    std::vector<size_t> degrees(n);
    for (size_t v = 0; v < n; ++v) {
        degrees[v] = g.out_edges[v].size() + g.in_edges[v].size();
        max_degree = std::max(max_degree, degrees[v]);
    }
    for (size_t v = 0; v < n; ++v)
        scores[v] = static_cast<double>(degrees[v]) / static_cast<double>(max_degree);
    return scores;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPathTol = 1e-12;  // shortest-path ties under InverseWeight

double edge_length(uint64_t weight, PathMetric metric) {
    return metric == PathMetric::Hops ? 1.0 : 1.0 / static_cast<double>(weight);
}

struct SsspResult {
    std::vector<double> dist;              // kInf when unreachable
    std::vector<double> sigma;             // shortest-path counts
    std::vector<std::vector<int>> preds;   // shortest-path DAG predecessors
    std::vector<int> order;                // nondecreasing distance order
};

// BFS for hop metric, Dijkstra for inverse-weight; both produce the
// predecessor DAG and path counts Brandes needs.
SsspResult single_source(const MobilityGraph& g, int source, PathMetric metric) {
    const size_t n = g.node_count();
    SsspResult r;
    r.dist.assign(n, kInf);
    r.sigma.assign(n, 0.0);
    r.preds.assign(n, {});
    r.dist[static_cast<size_t>(source)] = 0.0;
    r.sigma[static_cast<size_t>(source)] = 1.0;

    if (metric == PathMetric::Hops) {
        std::deque<int> queue{source};
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            r.order.push_back(v);
            for (const auto& [w, weight] : g.out_edges[static_cast<size_t>(v)]) {
                if (w == v) continue;  // self-loops never lie on shortest paths
                const double cand = r.dist[static_cast<size_t>(v)] + 1.0;
                if (r.dist[static_cast<size_t>(w)] == kInf) {
                    r.dist[static_cast<size_t>(w)] = cand;
                    queue.push_back(w);
                }
                if (r.dist[static_cast<size_t>(w)] == cand) {
                    r.sigma[static_cast<size_t>(w)] += r.sigma[static_cast<size_t>(v)];
                    r.preds[static_cast<size_t>(w)].push_back(v);
                }
            }
        }
    } else {
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
        std::vector<bool> settled(n, false);
        heap.push({0.0, source});
        while (!heap.empty()) {
            const auto [d, v] = heap.top();
            heap.pop();
            if (settled[static_cast<size_t>(v)]) continue;
            settled[static_cast<size_t>(v)] = true;
            r.order.push_back(v);
            for (const auto& [w, weight] : g.out_edges[static_cast<size_t>(v)]) {
                if (w == v) continue;
                const double cand = d + edge_length(weight, metric);
                double& dw = r.dist[static_cast<size_t>(w)];
                if (cand < dw - kPathTol) {
                    dw = cand;
                    r.sigma[static_cast<size_t>(w)] = r.sigma[static_cast<size_t>(v)];
                    r.preds[static_cast<size_t>(w)] = {v};
                    heap.push({cand, w});
                } else if (std::abs(cand - dw) <= kPathTol) {
                    r.sigma[static_cast<size_t>(w)] += r.sigma[static_cast<size_t>(v)];
                    r.preds[static_cast<size_t>(w)].push_back(v);
                }
            }
        }
    }
    return r;
}

}  // namespace

std::vector<double> closeness_centrality(const MobilityGraph& g, PathMetric metric) {
    const size_t n = g.node_count();
    std::vector<double> scores(n, 0.0);
    if (n <= 1) return scores;
    for (size_t v = 0; v < n; ++v) {
        const SsspResult r = single_source(g, static_cast<int>(v), metric);
        double sum = 0.0;
        size_t reachable = 0;
        for (size_t w = 0; w < n; ++w) {
            if (w == v || r.dist[w] == kInf) continue;
            sum += r.dist[w];
            ++reachable;
        }
        if (reachable == 0 || sum == 0.0) continue;
        const double reach = static_cast<double>(reachable);
        scores[v] = (reach / static_cast<double>(n - 1)) * (reach / sum);
    }
    return scores;
}

std::vector<double> betweenness_centrality(const MobilityGraph& g, bool normalized,
                                           PathMetric metric) {
    const size_t n = g.node_count();
    std::vector<double> scores(n, 0.0);
    if (n < 3) return scores;

    for (size_t s = 0; s < n; ++s) {
        SsspResult r = single_source(g, static_cast<int>(s), metric);
        std::vector<double> delta(n, 0.0);
        for (auto it = r.order.rbegin(); it != r.order.rend(); ++it) {
            const size_t w = static_cast<size_t>(*it);
            for (int v : r.preds[w]) {
                delta[static_cast<size_t>(v)] +=
                    (r.sigma[static_cast<size_t>(v)] / r.sigma[w]) * (1.0 + delta[w]);
            }
            if (w != s) scores[w] += delta[w];
        }
    }
    if (normalized) {
        const double scale =
            static_cast<double>(n - 1) * static_cast<double>(n - 2);
        for (double& score : scores) score /= scale;
    }
    return scores;
}

const char* to_string(CentralityMetric metric) {
    switch (metric) {
        case CentralityMetric::Degree: return "degree";
        case CentralityMetric::Closeness: return "closeness";
        case CentralityMetric::Betweenness: return "betweenness";
    }
    return "degree";
}

CentralityMetric centrality_metric_from_string(std::string_view name) {
    const std::string v = ascii_lower(name);
    if (v == "degree") return CentralityMetric::Degree;
    if (v == "closeness") return CentralityMetric::Closeness;
    if (v == "betweenness") return CentralityMetric::Betweenness;
    throw ConfigError("unknown centrality metric: " + std::string(name));
}

namespace {

std::string display_label(const STNodeKey& key, const VenueCatalog& venues) {
    auto it = venues.find(key.venue_id);
    const std::string& name = it != venues.end() ? it->second.name : key.venue_id;
    return name + "[" + std::to_string(key.hour) + "]";
}

}  // namespace

std::vector<RankedNode> centrality_ranking(const MobilityGraph& g,
                                           const VenueCatalog& venues,
                                           CentralityMetric metric, size_t n,
                                           PathMetric path_metric) {
    if (n < 1) throw ConfigError("centrality ranking size must be at least 1");
    std::vector<double> scores;
    switch (metric) {
        case CentralityMetric::Degree: scores = degree_centrality(g); break;
        case CentralityMetric::Closeness: scores = closeness_centrality(g, path_metric); break;
        case CentralityMetric::Betweenness:
            scores = betweenness_centrality(g, false, path_metric);
            break;
    }
    std::vector<RankedNode> ranking;
    ranking.reserve(g.node_count());
    for (size_t v = 0; v < g.node_count(); ++v) {
        RankedNode node;
        node.display_label = display_label(g.nodes[v], venues);
        auto it = venues.find(g.nodes[v].venue_id);
        node.subcategory = it != venues.end() ? it->second.subcategory : "";
        node.score = scores[v];
        ranking.push_back(std::move(node));
    }
    std::sort(ranking.begin(), ranking.end(), [](const RankedNode& a, const RankedNode& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.display_label < b.display_label;
    });
    if (ranking.size() > n) ranking.resize(n);
    return ranking;
}

void write_edges_csv(std::ostream& out, const MobilityGraph& g) {
    out << "from_venue,from_hour,to_venue,to_hour,weight\n";
    for (size_t v = 0; v < g.node_count(); ++v) {
        for (const auto& [w, weight] : g.out_edges[v]) {
            const STNodeKey& from = g.nodes[v];
            const STNodeKey& to = g.nodes[static_cast<size_t>(w)];
            out << join_csv({from.venue_id, std::to_string(from.hour), to.venue_id,
                             std::to_string(to.hour), std::to_string(weight)})
                << "\n";
        }
    }
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace

void write_dot(std::ostream& out, const MobilityGraph& g, const VenueCatalog& venues) {
    out << "digraph mobility {\n";
    for (size_t v = 0; v < g.node_count(); ++v) {
        out << "  n" << v << " [label=\"" << dot_escape(display_label(g.nodes[v], venues))
            << "\"];\n";
    }
    for (size_t v = 0; v < g.node_count(); ++v) {
        for (const auto& [w, weight] : g.out_edges[v]) {
            out << "  n" << v << " -> n" << w << " [weight=" << weight << ", label=\""
                << weight << "\"];\n";
        }
    }
    out << "}\n";
}

}  // namespace lbsn
