#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lbsn/classify.hpp"

namespace lbsn {

inline constexpr int kDefaultDayAnchorHour = 5;

struct STNodeKey {
    std::string venue_id;
    int hour = 0;  // local clock hour, 0-23

    friend bool operator==(const STNodeKey& a, const STNodeKey& b) {
        return a.hour == b.hour && a.venue_id == b.venue_id;
    }
    friend bool operator<(const STNodeKey& a, const STNodeKey& b) {
        if (a.venue_id != b.venue_id) return a.venue_id < b.venue_id;
        return a.hour < b.hour;
    }
};

/// Directed weighted graph over (venue, hour) nodes. Nodes are sorted by key;
/// indices into `nodes` identify them everywhere else. Isolated vertices never
/// appear: nodes exist only because an edge touches them.
struct MobilityGraph {
    std::string city;
    Label cls = Label::Tourist;
    std::vector<STNodeKey> nodes;
    // Per node: sorted (neighbor index, transition count). Self-loops allowed.
    std::vector<std::vector<std::pair<int, uint64_t>>> out_edges;
    std::vector<std::vector<std::pair<int, uint64_t>>> in_edges;

    size_t node_count() const { return nodes.size(); }
    size_t edge_count() const;
    uint64_t total_weight() const;
    int index_of(const STNodeKey& key) const;  // -1 when absent
};

/// Builds the per-(city, class) graph. For each user, consecutive labeled
/// check-in pairs whose timestamps fall in the same anchor-hour-based local
/// day create or increment an edge (venue_i, hour_i) -> (venue_j, hour_j).
/// Pairs straddling the anchor boundary contribute nothing.
MobilityGraph build_graph(std::span<const LabeledCheckIn> labeled, const std::string& city,
                          Label cls, int anchor_hour = kDefaultDayAnchorHour);

/// Counts qualifying same-anchored-day consecutive pairs by a linear scan;
/// equals the graph's total edge weight by construction.
uint64_t count_same_day_pairs(std::span<const LabeledCheckIn> labeled,
                              const std::string& city, Label cls,
                              int anchor_hour = kDefaultDayAnchorHour);

/// Distance semantics for closeness/betweenness shortest paths. Hops treats
/// every edge as length 1; InverseWeight uses 1/weight so heavy transitions
/// are "closer".
enum class PathMetric { Hops, InverseWeight };

/// (in-degree + out-degree, counting distinct incident edges; a self-loop
/// counts once on each side) normalized by the graph maximum.
std::vector<double> degree_centrality(const MobilityGraph& g);

/// Outgoing closeness with the reachable-set-scaled form:
/// (R/(n-1)) * (R / sum of distances), 0 when nothing is reachable.
std::vector<double> closeness_centrality(const MobilityGraph& g,
                                         PathMetric metric = PathMetric::Hops);

/// Brandes accumulation over single-source shortest-path DAGs. Raw scores by
/// default; normalized divides by (n-1)(n-2).
std::vector<double> betweenness_centrality(const MobilityGraph& g, bool normalized = false,
                                           PathMetric metric = PathMetric::Hops);

enum class CentralityMetric { Degree, Closeness, Betweenness };
const char* to_string(CentralityMetric metric);
CentralityMetric centrality_metric_from_string(std::string_view name);

struct RankedNode {
    std::string display_label;  // "name[hour]"
    std::string subcategory;    // venue's raw subcategory
    double score = 0.0;
};

/// Top-n nodes by score, descending, ties by display label ascending.
std::vector<RankedNode> centrality_ranking(const MobilityGraph& g,
                                           const VenueCatalog& venues,
                                           CentralityMetric metric, size_t n,
                                           PathMetric path_metric = PathMetric::Hops);

/// Edge-list CSV: from_venue,from_hour,to_venue,to_hour,weight.
void write_edges_csv(std::ostream& out, const MobilityGraph& g);

/// Graphviz DOT with "name[hour]" display labels, for external visualization.
void write_dot(std::ostream& out, const MobilityGraph& g, const VenueCatalog& venues);

}  // namespace lbsn
