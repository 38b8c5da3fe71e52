#include "doctest.h"

#include <random>
#include <sstream>

#include "lbsn/stgraph.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace lbsn;
using testutil::make_checkin;

namespace {

LabeledCheckIn lc(const std::string& id, const std::string& user,
                  const std::string& venue, const std::string& when,
                  Label cls = Label::Tourist, const std::string& city = "Rio") {
    return {make_checkin(id, user, venue, when), city, cls};
}

}  // namespace

TEST_CASE("edge weights accumulate over users") {
    // Ten users each check in at Corcovado at 10:00 and Maracana at 14:00 on
    // the same local day: one edge of weight 10.
    std::vector<LabeledCheckIn> data;
    for (int u = 0; u < 10; ++u) {
        const std::string user = "u" + std::to_string(u);
        data.push_back(lc("a" + std::to_string(u), user, "corcovado",
                          "2014-05-05T10:30:00-03:00"));
        data.push_back(lc("b" + std::to_string(u), user, "maracana",
                          "2014-05-05T14:10:00-03:00"));
    }
    auto g = build_graph(data, "Rio", Label::Tourist);
    REQUIRE(g.node_count() == 2);
    CHECK(g.edge_count() == 1);
    CHECK(g.total_weight() == 10);
    const int from = g.index_of({"corcovado", 10});
    const int to = g.index_of({"maracana", 14});
    REQUIRE(from >= 0);
    REQUIRE(to >= 0);
    REQUIRE(g.out_edges[from].size() == 1);
    CHECK(g.out_edges[from][0] == std::pair{to, uint64_t{10}});
    CHECK(count_same_day_pairs(data, "Rio", Label::Tourist) == 10);
}

TEST_CASE("pairs straddling the 5 o'clock boundary make no edge") {
    std::vector<LabeledCheckIn> data = {
        lc("c1", "u1", "v1", "2014-05-05T23:30:00-03:00"),
        lc("c2", "u1", "v2", "2014-05-06T06:10:00-03:00"),
    };
    auto g = build_graph(data, "Rio", Label::Tourist);
    CHECK(g.node_count() == 0);  // no edges, so no nodes either
    CHECK(g.edge_count() == 0);
    CHECK(count_same_day_pairs(data, "Rio", Label::Tourist) == 0);

    // The same gap within one anchored day does create an edge: 23:30 to 04:10
    // both land on the anchored day that started at 05:00 on May 5.
    std::vector<LabeledCheckIn> inside = {
        lc("c1", "u1", "v1", "2014-05-05T23:30:00-03:00"),
        lc("c2", "u1", "v2", "2014-05-06T04:10:00-03:00"),
    };
    auto g2 = build_graph(inside, "Rio", Label::Tourist);
    CHECK(g2.edge_count() == 1);
    REQUIRE(g2.node_count() == 2);
    CHECK(g2.index_of({"v2", 4}) >= 0);

    CHECK_THROWS_AS(build_graph(data, "Rio", Label::Tourist, 24), ConfigError);
}

TEST_CASE("same venue at different hours is two nodes") {
    std::vector<LabeledCheckIn> data = {
        lc("c1", "u1", "v1", "2014-05-05T09:00:00-03:00"),
        lc("c2", "u1", "v1", "2014-05-05T18:00:00-03:00"),
    };
    auto g = build_graph(data, "Rio", Label::Tourist);
    CHECK(g.node_count() == 2);
    CHECK(g.index_of({"v1", 9}) >= 0);
    CHECK(g.index_of({"v1", 18}) >= 0);

    // Same venue, same hour: a self-loop on one node.
    std::vector<LabeledCheckIn> loop = {
        lc("c1", "u1", "v1", "2014-05-05T09:00:00-03:00"),
        lc("c2", "u1", "v1", "2014-05-05T09:40:00-03:00"),
    };
    auto gl = build_graph(loop, "Rio", Label::Tourist);
    CHECK(gl.node_count() == 1);
    CHECK(gl.edge_count() == 1);
    auto deg = degree_centrality(gl);
    REQUIRE(deg.size() == 1);
    CHECK(deg[0] == doctest::Approx(1.0));
}

TEST_CASE("slice filters by city and class") {
    std::vector<LabeledCheckIn> data = {
        lc("c1", "u1", "v1", "2014-05-05T10:00:00-03:00", Label::Tourist),
        lc("c2", "u1", "v2", "2014-05-05T11:00:00-03:00", Label::Resident),
        lc("c3", "u1", "v3", "2014-05-05T12:00:00-03:00", Label::Tourist),
    };
    // The resident check-in is invisible to the tourist slice, so v1 -> v3
    // become consecutive there.
    auto g = build_graph(data, "Rio", Label::Tourist);
    CHECK(g.edge_count() == 1);
    CHECK(g.index_of({"v1", 10}) >= 0);
    CHECK(g.index_of({"v3", 12}) >= 0);
    CHECK(g.index_of({"v2", 11}) == -1);
}

namespace {

// One user walks v0, v1, ..., vk within one day, hours 8, 9, ...; plus
// optional extra (from, to) hops by other users on other days at matching
// hours so nodes merge correctly.
MobilityGraph chain_graph(int k) {
    std::vector<LabeledCheckIn> data;
    for (int i = 0; i <= k; ++i) {
        char when[48];
        std::snprintf(when, sizeof(when), "2014-05-05T%02d:00:00-03:00", 8 + i);
        data.push_back(lc("c" + std::to_string(i), "walker", "v" + std::to_string(i),
                          when));
    }
    return build_graph(data, "Rio", Label::Tourist);
}

}  // namespace

TEST_CASE("closeness on a three-node chain") {
    auto g = chain_graph(2);  // v0[8] -> v1[9] -> v2[10]
    REQUIRE(g.node_count() == 3);
    auto close = closeness_centrality(g);
    const int i0 = g.index_of({"v0", 8});
    const int i1 = g.index_of({"v1", 9});
    const int i2 = g.index_of({"v2", 10});
    // v0 reaches 2 nodes at distances 1+2: (2/2)*(2/3) = 2/3.
    CHECK(close[i0] == doctest::Approx(2.0 / 3.0));
    // v1 reaches 1 node at distance 1: (1/2)*(1/1) = 1/2.
    CHECK(close[i1] == doctest::Approx(0.5));
    CHECK(close[i2] == doctest::Approx(0.0));

    auto between = betweenness_centrality(g);
    CHECK(between[i1] == doctest::Approx(1.0));  // only v0->v2 passes through
    CHECK(between[i0] == doctest::Approx(0.0));
    auto norm = betweenness_centrality(g, true);
    CHECK(norm[i1] == doctest::Approx(0.5));  // 1 / ((3-1)(3-2))

    auto deg = degree_centrality(g);
    CHECK(deg[i1] == doctest::Approx(1.0));
    CHECK(deg[i0] == doctest::Approx(0.5));
}

TEST_CASE("inverse-weight metric prefers heavy edges") {
    // v0 -> v1 (weight 10) -> v2 (weight 10), and a direct v0 -> v2 (weight 1).
    // By hops the direct edge wins; by inverse weight the two-hop route costs
    // 0.2 < 1.0, so v1 lies on the shortest v0->v2 path.
    std::vector<LabeledCheckIn> data;
    int id = 0;
    for (int u = 0; u < 10; ++u) {
        const std::string user = "w" + std::to_string(u);
        const int day = 1 + u;
        char t1[48], t2[48], t3[48];
        std::snprintf(t1, sizeof(t1), "2014-05-%02dT08:00:00-03:00", day);
        std::snprintf(t2, sizeof(t2), "2014-05-%02dT09:00:00-03:00", day);
        std::snprintf(t3, sizeof(t3), "2014-05-%02dT10:00:00-03:00", day);
        data.push_back(lc("c" + std::to_string(id++), user, "v0", t1));
        data.push_back(lc("c" + std::to_string(id++), user, "v1", t2));
        data.push_back(lc("c" + std::to_string(id++), user, "v2", t3));
    }
    // The direct hop v0[8] -> v2[10] by one extra user.
    data.push_back(lc("d1", "direct", "v0", "2014-05-20T08:30:00-03:00"));
    data.push_back(lc("d2", "direct", "v2", "2014-05-20T10:30:00-03:00"));

    auto g = build_graph(data, "Rio", Label::Tourist);
    const int i1 = g.index_of({"v1", 9});
    REQUIRE(i1 >= 0);

    auto hops = betweenness_centrality(g, false, PathMetric::Hops);
    CHECK(hops[i1] == doctest::Approx(0.0));  // direct edge is the unique shortest
    auto inv = betweenness_centrality(g, false, PathMetric::InverseWeight);
    CHECK(inv[i1] == doctest::Approx(1.0));
}

TEST_CASE("centralities match exhaustive oracles on random digraphs") {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 5);  // 3..7 nodes
        oracle::Digraph dg;
        dg.n = n;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (a != b && rng() % 100 < 35) dg.edges.insert({a, b});
        if (dg.edges.empty()) dg.edges.insert({0, 1});

        // Realize each oracle node i as venue "v<i>" at hour 10: each edge is
        // its own user/day; both endpoints at hour 10 merge per venue.
        std::vector<LabeledCheckIn> data;
        int user = 0, id = 0;
        for (const auto& [a, b] : dg.edges) {
            const int day = 1 + (user % 27);
            const int month = 4 + (user / 27) % 3;
            char t1[48], t2[48];
            std::snprintf(t1, sizeof(t1), "2014-%02d-%02dT10:00:00-03:00", month, day);
            std::snprintf(t2, sizeof(t2), "2014-%02d-%02dT10:30:00-03:00", month, day);
            const std::string u = "user" + std::to_string(user++);
            data.push_back(lc("c" + std::to_string(id++), u, "v" + std::to_string(a), t1));
            data.push_back(lc("c" + std::to_string(id++), u, "v" + std::to_string(b), t2));
        }
        auto g = build_graph(data, "Rio", Label::Tourist);

        // Oracle works on nodes that actually appear (no isolated vertices).
        std::vector<int> present;
        for (int v = 0; v < n; ++v)
            if (g.index_of({"v" + std::to_string(v), 10}) >= 0) present.push_back(v);
        REQUIRE(g.node_count() == present.size());

        // Relabel to a compact oracle graph over present nodes.
        oracle::Digraph cg;
        cg.n = static_cast<int>(present.size());
        std::map<int, int> compact;
        for (size_t i = 0; i < present.size(); ++i) compact[present[i]] = static_cast<int>(i);
        for (const auto& [a, b] : dg.edges) cg.edges.insert({compact[a], compact[b]});

        auto want_deg = oracle::degree(cg);
        auto want_close = oracle::closeness(cg);
        auto want_between = oracle::betweenness(cg);
        auto got_deg = degree_centrality(g);
        auto got_close = closeness_centrality(g);
        auto got_between = betweenness_centrality(g);

        for (int v : present) {
            const int gi = g.index_of({"v" + std::to_string(v), 10});
            const int oi = compact[v];
            CHECK(got_deg[gi] == doctest::Approx(want_deg[oi]).epsilon(1e-9));
            CHECK(got_close[gi] == doctest::Approx(want_close[oi]).epsilon(1e-9));
            CHECK(got_between[gi] ==
                  doctest::Approx(want_between[oi]).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("graph weight equals the qualifying pair count") {
    std::mt19937 rng(99);
    std::vector<LabeledCheckIn> data;
    int id = 0;
    for (int u = 0; u < 12; ++u) {
        const std::string user = "u" + std::to_string(u);
        int64_t t = testutil::ts("2014-05-01T06:00:00-03:00").epoch_s;
        const int n = 2 + static_cast<int>(rng() % 12);
        for (int i = 0; i < n; ++i) {
            t += 1800 + static_cast<int64_t>(rng() % (36 * 3600));
            Timestamp when{t, -3 * 3600};
            CheckIn c;
            c.checkin_id = "c" + std::to_string(id++);
            c.user_id = user;
            c.venue_id = "v" + std::to_string(rng() % 5);
            c.timestamp = when;
            data.push_back({c, "Rio", Label::Tourist});
        }
    }
    auto g = build_graph(data, "Rio", Label::Tourist);
    CHECK(g.total_weight() == count_same_day_pairs(data, "Rio", Label::Tourist));

    // in-edge and out-edge weight totals agree.
    uint64_t out_total = 0, in_total = 0;
    for (const auto& adj : g.out_edges)
        for (const auto& [to, w] : adj) out_total += w;
    for (const auto& adj : g.in_edges)
        for (const auto& [from, w] : adj) in_total += w;
    CHECK(out_total == g.total_weight());
    CHECK(in_total == g.total_weight());
}

TEST_CASE("centrality ranking format and ties") {
    VenueCatalog venues;
    venues["v0"] = testutil::make_venue("v0", "Alpha", "Rio", 0, 0, "Food", "Diner");
    venues["v1"] = testutil::make_venue("v1", "Beta", "Rio", 0, 0, "Food", "Cafe");
    venues["v2"] = testutil::make_venue("v2", "Gamma", "Rio", 0, 0, "Food", "Bar");

    auto g = chain_graph(2);
    auto ranked = centrality_ranking(g, venues, CentralityMetric::Degree, 2);
    REQUIRE(ranked.size() == 2);
    CHECK(ranked[0].display_label == "Beta[9]");
    CHECK(ranked[0].subcategory == "Cafe");
    CHECK(ranked[0].score == doctest::Approx(1.0));
    // v0[8] and v2[10] tie at 0.5; "Alpha[8]" sorts before "Gamma[10]".
    CHECK(ranked[1].display_label == "Alpha[8]");

    CHECK_THROWS_AS(centrality_ranking(g, venues, CentralityMetric::Degree, 0),
                    ConfigError);
}

TEST_CASE("edge csv and dot output") {
    auto g = chain_graph(1);  // v0[8] -> v1[9]
    std::ostringstream csv;
    write_edges_csv(csv, g);
    CHECK(csv.str() ==
          "from_venue,from_hour,to_venue,to_hour,weight\nv0,8,v1,9,1\n");

    VenueCatalog venues;
    venues["v0"] = testutil::make_venue("v0", "Alpha", "Rio", 0, 0, "Food", "Diner");
    venues["v1"] = testutil::make_venue("v1", "Beta", "Rio", 0, 0, "Food", "Cafe");
    std::ostringstream dot;
    write_dot(dot, g, venues);
    CHECK(dot.str().find("digraph") != std::string::npos);
    CHECK(dot.str().find("Alpha[8]") != std::string::npos);
}
