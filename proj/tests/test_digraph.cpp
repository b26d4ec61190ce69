#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "prsweep/digraph.hpp"

#include <algorithm>
#include <random>

using namespace prsweep;
using namespace prsweep::digraph;
using numeric::Exact;
using numeric::Rational;

namespace {

std::vector<Rational> rat_levels(std::initializer_list<long> xs) {
    std::vector<Rational> out;
    for (long x : xs) out.emplace_back(x);
    return out;
}

LeveledDigraph relabel(const LeveledDigraph& g, const std::vector<int>& perm) {
    LeveledDigraph out;
    out.graph.vertex_count = g.graph.vertex_count;
    out.levels.resize(g.graph.vertex_count, Exact(0L));
    out.kinds.resize(g.graph.vertex_count, VertexKind::Regular);
    out.ids.resize(g.graph.vertex_count);
    for (int v = 0; v < g.graph.vertex_count; ++v) {
        out.levels[perm[v]] = g.levels[v];
        out.kinds[perm[v]] = g.kinds[v];
        out.ids[perm[v]] = "w" + std::to_string(perm[v]);
    }
    for (auto& [u, v] : g.graph.edges) out.graph.add_edge(perm[u], perm[v]);
    return out;
}

}  // namespace

TEST_CASE("orient_from_root on paths and stars") {
    // path a-b-c rooted at b: edges b->a, b->c
    auto t = orient_from_root(3, {{0, 1}, {1, 2}}, 1);
    CHECK(t.root == 1);
    CHECK(t.leaves == std::vector<int>{0, 2});
    auto edges = t.graph.edges;
    std::sort(edges.begin(), edges.end());
    CHECK(edges == std::vector<std::pair<int, int>>{{1, 0}, {1, 2}});

    // same path rooted at an end
    t = orient_from_root(3, {{0, 1}, {1, 2}}, 0);
    CHECK(t.leaves == std::vector<int>{2});

    // star with center 0, tips 1..3, rooted at tip 1
    t = orient_from_root(4, {{0, 1}, {0, 2}, {0, 3}}, 1);
    CHECK(t.root == 1);
    CHECK(t.leaves == std::vector<int>{2, 3});
    edges = t.graph.edges;
    std::sort(edges.begin(), edges.end());
    CHECK(edges == std::vector<std::pair<int, int>>{{0, 2}, {0, 3}, {1, 0}});

    CHECK_THROWS_AS(orient_from_root(3, {{0, 1}}, 0), Error);           // disconnected
    CHECK_THROWS_AS(orient_from_root(3, {{0, 1}, {1, 2}, {2, 0}}, 0), Error);  // cycle
}

TEST_CASE("balanced_tree shapes") {
    BalancedTreeSpec s{{2, 3}};
    auto t = balanced_tree(s);
    CHECK(t.graph.vertex_count == 9);
    CHECK(t.leaves.size() == 6);

    // all-ones spec gives the path digraph on d+1 vertices
    auto path = balanced_tree(BalancedTreeSpec{{1, 1, 1}});
    CHECK(path.graph.vertex_count == 4);
    CHECK(path.leaves.size() == 1);
    auto out = path.graph.out_degrees();
    CHECK(std::count(out.begin(), out.end(), 1) == 3);

    auto pair = balanced_tree(BalancedTreeSpec{{2}});
    CHECK(pair.graph.vertex_count == 3);
    CHECK(pair.leaves.size() == 2);

    CHECK_THROWS_AS(balanced_tree(BalancedTreeSpec{{}}), Error);
    CHECK_THROWS_AS(balanced_tree(BalancedTreeSpec{{2, 0}}), Error);
}

TEST_CASE("balanced_tree invariants for all small specs") {
    for (int d = 1; d <= 4; ++d) {
        std::vector<int> ns(d, 1);
        for (;;) {
            auto t = balanced_tree(BalancedTreeSpec{ns});  // check_invariants runs inside
            long long leaves = 1;
            for (int n : ns) leaves *= n;
            CHECK(static_cast<long long>(t.leaves.size()) == leaves);
            int i = d - 1;
            while (i >= 0 && ns[i] == 4) ns[i--] = 1;
            if (i < 0) break;
            ns[i]++;
        }
    }
}

TEST_CASE("target_theorem1 structure") {
    auto g = target_theorem1(BalancedTreeSpec{{2}}, rat_levels({0, 1, 2}));
    CHECK(g.graph.vertex_count == 4);
    CHECK(g.graph.edges.size() == 3);
    CHECK(g.distinct_levels().size() == 3);
    auto in = g.graph.in_degrees();
    auto out = g.graph.out_degrees();
    // stem: out 1 in 0; root: in 1 out 2; two leaves: in 1 out 0
    CHECK(std::count(out.begin(), out.end(), 2) == 1);
    CHECK(std::count(in.begin(), in.end(), 0) == 1);
    CHECK(std::count(out.begin(), out.end(), 0) == 2);
    CHECK(g.warnings.empty());

    auto g2 = target_theorem1(BalancedTreeSpec{{2, 3}}, rat_levels({0, 1, 2, 3}));
    CHECK(g2.graph.vertex_count == 10);
    CHECK(g2.graph.edges.size() == 9);
    auto out2 = g2.graph.out_degrees();
    CHECK(std::count(out2.begin(), out2.end(), 0) == 6);  // sinks at the top level

    auto path = target_theorem1(BalancedTreeSpec{{1}}, rat_levels({0, 1, 2}));
    CHECK(path.graph.vertex_count == 3);
    CHECK(path.graph.edges.size() == 2);
    CHECK_FALSE(path.warnings.empty());

    CHECK_THROWS_AS(target_theorem1(BalancedTreeSpec{{2}}, rat_levels({0, 1})), Error);
    CHECK_THROWS_AS(target_theorem1(BalancedTreeSpec{{2}}, rat_levels({0, 0, 1})), Error);
}

TEST_CASE("target_theorem1 source/sink counts for small specs") {
    for (std::vector<int> ns : {std::vector<int>{2}, {3}, {2, 2}, {4, 3}, {2, 3, 2}}) {
        std::vector<Rational> levels;
        for (int i = 0; i <= static_cast<int>(ns.size()) + 1; ++i) levels.emplace_back(i);
        auto g = target_theorem1(BalancedTreeSpec{ns}, levels);
        CHECK(g.graph.edges.size() + 1 == static_cast<std::size_t>(g.graph.vertex_count));
        long long sinks = 1;
        for (int n : ns) sinks *= n;
        auto in = g.graph.in_degrees();
        auto out = g.graph.out_degrees();
        CHECK(std::count(out.begin(), out.end(), 0) == sinks);
        CHECK(std::count(in.begin(), in.end(), 0) == 1);
        CHECK(g.graph.connected());
        CHECK(g.graph.first_betti() == 0);
    }
}

TEST_CASE("target_theorem2 structure") {
    // ({2},1) and ({3},1): 2 sources at level 0, shared vertex at 1, 3 sinks at 2
    auto g = target_theorem2(BalancedTreeSpec{{2}}, BalancedTreeSpec{{3}}, rat_levels({0, 1, 2}));
    CHECK(g.graph.vertex_count == 6);
    CHECK(g.graph.edges.size() == 5);
    auto in = g.graph.in_degrees();
    auto out = g.graph.out_degrees();
    CHECK(std::count(in.begin(), in.end(), 0) == 2);
    CHECK(std::count(out.begin(), out.end(), 0) == 3);
    for (int v = 0; v < g.graph.vertex_count; ++v)
        if (in[v] == 2) CHECK(out[v] == 3);

    // the X digraph
    auto x = target_theorem2(BalancedTreeSpec{{2}}, BalancedTreeSpec{{2}}, rat_levels({0, 1, 2}));
    CHECK(x.graph.vertex_count == 5);
    CHECK(x.graph.edges.size() == 4);

    CHECK_THROWS_AS(
        target_theorem2(BalancedTreeSpec{{2}}, BalancedTreeSpec{{2}}, rat_levels({0, 1})), Error);
}

TEST_CASE("theorem2 with spec1=({1},1) reproduces theorem1 targets") {
    for (std::vector<int> ns : {std::vector<int>{2}, {3}, {2, 2}, {3, 2}}) {
        std::vector<Rational> levels;
        for (int i = 0; i <= static_cast<int>(ns.size()) + 1; ++i) levels.emplace_back(2 * i + 1);
        auto via1 = target_theorem1(BalancedTreeSpec{ns}, levels);
        auto via2 = target_theorem2(BalancedTreeSpec{{1}}, BalancedTreeSpec{ns}, levels);
        auto iso = leveled_isomorphic(via1, via2);
        CHECK(iso.isomorphic);
    }
}

TEST_CASE("target_theorem2 source/sink counts") {
    auto g = target_theorem2(BalancedTreeSpec{{2, 3}}, BalancedTreeSpec{{2}},
                             rat_levels({0, 1, 2, 3}));
    auto in = g.graph.in_degrees();
    auto out = g.graph.out_degrees();
    CHECK(std::count(in.begin(), in.end(), 0) == 6);   // leaves of tree 1
    CHECK(std::count(out.begin(), out.end(), 0) == 2);  // leaves of tree 2
    CHECK(g.graph.edges.size() + 1 == static_cast<std::size_t>(g.graph.vertex_count));
}

TEST_CASE("leveled_isomorphic basics") {
    auto star = target_theorem1(BalancedTreeSpec{{3}}, rat_levels({0, 1, 2}));
    auto iso = leveled_isomorphic(star, star);
    CHECK(iso.isomorphic);
    // witness maps each vertex to one with the same level
    for (int v = 0; v < star.graph.vertex_count; ++v)
        CHECK(numeric::exact_eq(star.levels[v], star.levels[iso.witness[v]]));

    // path on 4 vertices vs out-star on 4 vertices: degree multisets differ
    LeveledDigraph path;
    for (int i = 0; i < 4; ++i) path.add_vertex(Exact(Rational(i)));
    for (int i = 0; i < 3; ++i) path.graph.add_edge(i, i + 1);
    LeveledDigraph outstar;
    outstar.add_vertex(Exact(Rational(0)));
    for (int i = 1; i < 4; ++i) {
        outstar.add_vertex(Exact(Rational(i)));
        outstar.graph.add_edge(0, i);
    }
    CHECK_FALSE(leveled_isomorphic(path, outstar).isomorphic);
}

TEST_CASE("leveled_isomorphic distinguishes level rank placements") {
    // same underlying tree, but the deep branch hangs off a different-rank child
    LeveledDigraph a;  // root(0) -> x(1), y(2); x -> z(3)
    a.add_vertex(Exact(Rational(0)));
    a.add_vertex(Exact(Rational(1)));
    a.add_vertex(Exact(Rational(2)));
    a.add_vertex(Exact(Rational(3)));
    a.graph.add_edge(0, 1);
    a.graph.add_edge(0, 2);
    a.graph.add_edge(1, 3);

    LeveledDigraph b;  // root(0) -> x(1), y(2); y -> z(3): z hangs off rank-2 vertex
    b.add_vertex(Exact(Rational(0)));
    b.add_vertex(Exact(Rational(1)));
    b.add_vertex(Exact(Rational(2)));
    b.add_vertex(Exact(Rational(3)));
    b.graph.add_edge(0, 1);
    b.graph.add_edge(0, 2);
    b.graph.add_edge(2, 3);

    CHECK_FALSE(leveled_isomorphic(a, b).isomorphic);
    // rank preservation, not value equality: scaling all levels keeps isomorphy
    LeveledDigraph a_scaled = a;
    for (auto& l : a_scaled.levels) l = l * Exact(Rational(7, 3)) + Exact(Rational(1, 2));
    CHECK(leveled_isomorphic(a, a_scaled).isomorphic);
}

TEST_CASE("leveled_isomorphic handles parallel edges") {
    LeveledDigraph two;
    two.add_vertex(Exact(Rational(0)));
    two.add_vertex(Exact(Rational(1)));
    two.graph.add_edge(0, 1);
    two.graph.add_edge(0, 1);
    LeveledDigraph one;
    one.add_vertex(Exact(Rational(0)));
    one.add_vertex(Exact(Rational(1)));
    one.graph.add_edge(0, 1);
    CHECK_FALSE(leveled_isomorphic(two, one).isomorphic);
    CHECK(leveled_isomorphic(two, two).isomorphic);

    // diamond with doubled side vs two distinct mid vertices
    LeveledDigraph diamond;
    diamond.add_vertex(Exact(Rational(0)));
    diamond.add_vertex(Exact(Rational(1)));
    diamond.add_vertex(Exact(Rational(2)));
    diamond.graph.add_edge(0, 1);
    diamond.graph.add_edge(0, 1);
    diamond.graph.add_edge(1, 2);
    diamond.graph.add_edge(1, 2);
    LeveledDigraph square;
    square.add_vertex(Exact(Rational(0)));
    square.add_vertex(Exact(Rational(1)));
    square.add_vertex(Exact(Rational(1)));
    square.add_vertex(Exact(Rational(2)));
    square.graph.add_edge(0, 1);
    square.graph.add_edge(0, 2);
    square.graph.add_edge(1, 3);
    square.graph.add_edge(2, 3);
    CHECK_FALSE(leveled_isomorphic(diamond, square).isomorphic);
    CHECK(diamond.graph.first_betti() == 2);  // both sides doubled
    CHECK(square.graph.first_betti() == 1);
}

TEST_CASE("leveled_isomorphic is invariant under relabeling") {
    std::mt19937_64 rng(424242);
    for (int trial = 0; trial < 30; ++trial) {
        std::uniform_int_distribution<int> pick_n(1, 3), pick_d(1, 3);
        int d = pick_d(rng);
        std::vector<int> ns;
        for (int i = 0; i < d; ++i) ns.push_back(pick_n(rng));
        std::vector<Rational> levels;
        for (int i = 0; i <= d + 1; ++i) levels.emplace_back(i * i + 1);
        auto g = target_theorem1(BalancedTreeSpec{ns}, levels);
        std::vector<int> perm(g.graph.vertex_count);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        auto h = relabel(g, perm);
        auto iso = leveled_isomorphic(g, h);
        REQUIRE(iso.isomorphic);
        // verify the witness is a genuine leveled isomorphism
        for (auto& [u, v] : g.graph.edges) {
            auto e = std::make_pair(iso.witness[u], iso.witness[v]);
            CHECK(std::count(h.graph.edges.begin(), h.graph.edges.end(), e) ==
                  std::count(g.graph.edges.begin(), g.graph.edges.end(), std::make_pair(u, v)));
        }
        // symmetry
        CHECK(leveled_isomorphic(h, g).isomorphic);
    }
}
