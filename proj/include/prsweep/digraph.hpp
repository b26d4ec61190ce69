#pragma once

#include "prsweep/exact.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace prsweep::digraph {

using numeric::Exact;
using numeric::Rational;

/// Finite digraph on vertices 0..n-1. Parallel edges are allowed and carried
/// as repeated (u, v) entries; self-loops are not.
struct Digraph {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;

    void add_edge(int u, int v);
    std::vector<int> in_degrees() const;
    std::vector<int> out_degrees() const;
    bool connected() const;  // of the underlying undirected graph
    /// first Betti number of the underlying graph (requires connectivity)
    int first_betti() const;
};

enum class VertexKind { Regular, Birth, Death, Branch, Merge, SingularFlat, Cross };
const char* vertex_kind_name(VertexKind k);
VertexKind vertex_kind_from_name(const std::string& name);

/// Digraph whose edges are induced by a function injective on each edge:
/// every edge (u, v) has level(u) < level(v).
struct LeveledDigraph {
    Digraph graph;
    std::vector<Exact> levels;               // one per vertex
    std::vector<VertexKind> kinds;           // one per vertex (Regular if untracked)
    std::vector<std::string> ids;            // stable external names
    std::vector<std::string> warnings;

    int add_vertex(Exact level, VertexKind kind = VertexKind::Regular, std::string id = {});
    void check_invariants() const;           // throws on violation
    std::vector<Exact> distinct_levels() const;  // sorted, exact-deduplicated
    std::vector<int> level_ranks() const;        // rank of each vertex's level
};

struct RootedTree {
    Digraph graph;
    int root = 0;
    std::vector<int> leaves;

    void check_invariants() const;
};

/// Balanced tree of a given depth: every leaf at depth d, every vertex of
/// depth i-1 has exactly children[i-1] children.
struct BalancedTreeSpec {
    std::vector<int> children;  // n_{c,1..d}, all >= 1
    int depth() const { return static_cast<int>(children.size()); }
    long long vertex_count() const;
    long long leaf_count() const;
    void validate() const;  // throws InvalidSpec
};

/// Orient a finite connected acyclic undirected graph away from `root`.
RootedTree orient_from_root(int vertex_count,
                            const std::vector<std::pair<int, int>>& undirected_edges, int root);

/// Construct the balanced tree; vertices are numbered level by level with the
/// root first, children in order.
RootedTree balanced_tree(const BalancedTreeSpec& spec);

/// Balanced tree plus a stem vertex below the root; stem at levels[0], root at
/// levels[1], depth-i vertices at levels[i+1]. Expects depth+2 levels.
LeveledDigraph target_theorem1(const BalancedTreeSpec& spec, const std::vector<Rational>& levels);

/// Tree 1 with orientation reversed (leaves become sources at levels[0]),
/// glued at the shared root to tree 2. Expects d1+d2+1 levels.
LeveledDigraph target_theorem2(const BalancedTreeSpec& spec1, const BalancedTreeSpec& spec2,
                               const std::vector<Rational>& levels);

struct IsoResult {
    bool isomorphic = false;
    std::vector<int> witness;  // witness[a-vertex] = b-vertex when isomorphic
};

/// Digraph isomorphism that additionally preserves the relative order of
/// levels (equal ranks map to equal ranks). Canonical-form refinement first,
/// backtracking with rank pruning for the rest.
IsoResult leveled_isomorphic(const LeveledDigraph& a, const LeveledDigraph& b);

}  // namespace prsweep::digraph
