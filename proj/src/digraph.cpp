#include "prsweep/digraph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>

namespace prsweep::digraph {

using numeric::compare;
using numeric::exact_eq;

void Digraph::add_edge(int u, int v) {
    if (u == v) throw Error(Errc::InvalidInput, "self-loop rejected");
    if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count)
        throw Error(Errc::InvalidInput, "edge endpoint out of range");
    edges.emplace_back(u, v);
}

std::vector<int> Digraph::in_degrees() const {
    std::vector<int> d(vertex_count, 0);
    for (auto& [u, v] : edges) d[v]++;
    return d;
}

std::vector<int> Digraph::out_degrees() const {
    std::vector<int> d(vertex_count, 0);
    for (auto& [u, v] : edges) d[u]++;
    return d;
}

bool Digraph::connected() const {
    if (vertex_count == 0) return false;
    std::vector<std::vector<int>> adj(vertex_count);
    for (auto& [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<char> seen(vertex_count, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int visited = 1;
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        for (int y : adj[x])
            if (!seen[y]) {
                seen[y] = 1;
                ++visited;
                q.push(y);
            }
    }
    return visited == vertex_count;
}

int Digraph::first_betti() const {
    // count redundant unions; for a connected graph b1 = |E| - |V| + 1
    std::vector<int> parent(vertex_count);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    int redundant = 0;
    for (auto& [u, v] : edges) {
        int ru = find(u), rv = find(v);
        if (ru == rv) ++redundant;
        else parent[ru] = rv;
    }
    return redundant;
}

const char* vertex_kind_name(VertexKind k) {
    switch (k) {
        case VertexKind::Regular: return "regular";
        case VertexKind::Birth: return "birth";
        case VertexKind::Death: return "death";
        case VertexKind::Branch: return "branch";
        case VertexKind::Merge: return "merge";
        case VertexKind::SingularFlat: return "singular_flat";
        case VertexKind::Cross: return "cross";
    }
    return "regular";
}

VertexKind vertex_kind_from_name(const std::string& name) {
    for (VertexKind k : {VertexKind::Regular, VertexKind::Birth, VertexKind::Death,
                         VertexKind::Branch, VertexKind::Merge, VertexKind::SingularFlat,
                         VertexKind::Cross})
        if (name == vertex_kind_name(k)) return k;
    throw Error(Errc::InvalidInput, "unknown vertex kind: " + name);
}

int LeveledDigraph::add_vertex(Exact level, VertexKind kind, std::string id) {
    int idx = graph.vertex_count++;
    levels.push_back(std::move(level));
    kinds.push_back(kind);
    if (id.empty()) id = "v" + std::to_string(idx);
    ids.push_back(std::move(id));
    return idx;
}

void LeveledDigraph::check_invariants() const {
    if (static_cast<int>(levels.size()) != graph.vertex_count)
        throw Error(Errc::Internal, "level count mismatch");
    for (auto& [u, v] : graph.edges)
        if (compare(levels[u], levels[v]) != std::strong_ordering::less)
            throw Error(Errc::Internal, "edge does not increase level");
}

std::vector<Exact> LeveledDigraph::distinct_levels() const {
    std::vector<Exact> ls = levels;
    std::sort(ls.begin(), ls.end(), numeric::exact_lt);
    std::vector<Exact> out;
    for (auto& l : ls)
        if (out.empty() || !exact_eq(out.back(), l)) out.push_back(l);
    return out;
}

std::vector<int> LeveledDigraph::level_ranks() const {
    std::vector<Exact> distinct = distinct_levels();
    std::vector<int> ranks(graph.vertex_count);
    for (int v = 0; v < graph.vertex_count; ++v) {
        int lo = 0, hi = static_cast<int>(distinct.size()) - 1;
        while (lo < hi) {
            int mid = (lo + hi) / 2;
            if (compare(distinct[mid], levels[v]) == std::strong_ordering::less) lo = mid + 1;
            else hi = mid;
        }
        ranks[v] = lo;
    }
    return ranks;
}

void RootedTree::check_invariants() const {
    if (!graph.connected()) throw Error(Errc::NotATree, "graph is not connected");
    if (static_cast<int>(graph.edges.size()) != graph.vertex_count - 1)
        throw Error(Errc::NotATree, "edge count differs from |V|-1");
    auto in = graph.in_degrees();
    auto out = graph.out_degrees();
    if (in[root] != 0) throw Error(Errc::NotATree, "root has an incoming edge");
    std::vector<char> is_leaf(graph.vertex_count, 0);
    for (int l : leaves) is_leaf[l] = 1;
    for (int v = 0; v < graph.vertex_count; ++v) {
        if (v == root) {
            if (out[v] < 1 && graph.vertex_count > 1)
                throw Error(Errc::NotATree, "root has no children");
            continue;
        }
        if (in[v] != 1) throw Error(Errc::NotATree, "non-root vertex without unique parent");
        if (is_leaf[v] ? out[v] != 0 : out[v] < 1)
            throw Error(Errc::NotATree, "leaf/interior degree mismatch");
    }
}

long long BalancedTreeSpec::vertex_count() const {
    long long total = 1, layer = 1;
    for (int n : children) {
        layer *= n;
        total += layer;
    }
    return total;
}

long long BalancedTreeSpec::leaf_count() const {
    long long layer = 1;
    for (int n : children) layer *= n;
    return layer;
}

void BalancedTreeSpec::validate() const {
    if (children.empty()) throw Error(Errc::InvalidSpec, "balanced tree needs depth >= 1");
    for (int n : children)
        if (n < 1) throw Error(Errc::InvalidSpec, "children counts must be >= 1");
    if (vertex_count() > 2'000'000)
        throw Error(Errc::InvalidSpec, "balanced tree too large");
}

RootedTree orient_from_root(int vertex_count, const std::vector<std::pair<int, int>>& undirected,
                            int root) {
    if (vertex_count <= 0 || root < 0 || root >= vertex_count)
        throw Error(Errc::InvalidInput, "bad root or vertex count");
    if (static_cast<int>(undirected.size()) != vertex_count - 1)
        throw Error(Errc::NotATree, "a tree on n vertices has n-1 edges");
    std::vector<std::vector<int>> adj(vertex_count);
    for (auto& [u, v] : undirected) {
        if (u == v || u < 0 || v < 0 || u >= vertex_count || v >= vertex_count)
            throw Error(Errc::NotATree, "bad undirected edge");
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    RootedTree t;
    t.graph.vertex_count = vertex_count;
    t.root = root;
    std::vector<int> parent(vertex_count, -2);
    std::queue<int> q;
    q.push(root);
    parent[root] = -1;
    int visited = 0;
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        ++visited;
        bool has_child = false;
        for (int y : adj[x]) {
            if (y == parent[x]) continue;
            if (parent[y] != -2) throw Error(Errc::NotATree, "cycle detected");
            parent[y] = x;
            t.graph.add_edge(x, y);
            q.push(y);
            has_child = true;
        }
        if (!has_child && x != root) t.leaves.push_back(x);
    }
    if (visited != vertex_count) throw Error(Errc::NotATree, "graph is disconnected");
    std::sort(t.leaves.begin(), t.leaves.end());
    t.check_invariants();
    return t;
}

RootedTree balanced_tree(const BalancedTreeSpec& spec) {
    spec.validate();
    RootedTree t;
    t.graph.vertex_count = static_cast<int>(spec.vertex_count());
    t.root = 0;
    std::vector<int> layer{0};
    int next = 1;
    for (std::size_t i = 0; i < spec.children.size(); ++i) {
        std::vector<int> next_layer;
        for (int v : layer)
            for (int c = 0; c < spec.children[i]; ++c) {
                t.graph.add_edge(v, next);
                next_layer.push_back(next++);
            }
        layer = std::move(next_layer);
    }
    t.leaves = layer;
    t.check_invariants();
    return t;
}

namespace {

void require_increasing(const std::vector<Rational>& levels) {
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (!(levels[i - 1] < levels[i]))
            throw Error(Errc::InvalidInstance, "levels must be strictly increasing");
}

}  // namespace

LeveledDigraph target_theorem1(const BalancedTreeSpec& spec, const std::vector<Rational>& levels) {
    spec.validate();
    if (static_cast<int>(levels.size()) != spec.depth() + 2)
        throw Error(Errc::LevelCountMismatch,
                    "theorem 1 needs d+2 levels, got " + std::to_string(levels.size()));
    require_increasing(levels);

    LeveledDigraph g;
    for (int n : spec.children)
        if (n < 2) {
            g.warnings.push_back(
                "children count 1 accepted; the theorem statement assumes n_{c,i} >= 2");
            break;
        }

    RootedTree tree = balanced_tree(spec);
    // vertex depths follow the layer-by-layer numbering of balanced_tree
    std::vector<int> depth(tree.graph.vertex_count, 0);
    for (auto& [u, v] : tree.graph.edges) depth[v] = depth[u] + 1;

    int stem = g.add_vertex(Exact(levels[0]), VertexKind::Birth);
    std::vector<int> map(tree.graph.vertex_count);
    for (int v = 0; v < tree.graph.vertex_count; ++v)
        map[v] = g.add_vertex(Exact(levels[depth[v] + 1]));
    g.graph.add_edge(stem, map[tree.root]);
    for (auto& [u, v] : tree.graph.edges) g.graph.add_edge(map[u], map[v]);
    g.check_invariants();
    return g;
}

LeveledDigraph target_theorem2(const BalancedTreeSpec& spec1, const BalancedTreeSpec& spec2,
                               const std::vector<Rational>& levels) {
    spec1.validate();
    spec2.validate();
    int d1 = spec1.depth(), d2 = spec2.depth();
    if (static_cast<int>(levels.size()) != d1 + d2 + 1)
        throw Error(Errc::LevelCountMismatch,
                    "theorem 2 needs d1+d2+1 levels, got " + std::to_string(levels.size()));
    require_increasing(levels);

    LeveledDigraph g;
    RootedTree t1 = balanced_tree(spec1);
    RootedTree t2 = balanced_tree(spec2);
    std::vector<int> depth1(t1.graph.vertex_count, 0), depth2(t2.graph.vertex_count, 0);
    for (auto& [u, v] : t1.graph.edges) depth1[v] = depth1[u] + 1;
    for (auto& [u, v] : t2.graph.edges) depth2[v] = depth2[u] + 1;

    // tree 1 reversed: depth-i vertices sit at levels[d1-i]; root at levels[d1]
    std::vector<int> map1(t1.graph.vertex_count);
    for (int v = 0; v < t1.graph.vertex_count; ++v)
        map1[v] = g.add_vertex(Exact(levels[d1 - depth1[v]]));
    // tree 2 shares the root vertex
    std::vector<int> map2(t2.graph.vertex_count);
    map2[t2.root] = map1[t1.root];
    for (int v = 0; v < t2.graph.vertex_count; ++v)
        if (v != t2.root) map2[v] = g.add_vertex(Exact(levels[d1 + depth2[v]]));

    for (auto& [u, v] : t1.graph.edges) g.graph.add_edge(map1[v], map1[u]);  // reversed
    for (auto& [u, v] : t2.graph.edges) g.graph.add_edge(map2[u], map2[v]);
    g.check_invariants();
    return g;
}

// --- leveled isomorphism -----------------------------------------------------

namespace {

struct AdjView {
    // per vertex: sorted (neighbor, multiplicity) lists, both directions
    std::vector<std::vector<std::pair<int, int>>> out, in;

    explicit AdjView(const Digraph& g) : out(g.vertex_count), in(g.vertex_count) {
        std::map<std::pair<int, int>, int> mult;
        for (auto& e : g.edges) mult[e]++;
        for (auto& [e, m] : mult) {
            out[e.first].emplace_back(e.second, m);
            in[e.second].emplace_back(e.first, m);
        }
    }
};

// iterated refinement of vertex colors over (rank, out-color multiset,
// in-color multiset); sound for isomorphism pruning, exact on trees
std::vector<long long> refine_colors(const Digraph& g, const std::vector<int>& ranks) {
    int n = g.vertex_count;
    std::vector<long long> color(ranks.begin(), ranks.end());
    for (int round = 0; round < n + 2; ++round) {
        std::vector<std::vector<long long>> sig(n);
        for (int v = 0; v < n; ++v) sig[v].push_back(color[v]);
        for (auto& [u, v] : g.edges) {
            sig[u].push_back(0x100000000LL + color[v]);
            sig[v].push_back(0x200000000LL + color[u]);
        }
        for (int v = 0; v < n; ++v) std::sort(sig[v].begin() + 1, sig[v].end());
        // canonical relabeling: ids follow the sorted order of signatures, so
        // corresponding vertices of isomorphic graphs get identical colors
        std::map<std::vector<long long>, long long> dict;
        for (int v = 0; v < n; ++v) dict.emplace(sig[v], 0);
        long long id = 0;
        for (auto& kv : dict) kv.second = id++;
        std::vector<long long> next(n);
        for (int v = 0; v < n; ++v) next[v] = dict[sig[v]];
        if (next == color) break;
        color = std::move(next);
    }
    return color;
}

bool extend_mapping(std::size_t idx, const std::vector<int>& order, const AdjView& aa,
                    const AdjView& ab, const std::vector<long long>& ca,
                    const std::vector<long long>& cb, std::vector<int>& map_ab,
                    std::vector<char>& used_b) {
    if (idx == order.size()) return true;
    int va = order[idx];
    for (int vb = 0; vb < static_cast<int>(used_b.size()); ++vb) {
        if (used_b[vb] || cb[vb] != ca[va]) continue;
        // adjacency with already-mapped vertices must match with multiplicity
        auto consistent = [&](const std::vector<std::pair<int, int>>& na,
                              const std::vector<std::pair<int, int>>& nb) {
            int count_a = 0, count_b = 0;
            for (auto& [w, m] : na) {
                if (map_ab[w] < 0) continue;
                count_a += m;
                auto it = std::lower_bound(nb.begin(), nb.end(), std::make_pair(map_ab[w], 0));
                if (it == nb.end() || it->first != map_ab[w] || it->second != m) return false;
            }
            for (auto& [w, m] : nb)
                if (used_b[w]) count_b += m;
            return count_a == count_b;
        };
        if (!consistent(aa.out[va], ab.out[vb]) || !consistent(aa.in[va], ab.in[vb])) continue;
        map_ab[va] = vb;
        used_b[vb] = 1;
        if (extend_mapping(idx + 1, order, aa, ab, ca, cb, map_ab, used_b)) return true;
        map_ab[va] = -1;
        used_b[vb] = 0;
    }
    return false;
}

}  // namespace

IsoResult leveled_isomorphic(const LeveledDigraph& a, const LeveledDigraph& b) {
    IsoResult res;
    if (a.graph.vertex_count != b.graph.vertex_count ||
        a.graph.edges.size() != b.graph.edges.size())
        return res;
    if (a.graph.vertex_count == 0) {
        res.isomorphic = true;
        return res;
    }
    std::vector<int> ra = a.level_ranks(), rb = b.level_ranks();
    if (a.distinct_levels().size() != b.distinct_levels().size()) return res;

    auto ca = refine_colors(a.graph, ra);
    auto cb = refine_colors(b.graph, rb);
    {
        auto ma = ca, mb = cb;
        std::sort(ma.begin(), ma.end());
        std::sort(mb.begin(), mb.end());
        if (ma != mb) return res;
    }

    AdjView aa(a.graph), ab(b.graph);
    // map rare colors first
    std::map<long long, int> freq;
    for (long long c : ca) freq[c]++;
    std::vector<int> order(a.graph.vertex_count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        if (freq[ca[x]] != freq[ca[y]]) return freq[ca[x]] < freq[ca[y]];
        return x < y;
    });
    std::vector<int> map_ab(a.graph.vertex_count, -1);
    std::vector<char> used_b(b.graph.vertex_count, 0);
    if (!extend_mapping(0, order, aa, ab, ca, cb, map_ab, used_b)) return res;
    res.isomorphic = true;
    res.witness = std::move(map_ab);
    return res;
}

}  // namespace prsweep::digraph
