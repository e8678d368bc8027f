#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace mldkit {

// Stable opaque curve identifier. Contraction and blow-up never renumber
// survivors, so witness divisors stay addressable across rewrites.
struct VertexId {
    std::uint32_t value = 0;
    auto operator<=>(const VertexId&) const = default;
};

inline std::pair<VertexId, VertexId> edge_key(VertexId a, VertexId b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

// Weighted dual graph: vertex weight w = -E.E, edges with multiplicity E.F.
// Multi-edges and cycles are representable; germ-level constructors reject
// them separately.
class DualGraph {
public:
    DualGraph() = default;

    static DualGraph build(const std::vector<int>& weights,
                           const std::vector<std::pair<int, int>>& edges) {
        DualGraph g;
        for (int w : weights) {
            if (w < 1) throw error(errc::zero_weight, "vertex weight must be >= 1");
            g.add_vertex(w);
        }
        const int n = static_cast<int>(weights.size());
        for (auto [i, j] : edges) {
            if (i < 0 || j < 0 || i >= n || j >= n)
                throw error(errc::index_out_of_range, "edge endpoint out of range");
            if (i == j) throw error(errc::self_loop, "self-loops are not allowed");
            g.add_edge(VertexId{static_cast<std::uint32_t>(i)},
                       VertexId{static_cast<std::uint32_t>(j)});
        }
        return g;
    }

    std::size_t size() const { return order_.size(); }
    bool empty() const { return order_.empty(); }
    const std::vector<VertexId>& vertices() const { return order_; }
    bool has_vertex(VertexId v) const { return weight_.count(v) != 0; }

    int weight(VertexId v) const {
        auto it = weight_.find(v);
        if (it == weight_.end()) throw error(errc::index_out_of_range, "unknown vertex");
        return it->second;
    }

    int edge_multiplicity(VertexId a, VertexId b) const {
        auto it = edges_.find(edge_key(a, b));
        return it == edges_.end() ? 0 : it->second;
    }

    std::vector<std::pair<VertexId, int>> neighbors(VertexId v) const {
        std::vector<std::pair<VertexId, int>> out;
        for (const auto& [key, mult] : edges_) {
            if (key.first == v) out.emplace_back(key.second, mult);
            else if (key.second == v) out.emplace_back(key.first, mult);
        }
        return out;
    }

    std::size_t distinct_degree(VertexId v) const { return neighbors(v).size(); }

    const std::map<std::pair<VertexId, VertexId>, int>& edges() const { return edges_; }

    // Builder surface; germ-level operations copy the graph first.
    VertexId add_vertex(int weight) {
        VertexId id{next_id_++};
        order_.push_back(id);
        weight_[id] = weight;
        return id;
    }

    void add_edge(VertexId a, VertexId b, int mult = 1) {
        if (a == b) throw error(errc::self_loop, "self-loops are not allowed");
        if (!has_vertex(a) || !has_vertex(b))
            throw error(errc::index_out_of_range, "edge endpoint missing");
        edges_[edge_key(a, b)] += mult;
    }

    void remove_edge(VertexId a, VertexId b) { edges_.erase(edge_key(a, b)); }

    void bump_weight(VertexId v, int delta) {
        auto it = weight_.find(v);
        if (it == weight_.end()) throw error(errc::index_out_of_range, "unknown vertex");
        it->second += delta;
    }

    void remove_vertex(VertexId v) {
        weight_.erase(v);
        order_.erase(std::remove(order_.begin(), order_.end(), v), order_.end());
        for (auto it = edges_.begin(); it != edges_.end();) {
            if (it->first.first == v || it->first.second == v) it = edges_.erase(it);
            else ++it;
        }
    }

    bool connected() const {
        if (order_.empty()) return true;
        std::set<VertexId> seen{order_.front()};
        std::vector<VertexId> stack{order_.front()};
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            for (auto [u, mult] : neighbors(v)) {
                (void)mult;
                if (seen.insert(u).second) stack.push_back(u);
            }
        }
        return seen.size() == order_.size();
    }

private:
    std::vector<VertexId> order_;
    std::map<VertexId, int> weight_;
    std::map<std::pair<VertexId, VertexId>, int> edges_;
    std::uint32_t next_id_ = 0;
};

struct IntersectionMatrix {
    std::vector<VertexId> order;
    IntMatrix m;

    std::size_t index_of(VertexId v) const {
        for (std::size_t i = 0; i < order.size(); ++i)
            if (order[i] == v) return i;
        throw error(errc::index_out_of_range, "vertex not in matrix order");
    }
};

inline IntersectionMatrix intersection_matrix(const DualGraph& g) {
    IntersectionMatrix im;
    im.order = g.vertices();
    const std::size_t n = im.order.size();
    im.m.assign(n, std::vector<Int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        im.m[i][i] = -g.weight(im.order[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            int mult = g.edge_multiplicity(im.order[i], im.order[j]);
            im.m[i][j] = mult;
            im.m[j][i] = mult;
        }
    }
    return im;
}

inline bool is_negative_definite(const DualGraph& g) {
    IntersectionMatrix im = intersection_matrix(g);
    IntMatrix neg = im.m;
    for (auto& row : neg)
        for (auto& e : row) e = -e;
    return all_leading_minors_positive(neg);
}

// |det (E_i . E_j)|; 1 for the empty graph (smooth germ).
inline Int determinant_abs(const DualGraph& g) {
    if (g.empty()) return Int(1);
    Int d = determinant(intersection_matrix(g).m);
    return d < 0 ? Int(-d) : d;
}

enum class Shape { chain, tree_with_forks, contains_cycle, multi_edge };

struct ShapeReport {
    Shape shape = Shape::chain;
    std::vector<VertexId> forks;
};

inline ShapeReport classify(const DualGraph& g) {
    ShapeReport rep;
    for (const auto& [key, mult] : g.edges()) {
        (void)key;
        if (mult >= 2) {
            rep.shape = Shape::multi_edge;
            return rep;
        }
    }
    // Simple graph: a cycle exists iff some component has edges >= vertices.
    std::set<VertexId> seen;
    for (VertexId root : g.vertices()) {
        if (seen.count(root)) continue;
        std::size_t comp_vertices = 0, comp_edges = 0;
        std::vector<VertexId> stack{root};
        seen.insert(root);
        std::set<VertexId> comp{root};
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            ++comp_vertices;
            for (auto [u, mult] : g.neighbors(v)) {
                (void)mult;
                comp_edges += 1; // each simple edge counted twice
                if (seen.insert(u).second) {
                    comp.insert(u);
                    stack.push_back(u);
                }
            }
        }
        if (comp_edges / 2 >= comp_vertices && comp_vertices > 0) {
            rep.shape = Shape::contains_cycle;
            return rep;
        }
    }
    for (VertexId v : g.vertices())
        if (g.distinct_degree(v) >= 3) rep.forks.push_back(v);
    rep.shape = rep.forks.empty() ? Shape::chain : Shape::tree_with_forks;
    return rep;
}

struct ContractionResult {
    DualGraph graph;
    // Set when some survivor weight dropped to 0 or below: the rewrite
    // left the lattice, witnessing that no morphism contracts this far.
    std::optional<VertexId> nonpositive_weight;
    // Set when the contracted graph has two adjacent weight-1 vertices,
    // a configuration that cannot occur over a germ.
    std::optional<std::pair<VertexId, VertexId>> adjacent_minus_ones;

    bool clean() const { return !nonpositive_weight && !adjacent_minus_ones; }
};

// Blow-down rewrite: delete the weight-1 vertex, decrement each neighbor's
// weight by one, and join every pair of its former neighbors by one new edge.
inline ContractionResult contract_minus_one(const DualGraph& g, VertexId v) {
    if (!g.has_vertex(v)) throw error(errc::index_out_of_range, "unknown vertex");
    if (g.weight(v) != 1) throw error(errc::not_minus_one_curve, "vertex weight is not 1");
    auto nbrs = g.neighbors(v);
    for (auto [u, mult] : nbrs) {
        (void)u;
        if (mult != 1)
            throw error(errc::multi_edge_at_vertex, "contraction needs simple incident edges");
    }

    ContractionResult res;
    res.graph = g;
    res.graph.remove_vertex(v);
    for (auto [u, mult] : nbrs) {
        (void)mult;
        res.graph.bump_weight(u, -1);
        if (res.graph.weight(u) <= 0 && !res.nonpositive_weight) res.nonpositive_weight = u;
    }
    for (std::size_t i = 0; i < nbrs.size(); ++i)
        for (std::size_t j = i + 1; j < nbrs.size(); ++j)
            res.graph.add_edge(nbrs[i].first, nbrs[j].first);

    for (const auto& [key, mult] : res.graph.edges()) {
        (void)mult;
        if (res.graph.weight(key.first) == 1 && res.graph.weight(key.second) == 1) {
            res.adjacent_minus_ones = key;
            break;
        }
    }
    return res;
}

} // namespace mldkit
