#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dual_graph.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "rational.hpp"

namespace mldkit {

// beta[v] = (strict boundary) . E_v; absent vertices carry 0.
struct BoundaryIncidence {
    std::map<VertexId, Rat> beta;
    std::vector<Rat> coefficient_set; // the b_i the betas were built from

    Rat beta_of(VertexId v) const {
        auto it = beta.find(v);
        return it == beta.end() ? Rat(0) : it->second;
    }

    static BoundaryIncidence zero() { return {}; }
};

struct DiscrepancyVector {
    std::map<VertexId, Rat> a;  // log discrepancies over the germ
    std::map<VertexId, Rat> a0; // same germ with zero boundary

    Rat min_a() const {
        Rat m;
        bool first = true;
        for (const auto& [v, val] : a) {
            (void)v;
            if (first || val < m) m = val;
            first = false;
        }
        return m;
    }
};

// Solves the intersection-theoretic linear system
//   sum_j (E_j . E_k)(a_j - 1) = w_k - 2 + beta_k   for every vertex k,
// exactly, refusing lattices that are not negative definite. The zero-boundary
// vector a0 comes from the same solve with beta = 0.
inline DiscrepancyVector solve_discrepancies(const DualGraph& g, const BoundaryIncidence& inc) {
    for (const auto& [v, b] : inc.beta) {
        (void)v;
        if (b < 0) throw error(errc::out_of_range, "negative boundary incidence");
    }
    if (!is_negative_definite(g))
        throw error(errc::not_negative_definite, "intersection lattice is not negative definite");

    IntersectionMatrix im = intersection_matrix(g);
    const std::size_t n = im.order.size();
    std::vector<Rat> rhs(n), rhs0(n);
    for (std::size_t k = 0; k < n; ++k) {
        Rat base = rat(g.weight(im.order[k]) - 2);
        rhs0[k] = base;
        rhs[k] = base + inc.beta_of(im.order[k]);
    }

    DiscrepancyVector dv;
    if (n == 0) return dv;
    LinearSolution sol = solve_exact(im.m, rhs);
    LinearSolution sol0 = solve_exact(im.m, rhs0);
    for (std::size_t k = 0; k < n; ++k) {
        dv.a[im.order[k]] = Rat(1) + sol.x[k];
        dv.a0[im.order[k]] = Rat(1) + sol0.x[k];
    }
    return dv;
}

// Minimum discrepancy over the minimal resolution; nullopt encodes the
// smooth point (+infinity). Rejects non-minimal models.
inline std::optional<Rat> pld(const DualGraph& g, const BoundaryIncidence& inc) {
    if (g.empty()) return std::nullopt;
    for (VertexId v : g.vertices())
        if (g.weight(v) < 2)
            throw error(errc::weight_one_vertex, "graph is not a minimal resolution");
    return solve_discrepancies(g, inc).min_a();
}

// Coefficients 1 - a_i of the exceptional curves in the crepant pullback.
// Also verifies the integral scaling of the inverse matrix: with
// I = |det|, every I * s_ij is a negative integer.
inline std::map<VertexId, Rat> strict_coefficients(const DualGraph& g,
                                                   const BoundaryIncidence& inc) {
    for (VertexId v : g.vertices())
        if (g.weight(v) < 2)
            throw error(errc::weight_one_vertex, "graph is not a minimal resolution");
    if (!is_negative_definite(g))
        throw error(errc::not_negative_definite, "intersection lattice is not negative definite");

    IntersectionMatrix im = intersection_matrix(g);
    if (!im.order.empty()) {
        ExactInverse ei = inverse_exact(im.m);
        Int det_abs = ei.det < 0 ? Int(-ei.det) : ei.det;
        for (const auto& row : ei.inv) {
            for (const Rat& s : row) {
                Rat scaled = s * Rat(det_abs);
                if (!is_integer(scaled) || scaled >= 0)
                    throw error(errc::not_negative_definite,
                                "scaled inverse entry is not a negative integer");
            }
        }
    }

    DiscrepancyVector dv = solve_discrepancies(g, inc);
    std::map<VertexId, Rat> out;
    for (const auto& [v, a] : dv.a) out[v] = Rat(1) - a;
    return out;
}

struct WeightCheckItem {
    int item = 0;
    bool pass = true;
    int checked = 0;
    std::string failure; // offending tuple, empty on pass
};

struct WeightCheckReport {
    bool applicable = false; // false when some a_k > 1 (hypothesis gate)
    std::vector<WeightCheckItem> items;

    bool all_pass() const {
        for (const auto& it : items)
            if (!it.pass) return false;
        return true;
    }
};

namespace detail {

inline std::string vid_str(VertexId v) { return std::to_string(v.value); }

// Unique path between two vertices of a tree, endpoints included.
inline std::vector<VertexId> tree_path(const DualGraph& g, VertexId from, VertexId to) {
    std::map<VertexId, VertexId> parent;
    std::vector<VertexId> stack{from};
    parent[from] = from;
    while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        if (v == to) break;
        for (auto [u, mult] : g.neighbors(v)) {
            (void)mult;
            if (!parent.count(u)) {
                parent[u] = v;
                stack.push_back(u);
            }
        }
    }
    std::vector<VertexId> path;
    if (!parent.count(to)) return path;
    for (VertexId v = to;; v = parent[v]) {
        path.push_back(v);
        if (v == from) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

} // namespace detail

// Evaluates the six adjacency/weight inequalities that every lc germ with
// all a_k <= 1 satisfies, reporting the offending tuple on failure.
// epsilon0 parametrizes item (4); defaults to the smallest positive a_k.
inline WeightCheckReport check_weight_conditions(const DualGraph& g, const BoundaryIncidence& inc,
                                                 const DiscrepancyVector& dv,
                                                 std::optional<Rat> epsilon0 = std::nullopt) {
    WeightCheckReport rep;
    for (const auto& [v, a] : dv.a) {
        (void)v;
        if (a > 1) return rep; // hypothesis fails: not applicable
    }
    rep.applicable = true;

    Rat eps;
    if (epsilon0) {
        eps = *epsilon0;
    } else {
        eps = Rat(1);
        for (const auto& [v, a] : dv.a) {
            (void)v;
            if (a > 0 && a < eps) eps = a;
        }
    }

    const auto a_of = [&](VertexId v) { return dv.a.at(v); };
    Rat min_a = dv.min_a();

    WeightCheckItem i1{1}, i2{2}, i3{3}, i4{4}, i5{5}, i6{6};

    for (VertexId k : g.vertices()) {
        Rat ak = a_of(k);
        if (ak > 0) {
            ++i1.checked;
            if (ak * rat(g.weight(k)) > 2 && i1.pass) {
                i1.pass = false;
                i1.failure = "vertex " + detail::vid_str(k);
            }
        }
    }

    // Neighbor pairs; a multiplicity-2 edge supplies the pair (u, u).
    for (VertexId k : g.vertices()) {
        if (g.weight(k) < 2) continue;
        auto nbrs = g.neighbors(k);
        std::vector<std::pair<VertexId, VertexId>> pairs;
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            for (std::size_t j = i + 1; j < nbrs.size(); ++j)
                pairs.emplace_back(nbrs[i].first, nbrs[j].first);
            if (nbrs[i].second >= 2) pairs.emplace_back(nbrs[i].first, nbrs[i].first);
        }
        for (auto [k1, k2] : pairs) {
            ++i2.checked;
            Rat lhs = rat(2) * a_of(k);
            Rat rhs2 = a_of(k1) + a_of(k2);
            bool ok = lhs <= rhs2;
            if (ok && lhs == rhs2) {
                ok = inc.beta_of(k) == 0 &&
                     (g.weight(k) == 2 || (a_of(k) == 0 && a_of(k1) == 0 && a_of(k2) == 0));
            }
            if (!ok && i2.pass) {
                i2.pass = false;
                i2.failure = "center " + detail::vid_str(k) + " neighbors " +
                             detail::vid_str(k1) + "," + detail::vid_str(k2);
            }
        }
    }

    for (VertexId k0 : g.vertices()) {
        auto nbrs = g.neighbors(k0);
        if (nbrs.size() < 3) continue;
        if (g.weight(k0) < 2) continue;
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            if (g.weight(nbrs[i].first) < 2) continue;
            for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
                if (g.weight(nbrs[j].first) < 2) continue;
                for (std::size_t l = 0; l < nbrs.size(); ++l) {
                    if (l == i || l == j) continue;
                    VertexId k1 = nbrs[i].first, k2 = nbrs[j].first, k3 = nbrs[l].first;
                    ++i3.checked;
                    bool ok = a_of(k3) >= a_of(k0);
                    if (ok && a_of(k3) == a_of(k0)) {
                        ok = g.weight(k0) == 2 && g.weight(k1) == 2 && g.weight(k2) == 2 &&
                             inc.beta_of(k0) == 0 && inc.beta_of(k1) == 0 && inc.beta_of(k2) == 0;
                    }
                    if (!ok && i3.pass) {
                        i3.pass = false;
                        i3.failure = "fork " + detail::vid_str(k0) + " arm " + detail::vid_str(k3);
                    }
                }
            }
        }
    }

    for (VertexId k0 : g.vertices()) {
        if (g.weight(k0) < 3) continue;
        auto nbrs = g.neighbors(k0);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            for (std::size_t j = 0; j < nbrs.size(); ++j) {
                if (i == j) continue;
                VertexId k1 = nbrs[i].first, k2 = nbrs[j].first;
                if (a_of(k1) < a_of(k2) || a_of(k1) < eps) continue;
                ++i4.checked;
                if (a_of(k1) - a_of(k0) < eps / 3 && i4.pass) {
                    i4.pass = false;
                    i4.failure = "center " + detail::vid_str(k0) + " high arm " + detail::vid_str(k1);
                }
            }
        }
    }

    for (VertexId k0 : g.vertices()) {
        if (g.weight(k0) < 2) continue;
        auto nbrs = g.neighbors(k0);
        if (nbrs.size() < 3) continue;
        int heavy = 0;
        for (auto [u, mult] : nbrs) {
            (void)mult;
            if (g.weight(u) >= 2) ++heavy;
        }
        if (heavy < 3) continue;
        ++i5.checked;
        if (min_a < a_of(k0) && i5.pass) {
            i5.pass = false;
            i5.failure = "fork " + detail::vid_str(k0);
        }
    }

    // Paths are unique on trees; cyclic or multi-edge graphs skip item 6.
    Shape shape = classify(g).shape;
    if ((shape == Shape::chain || shape == Shape::tree_with_forks) && min_a > 0) {
        std::vector<VertexId> attaining;
        for (VertexId v : g.vertices())
            if (a_of(v) == min_a) attaining.push_back(v);
        for (std::size_t i = 0; i < attaining.size(); ++i) {
            for (std::size_t j = i + 1; j < attaining.size(); ++j) {
                auto path = detail::tree_path(g, attaining[i], attaining[j]);
                if (path.size() < 3) continue;
                bool hyp = true;
                for (std::size_t t = 1; t + 1 < path.size(); ++t)
                    if (g.weight(path[t]) < 2) hyp = false;
                if (!hyp) continue;
                ++i6.checked;
                bool ok = true;
                for (std::size_t t = 0; t < path.size(); ++t) {
                    if (a_of(path[t]) != min_a) ok = false;
                    if (t > 0 && t + 1 < path.size() && g.weight(path[t]) != 2) ok = false;
                }
                if (!ok && i6.pass) {
                    i6.pass = false;
                    i6.failure = "path " + detail::vid_str(attaining[i]) + ".." +
                                 detail::vid_str(attaining[j]);
                }
            }
        }
    }

    rep.items = {i1, i2, i3, i4, i5, i6};
    return rep;
}

} // namespace mldkit
