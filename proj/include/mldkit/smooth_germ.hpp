#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "discrepancy.hpp"
#include "dual_graph.hpp"
#include "errors.hpp"
#include "rational.hpp"

namespace mldkit {

using BranchId = std::uint32_t;

struct Branch {
    BranchId id = 0;
    Rat coefficient; // in (0, 1]
};

// c(i,j) = number of infinitely near points the two smooth branches share;
// 1 means transverse at the origin. Missing pairs default to 1.
struct ContactTable {
    std::map<std::pair<BranchId, BranchId>, int> c;

    static std::pair<BranchId, BranchId> key(BranchId i, BranchId j) {
        return i < j ? std::make_pair(i, j) : std::make_pair(j, i);
    }

    int of(BranchId i, BranchId j) const {
        auto it = c.find(key(i, j));
        return it == c.end() ? 1 : it->second;
    }

    void set(BranchId i, BranchId j, int contact) { c[key(i, j)] = contact; }
};

// A pre-existing curve through the origin, carrying its discrepancy data
// into the local germ. Its boundary coefficient is 1 - a.
struct AmbientCurve {
    int weight = 2;
    Rat a;
    Rat a0;
};

struct SmoothGerm {
    std::vector<Branch> branches;
    ContactTable contacts;
    std::vector<AmbientCurve> ambient; // 0, 1 or 2; transverse at the origin
};

struct BoundaryValidation {
    bool ok = true;
    std::string detail;
};

inline BoundaryValidation validate_boundary(const SmoothGerm& germ) {
    if (germ.ambient.size() > 2) return {false, "more than two ambient curves"};
    std::set<BranchId> ids;
    for (const Branch& b : germ.branches) {
        if (!(b.coefficient > 0) || b.coefficient > 1)
            return {false, "branch " + std::to_string(b.id) + " coefficient outside (0,1]"};
        if (!ids.insert(b.id).second)
            return {false, "duplicate branch id " + std::to_string(b.id)};
    }
    for (const auto& [key, contact] : germ.contacts.c) {
        if (contact < 1)
            return {false, "contact below 1 for pair " + std::to_string(key.first) + "," +
                               std::to_string(key.second)};
        if (!ids.count(key.first) || !ids.count(key.second))
            return {false, "contact references unknown branch"};
    }
    // Ultrametric triple condition: c(i,k) >= min(c(i,j), c(j,k)).
    const auto& bs = germ.branches;
    for (std::size_t x = 0; x < bs.size(); ++x)
        for (std::size_t y = 0; y < bs.size(); ++y)
            for (std::size_t z = 0; z < bs.size(); ++z) {
                if (x == y || y == z || x == z) continue;
                int cik = germ.contacts.of(bs[x].id, bs[z].id);
                int cij = germ.contacts.of(bs[x].id, bs[y].id);
                int cjk = germ.contacts.of(bs[y].id, bs[z].id);
                if (cik < std::min(cij, cjk))
                    return {false, "triple (" + std::to_string(bs[x].id) + "," +
                                       std::to_string(bs[y].id) + "," + std::to_string(bs[z].id) +
                                       ") violates the contact ultrametric"};
            }
    return {};
}

// mult_x B: every branch is smooth, so each contributes its coefficient;
// ambient curves contribute 1 - a.
inline Rat origin_multiplicity(const SmoothGerm& germ) {
    Rat m(0);
    for (const Branch& b : germ.branches) m += b.coefficient;
    for (const AmbientCurve& c : germ.ambient) m += Rat(1) - c.a;
    return m;
}

struct Origin {};
struct NodePoint {
    VertexId u, v;
};
struct CurvePoint {
    VertexId u;
    BranchId cls; // any member of the branch class sitting at the point
};
struct FreePoint {
    VertexId u;
};
using CenterDescriptor = std::variant<Origin, NodePoint, CurvePoint, FreePoint>;

struct ChainCounters {
    long n1 = 0, n2 = 0, n3 = 0, n = 0;
    long W1 = 0, W2 = 0;
};

// One blow-up tower over a point: the graph of curves created so far,
// incrementally maintained discrepancies, branch tip positions, and the
// chain counters of the free/satellite bookkeeping.
struct TowerState {
    DualGraph graph; // ambient curves + tower curves
    std::map<VertexId, Rat> a, a0;
    std::map<VertexId, int> lineage; // creation depth of each curve; ambient = 0
    std::map<VertexId, std::string> path;
    std::set<VertexId> ambient_ids;

    std::vector<Branch> branches;
    ContactTable contacts;
    std::map<std::pair<BranchId, BranchId>, int> consumed;
    std::map<BranchId, std::optional<VertexId>> tip; // nullopt: still at the origin

    bool origin_blown = false;
    int depth = 0;
    std::optional<VertexId> newest;
    bool sequential = true; // every center so far met the then-newest curve
    long n3 = 0;            // length of the all-free center prefix
    std::optional<ChainCounters> counters;

    int remaining_contact(BranchId i, BranchId j) const {
        auto key = ContactTable::key(i, j);
        auto it = consumed.find(key);
        int used = it == consumed.end() ? 0 : it->second;
        return contacts.of(i, j) - used;
    }

    bool co_located(BranchId i, BranchId j) const {
        if (i == j) return true;
        return tip.at(i) == tip.at(j) && remaining_contact(i, j) >= 1;
    }

    std::vector<BranchId> class_of(BranchId b) const {
        std::vector<BranchId> out;
        for (const Branch& other : branches)
            if (co_located(b, other.id)) out.push_back(other.id);
        return out;
    }

    // Branch classes, keyed by (host curve or origin, lowest member id).
    std::vector<std::vector<BranchId>> branch_classes() const {
        std::vector<std::vector<BranchId>> classes;
        std::set<BranchId> used;
        for (const Branch& b : branches) {
            if (used.count(b.id)) continue;
            auto cls = class_of(b.id);
            for (BranchId m : cls) used.insert(m);
            classes.push_back(std::move(cls));
        }
        return classes;
    }

    std::vector<VertexId> tower_curves() const {
        std::vector<VertexId> out;
        for (VertexId v : graph.vertices())
            if (!ambient_ids.count(v)) out.push_back(v);
        return out;
    }

    Rat min_tower_a() const {
        Rat m;
        bool first = true;
        for (VertexId v : tower_curves()) {
            const Rat& val = a.at(v);
            if (first || val < m) m = val;
            first = false;
        }
        if (first) throw error(errc::invalid_center, "tower has no curves yet");
        return m;
    }
};

inline TowerState make_tower(const SmoothGerm& germ) {
    BoundaryValidation val = validate_boundary(germ);
    if (!val.ok) throw error(errc::out_of_range, "invalid boundary: " + val.detail);

    TowerState st;
    st.branches = germ.branches;
    st.contacts = germ.contacts;
    for (const Branch& b : germ.branches) st.tip[b.id] = std::nullopt;

    std::vector<VertexId> amb;
    for (const AmbientCurve& c : germ.ambient) {
        VertexId v = st.graph.add_vertex(c.weight);
        st.a[v] = c.a;
        st.a0[v] = c.a0;
        st.lineage[v] = 0;
        st.path[v] = "A" + std::to_string(v.value);
        st.ambient_ids.insert(v);
        amb.push_back(v);
    }
    if (amb.size() == 2) st.graph.add_edge(amb[0], amb[1]); // transverse node at the origin
    return st;
}

namespace detail {

inline void refresh_chain_counters(TowerState& st);

} // namespace detail

inline TowerState blow_up(const TowerState& state, const CenterDescriptor& center) {
    TowerState st = state;

    std::vector<VertexId> hosts;
    std::vector<BranchId> moving;
    bool node_like = false;
    std::string path;

    if (std::holds_alternative<Origin>(center)) {
        if (st.origin_blown) throw error(errc::stale_state, "origin already blown up");
        for (VertexId v : st.graph.vertices()) hosts.push_back(v);
        for (const Branch& b : st.branches) moving.push_back(b.id);
        node_like = hosts.size() == 2;
        path = "o";
    } else if (!st.origin_blown) {
        throw error(errc::invalid_center, "blow up the origin first");
    } else if (const auto* np = std::get_if<NodePoint>(&center)) {
        if (!st.graph.has_vertex(np->u) || !st.graph.has_vertex(np->v))
            throw error(errc::invalid_center, "node references unknown curve");
        if (st.graph.edge_multiplicity(np->u, np->v) < 1)
            throw error(errc::stale_state, "curves no longer meet");
        hosts = {np->u, np->v};
        node_like = true;
        path = "n(" + st.path.at(np->u) + "," + st.path.at(np->v) + ")";
    } else if (const auto* cp = std::get_if<CurvePoint>(&center)) {
        if (!st.tip.count(cp->cls)) throw error(errc::invalid_center, "unknown branch");
        if (st.tip.at(cp->cls) != std::optional<VertexId>(cp->u))
            throw error(errc::stale_state, "branch tip is not on that curve");
        hosts = {cp->u};
        moving = st.class_of(cp->cls);
        path = st.path.at(cp->u) + ">b" + std::to_string(*std::min_element(moving.begin(), moving.end()));
    } else if (const auto* fp = std::get_if<FreePoint>(&center)) {
        if (!st.graph.has_vertex(fp->u)) throw error(errc::invalid_center, "unknown curve");
        hosts = {fp->u};
        path = st.path.at(fp->u) + ">f";
    }

    Rat a_new(2), a0_new(2);
    int lin = 0;
    for (VertexId h : hosts) {
        a_new -= Rat(1) - st.a.at(h);
        a0_new -= Rat(1) - st.a0.at(h);
        lin = std::max(lin, st.lineage.at(h));
    }
    for (BranchId b : moving) {
        for (const Branch& br : st.branches)
            if (br.id == b) a_new -= br.coefficient;
    }

    VertexId f = st.graph.add_vertex(1);
    for (VertexId h : hosts) {
        st.graph.bump_weight(h, 1);
        st.graph.add_edge(h, f);
    }
    if (node_like && hosts.size() == 2) st.graph.remove_edge(hosts[0], hosts[1]);

    st.a[f] = a_new;
    st.a0[f] = a0_new;
    st.lineage[f] = lin + 1;
    st.path[f] = path;

    for (std::size_t i = 0; i < moving.size(); ++i) {
        st.tip[moving[i]] = f;
        for (std::size_t j = i + 1; j < moving.size(); ++j)
            st.consumed[ContactTable::key(moving[i], moving[j])] += 1;
    }

    bool on_prev_newest =
        !st.newest || std::find(hosts.begin(), hosts.end(), *st.newest) != hosts.end();
    if (!on_prev_newest) st.sequential = false;

    bool free_center = !node_like;
    st.depth += 1;
    if (st.depth == 1) {
        st.n3 = 1;
    } else if (st.sequential && st.n3 == st.depth - 1 && free_center) {
        st.n3 = st.depth;
    }
    st.newest = f;
    st.origin_blown = true;

    detail::refresh_chain_counters(st);
    return st;
}

namespace detail {

// Counters of the free/satellite bookkeeping, defined when the tower is a
// bare-origin sequential chain: W1/n1 on the far side of the newest curve,
// W2/n2 on the side holding the first curve.
inline void refresh_chain_counters(TowerState& st) {
    st.counters.reset();
    if (!st.ambient_ids.empty() || !st.sequential || st.depth < 2) return;
    if (classify(st.graph).shape != Shape::chain || !st.graph.connected()) return;

    VertexId e0 = *st.newest;
    VertexId first = st.graph.vertices().front(); // ids are created in order

    // Walk outward from E0 along both chain directions.
    auto walk = [&](VertexId start) {
        std::vector<VertexId> side;
        VertexId prev = e0, cur = start;
        side.push_back(cur);
        while (true) {
            VertexId next = cur;
            bool found = false;
            for (auto [u, mult] : st.graph.neighbors(cur)) {
                (void)mult;
                if (u != prev) {
                    next = u;
                    found = true;
                    break;
                }
            }
            if (!found) break;
            prev = cur;
            cur = next;
            side.push_back(cur);
        }
        return side;
    };

    auto nbrs = st.graph.neighbors(e0);
    if (nbrs.empty()) return;
    std::vector<VertexId> side_a = walk(nbrs[0].first);
    std::vector<VertexId> side_b = nbrs.size() > 1 ? walk(nbrs[1].first) : std::vector<VertexId>{};

    bool first_in_a = std::find(side_a.begin(), side_a.end(), first) != side_a.end();
    const std::vector<VertexId>& two = first_in_a ? side_a : side_b;
    const std::vector<VertexId>& one = first_in_a ? side_b : side_a;

    ChainCounters cc;
    cc.n1 = static_cast<long>(one.size());
    cc.n2 = static_cast<long>(two.size());
    cc.n3 = st.n3;
    cc.n = st.depth;
    for (VertexId v : one) cc.W1 += st.graph.weight(v);
    for (VertexId v : two) cc.W2 += st.graph.weight(v);
    st.counters = cc;
}

} // namespace detail

inline ChainCounters tower_stats(const TowerState& st) {
    if (!st.ambient_ids.empty())
        throw error(errc::not_a_chain, "counters are defined over a bare smooth origin");
    if (!st.sequential)
        throw error(errc::not_a_chain, "tower was not built along its newest curves");
    if (st.depth < 2) throw error(errc::too_shallow, "counters need at least two blow-ups");
    if (!st.counters) throw error(errc::not_a_chain, "tower graph is not a chain");

    const ChainCounters& cc = *st.counters;
    if ((cc.W1 - cc.n1) + cc.n3 - 1 != cc.W2 - cc.n2)
        throw std::logic_error("tower counter identity violated");
    if (cc.n > cc.n3 + std::min(cc.W1, cc.W2))
        throw std::logic_error("tower counter bound violated");
    return cc;
}

// Log resolution of the germ: blow up the origin, then every surviving
// multi-branch tangency class until all contacts are consumed. Afterwards
// every tip sits at its own free point.
inline TowerState resolve_branches(const SmoothGerm& germ) {
    TowerState st = make_tower(germ);
    st = blow_up(st, Origin{});
    while (true) {
        bool acted = false;
        for (const auto& cls : st.branch_classes()) {
            if (cls.size() < 2) continue;
            VertexId host = *st.tip.at(cls.front()); // class left the origin after depth 1
            st = blow_up(st, CurvePoint{host, cls.front()});
            acted = true;
            break;
        }
        if (!acted) break;
    }
    return st;
}

// Tight growth bound for zero-boundary discrepancies along a tower:
// b(1) = 2, b(2) = 3, b(i) = b(i-1) + b(i-2); attained by towers whose
// centers always sit on the two newest curves, and at most 2^i.
inline Int a0_depth_bound(int depth) {
    if (depth < 1) throw error(errc::out_of_range, "depth must be >= 1");
    return fibonacci(static_cast<unsigned long>(depth) + 2);
}

struct A0GrowthRow {
    VertexId curve;
    int depth = 0;
    Rat a0;
    Int bound;
    Int power;
};

struct A0GrowthReport {
    bool pass = true;
    std::vector<A0GrowthRow> rows;
};

inline A0GrowthReport a0_growth_report(const TowerState& st) {
    if (!st.ambient_ids.empty())
        throw error(errc::invalid_center, "growth bound applies over a smooth origin");
    A0GrowthReport rep;
    for (VertexId v : st.tower_curves()) {
        A0GrowthRow row;
        row.curve = v;
        row.depth = st.lineage.at(v);
        row.a0 = st.a0.at(v);
        row.bound = a0_depth_bound(row.depth);
        row.power = pow2(static_cast<unsigned long>(row.depth));
        if (row.a0 > Rat(row.bound) || row.bound > row.power) rep.pass = false;
        rep.rows.push_back(row);
    }
    return rep;
}

// Boundary incidence of the tower curves: branch tips contribute their
// coefficients, ambient curves contribute 1 - a along their edges.
inline BoundaryIncidence tower_incidence(const TowerState& st, bool zero_boundary = false) {
    BoundaryIncidence inc;
    for (VertexId v : st.tower_curves()) inc.beta[v] = Rat(0);
    if (!zero_boundary) {
        for (const Branch& b : st.branches) {
            auto t = st.tip.at(b.id);
            if (t && !st.ambient_ids.count(*t)) inc.beta[*t] += b.coefficient;
        }
    }
    for (VertexId amb : st.ambient_ids) {
        Rat coeff = Rat(1) - (zero_boundary ? st.a0.at(amb) : st.a.at(amb));
        for (auto [u, mult] : st.graph.neighbors(amb))
            if (!st.ambient_ids.count(u)) inc.beta[u] += coeff * rat(mult);
    }
    return inc;
}

inline DualGraph tower_subgraph(const TowerState& st) {
    DualGraph g = st.graph;
    for (VertexId amb : st.ambient_ids) g.remove_vertex(amb);
    return g;
}

} // namespace mldkit
