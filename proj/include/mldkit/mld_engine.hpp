#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "discrepancy.hpp"
#include "dual_graph.hpp"
#include "errors.hpp"
#include "rational.hpp"
#include "smooth_germ.hpp"

namespace mldkit {

struct Attachment {
    BranchId id = 0;
    Rat coefficient;
    VertexId host; // tip of the strict transform, at a free point of the host
};

// Singular germ presented by its minimal resolution: a negative-definite
// tree with weights >= 2, plus strict-transform branches attached at free
// points. Branches sharing a host sit at one common point, with contacts.
struct SingularGerm {
    DualGraph graph;
    std::vector<Attachment> attachments;
    ContactTable contacts;
};

inline void validate_singular(const SingularGerm& germ) {
    if (germ.graph.empty())
        throw error(errc::not_minimal_resolution, "empty graph; use a smooth germ instead");
    for (VertexId v : germ.graph.vertices())
        if (germ.graph.weight(v) < 2)
            throw error(errc::not_minimal_resolution, "weight-1 vertex present");
    Shape s = classify(germ.graph).shape;
    if (s == Shape::contains_cycle || s == Shape::multi_edge)
        throw error(errc::not_minimal_resolution, "resolution graph must be a tree");
    if (!germ.graph.connected())
        throw error(errc::not_minimal_resolution, "resolution graph must be connected");
    if (!is_negative_definite(germ.graph))
        throw error(errc::not_negative_definite, "resolution lattice is not negative definite");
    std::set<BranchId> ids;
    for (const Attachment& at : germ.attachments) {
        if (!(at.coefficient > 0) || at.coefficient > 1)
            throw error(errc::out_of_range, "attachment coefficient outside (0,1]");
        if (!germ.graph.has_vertex(at.host))
            throw error(errc::index_out_of_range, "attachment host missing");
        if (!ids.insert(at.id).second)
            throw error(errc::out_of_range, "duplicate branch id in attachments");
    }
}

inline BoundaryIncidence incidence_of(const SingularGerm& germ) {
    BoundaryIncidence inc;
    for (VertexId v : germ.graph.vertices()) inc.beta[v] = Rat(0);
    std::set<Rat> coeffs;
    for (const Attachment& at : germ.attachments) {
        inc.beta[at.host] += at.coefficient;
        coeffs.insert(at.coefficient);
    }
    inc.coefficient_set.assign(coeffs.begin(), coeffs.end());
    return inc;
}

struct MldResult {
    Rat value;
    std::string witness;
    int depth = 0;
    Rat witness_a0;
    bool certified = false;
};

struct GammaConstants {
    Rat gamma;
    Int n0;
    Rat epsilon;
    Rat delta;
};

// Smallest positive value of sum(n_i b_i) - n over nonnegative integers n_i.
// Only combinations with sum <= n + (min positive b) can realize it, which
// bounds the search.
inline Rat gamma_of_set(const std::vector<Rat>& coeffs, long n) {
    if (n < 0) throw error(errc::out_of_range, "n must be nonnegative");
    std::vector<Rat> pos;
    Rat bmin;
    for (const Rat& c : coeffs) {
        if (c < 0 || c > 1) throw error(errc::out_of_range, "coefficients must lie in [0,1]");
        if (c > 0) {
            pos.push_back(c);
            if (bmin == 0 || c < bmin) bmin = c;
        }
    }
    if (pos.empty()) throw error(errc::no_positive_value, "no positive coefficient");

    const Rat target(n);
    const Rat limit = target + bmin;
    std::optional<Rat> best;

    std::function<void(std::size_t, Rat)> rec = [&](std::size_t idx, Rat sum) {
        if (sum > limit) return;
        if (sum > target) {
            Rat v = sum - target;
            if (!best || v < *best) best = v;
        }
        if (idx == pos.size()) return;
        rec(idx + 1, sum);
        Rat s = sum;
        while (true) {
            s += pos[idx];
            if (s > limit) break;
            rec(idx + 1, s);
        }
    };
    rec(0, Rat(0));
    return *best; // bmin itself is always attainable, so best is set
}

// Whether sum(n_i b_i) = 1 has a solution in nonnegative integers.
inline bool unit_sum_feasible(const std::vector<Rat>& coeffs) {
    std::vector<Rat> pos;
    for (const Rat& c : coeffs)
        if (c > 0) pos.push_back(c);
    bool found = false;
    std::function<void(std::size_t, Rat)> rec = [&](std::size_t idx, Rat sum) {
        if (found || sum > 1) return;
        if (sum == 1) {
            found = true;
            return;
        }
        if (idx == pos.size()) return;
        rec(idx + 1, sum);
        Rat s = sum;
        while (!found) {
            s += pos[idx];
            if (s > 1) break;
            if (s == 1) {
                found = true;
                return;
            }
            rec(idx + 1, s);
        }
    };
    rec(0, Rat(0));
    return found;
}

inline GammaConstants constants_for(const Rat& gamma) {
    if (!(gamma > 0) || gamma > 1) throw error(errc::out_of_range, "gamma must lie in (0,1]");
    GammaConstants gc;
    gc.gamma = gamma;
    gc.n0 = floor_rat(Rat(1) + Rat(32) / (gamma * gamma) + Rat(1) / gamma);
    gc.epsilon = gamma * gamma / 8;
    gc.epsilon.canonicalize();
    gc.delta = gamma / 2;
    gc.delta.canonicalize();
    return gc;
}

namespace detail {

struct CenterOption {
    CenterDescriptor center;
    Rat potential; // discrepancy the blow-up there would create
    // branch class moved by the center, empty for nodes and free points
    std::vector<BranchId> moved;
};

inline Rat branch_sum(const TowerState& st, const std::vector<BranchId>& cls) {
    Rat s(0);
    for (BranchId b : cls)
        for (const Branch& br : st.branches)
            if (br.id == b) s += br.coefficient;
    return s;
}

// Canonical centers: the origin before the first blow-up; afterwards every
// node, one point per branch class, and one generic free point per tower
// curve (free points of ambient curves lie away from the germ's point).
inline std::vector<CenterOption> canonical_centers(const TowerState& st) {
    std::vector<CenterOption> out;
    if (!st.origin_blown) {
        CenterOption o;
        o.center = Origin{};
        Rat pot(2);
        for (VertexId v : st.graph.vertices()) pot -= Rat(1) - st.a.at(v);
        for (const Branch& b : st.branches) {
            pot -= b.coefficient;
            o.moved.push_back(b.id);
        }
        o.potential = pot;
        out.push_back(std::move(o));
        return out;
    }
    for (const auto& [key, mult] : st.graph.edges()) {
        (void)mult;
        CenterOption o;
        o.center = NodePoint{key.first, key.second};
        o.potential = st.a.at(key.first) + st.a.at(key.second);
        out.push_back(std::move(o));
    }
    for (const auto& cls : st.branch_classes()) {
        auto t = st.tip.at(cls.front());
        if (!t) continue; // still at the origin (cannot happen once blown)
        CenterOption o;
        o.center = CurvePoint{*t, cls.front()};
        o.potential = st.a.at(*t) + Rat(1) - branch_sum(st, cls);
        o.moved = cls;
        out.push_back(std::move(o));
    }
    for (VertexId v : st.tower_curves()) {
        CenterOption o;
        o.center = FreePoint{v};
        o.potential = st.a.at(v) + Rat(1);
        out.push_back(std::move(o));
    }
    return out;
}

struct SearchOutcome {
    TowerState state;
    Rat min_value;
    bool certified = false;
};

// Log resolution followed by the one-step closure certification: every
// canonical center must satisfy potential >= min over tower curves. Any
// violating center is blown up and the test repeats; a negative value
// anywhere means the germ is not lc.
inline SearchOutcome resolve_and_certify(const SmoothGerm& germ) {
    SearchOutcome out{resolve_branches(germ), Rat(0), false};
    for (int rounds = 0;; ++rounds) {
        if (rounds > 100000) throw std::logic_error("closure iteration did not stabilize");
        out.min_value = out.state.min_tower_a();
        if (out.min_value < 0) throw error(errc::not_lc, "negative discrepancy over the point");
        bool stable = true;
        for (const CenterOption& c : canonical_centers(out.state)) {
            if (c.potential < out.min_value) {
                out.state = blow_up(out.state, c.center);
                stable = false;
                break;
            }
        }
        if (stable) break;
    }
    out.certified = true;
    return out;
}

inline bool better_witness(const MldResult& a, const MldResult& b) {
    if (a.witness_a0 != b.witness_a0) return a.witness_a0 < b.witness_a0;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.witness < b.witness;
}

inline MldResult pick_witness(const TowerState& st, const Rat& m, bool certified) {
    std::optional<MldResult> best;
    for (VertexId v : st.tower_curves()) {
        if (st.a.at(v) != m) continue;
        MldResult r{m, st.path.at(v), st.lineage.at(v), st.a0.at(v), certified};
        if (!best || better_witness(r, *best)) best = r;
    }
    return *best;
}

} // namespace detail

// mld of a smooth germ. Above 1 the minimum is 2 - mult_x B with the first
// blow-up as the unique witness; otherwise the certified tower minimum.
inline MldResult mld_smooth(const SmoothGerm& germ) {
    detail::SearchOutcome out = detail::resolve_and_certify(germ);
    if (out.min_value > 1) {
        Rat direct = Rat(2) - origin_multiplicity(germ);
        if (direct != out.min_value)
            throw std::logic_error("terminal-regime minimum mismatch");
        VertexId f1 = out.state.tower_curves().front();
        return {out.min_value, out.state.path.at(f1), out.state.lineage.at(f1),
                out.state.a0.at(f1), true};
    }
    return detail::pick_witness(out.state, out.min_value, out.certified);
}

namespace detail {

// Local germ at a point of the minimal resolution, carrying the curves
// through the point as ambient data.
inline SmoothGerm local_germ(const SingularGerm& germ, const DiscrepancyVector& dv,
                             const std::vector<VertexId>& curves,
                             const std::vector<Attachment>& atts) {
    SmoothGerm local;
    for (VertexId v : curves)
        local.ambient.push_back(
            AmbientCurve{germ.graph.weight(v), dv.a.at(v), dv.a0.at(v)});
    for (const Attachment& at : atts) {
        local.branches.push_back(Branch{at.id, at.coefficient});
        for (const Attachment& other : atts)
            if (other.id < at.id)
                local.contacts.set(other.id, at.id, germ.contacts.of(other.id, at.id));
    }
    return local;
}

struct Candidate {
    std::string label;
    SmoothGerm germ;
};

inline std::vector<Candidate> candidate_points(const SingularGerm& germ,
                                               const DiscrepancyVector& dv) {
    std::vector<Candidate> out;
    for (const auto& [key, mult] : germ.graph.edges()) {
        (void)mult;
        out.push_back({"n(E" + std::to_string(key.first.value) + ",E" +
                           std::to_string(key.second.value) + ")",
                       local_germ(germ, dv, {key.first, key.second}, {})});
    }
    std::map<std::uint32_t, std::vector<Attachment>> by_host;
    for (const Attachment& at : germ.attachments) by_host[at.host.value].push_back(at);
    for (const auto& [host, atts] : by_host)
        out.push_back({"t(E" + std::to_string(host) + ")",
                       local_germ(germ, dv, {VertexId{host}}, atts)});
    for (VertexId v : germ.graph.vertices())
        out.push_back({"f(E" + std::to_string(v.value) + ")", local_germ(germ, dv, {v}, {})});
    return out;
}

} // namespace detail

// mld of a singular germ: minimum of the partial log discrepancy and of the
// local searches at every node, attachment point and generic free point of
// the minimal resolution.
inline MldResult mld_singular(const SingularGerm& germ) {
    validate_singular(germ);
    BoundaryIncidence inc = incidence_of(germ);
    DiscrepancyVector dv = solve_discrepancies(germ.graph, inc);
    for (const auto& [v, a] : dv.a) {
        (void)v;
        if (a < 0) throw error(errc::not_lc, "negative discrepancy on the minimal resolution");
    }

    std::optional<MldResult> best;
    for (VertexId v : germ.graph.vertices()) {
        MldResult r{dv.a.at(v), "E" + std::to_string(v.value), 0, dv.a0.at(v), true};
        if (!best || r.value < best->value ||
            (r.value == best->value && detail::better_witness(r, *best)))
            best = r;
    }

    for (const auto& cand : detail::candidate_points(germ, dv)) {
        detail::SearchOutcome out = detail::resolve_and_certify(cand.germ);
        if (out.min_value > 1) continue; // cannot undercut the resolution values
        MldResult local = detail::pick_witness(out.state, out.min_value, out.certified);
        local.witness = cand.label + ":" + local.witness;
        if (local.value < best->value ||
            (local.value == best->value && detail::better_witness(local, *best)))
            best = local;
    }
    return *best;
}

struct WitnessSet {
    Rat mld;
    std::vector<MldResult> witnesses;
    bool truncated = false;
};

namespace detail {

inline bool center_involves(const CenterOption& opt, VertexId v,
                            const TowerState& after_parent) {
    if (const auto* np = std::get_if<NodePoint>(&opt.center))
        return np->u == v || np->v == v;
    if (const auto* cp = std::get_if<CurvePoint>(&opt.center))
        return after_parent.tip.at(cp->cls) == std::optional<VertexId>(v);
    if (const auto* fp = std::get_if<FreePoint>(&opt.center)) return fp->u == v;
    return true; // the origin
}

inline bool can_still_descend(const TowerState& st, const CenterOption& opt) {
    if (opt.moved.size() < 2 || !(branch_sum(st, opt.moved) > 1)) return false;
    for (std::size_t i = 0; i < opt.moved.size(); ++i)
        for (std::size_t j = i + 1; j < opt.moved.size(); ++j)
            if (st.remaining_contact(opt.moved[i], opt.moved[j]) >= 1) return true;
    return false;
}

// Exhaustive enumeration of mld-attaining divisors up to depth_bound, up to
// the free-point symmetry. Each recursion path follows one divisor lineage:
// past the root, every center must involve the newest curve of its own
// chain, so distinct paths are distinct divisors. A subtree is entered only
// when it can still attain the minimum: either the one-step value is
// already <= m, or the moved branch class can keep descending (coefficient
// sum above 1 with contact left to consume).
inline void enumerate_witnesses(const TowerState& st, const Rat& m, int depth_bound,
                                const std::string& prefix, WitnessSet& ws) {
    for (const CenterOption& opt : canonical_centers(st)) {
        if (st.newest && !center_involves(opt, *st.newest, st)) continue;
        if (!(opt.potential <= m || can_still_descend(st, opt))) continue;

        TowerState next = blow_up(st, opt.center);
        VertexId f = *next.newest;
        int depth = next.lineage.at(f);
        if (depth > depth_bound) {
            ws.truncated = true; // a reachable state past the bound
            continue;
        }
        if (next.a.at(f) == m)
            ws.witnesses.push_back(
                MldResult{m, prefix + next.path.at(f), depth, next.a0.at(f), true});
        if (depth == depth_bound) {
            bool frontier_live = next.a.at(f) == m;
            for (const CenterOption& deeper : canonical_centers(next)) {
                if (!center_involves(deeper, f, next)) continue;
                if (deeper.potential <= m || can_still_descend(next, deeper))
                    frontier_live = true;
            }
            if (frontier_live) ws.truncated = true;
            continue;
        }
        enumerate_witnesses(next, m, depth_bound, prefix, ws);
    }
}

} // namespace detail

inline WitnessSet witness_set(const SmoothGerm& germ, int depth_bound) {
    if (depth_bound < 1) throw error(errc::depth_bound_too_small, "depth bound must be >= 1");
    MldResult top = mld_smooth(germ);
    WitnessSet ws{top.value, {}, false};
    if (top.value > 1) {
        ws.witnesses.push_back(top); // unique witness above 1
        return ws;
    }
    TowerState st = make_tower(germ);
    detail::enumerate_witnesses(st, top.value, depth_bound, "", ws);
    std::sort(ws.witnesses.begin(), ws.witnesses.end(),
              [](const MldResult& x, const MldResult& y) { return detail::better_witness(x, y); });
    return ws;
}

inline WitnessSet witness_set(const SingularGerm& germ, int depth_bound) {
    if (depth_bound < 0) throw error(errc::depth_bound_too_small, "depth bound must be >= 0");
    MldResult top = mld_singular(germ);
    WitnessSet ws{top.value, {}, false};

    BoundaryIncidence inc = incidence_of(germ);
    DiscrepancyVector dv = solve_discrepancies(germ.graph, inc);
    for (VertexId v : germ.graph.vertices())
        if (dv.a.at(v) == top.value)
            ws.witnesses.push_back(MldResult{top.value, "E" + std::to_string(v.value), 0,
                                             dv.a0.at(v), true});

    if (depth_bound >= 1) {
        for (const auto& cand : detail::candidate_points(germ, dv)) {
            TowerState st = make_tower(cand.germ);
            detail::enumerate_witnesses(st, top.value, depth_bound, cand.label + ":", ws);
        }
    }
    std::sort(ws.witnesses.begin(), ws.witnesses.end(),
              [](const MldResult& x, const MldResult& y) { return detail::better_witness(x, y); });
    return ws;
}

// Default exploration depth: the effective bound for the germ's coefficient
// set when one is available.
inline int default_depth_bound(const std::vector<Rat>& coeffs) {
    for (const Rat& c : coeffs)
        if (c > 0) {
            GammaConstants gc = constants_for(gamma_of_set(coeffs, 1));
            if (gc.n0 > 100000) return 100000;
            return static_cast<int>(gc.n0.get_si());
        }
    return 8;
}

} // namespace mldkit
