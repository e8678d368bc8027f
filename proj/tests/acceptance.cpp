// Acceptance suite: every criterion runs at exact rational equality
// (tolerance zero) and prints one PASS/FAIL line.

#include <cstdio>
#include <functional>
#include <string>

#include <mldkit/discrepancy.hpp>
#include <mldkit/dual_graph.hpp>
#include <mldkit/germ_io.hpp>
#include <mldkit/mld_engine.hpp>
#include <mldkit/smooth_germ.hpp>
#include <mldkit/theorem_lab.hpp>

#include "oracle_util.hpp"

using namespace mldkit;

namespace {

int g_failures = 0;

void criterion(int num, const std::string& label,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    if (!ok) ++g_failures;
    std::printf("C%02d %s  %s%s%s\n", num, ok ? "PASS" : "FAIL", label.c_str(),
                detail.empty() ? "" : " — ", detail.c_str());
    std::fflush(stdout);
}

DualGraph duval_d(int k) {
    std::vector<int> w(static_cast<std::size_t>(k) + 3, 2);
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 <= k; ++i) e.emplace_back(i, i + 1);
    e.emplace_back(0, k + 1);
    e.emplace_back(0, k + 2);
    return DualGraph::build(w, e);
}

} // namespace

int main() {
    criterion(1, "quotient A2 family: closed-form discrepancies for k=2..50", [](std::string& d) {
        for (int k = 2; k <= 50; ++k) {
            DualGraph g = DualGraph::build({2, 2}, {{0, 1}});
            BoundaryIncidence inc;
            inc.beta[VertexId{0}] = rat(1, 2);
            inc.beta[VertexId{1}] = rat(1, 2) - rat(1, k);
            DiscrepancyVector dv = solve_discrepancies(g, inc);
            if (dv.a.at(VertexId{0}) != rat(1, 2) + rat(1, 3 * k) ||
                dv.a.at(VertexId{1}) != rat(1, 2) + rat(2, 3 * k)) {
                d = "mismatch at k=" + std::to_string(k);
                return false;
            }
        }
        return true;
    });

    criterion(2, "steep chain family: closed-form discrepancies for k=1..30", [](std::string& d) {
        for (int k = 1; k <= 30; ++k) {
            DualGraph g = DualGraph::build({2 * k + 2, 2 * k + 1}, {{0, 1}});
            BoundaryIncidence inc;
            inc.beta[VertexId{0}] = rat(1, 2);
            inc.beta[VertexId{1}] = rat(1, 2);
            DiscrepancyVector dv = solve_discrepancies(g, inc);
            long den = 2 * (2 * k + 2) * (2 * k + 1) - 2;
            if (dv.a.at(VertexId{0}) != rat(2 * k + 2, den) ||
                dv.a.at(VertexId{1}) != rat(2 * k + 3, den)) {
                d = "mismatch at k=" + std::to_string(k);
                return false;
            }
        }
        return true;
    });

    criterion(3, "tangent pair family: mld 1/(k+1), witness depth k, a0 = k+1, k=2..12",
              [](std::string& d) {
                  for (int k = 2; k <= 12; ++k) {
                      SmoothGerm g{{Branch{0, rat(1, 2)}, Branch{1, rat(1, 2) + rat(1, k + 1)}},
                                   {},
                                   {}};
                      g.contacts.set(0, 1, k);
                      MldResult r = mld_smooth(g);
                      if (r.value != rat(1, k + 1) || r.depth != k ||
                          r.witness_a0 != rat(k + 1) || !r.certified) {
                          d = "mismatch at k=" + std::to_string(k);
                          return false;
                      }
                  }
                  return true;
              });

    criterion(4, "unit-sum pair: a(F_i)=1 along the tower, k witnesses, truncation flagged, k<=10",
              [](std::string& d) {
                  for (int k = 1; k <= 10; ++k) {
                      SmoothGerm g{{Branch{0, rat(1, 2)}, Branch{1, rat(1, 2)}}, {}, {}};
                      g.contacts.set(0, 1, k);
                      TowerState st = resolve_branches(g);
                      for (VertexId v : st.tower_curves())
                          if (st.a.at(v) != 1) {
                              d = "tower value differs from 1 at k=" + std::to_string(k);
                              return false;
                          }
                      WitnessSet ws = witness_set(g, k);
                      if (ws.mld != 1 || ws.witnesses.size() != static_cast<std::size_t>(k) ||
                          !ws.truncated) {
                          d = "witness set wrong at k=" + std::to_string(k);
                          return false;
                      }
                  }
                  return true;
              });

    criterion(5, "D-type Du Val family: determinant 4, mld 1, k+3 witnesses, k=1..20",
              [](std::string& d) {
                  for (int k = 1; k <= 20; ++k) {
                      DualGraph g = duval_d(k);
                      if (determinant_abs(g) != 4) {
                          d = "determinant differs at k=" + std::to_string(k);
                          return false;
                      }
                      SingularGerm sg;
                      sg.graph = g;
                      MldResult r = mld_singular(sg);
                      WitnessSet ws = witness_set(sg, 2);
                      if (r.value != 1 || ws.witnesses.size() != static_cast<std::size_t>(k) + 3) {
                          d = "mld/witness count wrong at k=" + std::to_string(k);
                          return false;
                      }
                  }
                  return true;
              });

    criterion(6, "1000 seeded chain towers satisfy the counter identity and vertex bound",
              [](std::string& d) {
                  FamilySpec spec;
                  spec.trials = 1000;
                  spec.depth_max = 12;
                  spec.seed = 20240612;
                  VerificationReport rep = verify_tower_identity(spec);
                  if (!rep.pass()) d = rep.failures.front().detail;
                  return rep.pass();
              });

    criterion(7,
              "500 seeded towers respect a0 <= Fib-bound <= 2^depth; all-satellite attains it",
              [](std::string& d) {
                  FamilySpec spec;
                  spec.trials = 500;
                  spec.depth_max = 12;
                  spec.seed = 41;
                  VerificationReport rep = verify_fib_bound(spec);
                  if (!rep.pass()) d = rep.failures.front().detail;
                  for (int i = 1; i <= 20 && rep.pass(); ++i)
                      if (a0_depth_bound(i) > pow2(static_cast<unsigned long>(i))) {
                          d = "bound exceeds 2^i at depth " + std::to_string(i);
                          return false;
                      }
                  return rep.pass();
              });

    criterion(8, "1000 seeded germs pass every applicable weight condition",
              [](std::string& d) {
                  FamilySpec spec;
                  spec.trials = 1000;
                  spec.length_max = 8;
                  spec.weight_max = 5;
                  spec.seed = 5;
                  spec.grid = {Rat(0), rat(1, 3), rat(1, 2), rat(2, 3), Rat(1)};
                  VerificationReport rep = verify_weight(spec);
                  if (!rep.pass()) d = rep.failures.front().detail;
                  return rep.pass();
              });

    criterion(9, "coefficient set {1/2,1/3}: N0 = 1159, witness depth/count/a0 bounds hold",
              [](std::string& d) {
                  GammaConstants gc = constants_for(gamma_of_set({rat(1, 2), rat(1, 3)}, 1));
                  if (gc.n0 != 1159) {
                      d = "N0 differs from 1159";
                      return false;
                  }
                  FamilySpec spec;
                  spec.grid = {rat(1, 2), rat(1, 3)};
                  spec.k_min = 1;
                  spec.k_max = 6;
                  VerificationReport rep = verify_mld_bounds(spec);
                  if (!rep.pass()) d = rep.failures.front().detail;
                  return rep.pass();
              });

    criterion(10, "engine equals the exhaustive depth-8 oracle on all small germs",
              [](std::string& d) {
                  const std::vector<Rat> coeffs{rat(1, 3), rat(1, 2), rat(2, 3)};
                  long checked = 0;
                  auto compare = [&](const SmoothGerm& germ) {
                      oracle::Outcome out = oracle::exhaustive_min(germ, 8);
                      ++checked;
                      if (out.negative) {
                          try {
                              mld_smooth(germ);
                          } catch (const error& e) {
                              return e.code() == errc::not_lc;
                          }
                          return false;
                      }
                      if (*out.min <= 1) return mld_smooth(germ).value == *out.min;
                      return true;
                  };
                  for (const Rat& b : coeffs)
                      if (!compare(SmoothGerm{{Branch{0, b}}, {}, {}})) {
                          d = "single-branch mismatch";
                          return false;
                      }
                  for (const Rat& b1 : coeffs)
                      for (const Rat& b2 : coeffs)
                          for (int c = 1; c <= 3; ++c) {
                              SmoothGerm g{{Branch{0, b1}, Branch{1, b2}}, {}, {}};
                              g.contacts.set(0, 1, c);
                              if (!compare(g)) {
                                  d = "pair mismatch (contact " + std::to_string(c) + ")";
                                  return false;
                              }
                          }
                  for (const Rat& b1 : coeffs)
                      for (const Rat& b2 : coeffs)
                          for (const Rat& b3 : coeffs)
                              for (int c12 = 1; c12 <= 3; ++c12)
                                  for (int c23 = 1; c23 <= 3; ++c23) {
                                      SmoothGerm g{
                                          {Branch{0, b1}, Branch{1, b2}, Branch{2, b3}}, {}, {}};
                                      g.contacts.set(0, 1, c12);
                                      g.contacts.set(1, 2, c23);
                                      g.contacts.set(0, 2, std::min(c12, c23));
                                      if (!validate_boundary(g).ok) continue;
                                      if (!compare(g)) {
                                          d = "triple mismatch";
                                          return false;
                                      }
                                  }
                  d = std::to_string(checked) + " germs";
                  return true;
              });

    criterion(11, "chains (length<=5, weights<=5): inverse entries negative, a affine decreasing",
              [](std::string& d) {
                  std::function<bool(std::vector<int>&)> rec = [&](std::vector<int>& w) {
                      if (!w.empty()) {
                          std::vector<std::pair<int, int>> e;
                          for (int i = 0; i + 1 < static_cast<int>(w.size()); ++i)
                              e.emplace_back(i, i + 1);
                          DualGraph g = DualGraph::build(w, e);
                          IntersectionMatrix im = intersection_matrix(g);
                          ExactInverse ei = inverse_exact(im.m);
                          for (const auto& row : ei.inv)
                              for (const Rat& s : row)
                                  if (s >= 0) return false;
                          DiscrepancyVector base = solve_discrepancies(g, {});
                          for (std::size_t j = 0; j < im.order.size(); ++j) {
                              for (const Rat& bump : {rat(1, 2), rat(1, 3)}) {
                                  BoundaryIncidence inc;
                                  inc.beta[im.order[j]] = bump;
                                  DiscrepancyVector dv = solve_discrepancies(g, inc);
                                  for (std::size_t i = 0; i < im.order.size(); ++i) {
                                      Rat delta =
                                          dv.a.at(im.order[i]) - base.a.at(im.order[i]);
                                      if (delta != ei.inv[i][j] * bump || delta >= 0)
                                          return false;
                                  }
                              }
                          }
                      }
                      if (static_cast<int>(w.size()) == 5) return true;
                      for (int wt = 2; wt <= 5; ++wt) {
                          w.push_back(wt);
                          if (!rec(w)) return false;
                          w.pop_back();
                      }
                      return true;
                  };
                  std::vector<int> w;
                  if (!rec(w)) {
                      d = "mechanism violated";
                      return false;
                  }
                  return true;
              });

    criterion(12, "germ files round-trip byte-exactly; suite output is byte-stable",
              [](std::string& d) {
                  const char* samples[] = {
                      R"({"kind":"smooth","branches":[{"coeff":"1/2"},{"coeff":"3/4"}],"contacts":[[0,1,3]]})",
                      R"({"kind":"singular","graph":{"weights":[2,2],"edges":[[0,1]]},"attachments":[{"coeff":"1/2","host":0}]})",
                      R"({"kind":"singular","graph":{"weights":[4,3],"edges":[[0,1]]},"incidence":{"0":"1/2","1":"1/2"}})"};
                  for (const char* s : samples) {
                      std::string once = serialize_germ(parse_germ(s));
                      if (once != serialize_germ(parse_germ(once))) {
                          d = "round trip not byte-exact";
                          return false;
                      }
                  }
                  FamilySpec spec;
                  spec.trials = 100;
                  spec.seed = 7;
                  std::string a = report_json(verify_tower_identity(spec)).dump();
                  std::string b = report_json(verify_tower_identity(spec)).dump();
                  if (a != b) {
                      d = "suite output not byte-stable";
                      return false;
                  }
                  return true;
              });

    std::printf("%s (%d criteria failed)\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}
