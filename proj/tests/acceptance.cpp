// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cuntzlab/cuntzlab.hpp"

using namespace cuntzlab;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream note;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) note << "failed: ";
      else note << "; ";
      note << what;
      ok = false;
    }
  }
};

const std::vector<std::string> kGroups = {"Z2", "Z3", "Z4", "Z2xZ2", "S3", "D4", "Q8"};

Rational eta_for(const GroupTable& g) { return Rational(1, 2 * static_cast<unsigned long>(g.order())); }

Integer scan_next_d(const Integer& m, const Rational& q) {
  for (Integer k = 1;; ++k)
    if (Rational(k) / Rational(k + m) > q) return k;
}

void sequence_exactness(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const StageLedger l = generate_stages(Integer(2), Rational(1, 2), 6);
  o.require(l.d(1) == 3 && l.d(2) == 11 && l.d(3) == 131, "d prefix");
  o.require(l.u(1) == Rational(3, 5) && l.u(2) == Rational(33, 65) && l.u(3) == Rational(4323, 8645), "u prefix");
  // Linear-scan oracle for the first stages, where it is cheap.
  for (std::size_t n = 1; n <= 3; ++n) {
    o.require(scan_next_d(Integer(2), Rational(1, 2) / l.u(n - 1)) == l.d(n), "oracle d(" + std::to_string(n) + ")");
  }
  std::size_t first = 0;
  for (std::size_t n = 1; n <= l.size(); ++n) {
    o.require(l.u(n) > Rational(1, 2), "u above 1/2");
    if (n > 1) o.require(l.u(n) <= l.u(n - 1), "u nonincreasing");
    if (!first && Rational(l.u(n) - Rational(1, 2)).get_d() < 1e-6) first = n;
  }
  o.require(first != 0 && first <= 6, "gap below 1e-6 by stage 6");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 1.0, "runtime under 1 s");
  o.note << (o.ok ? "" : "; ") << "gap < 1e-6 at stage " << first;
}

void fell_absorption(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& family : kGroups) {
    const GroupTable g = build_group(family);
    const std::size_t nu = g.order();
    const ExactMatrix w = fell_absorption_unitary(g), ws = w.adjoint(), one = ExactMatrix::identity(nu);
    const UnitaryRep z = regular_representation(g);
    for (std::size_t a = 0; a < nu; ++a)
      o.require(w * kron(z(a), z(a)) * ws == kron(z(a), one), family + " element " + g.label(a));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 2.0, "runtime under 2 s");
  if (o.ok) o.note << kGroups.size() << " groups, every element";
}

void equivariance(Outcome& o) {
  const ConstructionPlan z2 = build_construction(build_group("Z2"), Rational(1, 4), 2, 4096, 11);
  const ConstructionPlan s3 = build_construction(build_group("S3"), Rational(1, 12), 1, 4096, 12);
  std::size_t comparisons = 0;
  for (const auto& [plan, n, name] : std::vector<std::tuple<const ConstructionPlan*, std::size_t, std::string>>{
           {&z2, 0, "Z2 0->1"}, {&z2, 1, "Z2 1->2"}, {&s3, 0, "S3 0->1"}}) {
    const EquivarianceVerdict v = check_equivariance(*plan, n, 20, 1000 + n);
    o.require(v.passed(), name);
    comparisons += v.comparisons;
  }
  if (o.ok) o.note << comparisons << " exact fiber comparisons over 20 trials per stage";
}

void rank_trace(Outcome& o) {
  const ConstructionPlan plan = build_construction(build_group("Z2"), Rational(1, 4), 2, 4096, 21);
  const RankLedgerReport rep = rank_ledger(plan, 2, 3, 21);
  o.require(rep.passed(), "ledger report");
  const std::size_t want[] = {0, 2, 32};
  std::size_t points = 0;
  for (std::size_t n = 1; n <= 2; ++n) {
    const RankSpotCheck& c = rep.spot_checks.at(n);
    o.require(c.materialized, "stage " + std::to_string(n) + " materialized");
    o.require(rep.entries.at(n).constant_rank == want[n], "predicted constant rank stage " + std::to_string(n));
    for (std::size_t r : c.constant_ranks) o.require(r == want[n], "materialized constant rank");
    o.require(c.trace_ok && c.rank_ok && c.projection_ok, "trace/rank/projection at stage " + std::to_string(n));
    points += c.points;
  }
  for (const auto& e : rep.entries) o.require(e.normalized_trace == Rational(1, 2), "trace 1/nu");
  if (o.ok) o.note << "constant ranks 2, 32 at " << points << " sample points; trace 1/2";
}

void outerness(Outcome& o) {
  std::size_t pairs = 0;
  for (const auto& family : kGroups) {
    const GroupTable g = build_group(family);
    const ConstructionPlan plan = build_construction(g, eta_for(g), 1, 4096, 1);
    const ExactMatrix w = plan.w_matrix(), one = ExactMatrix::identity(g.order());
    const ExactMatrix p = w * kron(ExactMatrix::unit(g.order(), 0, 0), one) * w.adjoint();
    for (std::size_t a = 1; a < g.order(); ++a) {
      o.require(outerness_gap(plan, a) == 1, family + " " + g.label(a));
      // Floating cross-check of the exact certificate.
      const ExactMatrix q = w * kron(ExactMatrix::unit(g.order(), a, a), one) * w.adjoint();
      o.require(std::abs(operator_norm(p - q) - 1.0) < 1e-12, family + " numeric norm");
      ++pairs;
    }
  }
  if (o.ok) o.note << pairs << " (group, g) pairs";
}

void crossed_product(Outcome& o) {
  double worst = 0.0;
  for (const auto& family : kGroups) {
    auto g = std::make_shared<const GroupTable>(build_group(family));
    const CrossedIdentityReport r = crossed_identity_suite(InnerAction::regular(g), 100, 600);
    o.require(r.passed(), family);
    o.require(r.averaging_trace == Rational(1, static_cast<unsigned long>(g->order())), family + " tau(p)");
    worst = std::max(worst, r.norm_ratio_max / static_cast<double>(g->order()));
  }
  if (o.ok) o.note << "100 samples per group; max ||psi(x)|| / (card(G) ||x||) = " << worst;
}

void fixed_points(Outcome& o) {
  struct Case {
    std::string family;
    Rational eta;
    std::size_t n;
  };
  for (const auto& c : std::vector<Case>{{"Z2", Rational(1, 4), 0}, {"Z2", Rational(1, 4), 1}, {"Z3", Rational(1, 6), 0},
                                         {"S3", Rational(1, 12), 0}, {"S3", Rational(1, 12), 1}, {"Q8", Rational(1, 16), 0}}) {
    const ConstructionPlan plan = build_construction(build_group(c.family), c.eta, 1, 4096, 3);
    const std::size_t r = plan.r_small(c.n);
    const std::size_t got = fixed_point_dimension(InnerAction::stage(plan, c.n));
    o.require(got == plan.nu() * r * r, c.family + " stage " + std::to_string(c.n));
    if (c.family == "Z2" && c.n == 1) o.require(got == 50, "Z2 stage 1 equals 50");
  }
  const std::vector<std::pair<std::string, std::vector<std::size_t>>> irreps = {
      {"Z2", {1, 1}}, {"S3", {1, 1, 2}}, {"Q8", {1, 1, 1, 1, 2}}, {"D4", {1, 1, 1, 1, 2}}};
  for (const auto& [family, dims] : irreps) {
    const GroupTable g = build_group(family);
    const GroupInvariants inv = irrep_dimensions(g);
    o.require(inv.irrep_dims == dims, family + " irrep dims");
    std::size_t sq = 0, ones = 0;
    for (std::size_t t : inv.irrep_dims) {
      sq += t * t;
      ones += t == 1;
    }
    o.require(sq == g.order(), family + " sum of squares");
    o.require(ones == group_invariants(g).abelianization_order, family + " abelianization");
  }
  if (o.ok) o.note << "Z2 stage 1: 50, S3 stage 1: 1014; irrep dims match";
}

void rc_tables(Outcome& o) {
  struct Case {
    std::string family;
    Rational eta;
    std::size_t documented;  // first stage with gap below 1e-6
  };
  for (const auto& c : std::vector<Case>{{"Z2", Rational(1, 4), 4},
                                         {"Z2", Rational(1, 10), 5},
                                         {"S3", Rational(1, 12), 3},
                                         {"Q8", Rational(1, 16), 3}}) {
    const GroupTable g = build_group(c.family);
    const Integer nu(static_cast<unsigned long>(g.order()));
    const RcTable t = rc_upper_table(generate_stages(nu, c.eta * nu, 7), irrep_dimensions(g));
    const std::string tag = c.family + "/" + to_fraction(c.eta);
    o.require(t.columns_coincide(), tag + " columns");
    o.require(t.strictly_decreasing_above_eta(), tag + " strictly decreasing");
    const auto first = t.first_within(1e-6);
    o.require(first && *first == c.documented, tag + " within 1e-6 at stage " + std::to_string(c.documented));
    o.note << (o.ok ? "" : "; ") << tag << "@" << (first ? std::to_string(*first) : "-") << " ";
  }
}

void certificate(Outcome& o) {
  const StageLedger l = generate_stages(Integer(2), Rational(1, 2), 12);
  const ComparisonCertificate c = find_certificate(l, Rational(1, 4), Rational(1, 5), 10);
  o.require(c.n == 2, "n == 2");
  o.require(c.M >= 92 && c.M <= 97, "M in [92, 97]");
  o.require(c.valid(), "all rank inequalities");
  o.require(c.checks.size() == 10, "horizon 10");
  std::vector<Integer> raw;
  for (const auto& s : l.stages) raw.push_back(s.d);
  o.require(revalidate_certificate(c, Integer(2), raw), "independent recomputation");
  if (o.ok) o.note << "n=" << c.n << " M=" << c.M.get_str() << " (max " << c.M_max.get_str() << ")";
}

void cuntz_cut_down(Outcome& o) {
  std::mt19937_64 rng(77);
  auto rat = [&](unsigned den) { return Rational(static_cast<long>(rng() % (4 * den + 1)), den); };
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 1 + rng() % 6;
    std::vector<GaussianRational> d(k);
    for (auto& v : d) v = rat(1 + static_cast<unsigned>(rng() % 12));
    const ExactMatrix a = ExactMatrix::diagonal(d);
    const Rational e1 = rat(7), e2 = rat(5);
    if (cut_down(cut_down(a, e1), e2) != cut_down(a, e1 + e2)) {
      o.require(false, "cut-down composition at sample " + std::to_string(t));
      break;
    }
    // (a - eps)_+ <~ a: rank can only drop.
    o.require(cuntz_leq_fd(RankVector::of(cut_down(a, e1)), RankVector::of(a)), "cut-down below a");

    std::vector<std::size_t> sizes(3), ra(3), rb(3), rc(3);
    for (std::size_t j = 0; j < 3; ++j) {
      sizes[j] = 1 + rng() % 5;
      ra[j] = rng() % (sizes[j] + 1);
      rb[j] = rng() % (sizes[j] + 1);
      rc[j] = rng() % (sizes[j] + 1);
    }
    const RankVector A = RankVector::make(ra, sizes), B = RankVector::make(rb, sizes), C = RankVector::make(rc, sizes);
    o.require(cuntz_leq_fd(A, A), "reflexive");
    if (cuntz_leq_fd(A, B) && cuntz_leq_fd(B, C)) o.require(cuntz_leq_fd(A, C), "transitive");
    if (cuntz_leq_fd(A, B)) o.require(cuntz_leq_fd(direct_sum(A, C), direct_sum(B, C)), "direct-sum monotone");
    if (!o.ok) break;
  }
  if (o.ok) o.note << "1000 random diagonal matrices and rank triples";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"sequence exactness", sequence_exactness},
      {"Fell absorption", fell_absorption},
      {"equivariance", equivariance},
      {"rank/trace ledger", rank_trace},
      {"outerness gap", outerness},
      {"crossed product identities", crossed_product},
      {"fixed points and irreps", fixed_points},
      {"rc tables", rc_tables},
      {"non-comparison certificate", certificate},
      {"Cuntz/cut-down suite", cuntz_cut_down},
  };
  const auto start = std::chrono::steady_clock::now();
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2zu %-28s %7.2fs  %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                o.note.str().c_str());
    failures += !o.ok;
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/%zu criteria passed in %.2fs\n", static_cast<int>(criteria.size()) - failures, criteria.size(), total);
  return failures == 0 ? 0 : 1;
}
