// Walks the Z2 construction at eta = 1/4 through its first stages.

#include <iostream>

#include "cuntzlab/cuntzlab.hpp"

int main() {
  using namespace cuntzlab;
  const GroupTable g = build_group("Z2");
  const ConstructionPlan plan = build_construction(g, parse_rational("1/4"), 3, 256, 7);

  std::cout << "stage  d      r       s      u\n";
  for (const auto& st : plan.ledger.stages)
    std::cout << st.n << "      " << st.d << "  " << st.r << "  " << st.s << "  " << to_fraction(st.u) << "\n";

  const EquivarianceVerdict v = check_equivariance(plan, 0, 5, 7);
  std::cout << "equivariance 0->1: " << (v.passed() ? "exact" : "BROKEN") << " over " << v.comparisons
            << " comparisons\n";

  const RankLedgerReport ranks = rank_ledger(plan, 2);
  for (const auto& e : ranks.entries)
    std::cout << "p_" << e.n << ": rank " << e.total_rank << ", constant part " << e.constant_rank
              << ", normalized trace " << to_fraction(e.normalized_trace) << "\n";

  const StageLedger long_ledger = generate_stages(Integer(2), Rational(1, 2), 12);
  const ComparisonCertificate c = find_certificate(long_ledger, Rational(1, 4), Rational(1, 5), 10);
  std::cout << "lambda = 1/5 fails: n = " << c.n << ", M = " << c.M << ", " << c.checks.size()
            << " rank inequalities " << (c.valid() ? "hold" : "FAIL") << "\n";
}
