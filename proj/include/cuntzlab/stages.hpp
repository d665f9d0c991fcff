#ifndef CUNTZLAB_STAGES_HPP
#define CUNTZLAB_STAGES_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "exact_matrix.hpp"
#include "group.hpp"
#include "identification.hpp"
#include "rational.hpp"
#include "representation.hpp"
#include "sequence.hpp"

namespace cuntzlab {

/// Rational point of the unit sphere S^2.
struct SpherePoint {
  Rational x, y, z;

  static SpherePoint make(Rational x, Rational y, Rational z) {
    if (x * x + y * y + z * z != 1)
      throw DomainError("point (" + to_fraction(x) + ", " + to_fraction(y) + ", " +
                        to_fraction(z) + ") is not on the unit sphere");
    return {std::move(x), std::move(y), std::move(z)};
  }

  /// Inverse stereographic projection of (a, b) from the north pole; every
  /// rational point except the pole arises this way.
  static SpherePoint from_plane(const Rational& a, const Rational& b) {
    Rational q = a * a + b * b;
    return make(2 * a / (q + 1), 2 * b / (q + 1), (q - 1) / (q + 1));
  }

  friend bool operator==(const SpherePoint&, const SpherePoint&) = default;
  friend bool operator<(const SpherePoint& p, const SpherePoint& q) {
    if (p.x != q.x) return p.x < q.x;
    if (p.y != q.y) return p.y < q.y;
    return p.z < q.z;
  }
};

/// Point of X_n = (S^2)^{s(n)}. A point of X_{n+1} is read as d(n+1)
/// consecutive tuples of s(n) coordinates, one per coordinate projection.
struct StagePoint {
  std::size_t stage = 0;
  std::vector<SpherePoint> coords;

  /// P^(stage-1)_j for j = 0, ..., d(stage)-1 (0-based).
  StagePoint project(std::size_t j, std::size_t lower_size) const {
    if (stage == 0) throw DomainError("stage-0 points have no projections");
    if ((j + 1) * lower_size > coords.size())
      throw DimensionError("projection index out of range");
    StagePoint p{stage - 1, {}};
    p.coords.assign(coords.begin() + static_cast<std::ptrdiff_t>(j * lower_size),
                    coords.begin() + static_cast<std::ptrdiff_t>((j + 1) * lower_size));
    return p;
  }

  friend bool operator==(const StagePoint&, const StagePoint&) = default;
  friend bool operator<(const StagePoint& p, const StagePoint& q) {
    if (p.stage != q.stage) return p.stage < q.stage;
    return p.coords < q.coords;
  }
};

class MissingPointError : public Error {
 public:
  explicit MissingPointError(const std::string& what) : Error("missing_point", what) {}
};

/// A matrix-valued function on X_n known on finitely many points, with an
/// optional evaluator for points outside the table.
class MatFunc {
 public:
  using Evaluator = std::function<ExactMatrix(const StagePoint&)>;

  MatFunc(std::size_t stage, std::size_t fiber_dim, bool projection = false)
      : stage_(stage), fiber_dim_(fiber_dim), projection_(projection) {}

  std::size_t stage() const noexcept { return stage_; }
  std::size_t fiber_dim() const noexcept { return fiber_dim_; }
  bool is_projection_tagged() const noexcept { return projection_; }
  const std::map<StagePoint, ExactMatrix>& values() const noexcept { return values_; }

  void set_evaluator(Evaluator e) { evaluator_ = std::move(e); }
  bool has_evaluator() const noexcept { return static_cast<bool>(evaluator_); }

  void set(const StagePoint& x, ExactMatrix v) {
    if (x.stage != stage_) throw DimensionError("point stage does not match function stage");
    if (v.rows() != fiber_dim_ || v.cols() != fiber_dim_)
      throw DimensionError("fiber must be " + std::to_string(fiber_dim_) + "-square, got " +
                           v.shape());
    if (projection_ && !v.is_projection())
      throw DomainError("value tagged as projection is not a projection");
    values_.insert_or_assign(x, std::move(v));
  }

  bool defined_at(const StagePoint& x) const {
    return values_.count(x) != 0 || has_evaluator();
  }

  ExactMatrix at(const StagePoint& x) const {
    if (auto it = values_.find(x); it != values_.end()) return it->second;
    if (evaluator_) return evaluator_(x);
    throw MissingPointError("function at stage " + std::to_string(stage_) +
                            " is not defined at the requested point");
  }

 private:
  std::size_t stage_;
  std::size_t fiber_dim_;
  bool projection_;
  std::map<StagePoint, ExactMatrix> values_;
  Evaluator evaluator_;
};

/// 1/2 [[1+z, x-iy], [x+iy, 1-z]], padded with zeros to nu x nu.
inline ExactMatrix bott_projection(const SpherePoint& p, std::size_t nu) {
  if (p.x * p.x + p.y * p.y + p.z * p.z != 1) throw DomainError("point is not on the unit sphere");
  if (nu < 2) throw DomainError("Bott projection needs nu >= 2");
  const Rational h(1, 2);
  ExactMatrix m(nu, nu);
  m.set(0, 0, GaussianRational(h * (1 + p.z)));
  m.set(0, 1, GaussianRational(h * p.x, -h * p.y));
  m.set(1, 0, GaussianRational(h * p.x, h * p.y));
  m.set(1, 1, GaussianRational(h * (1 - p.z)));
  return m;
}

inline std::size_t to_size(const Integer& v, const char* what) {
  if (!v.fits_ulong_p()) throw DomainError(std::string(what) + " does not fit a machine word");
  return static_cast<std::size_t>(v.get_ui());
}

struct ConstructionPlan {
  GroupTable group;
  Rational eta;
  StageLedger ledger;
  std::size_t stage_count = 0;
  std::size_t matrix_cap = kDefaultMatrixCap;
  std::uint64_t seed = 0;
  Permutation w;                      // Fell intertwiner on G x G
  std::vector<Permutation> z;         // left regular representation
  std::vector<StagePoint> base_points;  // x_n for every materializable stage

  std::size_t nu() const { return group.order(); }
  Integer fiber_dim(std::size_t n) const { return Integer(static_cast<unsigned long>(nu())) * ledger.r(n); }
  bool materializable(std::size_t n) const {
    return n <= stage_count && fiber_dim(n) <= static_cast<unsigned long>(matrix_cap);
  }
  void require_materializable(std::size_t n) const {
    if (n > stage_count)
      throw DomainError("stage " + std::to_string(n) + " is beyond the plan");
    if (!materializable(n)) {
      const Integer f = fiber_dim(n);
      const std::size_t dim = f.fits_ulong_p() ? f.get_ui() : SIZE_MAX;
      throw SizeError(dim, dim, matrix_cap);
    }
  }
  std::size_t fiber(std::size_t n) const {
    require_materializable(n);
    return to_size(fiber_dim(n), "fiber dimension");
  }
  std::size_t s_small(std::size_t n) const { return to_size(ledger.s(n), "s(n)"); }
  std::size_t r_small(std::size_t n) const { return to_size(ledger.r(n), "r(n)"); }
  std::size_t d_small(std::size_t n) const { return to_size(ledger.d(n), "d(n)"); }
  const StagePoint& base_point(std::size_t n) const {
    if (n >= base_points.size())
      throw DomainError("no base point recorded for stage " + std::to_string(n));
    return base_points[n];
  }

  ExactMatrix w_matrix() const { return ExactMatrix::from_permutation(w); }
};

namespace detail {

inline Rational random_small_rational(std::mt19937_64& rng) {
  long num = static_cast<long>(rng() % 19) - 9;
  long den = static_cast<long>(rng() % 9) + 1;
  return ratio(Integer(num), Integer(den));
}

}  // namespace detail

inline SpherePoint random_sphere_point(std::mt19937_64& rng) {
  Rational a = detail::random_small_rational(rng);
  Rational b = detail::random_small_rational(rng);
  return SpherePoint::from_plane(a, b);
}

inline StagePoint random_stage_point(std::size_t stage, std::size_t s, std::mt19937_64& rng) {
  StagePoint p{stage, {}};
  p.coords.reserve(s);
  for (std::size_t i = 0; i < s; ++i) p.coords.push_back(random_sphere_point(rng));
  return p;
}

/// Ledger with m = nu and target nu*eta, the Fell intertwiner, and seeded
/// base points. eta must lie strictly inside (0, 1/nu).
inline ConstructionPlan build_construction(const GroupTable& group, const Rational& eta,
                                           std::size_t stage_count,
                                           std::size_t matrix_cap = kDefaultMatrixCap,
                                           std::uint64_t seed = 0) {
  const std::size_t nu = group.order();
  if (sgn(eta) <= 0 || eta * static_cast<unsigned long>(nu) >= 1)
    throw DomainError("eta must lie in (0, 1/" + std::to_string(nu) + "), got " + to_fraction(eta));
  if (stage_count == 0) throw DomainError("stage count must be >= 1");
  ConstructionPlan plan;
  plan.group = group;
  plan.eta = eta;
  plan.stage_count = stage_count;
  plan.matrix_cap = matrix_cap;
  plan.seed = seed;
  plan.ledger = generate_stages(Integer(static_cast<unsigned long>(nu)),
                                eta * static_cast<unsigned long>(nu), stage_count);
  if (plan.fiber_dim(1) > static_cast<unsigned long>(matrix_cap))
    throw DomainError("matrix cap " + std::to_string(matrix_cap) + " is below nu*r(1) = " +
                      plan.fiber_dim(1).get_str());
  plan.w = fell_absorption_permutation(group);
  fell_absorption_unitary(group, matrix_cap);  // exhaustive verification
  for (std::size_t a = 0; a < nu; ++a) plan.z.push_back(group.left_translation(a));
  std::mt19937_64 rng(seed);
  for (std::size_t n = 0; plan.materializable(n); ++n)
    plan.base_points.push_back(random_stage_point(n, plan.s_small(n), rng));
  return plan;
}

/// sigma_{r}(z_g (x) 1_r) as a permutation of the stage-n fiber indices.
inline Permutation stage_unitary(const ConstructionPlan& plan, std::size_t g, std::size_t n) {
  const std::size_t r = plan.r_small(n);
  return sigma(plan.nu(), r).apply(kron(plan.z.at(g), Permutation::identity(r)));
}

/// phi_r(theta(w) (x) 1_r) for r = r(n), the corner conjugation.
inline Permutation corner_unitary(const ConstructionPlan& plan, std::size_t n) {
  const std::size_t nu = plan.nu(), r = plan.r_small(n);
  const Permutation tw = theta(nu).apply(plan.w);
  return phi(nu, r).apply(kron(tw, Permutation::identity(r)));
}

/// c_f(x) = phi(theta(w) (x) 1) psi(1 (x) f(x)) phi(theta(w*) (x) 1).
inline ExactMatrix corner_block(const ConstructionPlan& plan, std::size_t n, const ExactMatrix& fx) {
  const std::size_t nu = plan.nu(), r = plan.r_small(n);
  const ExactMatrix inner = psi(nu, r)(ExactMatrix::identity(nu), fx, plan.matrix_cap);
  return inner.conjugated_by(corner_unitary(plan, n));
}

/// Block diagonal of the d(n+1) pullbacks of f followed by `corner`, at
/// each target. Used by gamma_step and by the rank decomposition.
inline MatFunc assemble_stage(const MatFunc& f, const ConstructionPlan& plan,
                              const std::vector<StagePoint>& targets, const ExactMatrix& corner) {
  const std::size_t n = f.stage();
  plan.require_materializable(n + 1);
  const std::size_t out_dim = plan.fiber(n + 1);
  const std::size_t copies = plan.d_small(n + 1), lower = plan.s_small(n);
  MatFunc out(n + 1, out_dim);
  for (const auto& x : targets) {
    if (x.stage != n + 1 || x.coords.size() != plan.s_small(n + 1))
      throw DimensionError("target is not a stage-" + std::to_string(n + 1) + " point");
    std::vector<ExactMatrix> blocks;
    blocks.reserve(copies + 1);
    for (std::size_t j = 0; j < copies; ++j) blocks.push_back(f.at(x.project(j, lower)));
    blocks.push_back(corner);
    ExactMatrix v = direct_sum(blocks, plan.matrix_cap);
    if (v.rows() != out_dim)
      throw InconsistencyError("stage map produced " + v.shape() + ", expected " +
                               std::to_string(out_dim));
    out.set(x, std::move(v));
  }
  return out;
}

/// Gamma_{n+1,n}(f) evaluated at `targets` (stage n+1 points).
inline MatFunc gamma_step(const MatFunc& f, const ConstructionPlan& plan,
                          const std::vector<StagePoint>& targets) {
  const std::size_t n = f.stage();
  if (f.fiber_dim() != plan.fiber(n))
    throw DimensionError("function fiber does not match stage " + std::to_string(n));
  plan.require_materializable(n + 1);
  return assemble_stage(f, plan, targets, corner_block(plan, n, f.at(plan.base_point(n))));
}

/// alpha^(n)_g(f): pointwise conjugation by sigma_{r(n)}(z_g (x) 1).
inline MatFunc act(std::size_t g, const MatFunc& f, const ConstructionPlan& plan) {
  const std::size_t n = f.stage();
  const Permutation u = stage_unitary(plan, g, n);
  if (u.size() != f.fiber_dim()) throw DimensionError("action size does not match fiber");
  MatFunc out(n, f.fiber_dim(), f.is_projection_tagged());
  for (const auto& [x, v] : f.values()) out.set(x, v.conjugated_by(u));
  if (f.has_evaluator())
    out.set_evaluator([f, u](const StagePoint& x) { return f.at(x).conjugated_by(u); });
  return out;
}

/// All stage-n points Gamma_{n+1,n} needs to evaluate at `targets`.
inline std::vector<StagePoint> required_points(const ConstructionPlan& plan, std::size_t n,
                                               const std::vector<StagePoint>& targets) {
  std::set<StagePoint> pts;
  const std::size_t copies = plan.d_small(n + 1), lower = plan.s_small(n);
  for (const auto& x : targets)
    for (std::size_t j = 0; j < copies; ++j) pts.insert(x.project(j, lower));
  pts.insert(plan.base_point(n));
  return {pts.begin(), pts.end()};
}

/// Random Gaussian-integer function (entries in [-3, 3] + [-3, 3]i).
inline MatFunc random_matfunc(const ConstructionPlan& plan, std::size_t n,
                              const std::vector<StagePoint>& points, std::mt19937_64& rng) {
  const std::size_t k = plan.fiber(n);
  MatFunc f(n, k);
  for (const auto& x : points) {
    std::vector<GaussianRational> e(k * k);
    for (auto& v : e)
      v = GaussianRational(Rational(static_cast<long>(rng() % 7) - 3),
                           Rational(static_cast<long>(rng() % 7) - 3));
    f.set(x, ExactMatrix::from_entries(k, k, e));
  }
  return f;
}

struct Mismatch {
  std::size_t g;
  std::size_t point;
  std::size_t row;
  std::size_t col;
};

struct EquivarianceVerdict {
  std::size_t stage = 0;
  std::size_t trials = 0;
  std::size_t points = 0;
  std::size_t comparisons = 0;
  bool reduction_identity = true;
  std::vector<Mismatch> mismatches;
  bool passed() const { return reduction_identity && mismatches.empty(); }
};

/// Gamma(alpha_g f) == alpha_g(Gamma f) entrywise for random Gaussian-integer
/// f and every g, plus (1 (x) z_g*) w* (z_g (x) 1) w == z_g (x) 1.
inline EquivarianceVerdict check_equivariance(const ConstructionPlan& plan, std::size_t n,
                                              std::size_t trials, std::uint64_t seed,
                                              std::size_t target_count = 2) {
  EquivarianceVerdict v;
  v.stage = n;
  v.trials = trials;
  const std::size_t nu = plan.nu();
  const ExactMatrix w = plan.w_matrix(), ws = w.adjoint(), one = ExactMatrix::identity(nu);
  for (std::size_t g = 0; g < nu; ++g) {
    const ExactMatrix zg = ExactMatrix::from_permutation(plan.z[g]);
    if (kron(one, zg.adjoint()) * ws * kron(zg, one) * w != kron(zg, one))
      v.reduction_identity = false;
  }
  std::mt19937_64 rng(seed);
  std::vector<StagePoint> targets;
  for (std::size_t t = 0; t < target_count; ++t)
    targets.push_back(random_stage_point(n + 1, plan.s_small(n + 1), rng));
  const auto pts = required_points(plan, n, targets);
  v.points = targets.size();
  for (std::size_t t = 0; t < trials; ++t) {
    const MatFunc f = random_matfunc(plan, n, pts, rng);
    const MatFunc gf = gamma_step(f, plan, targets);
    for (std::size_t g = 0; g < nu; ++g) {
      const MatFunc lhs = gamma_step(act(g, f, plan), plan, targets);
      const MatFunc rhs = act(g, gf, plan);
      for (std::size_t p = 0; p < targets.size(); ++p) {
        ++v.comparisons;
        const ExactMatrix a = lhs.at(targets[p]), b = rhs.at(targets[p]);
        if (a == b) continue;
        for (std::size_t i = 0; i < a.rows(); ++i)
          for (std::size_t j = 0; j < a.cols(); ++j)
            if (!(a(i, j) == b(i, j))) {
              v.mismatches.push_back({g, p, i, j});
              i = a.rows();
              break;
            }
      }
    }
  }
  return v;
}

struct RankLedgerEntry {
  std::size_t n;
  Integer bott_block_count;  // s(n)
  Integer constant_rank;     // r(n) - s(n)
  Integer total_rank;        // r(n)
  Rational normalized_trace; // total / (nu r(n))
  bool recursion_ok;
};

struct RankSpotCheck {
  std::size_t n = 0;
  bool materialized = false;
  std::string skip_reason;
  std::size_t points = 0;
  bool rank_ok = true;           // rank p_n(x) == r(n)
  bool trace_ok = true;          // tr p_n(x) / (nu r(n)) == 1/nu
  bool projection_ok = true;     // p^2 = p = p*
  bool decomposition_ok = true;  // p = y + z, y z = 0, rank y = s(n)
  bool constant_ok = true;       // z_n the same at every point, rank r(n)-s(n)
  std::vector<std::size_t> constant_ranks;  // materialized rank of z_n per point
  bool passed() const {
    return rank_ok && trace_ok && projection_ok && decomposition_ok && constant_ok;
  }
};

struct RankLedgerReport {
  std::vector<RankLedgerEntry> entries;
  std::vector<RankSpotCheck> spot_checks;
  bool passed() const {
    for (const auto& e : entries)
      if (!e.recursion_ok) return false;
    for (const auto& c : spot_checks)
      if (c.materialized && !c.passed()) return false;
    return true;
  }
};

/// Symbolic rank ledger for stages 0..up_to, with materialized spot checks
/// of p_n = Gamma_{n,0}(p) wherever the fiber fits the cap.
inline RankLedgerReport rank_ledger(const ConstructionPlan& plan, std::size_t up_to,
                                    std::size_t target_count = 2, std::uint64_t seed = 0) {
  if (up_to > plan.stage_count) throw DomainError("rank ledger beyond plan stages");
  const std::size_t nu = plan.nu();
  const Integer nu_z(static_cast<unsigned long>(nu));
  RankLedgerReport rep;
  for (std::size_t n = 0; n <= up_to; ++n) {
    const Integer s = plan.ledger.s(n), r = plan.ledger.r(n);
    RankLedgerEntry e{n, s, r - s, r, ratio(r, nu_z * r), true};
    if (n > 0) {
      const Integer sp = plan.ledger.s(n - 1), rp = plan.ledger.r(n - 1), d = plan.ledger.d(n);
      Integer predicted = (rp - sp) * d + nu_z * (rp - sp) + nu_z * sp;
      e.recursion_ok = predicted == r - s;
    }
    e.recursion_ok = e.recursion_ok && e.normalized_trace == Rational(1, static_cast<unsigned long>(nu));
    rep.entries.push_back(e);
  }

  std::size_t top = 0;
  while (top + 1 <= up_to && plan.materializable(top + 1)) ++top;
  std::mt19937_64 rng(seed);
  // Sample sets per stage, top-down.
  std::vector<std::vector<StagePoint>> pts(top + 1);
  for (std::size_t t = 0; t < target_count; ++t)
    pts[top].push_back(random_stage_point(top, plan.s_small(top), rng));
  for (std::size_t n = top; n-- > 0;) pts[n] = required_points(plan, n, pts[n + 1]);

  MatFunc p(0, nu), y(0, nu), z(0, nu);
  for (const auto& x : pts[0]) {
    ExactMatrix b = bott_projection(x.coords.at(0), nu);
    p.set(x, b);
    y.set(x, b);
    z.set(x, ExactMatrix(nu, nu));
  }
  for (std::size_t n = 0; n <= up_to; ++n) {
    RankSpotCheck c;
    c.n = n;
    if (n > top) {
      c.skip_reason = "fiber dimension " + plan.fiber_dim(n).get_str() + " exceeds cap " +
                      std::to_string(plan.matrix_cap);
      rep.spot_checks.push_back(c);
      continue;
    }
    if (n > 0) {
      // Pullback blocks go to y; the corner (constant) goes to z.
      const ExactMatrix corner = corner_block(plan, n - 1, p.at(plan.base_point(n - 1)));
      const std::size_t k = plan.fiber(n - 1);
      MatFunc pn = gamma_step(p, plan, pts[n]);
      MatFunc yn = assemble_stage(y, plan, pts[n], ExactMatrix(nu * k, nu * k));
      MatFunc zn = assemble_stage(z, plan, pts[n], corner);
      p = std::move(pn);
      y = std::move(yn);
      z = std::move(zn);
    }
    c.materialized = true;
    const std::size_t s = plan.s_small(n), r = plan.r_small(n);
    const Rational want_trace(1, static_cast<unsigned long>(nu));
    std::optional<ExactMatrix> z_ref;
    for (const auto& x : pts[n]) {
      ++c.points;
      const ExactMatrix px = p.at(x), yx = y.at(x), zx = z.at(x);
      if (!px.is_projection()) c.projection_ok = false;
      if (px.rank() != r) c.rank_ok = false;
      GaussianRational tr = px.trace();
      if (!(tr.re / static_cast<unsigned long>(nu * r) == want_trace) || !tr.is_real())
        c.trace_ok = false;
      if (yx + zx != px || !(yx * zx).is_zero() || yx.rank() != s) c.decomposition_ok = false;
      const std::size_t zr = zx.rank();
      c.constant_ranks.push_back(zr);
      if (zr != r - s) c.constant_ok = false;
      if (!z_ref) z_ref = zx;
      else if (*z_ref != zx) c.constant_ok = false;
    }
    rep.spot_checks.push_back(c);
  }
  return rep;
}

/// || w (e_11 (x) 1) w* - w (e_gg (x) 1) w* ||, certified exactly: the
/// difference D is Hermitian with D^3 = D and D != 0, so its norm is 1.
inline Rational outerness_gap(const ConstructionPlan& plan, std::size_t g) {
  const std::size_t nu = plan.nu();
  if (g == GroupTable::identity()) throw DomainError("outerness gap needs g != identity");
  if (g >= nu) throw DomainError("group element out of range");
  const ExactMatrix w = plan.w_matrix(), ws = w.adjoint(), one = ExactMatrix::identity(nu);
  const ExactMatrix p = w * kron(ExactMatrix::unit(nu, 0, 0), one) * ws;
  const ExactMatrix q = w * kron(ExactMatrix::unit(nu, g, g), one) * ws;
  const ExactMatrix d = p - q;
  if (d.is_zero()) return Rational(0);
  if (!d.is_hermitian() || d * d * d != d)
    throw InconsistencyError("difference of conjugated matrix units is not a partial symmetry");
  return Rational(1);
}

}  // namespace cuntzlab

#endif  // CUNTZLAB_STAGES_HPP
