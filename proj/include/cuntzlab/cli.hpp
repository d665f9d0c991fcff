#ifndef CUNTZLAB_CLI_HPP
#define CUNTZLAB_CLI_HPP

#include <cerrno>
#include <chrono>
#include <cstring>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "comparison.hpp"
#include "crossed_product.hpp"
#include "error.hpp"
#include "group.hpp"
#include "identification.hpp"
#include "report.hpp"
#include "representation.hpp"
#include "sequence.hpp"
#include "stages.hpp"

namespace cuntzlab {

inline constexpr const char* kOutputDirEnv = "CUNTZLAB_OUTPUT_DIR";

struct RunConfig {
  std::string group = "Z2";  // group family, or a path ending in .json
  std::string eta = "1/4";
  std::size_t stages = 3;
  std::size_t matrix_cap = kDefaultMatrixCap;
  std::optional<std::uint64_t> seed;
  std::size_t horizon = 10;
  std::optional<std::string> lambda;
  std::string output;  // empty: $CUNTZLAB_OUTPUT_DIR/<command>.<ext>, else stdout
  Format format = Format::json;
  bool decimals = false;
  bool timing = false;
  std::size_t trials = 20;
  std::size_t fixed_point_cap = kDefaultFixedPointCap;
};

struct RunResult {
  int exit_code = 0;
  Json report;
  std::string payload;                          // exact bytes emitted
  std::optional<std::filesystem::path> written;  // where they went, if a file
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"build", "verify", "rc-table", "certificate", "crossed-report"};
  return c;
}

/// Validated inputs shared by every command.
struct ResolvedConfig {
  GroupTable group;
  Rational eta;
  Integer nu;
};

inline GroupTable load_group(const std::string& family) {
  if (family.size() > 5 && family.substr(family.size() - 5) == ".json") {
    std::ifstream in(family);
    if (!in) throw Error("io_error", "cannot open group file " + family + ": " + std::strerror(errno));
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const Json::exception& e) {
      throw ParseError("group file " + family + ": " + e.what());
    }
    return group_from_json(doc);
  }
  return build_group(family);
}

/// eta in (0, 1/card G), stages >= 1, matrix_cap >= nu r(1).
inline ResolvedConfig resolve(const RunConfig& cfg) {
  GroupTable g = load_group(cfg.group);
  Rational eta = parse_rational(cfg.eta);
  const Integer nu(static_cast<unsigned long>(g.order()));
  if (sgn(eta) <= 0 || eta * nu >= 1)
    throw DomainError("eta must lie in (0, 1/" + nu.get_str() + "), got " + to_fraction(eta));
  if (cfg.stages == 0) throw DomainError("stages must be >= 1");
  const Integer fiber1 = nu * generate_stages(nu, eta * nu, 1).r(1);
  if (fiber1 > static_cast<unsigned long>(cfg.matrix_cap))
    throw DomainError("matrix_cap " + std::to_string(cfg.matrix_cap) + " is below nu*r(1) = " + fiber1.get_str());
  if (cfg.trials == 0) throw DomainError("trials must be >= 1");
  return {std::move(g), std::move(eta), nu};
}

inline Json config_json(const RunConfig& cfg) {
  Json j{{"group", cfg.group},
         {"eta", cfg.eta},
         {"stages", cfg.stages},
         {"matrix_cap", cfg.matrix_cap},
         {"horizon", cfg.horizon},
         {"format", cfg.format == Format::json ? "json" : "csv"},
         {"trials", cfg.trials},
         {"fixed_point_cap", cfg.fixed_point_cap}};
  j["seed"] = cfg.seed ? Json(*cfg.seed) : Json(nullptr);
  j["lambda"] = cfg.lambda ? Json(*cfg.lambda) : Json(nullptr);
  return j;
}

namespace detail {

struct CheckRecord {
  std::string name;
  std::string status;  // PASS | FAIL | SKIPPED
  std::string reason;  // for SKIPPED and FAIL
  Json detail;
  double ms = 0.0;
};

class CheckList {
 public:
  explicit CheckList(bool timing) : timing_(timing) {}

  /// Runs `body`; its return is {passed, detail}. A SizeError turns into
  /// SKIPPED with the cap reason; other library errors into FAIL.
  void run(const std::string& name, const std::function<std::pair<bool, Json>()>& body) {
    CheckRecord rec{name, "PASS", "", Json::object(), 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      auto [ok, detail] = body();
      rec.status = ok ? "PASS" : "FAIL";
      rec.detail = std::move(detail);
    } catch (const SizeError& e) {
      rec.status = "SKIPPED";
      rec.reason = e.what();
    } catch (const Error& e) {
      rec.status = "FAIL";
      rec.reason = e.code() + ": " + e.what();
    }
    rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    records_.push_back(std::move(rec));
  }

  void skip(const std::string& name, const std::string& reason) {
    records_.push_back({name, "SKIPPED", reason, Json::object(), 0.0});
  }

  bool all_passed() const {
    for (const auto& r : records_)
      if (r.status == "FAIL") return false;
    return true;
  }

  Json to_json() const {
    Json out = Json::array();
    for (const auto& r : records_) {
      Json j{{"name", r.name}, {"status", r.status}, {"detail", r.detail}};
      if (!r.reason.empty()) j["reason"] = r.reason;
      if (timing_) j["ms"] = r.ms;
      out.push_back(j);
    }
    return out;
  }

  Json summary() const {
    std::size_t pass = 0, fail = 0, skipped = 0;
    for (const auto& r : records_) {
      if (r.status == "PASS") ++pass;
      else if (r.status == "FAIL") ++fail;
      else ++skipped;
    }
    return Json{{"pass", pass}, {"fail", fail}, {"skipped", skipped}};
  }

 private:
  bool timing_;
  std::vector<CheckRecord> records_;
};

inline Json to_json(const CrossedIdentityReport& r) {
  return Json{{"samples", r.samples},
              {"associativity_failures", r.associativity_failures},
              {"involution_failures", r.involution_failures},
              {"trace_failures", r.trace_failures},
              {"psi_failures", r.psi_failures},
              {"norm_bound_failures", r.norm_bound_failures},
              {"norm_ratio_max", r.norm_ratio_max},
              {"unit_ok", r.unit_ok},
              {"averaging_ok", r.averaging_ok},
              {"averaging_trace", cuntzlab::to_json(r.averaging_trace)},
              {"psi_on_coefficients_ok", r.psi_on_coefficients_ok}};
}

/// Crossed-product checks shared by verify and crossed-report.
inline void crossed_checks(CheckList& checks, const ConstructionPlan& plan, const RunConfig& cfg,
                           std::uint64_t seed) {
  auto G = std::make_shared<const GroupTable>(plan.group);
  const std::size_t nu = plan.nu();
  checks.run("crossed_product.identities", [&] {
    const InnerAction act = InnerAction::regular(G);
    const CrossedIdentityReport r = crossed_identity_suite(act, cfg.trials, seed);
    Json d = to_json(r);
    d["fiber_dim"] = act.dim();
    d["crossed_product_dimension"] = crossed_product_dimension(*G, act.dim());
    return std::make_pair(r.passed(), d);
  });
  checks.run("crossed_product.fixed_points.regular", [&] {
    const std::size_t dim = fixed_point_dimension(InnerAction::regular(G), cfg.fixed_point_cap);
    return std::make_pair(dim == nu, Json{{"dimension", dim}, {"expected", nu}});
  });
  if (!plan.materializable(1)) {
    checks.skip("crossed_product.fixed_points.stage1",
                "fiber dimension " + plan.fiber_dim(1).get_str() + " exceeds cap " + std::to_string(plan.matrix_cap));
  } else if (plan.fiber(1) > cfg.fixed_point_cap) {
    checks.skip("crossed_product.fixed_points.stage1", "fiber dimension " + std::to_string(plan.fiber(1)) +
                                                           " exceeds fixed-point cap " +
                                                           std::to_string(cfg.fixed_point_cap));
  } else {
    checks.run("crossed_product.fixed_points.stage1", [&] {
      const std::size_t r = plan.r_small(1);
      const std::size_t dim = fixed_point_dimension(InnerAction::stage(plan, 1), cfg.fixed_point_cap);
      return std::make_pair(dim == nu * r * r, Json{{"dimension", dim}, {"expected", nu * r * r}});
    });
  }
}

inline std::string extension(Format f) { return f == Format::csv ? ".csv" : ".json"; }

}  // namespace detail

/// Destination for a command's output: --output, else the env directory,
/// else none (stdout).
inline std::optional<std::filesystem::path> output_path(const std::string& command, const RunConfig& cfg) {
  if (!cfg.output.empty()) return std::filesystem::path(cfg.output);
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir)
    return std::filesystem::path(dir) / (command + detail::extension(cfg.format));
  return std::nullopt;
}

inline RunResult run_command(const std::string& command, const RunConfig& cfg) {
  RunResult res;
  const ResolvedConfig rc = resolve(cfg);
  Json report{{"command", command}, {"config", config_json(cfg)}};
  if (cfg.format == Format::csv && command != "rc-table")
    throw DomainError("csv format is only available for rc-table");

  if (command == "build") {
    const ConstructionPlan plan =
        build_construction(rc.group, rc.eta, cfg.stages, cfg.matrix_cap, cfg.seed.value_or(0));
    report["plan"] = plan_summary(plan);
    res.exit_code = kExitPass;
  } else if (command == "verify") {
    if (!cfg.seed) throw Error("seed_required", "verify needs an explicit --seed");
    const std::uint64_t seed = *cfg.seed;
    const ConstructionPlan plan = build_construction(rc.group, rc.eta, cfg.stages, cfg.matrix_cap, seed);
    detail::CheckList checks(cfg.timing);
    checks.run("sequence.convergence", [&] {
      const StageLedger l = plan.ledger.size() >= 2 ? plan.ledger : generate_stages(rc.nu, rc.eta * rc.nu, 2);
      const ConvergenceReport c = convergence_report(l);
      const bool ok = c.d_nondecreasing && c.u_nonincreasing && c.gaps_positive && c.partial_sums_increasing;
      return std::make_pair(ok, Json{{"stages_checked", l.size()},
                                     {"d_nondecreasing", c.d_nondecreasing},
                                     {"u_nonincreasing", c.u_nonincreasing},
                                     {"gaps_positive", c.gaps_positive},
                                     {"partial_sums_increasing", c.partial_sums_increasing}});
    });
    checks.run("fell_absorption", [&] {
      fell_absorption_unitary(plan.group, plan.matrix_cap);
      return std::make_pair(true, Json{{"elements_checked", plan.nu()}});
    });
    for (std::size_t n = 0; n < plan.stage_count; ++n) {
      const std::string name = "equivariance.stage" + std::to_string(n) + "_to_" + std::to_string(n + 1);
      if (!plan.materializable(n + 1)) {
        checks.skip(name, "fiber dimension " + plan.fiber_dim(n + 1).get_str() + " exceeds cap " +
                              std::to_string(plan.matrix_cap));
        continue;
      }
      checks.run(name, [&] {
        const EquivarianceVerdict v = check_equivariance(plan, n, cfg.trials, seed + n);
        return std::make_pair(v.passed(), to_json(v));
      });
    }
    checks.run("rank_ledger", [&] {
      const RankLedgerReport r = rank_ledger(plan, plan.stage_count, 2, seed);
      return std::make_pair(r.passed(), to_json(r));
    });
    checks.run("outerness_gap", [&] {
      Json gaps = Json::object();
      bool ok = true;
      for (std::size_t g = 1; g < plan.nu(); ++g) {
        const Rational v = outerness_gap(plan, g);
        gaps[plan.group.label(g)] = to_json(v);
        ok = ok && v == 1;
      }
      return std::make_pair(ok, gaps);
    });
    detail::crossed_checks(checks, plan, cfg, seed);
    report["checks"] = checks.to_json();
    report["summary"] = checks.summary();
    report["all_passed"] = checks.all_passed();
    res.exit_code = checks.all_passed() ? kExitPass : kExitFail;
  } else if (command == "rc-table") {
    const StageLedger l = generate_stages(rc.nu, rc.eta * rc.nu, cfg.stages);
    IrrepOptions opt;
    opt.seed = cfg.seed.value_or(1);
    const GroupInvariants inv = irrep_dimensions(rc.group, opt);
    const RcTable t = rc_upper_table(l, inv);
    report["table"] = to_json(t, cfg.decimals);
    report["irrep_dims"] = inv.irrep_dims;
    const bool ok = t.columns_coincide() && t.strictly_decreasing_above_eta();
    res.exit_code = ok ? kExitPass : kExitFail;
    if (cfg.format == Format::csv) {
      res.report = report;
      res.payload = rc_table_csv(t, cfg.decimals);
      return res;
    }
  } else if (command == "certificate") {
    if (!cfg.lambda) throw Error("lambda_required", "certificate needs --lambda");
    const Rational lambda = parse_rational(*cfg.lambda);
    const std::size_t n = minimal_certificate_stage(rc.nu, rc.eta, lambda);
    const StageLedger l = generate_stages(rc.nu, rc.eta * rc.nu, std::max(cfg.stages, n + cfg.horizon));
    const ComparisonCertificate c = find_certificate(l, rc.eta, lambda, cfg.horizon);
    std::vector<Integer> raw_d;
    for (const auto& s : l.stages) raw_d.push_back(s.d);
    const bool revalidated = revalidate_certificate(c, rc.nu, raw_d);
    report["certificate"] = to_json(c);
    report["revalidated"] = revalidated;
    res.exit_code = c.valid() && revalidated ? kExitPass : kExitFail;
  } else if (command == "crossed-report") {
    const std::uint64_t seed = cfg.seed.value_or(0);
    const ConstructionPlan plan = build_construction(rc.group, rc.eta, cfg.stages, cfg.matrix_cap, seed);
    IrrepOptions opt;
    opt.seed = seed + 1;
    const GroupInvariants inv = irrep_dimensions(rc.group, opt);
    detail::CheckList checks(cfg.timing);
    detail::crossed_checks(checks, plan, cfg, seed);
    report["irrep_dims"] = inv.irrep_dims;
    report["conjugacy_class_count"] = inv.conjugacy_class_count;
    report["abelianization_order"] = inv.abelianization_order;
    report["checks"] = checks.to_json();
    report["summary"] = checks.summary();
    report["all_passed"] = checks.all_passed();
    res.exit_code = checks.all_passed() ? kExitPass : kExitFail;
  } else {
    throw ParseError("unknown command '" + command + "'");
  }
  res.report = report;
  res.payload = serialize(report);
  return res;
}

/// Runs a command and writes its output. Never throws: failures become a
/// machine-readable error object and a nonzero exit code.
inline RunResult run(const std::string& command, const RunConfig& cfg) {
  RunResult res;
  try {
    res = run_command(command, cfg);
  } catch (const Error& e) {
    res.exit_code = e.code() == "io_error" ? kExitIo : kExitConfig;
    res.report = error_object(e.code(), e.what());
    res.payload = serialize(res.report);
  } catch (const std::exception& e) {
    res.exit_code = kExitIo;
    res.report = error_object("internal_error", e.what());
    res.payload = serialize(res.report);
  }
  try {
    if (auto path = output_path(command, cfg)) {
      write_atomic(*path, res.payload);
      res.written = *path;
    }
  } catch (const Error& e) {
    res.exit_code = kExitIo;
    res.report = error_object(e.code(), e.what());
    res.payload = serialize(res.report);
    res.written.reset();
  }
  return res;
}

}  // namespace cuntzlab

#endif  // CUNTZLAB_CLI_HPP
