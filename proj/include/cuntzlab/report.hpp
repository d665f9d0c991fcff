#ifndef CUNTZLAB_REPORT_HPP
#define CUNTZLAB_REPORT_HPP

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "comparison.hpp"
#include "crossed_product.hpp"
#include "error.hpp"
#include "permutation.hpp"
#include "rational.hpp"
#include "sequence.hpp"
#include "stages.hpp"

// Machine-readable output. Rationals are "num/den" strings and big integers
// decimal strings; floats only appear in fields whose names end in
// "_decimal" or are explicitly approximate (norms, timings).
// nlohmann::json objects are std::map-backed, so keys come out sorted.

namespace cuntzlab {

using Json = nlohmann::json;

inline Json to_json(const Rational& q) { return to_fraction(q); }
inline Json to_json(const Integer& z) { return z.get_str(); }

inline Json to_json(const GaussianRational& z) {
  return Json{{"re", to_fraction(z.re)}, {"im", to_fraction(z.im)}};
}

inline Json to_json(const GroupTable& g) {
  return Json{{"name", g.name()}, {"order", g.order()}, {"labels", g.labels()}};
}

inline Json to_json(const StageRecord& s, const Integer& nu) {
  return Json{{"n", s.n},
              {"d", to_json(s.d)},
              {"l", to_json(s.l)},
              {"s", to_json(s.s)},
              {"r", to_json(s.r)},
              {"u", to_json(s.u)},
              {"fiber_dim", to_json(Integer(nu * s.r))},
              {"dim_x", to_json(Integer(2 * s.s))}};
}

inline Json to_json(const StageLedger& l) {
  Json stages = Json::array();
  for (const auto& s : l.stages) stages.push_back(to_json(s, l.m));
  return Json{{"m", to_json(l.m)}, {"target", to_json(l.target)}, {"stages", stages}};
}

inline Json plan_summary(const ConstructionPlan& plan) {
  Json stages = Json::array();
  for (const auto& s : plan.ledger.stages) {
    Json j = to_json(s, plan.ledger.m);
    j["materializable"] = plan.materializable(s.n);
    stages.push_back(j);
  }
  return Json{{"group", to_json(plan.group)},
              {"eta", to_json(plan.eta)},
              {"nu", plan.nu()},
              {"target", to_json(plan.ledger.target)},
              {"stage_count", plan.stage_count},
              {"matrix_cap", plan.matrix_cap},
              {"seed", plan.seed},
              {"fell_absorption", Json{{"permutation", plan.w.image()}, {"verified", true}}},
              {"stages", stages}};
}

inline Json to_json(const RcTable& t, bool decimals) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json j{{"stage", r.stage},
           {"dimX", to_json(r.dim_x)},
           {"fiber", to_json(r.fiber)},
           {"bound", to_json(r.bound)},
           {"cp_bound", to_json(r.cp_bound)},
           {"gap", to_json(r.gap)}};
    if (decimals) {
      j["bound_decimal"] = r.bound.get_d();
      j["gap_decimal"] = r.gap.get_d();
    }
    rows.push_back(j);
  }
  return Json{{"eta", to_json(t.eta)},
              {"nu", t.nu},
              {"rows", rows},
              {"columns_coincide", t.columns_coincide()},
              {"strictly_decreasing_above_eta", t.strictly_decreasing_above_eta()},
              {"note",
               "finite-stage upper bounds with the canonical trace only; these are bound "
               "reconstructions, not rc computations"}};
}

/// Header stage,dimX,fiber,bound,gap; decimals append two float columns.
inline std::string rc_table_csv(const RcTable& t, bool decimals) {
  std::ostringstream os;
  os << "stage,dimX,fiber,bound,gap";
  if (decimals) os << ",bound_decimal,gap_decimal";
  os << "\n";
  for (const auto& r : t.rows) {
    os << r.stage << "," << r.dim_x.get_str() << "," << r.fiber.get_str() << "," << to_fraction(r.bound)
       << "," << to_fraction(r.gap);
    if (decimals) {
      char buf[64];
      std::snprintf(buf, sizeof buf, ",%.17g,%.17g", r.bound.get_d(), r.gap.get_d());
      os << buf;
    }
    os << "\n";
  }
  return os.str();
}

inline Json to_json(const ComparisonCertificate& c) {
  Json checks = Json::array();
  for (const auto& k : c.checks)
    checks.push_back(Json{{"m", k.m},
                          {"lhs", to_json(k.lhs)},
                          {"rhs", to_json(k.rhs)},
                          {"divisible", k.divisible},
                          {"holds", k.holds}});
  return Json{{"nu", c.nu},
              {"eta", to_json(c.eta)},
              {"lambda", to_json(c.lambda)},
              {"n", c.n},
              {"r_n", to_json(c.r_n)},
              {"M", to_json(c.M)},
              {"M_max", to_json(c.M_max)},
              {"stage_condition", c.stage_condition},
              {"window_condition", c.window_condition},
              {"checks", checks},
              {"assumption", c.assumption},
              {"valid", c.valid()}};
}

inline Json to_json(const EquivarianceVerdict& v) {
  Json mm = Json::array();
  for (const auto& m : v.mismatches)
    mm.push_back(Json{{"g", m.g}, {"point", m.point}, {"row", m.row}, {"col", m.col}});
  return Json{{"stage", v.stage},
              {"trials", v.trials},
              {"points", v.points},
              {"comparisons", v.comparisons},
              {"reduction_identity", v.reduction_identity},
              {"mismatches", mm}};
}

inline Json to_json(const RankLedgerReport& r) {
  Json entries = Json::array(), spots = Json::array();
  for (const auto& e : r.entries)
    entries.push_back(Json{{"n", e.n},
                           {"bott_block_count", to_json(e.bott_block_count)},
                           {"constant_rank", to_json(e.constant_rank)},
                           {"total_rank", to_json(e.total_rank)},
                           {"normalized_trace", to_json(e.normalized_trace)},
                           {"recursion_ok", e.recursion_ok}});
  for (const auto& c : r.spot_checks) {
    Json j{{"n", c.n}, {"materialized", c.materialized}};
    if (!c.materialized) {
      j["status"] = "SKIPPED";
      j["reason"] = c.skip_reason;
    } else {
      j["status"] = c.passed() ? "PASS" : "FAIL";
      j["points"] = c.points;
      j["rank_ok"] = c.rank_ok;
      j["trace_ok"] = c.trace_ok;
      j["projection_ok"] = c.projection_ok;
      j["decomposition_ok"] = c.decomposition_ok;
      j["constant_ok"] = c.constant_ok;
      j["constant_ranks"] = c.constant_ranks;
    }
    spots.push_back(j);
  }
  return Json{{"entries", entries}, {"spot_checks", spots}};
}

/// Element label -> coefficient entries as [re, im] fraction pairs.
inline Json to_json(const CrossedElement& x) {
  Json out = Json::object();
  for (std::size_t g = 0; g < x.coeffs.size(); ++g) {
    const ExactMatrix& c = x.coeffs[g];
    Json rows = Json::array();
    for (std::size_t i = 0; i < c.rows(); ++i) {
      Json row = Json::array();
      for (std::size_t j = 0; j < c.cols(); ++j) {
        GaussianRational z = c(i, j);
        row.push_back(Json::array({to_fraction(z.re), to_fraction(z.im)}));
      }
      rows.push_back(row);
    }
    out[x.group->label(g)] = rows;
  }
  return out;
}

/// Dense CSV of an exact matrix: one row per line, entries "re+im*i" with
/// fraction parts.
inline std::string matrix_csv(const ExactMatrix& m) {
  std::ostringstream os;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ",";
      GaussianRational z = m(i, j);
      os << to_fraction(z.re);
      if (!z.is_real()) os << (sgn(z.im) > 0 ? "+" : "") << to_fraction(z.im) << "i";
    }
    os << "\n";
  }
  return os.str();
}

inline Json error_object(const std::string& code, const std::string& message) {
  return Json{{"error", Json{{"code", code}, {"message", message}}}};
}

inline std::string serialize(const Json& j) { return j.dump(2) + "\n"; }

/// Writes via a temporary sibling and rename, so readers never see a
/// partial file. I/O errors carry the system message.
inline void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error("io_error", "cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io_error", "cannot open " + tmp.string() + ": " + std::strerror(errno));
    out << bytes;
    out.flush();
    if (!out) throw Error("io_error", "write failed for " + tmp.string() + ": " + std::strerror(errno));
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("io_error", "cannot rename into " + path.string() + ": " + ec.message());
  }
}

enum class Format { json, csv };

inline Format parse_format(std::string_view s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  throw ParseError("format must be json or csv, got '" + std::string(s) + "'");
}

}  // namespace cuntzlab

#endif  // CUNTZLAB_REPORT_HPP
