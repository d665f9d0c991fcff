#ifndef CUNTZLAB_GROUP_HPP
#define CUNTZLAB_GROUP_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>  // vendored nlohmann/json

#include "error.hpp"
#include "permutation.hpp"

namespace cuntzlab {

/// A table that fails the group axioms. `a`, `b`, `c` name the offending
/// element indices; their meaning depends on `kind`:
///   not_associative: (a b) c != a (b c)
///   row_repeat:      mul[a][b] == mul[a][c]
///   column_repeat:   mul[b][a] == mul[c][a]
///   no_identity / bad_entry / shape: a, b, c unused or the bad cell.
class GroupValidationError : public Error {
 public:
  GroupValidationError(std::string kind, std::size_t a, std::size_t b,
                       std::size_t c, const std::string& what)
      : Error("group_validation", what), kind_(std::move(kind)), a_(a), b_(b), c_(c) {}

  const std::string& kind() const noexcept { return kind_; }
  std::size_t a() const noexcept { return a_; }
  std::size_t b() const noexcept { return b_; }
  std::size_t c() const noexcept { return c_; }

 private:
  std::string kind_;
  std::size_t a_, b_, c_;
};

/// Finite group given by its multiplication table. Index 0 is the identity.
/// Element order is the declaration order of the family (or of the input
/// table, with the identity rotated to the front).
class GroupTable {
 public:
  using Table = std::vector<std::vector<std::size_t>>;

  /// Validates and builds. If the identity is not at index 0 it is moved
  /// there; the remaining elements keep their relative order.
  static GroupTable from_table(std::string name, std::vector<std::string> labels,
                               Table mul) {
    const std::size_t n = labels.size();
    if (n == 0) throw GroupValidationError("shape", 0, 0, 0, "empty group");
    if (mul.size() != n)
      throw GroupValidationError("shape", 0, 0, 0, "table has wrong row count");
    for (std::size_t a = 0; a < n; ++a) {
      if (mul[a].size() != n)
        throw GroupValidationError("shape", a, 0, 0,
                                   "row " + std::to_string(a) + " has wrong length");
      for (std::size_t b = 0; b < n; ++b)
        if (mul[a][b] >= n)
          throw GroupValidationError("bad_entry", a, b, 0,
                                     "entry (" + std::to_string(a) + "," +
                                         std::to_string(b) + ") out of range");
    }
    std::optional<std::size_t> e;
    for (std::size_t a = 0; a < n && !e; ++a) {
      bool ok = true;
      for (std::size_t b = 0; b < n && ok; ++b) ok = mul[a][b] == b && mul[b][a] == b;
      if (ok) e = a;
    }
    if (!e) throw GroupValidationError("no_identity", 0, 0, 0, "no two-sided identity");
    if (*e != 0) {
      // Rotate the identity to the front.
      std::vector<std::size_t> order{*e};
      for (std::size_t a = 0; a < n; ++a)
        if (a != *e) order.push_back(a);
      std::vector<std::size_t> pos(n);
      for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;
      Table m2(n, std::vector<std::size_t>(n));
      std::vector<std::string> l2(n);
      for (std::size_t i = 0; i < n; ++i) {
        l2[i] = labels[order[i]];
        for (std::size_t j = 0; j < n; ++j) m2[i][j] = pos[mul[order[i]][order[j]]];
      }
      labels = std::move(l2);
      mul = std::move(m2);
    }
    validate(mul);
    GroupTable g;
    g.name_ = std::move(name);
    g.labels_ = std::move(labels);
    g.mul_ = std::move(mul);
    g.inv_.assign(n, 0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (g.mul_[a][b] == 0) g.inv_[a] = b;
    return g;
  }

  /// Latin square + associativity; throws naming the failing triple.
  static void validate(const Table& mul) {
    const std::size_t n = mul.size();
    for (std::size_t a = 0; a < n; ++a) {
      std::vector<std::size_t> seen_row(n, n), seen_col(n, n);
      for (std::size_t b = 0; b < n; ++b) {
        std::size_t r = mul[a][b];
        if (seen_row[r] != n)
          throw GroupValidationError(
              "row_repeat", a, seen_row[r], b,
              "row " + std::to_string(a) + " repeats a value at columns " +
                  std::to_string(seen_row[r]) + " and " + std::to_string(b));
        seen_row[r] = b;
        std::size_t c = mul[b][a];
        if (seen_col[c] != n)
          throw GroupValidationError(
              "column_repeat", a, seen_col[c], b,
              "column " + std::to_string(a) + " repeats a value at rows " +
                  std::to_string(seen_col[c]) + " and " + std::to_string(b));
        seen_col[c] = b;
      }
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (mul[mul[a][b]][c] != mul[a][mul[b][c]])
            throw GroupValidationError(
                "not_associative", a, b, c,
                "not associative at (" + std::to_string(a) + "," +
                    std::to_string(b) + "," + std::to_string(c) + ")");
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t order() const noexcept { return labels_.size(); }
  static constexpr std::size_t identity() noexcept { return 0; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t g) const { return labels_.at(g); }
  std::size_t mul(std::size_t g, std::size_t h) const { return mul_[g][h]; }
  std::size_t inv(std::size_t g) const { return inv_[g]; }
  const Table& table() const noexcept { return mul_; }

  std::optional<std::size_t> find(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
  }

  /// h -> g h.
  Permutation left_translation(std::size_t g) const {
    std::vector<std::size_t> im(order());
    for (std::size_t h = 0; h < order(); ++h) im[h] = mul_[g][h];
    return Permutation(std::move(im));
  }

  bool is_abelian() const {
    for (std::size_t a = 0; a < order(); ++a)
      for (std::size_t b = 0; b < a; ++b)
        if (mul_[a][b] != mul_[b][a]) return false;
    return true;
  }

  friend bool operator==(const GroupTable& x, const GroupTable& y) {
    return x.labels_ == y.labels_ && x.mul_ == y.mul_;
  }

 private:
  std::string name_;
  std::vector<std::string> labels_;
  Table mul_;
  std::vector<std::size_t> inv_;
};

namespace detail {

inline GroupTable cyclic(std::size_t n) {
  std::vector<std::string> labels;
  GroupTable::Table mul(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a) {
    labels.push_back(std::to_string(a));
    for (std::size_t b = 0; b < n; ++b) mul[a][b] = (a + b) % n;
  }
  return GroupTable::from_table("Z" + std::to_string(n), labels, mul);
}

// Elements s^f r^k stored at index f*n + k, with r s = s r^{-1}.
inline GroupTable dihedral(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t f = 0; f < 2; ++f)
    for (std::size_t k = 0; k < n; ++k)
      labels.push_back((f ? "s" : "r") + std::to_string(k));
  GroupTable::Table mul(2 * n, std::vector<std::size_t>(2 * n));
  for (std::size_t a = 0; a < 2 * n; ++a)
    for (std::size_t b = 0; b < 2 * n; ++b) {
      std::size_t f1 = a / n, k1 = a % n, f2 = b / n, k2 = b % n;
      std::size_t k = ((f2 ? n - k1 : k1) + k2) % n;
      mul[a][b] = ((f1 + f2) % 2) * n + k;
    }
  return GroupTable::from_table("D" + std::to_string(n), labels, mul);
}

inline GroupTable symmetric(std::size_t n) {
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::vector<std::string> labels;
  for (const auto& q : perms) {
    std::string s;
    for (std::size_t v : q) s += std::to_string(v + 1);
    labels.push_back(s);
  }
  const std::size_t m = perms.size();
  GroupTable::Table mul(m, std::vector<std::size_t>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      std::vector<std::size_t> c(n);
      for (std::size_t i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];
      mul[a][b] = static_cast<std::size_t>(
          std::lower_bound(perms.begin(), perms.end(), c) - perms.begin());
    }
  return GroupTable::from_table("S" + std::to_string(n), labels, mul);
}

inline GroupTable quaternion() {
  // Units 1, i, j, k with sign bit: index 2*u + s.
  static constexpr int kUnit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static constexpr int kSign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  std::vector<std::string> labels = {"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
  GroupTable::Table mul(8, std::vector<std::size_t>(8));
  for (std::size_t a = 0; a < 8; ++a)
    for (std::size_t b = 0; b < 8; ++b) {
      std::size_t ua = a / 2, ub = b / 2;
      std::size_t s = (a % 2 + b % 2 + kSign[ua][ub]) % 2;
      mul[a][b] = 2 * kUnit[ua][ub] + s;
    }
  return GroupTable::from_table("Q8", labels, mul);
}

inline GroupTable direct_product(const std::vector<GroupTable>& factors,
                                 const std::string& name) {
  std::size_t n = 1;
  for (const auto& f : factors) n *= f.order();
  auto digits = [&](std::size_t x) {
    std::vector<std::size_t> d(factors.size());
    for (std::size_t i = factors.size(); i-- > 0;) {
      d[i] = x % factors[i].order();
      x /= factors[i].order();
    }
    return d;
  };
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < n; ++x) {
    auto d = digits(x);
    std::string s = "(";
    for (std::size_t i = 0; i < d.size(); ++i)
      s += (i ? "," : "") + factors[i].label(d[i]);
    labels.push_back(s + ")");
  }
  GroupTable::Table mul(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a) {
    auto da = digits(a);
    for (std::size_t b = 0; b < n; ++b) {
      auto db = digits(b);
      std::size_t idx = 0;
      for (std::size_t i = 0; i < factors.size(); ++i)
        idx = idx * factors[i].order() + factors[i].mul(da[i], db[i]);
      mul[a][b] = idx;
    }
  }
  return GroupTable::from_table(name, labels, mul);
}

inline std::size_t parse_family_size(std::string_view tok, std::string_view whole) {
  if (tok.size() < 2) throw ParseError("bad group factor '" + std::string(tok) + "' in '" + std::string(whole) + "'");
  std::size_t v = 0;
  for (char ch : tok.substr(1)) {
    if (ch < '0' || ch > '9')
      throw ParseError("bad group factor '" + std::string(tok) + "' in '" + std::string(whole) + "'");
    v = v * 10 + static_cast<std::size_t>(ch - '0');
    if (v > 1000) throw ParseError("group factor too large: " + std::string(tok));
  }
  return v;
}

inline GroupTable build_factor(std::string_view tok, std::string_view whole) {
  if (tok == "Q8") return quaternion();
  if (tok.empty()) throw ParseError("empty group factor in '" + std::string(whole) + "'");
  const std::size_t n = parse_family_size(tok, whole);
  switch (tok[0]) {
    case 'Z':
      if (n < 2) throw ParseError("Zn needs n >= 2");
      return cyclic(n);
    case 'D':
      if (n < 2) throw ParseError("Dn needs n >= 2");
      return dihedral(n);
    case 'S':
      if (n < 1 || n > 5) throw ParseError("Sn supports 1 <= n <= 5");
      return symmetric(n);
    default:
      throw ParseError("unknown group family '" + std::string(tok) + "'");
  }
}

}  // namespace detail

/// Builds a group from the family grammar: Zn, Dn (order 2n), Sn (n <= 5),
/// Q8, and direct products joined by 'x' (e.g. "Z2xZ4").
inline GroupTable build_group(std::string_view family) {
  std::vector<GroupTable> factors;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = family.find('x', start);
    factors.push_back(detail::build_factor(family.substr(start, pos - start), family));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (factors.size() == 1) return factors.front();
  return detail::direct_product(factors, std::string(family));
}

/// Builds a group from {"elements": [...], "mul": [[...]]}. Table cells may
/// be element indices or element labels.
inline GroupTable group_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("elements") || !doc.contains("mul"))
    throw ParseError("group table JSON needs 'elements' and 'mul'");
  std::vector<std::string> labels;
  for (const auto& e : doc.at("elements"))
    labels.push_back(e.is_string() ? e.get<std::string>() : e.dump());
  GroupTable::Table mul;
  for (const auto& row : doc.at("mul")) {
    if (!row.is_array()) throw ParseError("'mul' rows must be arrays");
    std::vector<std::size_t> r;
    for (const auto& cell : row) {
      if (cell.is_number_unsigned() || cell.is_number_integer()) {
        auto v = cell.get<long long>();
        if (v < 0) throw ParseError("negative table entry");
        r.push_back(static_cast<std::size_t>(v));
      } else if (cell.is_string()) {
        auto it = std::find(labels.begin(), labels.end(), cell.get<std::string>());
        if (it == labels.end())
          throw ParseError("unknown element label '" + cell.get<std::string>() + "'");
        r.push_back(static_cast<std::size_t>(it - labels.begin()));
      } else {
        throw ParseError("table entries must be indices or labels");
      }
    }
    mul.push_back(std::move(r));
  }
  return GroupTable::from_table(doc.value("name", std::string("table")), labels, mul);
}

/// Conjugacy class count and abelianization order, by direct enumeration.
struct ClassData {
  std::size_t conjugacy_class_count;
  std::size_t abelianization_order;
};

inline std::vector<std::vector<std::size_t>> conjugacy_classes(const GroupTable& g) {
  const std::size_t n = g.order();
  std::vector<bool> done(n, false);
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t a = 0; a < n; ++a) {
    if (done[a]) continue;
    std::set<std::size_t> orbit;
    for (std::size_t x = 0; x < n; ++x) orbit.insert(g.mul(g.mul(x, a), g.inv(x)));
    for (std::size_t b : orbit) done[b] = true;
    classes.emplace_back(orbit.begin(), orbit.end());
  }
  return classes;
}

/// Subgroup generated by all commutators a b a^-1 b^-1.
inline std::vector<std::size_t> commutator_subgroup(const GroupTable& g) {
  const std::size_t n = g.order();
  std::vector<bool> in(n, false);
  std::vector<std::size_t> elems;
  auto add = [&](std::size_t x) {
    if (!in[x]) {
      in[x] = true;
      elems.push_back(x);
    }
  };
  add(GroupTable::identity());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      add(g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b))));
  // Close under products; finite, so this is the generated subgroup.
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      add(g.mul(elems[i], elems[j]));
      add(g.mul(elems[j], elems[i]));
    }
  std::sort(elems.begin(), elems.end());
  return elems;
}

inline ClassData group_invariants(const GroupTable& g) {
  return {conjugacy_classes(g).size(), g.order() / commutator_subgroup(g).size()};
}

}  // namespace cuntzlab

#endif  // CUNTZLAB_GROUP_HPP
