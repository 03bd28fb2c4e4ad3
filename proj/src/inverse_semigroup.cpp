#include "gpdrec/inverse_semigroup.hpp"

#include <algorithm>
#include <set>

namespace gpdrec {

namespace {

std::string idx(InvSemigroup const& s, InvSemigroup::Index a) { return s.name(a); }

bool contains(std::vector<InvSemigroup::Index> const& sorted, InvSemigroup::Index a) {
  return std::binary_search(sorted.begin(), sorted.end(), a);
}

}  // namespace

InvSemigroup InvSemigroup::from_table(std::vector<std::vector<Index>> table,
                                      std::optional<Index> zero,
                                      std::vector<std::string> names) {
  std::size_t n = table.size();
  if (n == 0) throw InvalidInput("semigroup: empty table");
  if (n > kMaxSize) throw CapacityExceeded("semigroup: more than 2000 elements");
  for (auto const& row : table) {
    if (row.size() != n) throw InvalidInput("semigroup: table is not square");
    for (auto x : row)
      if (x >= n) throw InvalidInput("semigroup: table entry out of range");
  }
  if (names.empty())
    for (std::size_t i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
  if (names.size() != n) throw InvalidInput("semigroup: wrong number of names");

  InvSemigroup s;
  s.table_ = std::move(table);
  s.names_ = std::move(names);
  auto const& t = s.table_;
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      Index ab = t[a][b];
      for (Index c = 0; c < n; ++c)
        if (t[ab][c] != t[a][t[b][c]])
          throw InvalidInput("semigroup: associativity fails at (" + s.names_[a] + ", " +
                             s.names_[b] + ", " + s.names_[c] + ")");
    }
  if (zero) {
    if (*zero >= n) throw InvalidInput("semigroup: zero out of range");
    for (Index a = 0; a < n; ++a)
      if (t[*zero][a] != *zero || t[a][*zero] != *zero)
        throw InvalidInput("semigroup: declared zero is not absorbing at " + s.names_[a]);
  }
  s.zero_ = zero;
  s.star_.resize(n);
  for (Index a = 0; a < n; ++a) {
    std::optional<Index> inv;
    for (Index b = 0; b < n; ++b) {
      if (t[t[a][b]][a] == a && t[t[b][a]][b] == b) {
        if (inv)
          throw InvalidInput("semigroup: element " + s.names_[a] + " has two inverses (" +
                             s.names_[*inv] + ", " + s.names_[b] + ")");
        inv = b;
      }
    }
    if (!inv) throw InvalidInput("semigroup: element " + s.names_[a] + " has no inverse");
    s.star_[a] = *inv;
  }
  for (Index a = 0; a < n; ++a)
    if (t[a][a] == a) s.idempotents_.push_back(a);
  for (auto e : s.idempotents_)
    for (auto f : s.idempotents_)
      if (t[e][f] != t[f][e])
        throw InvalidInput("semigroup: idempotents " + s.names_[e] + " and " + s.names_[f] +
                           " do not commute");
  return s;
}

bool InvSemigroup::natural_leq(Index s, Index t) const {
  return mul(t, mul(star(s), s)) == s;
}

bool InvSemigroup::is_compatible(Index s, Index t) const {
  return is_idempotent(mul(s, star(t))) && is_idempotent(mul(star(t), s));
}

std::optional<InvSemigroup::Index> InvSemigroup::join(Index s, Index t) const {
  if (!is_compatible(s, t))
    throw InvalidInput("join: " + name(s) + " and " + name(t) + " are not compatible");
  std::vector<Index> upper;
  for (Index u = 0; u < size(); ++u)
    if (natural_leq(s, u) && natural_leq(t, u)) upper.push_back(u);
  for (auto u : upper) {
    bool least = std::all_of(upper.begin(), upper.end(), [&](Index v) { return natural_leq(u, v); });
    if (least) return u;
  }
  return std::nullopt;
}

std::optional<InvSemigroup::Index> InvSemigroup::meet(Index s, Index t) const {
  std::vector<Index> lower;
  for (Index u = 0; u < size(); ++u)
    if (natural_leq(u, s) && natural_leq(u, t)) lower.push_back(u);
  for (auto u : lower) {
    bool greatest =
        std::all_of(lower.begin(), lower.end(), [&](Index v) { return natural_leq(v, u); });
    if (greatest) return u;
  }
  return std::nullopt;
}

void InvSemigroup::set_grading(SemigroupGrading g) {
  if (g.theta.size() != size()) throw InvalidInput("grading: wrong number of grades");
  for (Index a = 0; a < size(); ++a)
    if (!is_zero(a) && !g.group.valid(g.theta[a]))
      throw InvalidInput("grading: invalid grade at " + name(a));
  if (!check_partial_hom(*this, g.group, g.theta))
    throw InvalidInput("grading: not a partial homomorphism");
  grading_ = std::move(g);
}

bool InvSemigroup::is_inverse_subsemigroup(std::vector<Index> const& subset) const {
  for (auto a : subset) {
    if (!contains(subset, star(a))) return false;
    for (auto b : subset)
      if (!contains(subset, mul(a, b))) return false;
  }
  return !subset.empty();
}

bool InvSemigroup::is_full(std::vector<Index> const& subset) const {
  return std::all_of(idempotents_.begin(), idempotents_.end(),
                     [&](Index e) { return contains(subset, e); });
}

bool InvSemigroup::is_normal(std::vector<Index> const& subset) const {
  if (!is_inverse_subsemigroup(subset) || !is_full(subset)) return false;
  for (Index s = 0; s < size(); ++s)
    for (auto k : subset)
      if (!contains(subset, mul(mul(s, k), star(s)))) return false;
  return true;
}

bool InvSemigroup::is_order_ideal(std::vector<Index> const& subset) const {
  for (auto t : subset)
    for (Index s = 0; s < size(); ++s)
      if (natural_leq(s, t) && !contains(subset, s)) return false;
  return true;
}

InvSemigroup::Sub InvSemigroup::subsemigroup(std::vector<Index> const& subset) const {
  std::vector<Index> sorted(subset);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (!is_inverse_subsemigroup(sorted)) throw InvalidInput("subsemigroup: subset is not closed");
  std::map<Index, Index> local;
  for (std::size_t i = 0; i < sorted.size(); ++i) local[sorted[i]] = static_cast<Index>(i);
  std::vector<std::vector<Index>> t(sorted.size(), std::vector<Index>(sorted.size()));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    names.push_back(name(sorted[i]));
    for (std::size_t j = 0; j < sorted.size(); ++j) t[i][j] = local.at(mul(sorted[i], sorted[j]));
  }
  std::optional<Index> z;
  if (zero_ && local.count(*zero_)) z = local.at(*zero_);
  auto sg = from_table(std::move(t), z, std::move(names));
  if (grading_) {
    SemigroupGrading g{grading_->group, {}};
    for (auto a : sorted) g.theta.push_back(grading_->theta[a]);
    sg.set_grading(std::move(g));
  }
  return {std::move(sg), std::move(sorted)};
}

// ---------------------------------------------------------------------------

bool is_congruence(InvSemigroup const& s, Congruence const& c) {
  std::size_t n = s.size();
  for (InvSemigroup::Index a = 0; a < n; ++a)
    for (InvSemigroup::Index b = a + 1; b < n; ++b) {
      if (c.class_of[a] != c.class_of[b]) continue;
      for (InvSemigroup::Index u = 0; u < n; ++u) {
        if (c.class_of[s.mul(u, a)] != c.class_of[s.mul(u, b)]) return false;
        if (c.class_of[s.mul(a, u)] != c.class_of[s.mul(b, u)]) return false;
      }
    }
  return true;
}

std::vector<InvSemigroup::Index> congruence_kernel(InvSemigroup const& s, Congruence const& c) {
  std::set<std::uint32_t> idem_classes;
  for (auto e : s.idempotents()) idem_classes.insert(c.class_of[e]);
  std::vector<InvSemigroup::Index> k;
  for (InvSemigroup::Index a = 0; a < s.size(); ++a)
    if (idem_classes.count(c.class_of[a])) k.push_back(a);
  return k;
}

Congruence congruence_from_kernel(InvSemigroup const& s, std::vector<InvSemigroup::Index> kernel) {
  std::sort(kernel.begin(), kernel.end());
  kernel.erase(std::unique(kernel.begin(), kernel.end()), kernel.end());
  for (auto e : s.idempotents())
    if (!contains(kernel, e))
      throw InvalidInput("kernel is not full: missing idempotent " + idx(s, e));
  for (auto a : kernel) {
    if (!contains(kernel, s.star(a)))
      throw InvalidInput("kernel is not closed under inverse at " + idx(s, a));
    for (auto b : kernel)
      if (!contains(kernel, s.mul(a, b)))
        throw InvalidInput("kernel is not closed under product at (" + idx(s, a) + ", " +
                           idx(s, b) + ")");
  }
  for (InvSemigroup::Index x = 0; x < s.size(); ++x)
    for (auto a : kernel)
      if (!contains(kernel, s.mul(s.mul(x, a), s.star(x))))
        throw InvalidInput("kernel is not normal: s k s* leaves K for s = " + idx(s, x) +
                           ", k = " + idx(s, a));
  for (auto a : kernel)
    if (s.mul(s.star(a), a) != s.mul(a, s.star(a)))
      throw InvalidInput("kernel element " + idx(s, a) + " fails a*a = aa*");

  std::size_t n = s.size();
  Congruence c;
  c.class_of.assign(n, 0xffffffffu);
  for (InvSemigroup::Index a = 0; a < n; ++a) {
    if (c.class_of[a] != 0xffffffffu) continue;
    auto id = static_cast<std::uint32_t>(c.classes.size());
    c.classes.push_back({});
    for (InvSemigroup::Index b = a; b < n; ++b) {
      bool related = s.mul(s.star(a), a) == s.mul(s.star(b), b) &&
                     contains(kernel, s.mul(a, s.star(b)));
      if (!related) continue;
      if (c.class_of[b] != 0xffffffffu)
        throw PropertyFailure("kernel relation is not transitive", idx(s, a) + " ~ " + idx(s, b));
      c.class_of[b] = id;
      c.classes.back().push_back(b);
    }
  }
  // symmetric and transitive on the classes just built
  for (auto const& cls : c.classes)
    for (auto a : cls)
      for (auto b : cls)
        if (!(s.mul(s.star(a), a) == s.mul(s.star(b), b) && contains(kernel, s.mul(a, s.star(b)))))
          throw PropertyFailure("kernel relation is not an equivalence",
                                idx(s, a) + " vs " + idx(s, b));
  if (!is_congruence(s, c)) throw PropertyFailure("kernel relation is not a congruence", "");
  std::set<std::uint32_t> idem_classes;
  for (auto e : s.idempotents())
    if (!idem_classes.insert(c.class_of[e]).second)
      throw PropertyFailure("congruence is not idempotent separating", idx(s, e));
  if (congruence_kernel(s, c) != kernel)
    throw PropertyFailure("congruence kernel differs from K", "");
  return c;
}

Quotient quotient(InvSemigroup const& s, Congruence const& c) {
  std::size_t m = c.classes.size();
  std::vector<std::vector<InvSemigroup::Index>> t(m, std::vector<InvSemigroup::Index>(m));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m; ++i) {
    names.push_back("[" + s.name(c.classes[i][0]) + "]");
    for (std::size_t j = 0; j < m; ++j)
      t[i][j] = c.class_of[s.mul(c.classes[i][0], c.classes[j][0])];
  }
  std::optional<InvSemigroup::Index> z;
  if (s.zero()) z = c.class_of[*s.zero()];
  auto q = InvSemigroup::from_table(std::move(t), z, std::move(names));
  if (auto const& g = s.grading()) {
    SemigroupGrading qg{g->group, std::vector<Grade>(m, g->group.identity())};
    bool consistent = true;
    for (std::size_t i = 0; i < m && consistent; ++i) {
      if (z && *z == i) continue;
      auto first = g->theta[c.classes[i][0]];
      for (auto a : c.classes[i])
        if (!s.is_zero(a) && g->theta[a] != first) consistent = false;
      qg.theta[i] = first;
    }
    if (consistent) q.set_grading(std::move(qg));
  }
  std::vector<InvSemigroup::Index> proj(c.class_of.begin(), c.class_of.end());
  return {std::move(q), std::move(proj)};
}

bool check_partial_hom(InvSemigroup const& s, GradingGroup const& group,
                       std::vector<Grade> const& theta) {
  using Index = InvSemigroup::Index;
  if (theta.size() != s.size()) throw InvalidInput("partial hom: wrong number of grades");
  for (Index a = 0; a < s.size(); ++a) {
    if (s.is_zero(a)) continue;
    for (Index b = 0; b < s.size(); ++b) {
      if (s.is_zero(b)) continue;
      auto ab = s.mul(a, b);
      if (s.is_zero(ab)) continue;
      if (theta[ab] != group.mul(theta[a], theta[b])) return false;
    }
  }
  for (Index a = 0; a < s.size(); ++a) {
    if (s.is_zero(a)) continue;
    if (s.is_idempotent(a) && theta[a] != group.identity())
      throw PropertyFailure("partial hom: nonzero idempotent not graded 1", s.name(a));
    if (theta[s.star(a)] != group.inv(theta[a]))
      throw PropertyFailure("partial hom: theta(s*) != theta(s)^-1", s.name(a));
    for (Index b = 0; b < s.size(); ++b)
      if (s.natural_leq(a, b) && theta[a] != theta[b])
        throw PropertyFailure("partial hom: not constant along the natural order",
                              s.name(a) + " <= " + s.name(b));
  }
  return true;
}

}  // namespace gpdrec
