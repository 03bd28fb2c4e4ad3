#include "gpdrec/group.hpp"

#include <algorithm>
#include <limits>

#include "gpdrec/errors.hpp"

namespace gpdrec {

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<Index>> table,
                                    std::vector<std::string> names) {
  std::size_t n = table.size();
  if (n == 0) throw InvalidInput("group: empty table");
  for (auto const& row : table) {
    if (row.size() != n) throw InvalidInput("group: table is not square");
    for (auto x : row)
      if (x >= n) throw InvalidInput("group: table entry out of range");
  }
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw InvalidInput("group: associativity fails at (" + std::to_string(a) + ", " +
                             std::to_string(b) + ", " + std::to_string(c) + ")");
  FiniteGroup g;
  std::optional<Index> id;
  for (Index e = 0; e < n && !id; ++e) {
    bool ok = true;
    for (Index a = 0; a < n && ok; ++a) ok = table[e][a] == a && table[a][e] == a;
    if (ok) id = e;
  }
  if (!id) throw InvalidInput("group: no identity element");
  g.identity_ = *id;
  g.inverse_.resize(n);
  for (Index a = 0; a < n; ++a) {
    auto it = std::find(table[a].begin(), table[a].end(), *id);
    if (it == table[a].end()) throw InvalidInput("group: element " + std::to_string(a) + " has no inverse");
    Index b = static_cast<Index>(it - table[a].begin());
    if (table[b][a] != *id) throw InvalidInput("group: inverse is one-sided at " + std::to_string(a));
    g.inverse_[a] = b;
  }
  g.table_ = std::move(table);
  if (names.empty()) {
    for (Index a = 0; a < n; ++a) names.push_back(a == *id ? "1" : "g" + std::to_string(a));
  }
  if (names.size() != n) throw InvalidInput("group: wrong number of element names");
  g.names_ = std::move(names);
  return g;
}

FiniteGroup FiniteGroup::cyclic(std::uint32_t n) {
  if (n == 0 || n > 4096) throw InvalidInput("group: cyclic order must be in [1, 4096]");
  std::vector<std::vector<Index>> t(n, std::vector<Index>(n));
  std::vector<std::string> names(n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    names[a] = a == 0 ? "1" : a == 1 ? "g" : "g^" + std::to_string(a);
  }
  return from_table(std::move(t), std::move(names));
}

FiniteGroup FiniteGroup::direct_product(FiniteGroup const& a, FiniteGroup const& b) {
  std::size_t na = a.order(), nb = b.order();
  std::vector<std::vector<Index>> t(na * nb, std::vector<Index>(na * nb));
  std::vector<std::string> names(na * nb);
  for (Index x = 0; x < na * nb; ++x) {
    names[x] = "(" + a.name(x / nb) + "," + b.name(x % nb) + ")";
    for (Index y = 0; y < na * nb; ++y)
      t[x][y] = static_cast<Index>(a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb));
  }
  return from_table(std::move(t), std::move(names));
}

bool FiniteGroup::is_abelian() const {
  for (Index a = 0; a < order(); ++a)
    for (Index b = 0; b < order(); ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

FiniteGroup::Index FiniteGroup::element_order(Index a) const {
  Index k = 1;
  for (Index x = a; x != identity_; x = mul(x, a)) ++k;
  return k;
}

std::optional<FiniteGroup::Index> FiniteGroup::cyclic_generator() const {
  for (Index a = 0; a < order(); ++a)
    if (element_order(a) == order()) return a;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

GradingGroup GradingGroup::finite(FiniteGroup g) {
  return GradingGroup(Kind::finite, std::make_shared<FiniteGroup const>(std::move(g)));
}

Grade GradingGroup::identity() const {
  if (kind_ == Kind::finite) return {static_cast<std::int64_t>(group_->identity())};
  return {0};
}

Grade GradingGroup::mul(Grade a, Grade b) const {
  switch (kind_) {
    case Kind::trivial:
      return {0};
    case Kind::integers: {
      std::int64_t r;
      if (__builtin_add_overflow(a.value, b.value, &r))
        throw CapacityExceeded("grading: integer grade overflow");
      return {r};
    }
    case Kind::finite:
      return {static_cast<std::int64_t>(group_->mul(static_cast<FiniteGroup::Index>(a.value),
                                                    static_cast<FiniteGroup::Index>(b.value)))};
  }
  return {0};
}

Grade GradingGroup::inv(Grade a) const {
  switch (kind_) {
    case Kind::trivial:
      return {0};
    case Kind::integers:
      if (a.value == std::numeric_limits<std::int64_t>::min())
        throw CapacityExceeded("grading: integer grade overflow");
      return {-a.value};
    case Kind::finite:
      return {static_cast<std::int64_t>(group_->inv(static_cast<FiniteGroup::Index>(a.value)))};
  }
  return {0};
}

bool GradingGroup::valid(Grade a) const {
  switch (kind_) {
    case Kind::trivial:
      return a.value == 0;
    case Kind::integers:
      return true;
    case Kind::finite:
      return a.value >= 0 && static_cast<std::size_t>(a.value) < group_->order();
  }
  return false;
}

std::string GradingGroup::format(Grade a) const {
  switch (kind_) {
    case Kind::trivial:
      return "1";
    case Kind::integers:
      return std::to_string(a.value);
    case Kind::finite:
      return group_->name(static_cast<FiniteGroup::Index>(a.value));
  }
  return "?";
}

std::string GradingGroup::describe() const {
  switch (kind_) {
    case Kind::trivial:
      return "trivial";
    case Kind::integers:
      return "integers";
    case Kind::finite:
      if (*group_ == FiniteGroup::cyclic(static_cast<std::uint32_t>(group_->order())))
        return "cyclic" + std::to_string(group_->order());
      return "table";
  }
  return "?";
}

bool operator==(GradingGroup const& a, GradingGroup const& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ != GradingGroup::Kind::finite) return true;
  return *a.group_ == *b.group_;
}

// ---------------------------------------------------------------------------

GroupRingElem::GroupRingElem(std::shared_ptr<GroupRing const> owner, Vec coeffs)
    : owner_(std::move(owner)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != owner_->dim()) throw InvalidInput("group ring: wrong coefficient count");
  for (auto c : coeffs_)
    if (c >= owner_->ring().size()) throw InvalidInput("group ring: coefficient out of range");
}

GroupRingElem GroupRingElem::zero(std::shared_ptr<GroupRing const> owner) {
  Vec c(owner->dim(), 0);
  return GroupRingElem(std::move(owner), std::move(c));
}

GroupRingElem GroupRingElem::one(std::shared_ptr<GroupRing const> owner) {
  auto id = owner->group().identity();
  auto r = owner->ring().one();
  return basis(std::move(owner), id, r);
}

GroupRingElem GroupRingElem::basis(std::shared_ptr<GroupRing const> owner, FiniteGroup::Index g,
                                   Ring::Elem c) {
  Vec v(owner->dim(), 0);
  v.at(g) = c;
  return GroupRingElem(std::move(owner), std::move(v));
}

std::size_t GroupRingElem::support_size() const {
  return static_cast<std::size_t>(
      std::count_if(coeffs_.begin(), coeffs_.end(), [](auto c) { return c != 0; }));
}

GroupRingElem GroupRingElem::operator+(GroupRingElem const& o) const {
  if (!(*owner_ == *o.owner_)) throw InvalidInput("group ring: mismatched operands");
  Vec c = coeffs_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = owner_->ring().add(c[i], o.coeffs_[i]);
  return GroupRingElem(owner_, std::move(c));
}

GroupRingElem GroupRingElem::operator-(GroupRingElem const& o) const {
  if (!(*owner_ == *o.owner_)) throw InvalidInput("group ring: mismatched operands");
  Vec c = coeffs_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = owner_->ring().sub(c[i], o.coeffs_[i]);
  return GroupRingElem(owner_, std::move(c));
}

GroupRingElem GroupRingElem::scaled(Ring::Elem s) const {
  Vec c = coeffs_;
  for (auto& x : c) x = owner_->ring().mul(s, x);
  return GroupRingElem(owner_, std::move(c));
}

std::string GroupRingElem::format() const {
  auto const& ring = owner_->ring();
  auto const& group = owner_->group();
  std::string s;
  // identity term first, then in index order
  std::vector<FiniteGroup::Index> order{group.identity()};
  for (FiniteGroup::Index g = 0; g < group.order(); ++g)
    if (g != group.identity()) order.push_back(g);
  for (auto g : order) {
    auto c = coeffs_[g];
    if (c == 0) continue;
    if (!s.empty()) s += " + ";
    if (g == group.identity()) {
      s += ring.format(c);
    } else {
      if (c != ring.one()) s += ring.format(c);
      s += group.name(g);
    }
  }
  return s.empty() ? "0" : s;
}

GroupRingElem gr_multiply(GroupRingElem const& a, GroupRingElem const& b) {
  if (!(a.owner() == b.owner())) throw InvalidInput("gr_multiply: mismatched group or ring");
  auto const& ring = a.owner().ring();
  auto const& group = a.owner().group();
  Vec c(group.order(), 0);
  for (FiniteGroup::Index g = 0; g < group.order(); ++g) {
    if (a.coeff(g) == 0) continue;
    for (FiniteGroup::Index h = 0; h < group.order(); ++h) {
      if (b.coeff(h) == 0) continue;
      auto gh = group.mul(g, h);
      c[gh] = ring.add(c[gh], ring.mul(a.coeff(g), b.coeff(h)));
    }
  }
  return GroupRingElem(a.owner_ptr(), std::move(c));
}

bool is_trivial_unit(GroupRingElem const& a) {
  if (a.support_size() != 1) return false;
  for (auto c : a.coeffs())
    if (c != 0) return a.owner().ring().is_unit(c);
  return false;
}

std::optional<GroupRingElem> gr_inverse(GroupRingElem const& a) {
  auto const& ring = a.owner().ring();
  auto const& group = a.owner().group();
  std::size_t n = group.order();
  // column h of the left-multiplication matrix is a * h
  Matrix m(n, Vec(n, 0));
  for (FiniteGroup::Index h = 0; h < n; ++h)
    for (FiniteGroup::Index g = 0; g < n; ++g) m[group.mul(g, h)][h] = a.coeff(g);
  Vec target(n, 0);
  target[group.identity()] = ring.one();
  auto sol = solve_linear(ring, m, target, n);
  if (!sol) return std::nullopt;
  GroupRingElem x(a.owner_ptr(), sol->particular);
  auto one = GroupRingElem::one(a.owner_ptr());
  if (!(gr_multiply(a, x) == one) || !(gr_multiply(x, a) == one)) return std::nullopt;
  return x;
}

UnitCensus unit_census(Ring const& ring, FiniteGroup const& group, std::size_t cap) {
  double total = 1;
  for (std::size_t i = 0; i < group.order(); ++i) total *= static_cast<double>(ring.size());
  if (total > static_cast<double>(cap))
    throw CapacityExceeded("unit census: |R|^|G| = " + std::to_string(static_cast<long long>(total)) +
                           " exceeds cap " + std::to_string(cap));
  auto owner = std::make_shared<GroupRing const>(ring, group);
  UnitCensus census;
  std::size_t n = group.order();
  auto count = static_cast<std::size_t>(total);
  Vec coeffs(n, 0);
  // lexicographic order, coefficient of group element 0 most significant
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t rest = idx;
    for (std::size_t i = n; i-- > 0;) {
      coeffs[i] = static_cast<Ring::Elem>(rest % ring.size());
      rest /= ring.size();
    }
    ++census.element_count;
    GroupRingElem a(owner, coeffs);
    if (auto inv = gr_inverse(a)) {
      ++census.unit_count;
      if (is_trivial_unit(a)) {
        ++census.trivial_count;
      } else {
        census.nontrivial.emplace_back(a, *inv);
      }
    }
  }
  return census;
}

std::optional<UnitWitness> nontrivial_unit_witness(Ring const& ring, FiniteGroup const& group) {
  if (group.order() < 2) throw InvalidInput("nontrivial_unit_witness: group must be nontrivial");
  auto owner = std::make_shared<GroupRing const>(ring, group);
  FiniteGroup::Index h = group.identity() == 0 ? 1 : 0;
  auto one = GroupRingElem::one(owner);

  std::optional<UnitWitness> w;
  for (auto e : ring.idempotents()) {
    if (e == 0 || e == ring.one()) continue;
    auto f = ring.sub(ring.one(), e);
    auto u = GroupRingElem::basis(owner, group.identity(), e) + GroupRingElem::basis(owner, h, f);
    auto v = GroupRingElem::basis(owner, group.identity(), e) +
             GroupRingElem::basis(owner, group.inv(h), f);
    w = UnitWitness{u, v, UnitWitness::Shape::decomposable};
    break;
  }
  if (!w) {
    for (auto n : ring.nilpotents()) {
      if (n == 0) continue;
      auto nh = GroupRingElem::basis(owner, h, n);
      auto u = one - nh;
      // (1 - nh)^{-1} = sum_j (nh)^j, terminating since nh is nilpotent
      auto v = one;
      auto term = one;
      for (std::size_t j = 1; j < ring.size(); ++j) {
        term = gr_multiply(term, nh);
        if (term.is_zero()) break;
        v = v + term;
      }
      w = UnitWitness{u, v, UnitWitness::Shape::nilpotent};
      break;
    }
  }
  if (!w) return std::nullopt;
  if (!(gr_multiply(w->unit, w->inverse) == one) || !(gr_multiply(w->inverse, w->unit) == one) ||
      is_trivial_unit(w->unit))
    throw PropertyFailure("nontrivial_unit_witness: constructed witness failed verification",
                          w->unit.format());
  return w;
}

}  // namespace gpdrec
