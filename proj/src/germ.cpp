#include "gpdrec/germ.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "gpdrec/errors.hpp"
#include "gpdrec/normalizer.hpp"

namespace gpdrec {

using Index = InvSemigroup::Index;

Semilattice Semilattice::from_table(std::vector<std::vector<std::uint32_t>> meet, std::optional<std::uint32_t> zero,
                                    std::vector<std::string> names) {
  std::size_t n = meet.size();
  if (n == 0) throw InvalidInput("semilattice: empty");
  if (n > kMaxSemilattice) throw CapacityExceeded("semilattice: too many elements");
  for (auto const& row : meet) {
    if (row.size() != n) throw InvalidInput("semilattice: table is not square");
    for (auto v : row)
      if (v >= n) throw InvalidInput("semilattice: entry out of range");
  }
  auto at = [&](std::uint32_t a, std::uint32_t b) { return meet[a][b]; };
  for (std::uint32_t a = 0; a < n; ++a) {
    if (at(a, a) != a) throw InvalidInput("semilattice: not idempotent at " + std::to_string(a));
    for (std::uint32_t b = 0; b < n; ++b) {
      if (at(a, b) != at(b, a)) throw InvalidInput("semilattice: not commutative at (" + std::to_string(a) + ", " + std::to_string(b) + ")");
      for (std::uint32_t c = 0; c < n; ++c)
        if (at(at(a, b), c) != at(a, at(b, c)))
          throw InvalidInput("semilattice: not associative at (" + std::to_string(a) + ", " + std::to_string(b) + ", " +
                             std::to_string(c) + ")");
    }
  }
  if (zero) {
    if (*zero >= n) throw InvalidInput("semilattice: zero out of range");
    for (std::uint32_t a = 0; a < n; ++a)
      if (at(a, *zero) != *zero) throw InvalidInput("semilattice: zero is not absorbing");
  }
  if (names.empty())
    for (std::size_t i = 0; i < n; ++i) names.push_back("e" + std::to_string(i));
  if (names.size() != n) throw InvalidInput("semilattice: wrong number of names");
  Semilattice e;
  e.meet = std::move(meet);
  e.zero = zero;
  e.names = std::move(names);
  return e;
}

Semilattice Semilattice::of_idempotents(InvSemigroup const& s, std::vector<Index>* embedding) {
  auto const& idem = s.idempotents();
  std::map<Index, std::uint32_t> local;
  for (std::size_t i = 0; i < idem.size(); ++i) local[idem[i]] = std::uint32_t(i);
  std::vector<std::vector<std::uint32_t>> t(idem.size(), std::vector<std::uint32_t>(idem.size()));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < idem.size(); ++i) {
    names.push_back(s.name(idem[i]));
    for (std::size_t j = 0; j < idem.size(); ++j) t[i][j] = local.at(s.mul(idem[i], idem[j]));
  }
  std::optional<std::uint32_t> z;
  if (s.zero()) z = local.at(*s.zero());
  if (embedding) *embedding = idem;
  return from_table(std::move(t), z, std::move(names));
}

bool is_character(Semilattice const& e, Character const& t) {
  if (t.size() != e.size()) return false;
  if (std::none_of(t.begin(), t.end(), [](std::uint8_t v) { return v != 0; })) return false;
  if (e.zero && t[*e.zero]) return false;
  for (std::uint32_t a = 0; a < e.size(); ++a)
    for (std::uint32_t b = 0; b < e.size(); ++b)
      if (t[e.meet[a][b]] != (t[a] && t[b])) return false;
  return true;
}

Spectrum spectrum(Semilattice const& e) {
  std::size_t n = e.size();
  if (n > kMaxSemilattice) throw CapacityExceeded("spectrum: semilattice too large");
  Spectrum sp;
  for (std::uint32_t f = 0; f < n; ++f) {
    if (e.zero && *e.zero == f) continue;
    Character t(n, 0);
    for (std::uint32_t a = 0; a < n; ++a) t[a] = e.leq(f, a);
    if (!is_character(e, t)) throw PropertyFailure("spectrum: principal filter is not a character", e.names[f]);
    sp.spec.push_back(std::move(t));
  }
  auto below = [](Character const& a, Character const& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] > b[i]) return false;
    return true;
  };
  for (std::size_t i = 0; i < sp.spec.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < sp.spec.size() && maximal; ++j)
      if (j != i && below(sp.spec[i], sp.spec[j])) maximal = false;
    if (maximal) sp.ultra.push_back(i);
  }
  return sp;
}

Action spectral_action(InvSemigroup const& s) {
  std::vector<Index> emb;
  auto e = Semilattice::of_idempotents(s, &emb);
  std::map<Index, std::uint32_t> local;
  for (std::size_t i = 0; i < emb.size(); ++i) local[emb[i]] = std::uint32_t(i);
  auto sp = spectrum(e);
  Action a;
  a.idempotents = emb;
  std::map<Character, std::int64_t> where;
  for (auto u : sp.ultra) {
    auto const& t = sp.spec[u];
    // name the point after the generator of its filter
    std::uint32_t gen = 0;
    for (std::uint32_t f = 0; f < e.size(); ++f) {
      if (!t[f]) continue;
      bool least = true;
      for (std::uint32_t g = 0; g < e.size(); ++g)
        if (t[g] && !e.leq(f, g)) least = false;
      if (least) gen = f;
    }
    where[t] = std::int64_t(a.points.size());
    a.points.push_back(t);
    a.point_names.push_back("<" + e.names[gen] + ">");
  }
  a.map.assign(s.size(), std::vector<std::int64_t>(a.points.size(), -1));
  for (Index x = 0; x < s.size(); ++x) {
    std::uint32_t dom = local.at(s.mul(s.star(x), x));
    for (std::size_t p = 0; p < a.points.size(); ++p) {
      auto const& t = a.points[p];
      if (!t[dom]) continue;
      Character img(e.size(), 0);
      for (std::uint32_t f = 0; f < e.size(); ++f) img[f] = t[local.at(s.mul(s.mul(s.star(x), emb[f]), x))];
      auto it = where.find(img);
      if (it == where.end())
        throw InvalidInput("spectral action: " + s.name(x) + " maps " + a.point_names[p] +
                           " outside the ultracharacters");
      a.map[x][p] = it->second;
    }
  }
  verify_action(s, a);
  return a;
}

void verify_action(InvSemigroup const& s, Action const& a) {
  std::size_t np = a.point_count();
  for (std::size_t p = 0; p < np; ++p) {
    bool covered = false;
    for (std::size_t i = 0; i < a.idempotents.size() && !covered; ++i)
      if (a.points[p][i]) covered = a.map[a.idempotents[i]][p] == std::int64_t(p);
    if (!covered) throw PropertyFailure("action is degenerate", a.point_names[p]);
  }
  for (Index x = 0; x < s.size(); ++x) {
    std::set<std::int64_t> image;
    for (std::size_t p = 0; p < np; ++p)
      if (a.map[x][p] >= 0 && !image.insert(a.map[x][p]).second)
        throw PropertyFailure("action is not injective", s.name(x));
    for (Index y = 0; y < s.size(); ++y)
      for (std::size_t p = 0; p < np; ++p) {
        std::int64_t ty = a.map[y][p];
        std::int64_t lhs = a.map[s.mul(x, y)][p];
        std::int64_t rhs = ty < 0 ? -1 : a.map[x][ty];
        if (lhs != rhs)
          throw PropertyFailure("action is not functorial", "(" + s.name(x) + ", " + s.name(y) + ") at " + a.point_names[p]);
      }
  }
}

Action restrict_action(Action const& a, std::vector<Index> const& embedding) {
  Action r = a;
  r.map.clear();
  for (auto x : embedding) r.map.push_back(a.map.at(x));
  // idempotents are re-indexed into the subsemigroup
  std::map<Index, Index> local;
  for (std::size_t i = 0; i < embedding.size(); ++i) local[embedding[i]] = Index(i);
  for (auto& e : r.idempotents) {
    auto it = local.find(e);
    if (it == local.end()) throw InvalidInput("restrict action: subsemigroup is not full");
    e = it->second;
  }
  return r;
}

GermGroupoid germ_groupoid(InvSemigroup const& s, Action const& a, std::optional<SemigroupGrading> theta) {
  if (!theta) theta = s.grading();
  if (!theta) theta = SemigroupGrading{GradingGroup::trivial(), std::vector<Grade>(s.size(), Grade{})};
  if (theta->theta.size() != s.size()) throw InvalidInput("germ groupoid: wrong number of grades");
  if (!check_partial_hom(s, theta->group, theta->theta)) throw InvalidInput("germ groupoid: grading is not a partial homomorphism");
  std::size_t n = s.size(), np = a.point_count();
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  for (Index u = 0; u < n; ++u)
    for (Index v = 0; v < n; ++v) leq[u][v] = s.natural_leq(u, v);

  GermGroupoid out;
  out.arrow_of.assign(n, std::vector<std::int64_t>(np, -1));
  std::vector<FiniteGroupoid::ArrowSpec> specs;
  std::vector<Grade> grades;
  for (std::size_t x = 0; x < np; ++x) {
    std::vector<Index> defined;
    for (Index t = 0; t < n; ++t)
      if (a.map[t][x] >= 0) defined.push_back(t);
    for (auto t : defined) {
      if (out.arrow_of[t][x] >= 0) continue;
      auto id = std::int64_t(specs.size());
      for (auto u : defined) {
        bool same = std::any_of(defined.begin(), defined.end(), [&](Index w) { return leq[w][t] && leq[w][u]; });
        if (!same) continue;
        if (out.arrow_of[u][x] >= 0) throw PropertyFailure("germ relation is not transitive", s.name(u));
        out.arrow_of[u][x] = id;
        if (theta->theta[u] != theta->theta[t])
          throw PropertyFailure("germ grading is not well defined", "[" + s.name(t) + "," + a.point_names[x] + "] = [" +
                                                                       s.name(u) + "," + a.point_names[x] + "]");
      }
      specs.push_back({FiniteGroupoid::Object(x), FiniteGroupoid::Object(a.map[t][x]),
                       "[" + s.name(t) + "," + a.point_names[x] + "]"});
      out.germs.emplace_back(t, std::uint32_t(x));
      grades.push_back(theta->theta[t]);
    }
  }
  std::size_t na = specs.size();
  std::vector<std::vector<FiniteGroupoid::Arrow>> table(na, std::vector<FiniteGroupoid::Arrow>(na, FiniteGroupoid::kNone));
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      if (specs[i].dom != specs[j].cod) continue;
      auto [si, xi] = out.germs[i];
      auto [tj, xj] = out.germs[j];
      table[i][j] = FiniteGroupoid::Arrow(out.arrow_of[s.mul(si, tj)][xj]);
    }
  // composition does not depend on representatives
  for (Index si = 0; si < n; ++si)
    for (Index tj = 0; tj < n; ++tj)
      for (std::size_t x = 0; x < np; ++x) {
        auto y = a.map[tj][x];
        if (y < 0 || a.map[si][y] < 0) continue;
        auto lhs = out.arrow_of[s.mul(si, tj)][x];
        auto rhs = table[out.arrow_of[si][y]][out.arrow_of[tj][x]];
        if (lhs < 0 || FiniteGroupoid::Arrow(lhs) != rhs)
          throw PropertyFailure("germ composition is not well defined", s.name(si) + ", " + s.name(tj));
      }
  std::vector<std::string> names = a.point_names;
  out.groupoid = FiniteGroupoid::from_parts(std::move(names), std::move(specs), table);
  out.cocycle = {theta->group, std::move(grades)};
  validate_cocycle(out.groupoid, out.cocycle);
  return out;
}

CofinalReport cofinal_check(InvSemigroup const& s, std::vector<Index> const& t, Action const& a) {
  std::vector<Index> sorted(t);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (!s.is_inverse_subsemigroup(sorted)) throw InvalidInput("cofinal: T is not an inverse subsemigroup");
  if (!s.is_full(sorted)) throw InvalidInput("cofinal: T is not full");
  CofinalReport rep;
  rep.cofinal = true;
  for (std::size_t x = 0; x < a.point_count() && rep.cofinal; ++x)
    for (Index u = 0; u < s.size() && rep.cofinal; ++u) {
      if (a.map[u][x] < 0) continue;
      bool ok = std::any_of(sorted.begin(), sorted.end(), [&](Index v) { return s.natural_leq(v, u) && a.map[v][x] >= 0; });
      if (!ok) rep.cofinal = false;
    }
  if (rep.cofinal) {
    auto sub = s.subsemigroup(sorted);
    auto gs = germ_groupoid(s, a);
    auto gt = germ_groupoid(sub.semigroup, restrict_action(a, sub.embedding));
    rep.isomorphic = graded_iso_search(gt.groupoid, gt.cocycle, gs.groupoid, gs.cocycle).has_value();
  }
  return rep;
}

Reconstruction reconstruct_from_bisections(FiniteGroupoid const& g, Cocycle const& c) {
  Reconstruction rec{bisections(g, &c), {}, {}, std::nullopt, {}, false};
  auto const& s = rec.bisections.semigroup;
  rec.action = spectral_action(s);
  rec.germ = germ_groupoid(s, rec.action);
  rec.found = graded_iso_search(rec.germ.groupoid, rec.germ.cocycle, g, c);

  // tau_x(U) = 1 iff the unit at x lies in U
  std::vector<Index> emb = rec.action.idempotents;
  rec.direct.objects.assign(g.object_count(), FiniteGroupoid::kNone);
  for (FiniteGroupoid::Object x = 0; x < g.object_count(); ++x) {
    Character tau(emb.size(), 0);
    for (std::size_t i = 0; i < emb.size(); ++i) {
      auto const& set = rec.bisections.sets[emb[i]];
      tau[i] = std::binary_search(set.begin(), set.end(), g.unit(x));
    }
    auto it = std::find(rec.action.points.begin(), rec.action.points.end(), tau);
    if (it != rec.action.points.end()) rec.direct.objects[x] = FiniteGroupoid::Object(it - rec.action.points.begin());
  }
  bool objects_ok = std::none_of(rec.direct.objects.begin(), rec.direct.objects.end(),
                                 [](auto o) { return o == FiniteGroupoid::kNone; });
  if (objects_ok) {
    for (FiniteGroupoid::Arrow a = 0; a < g.arrow_count(); ++a) {
      Index u = rec.bisections.index.at({a});
      auto arrow = rec.germ.arrow_of[u][rec.direct.objects[g.dom(a)]];
      rec.direct.arrows.push_back(arrow < 0 ? FiniteGroupoid::kNone : FiniteGroupoid::Arrow(arrow));
    }
    rec.direct_ok = is_graded_isomorphism(g, c, rec.germ.groupoid, rec.germ.cocycle, rec.direct);
  }
  return rec;
}

PipelineResult full_pipeline(AlgebraPresentation const& p, std::size_t cap) {
  if (!p.ring.is_indecomposable()) throw InvalidInput("pipeline: ring " + p.ring.name() + " is decomposable");
  auto n = compute_n_bruteforce(p, cap);
  auto lbh = lbh_check(n);
  if (!lbh.holds)
    throw PropertyFailure("pipeline: the local bisection hypothesis fails", lbh.witness_text);
  auto nq = quotient_n(n);
  auto const& q = nq.quotient.semigroup;
  if (!q.grading()) throw PropertyFailure("pipeline: grading does not descend to N/~", "");
  auto act = spectral_action(q);
  PipelineResult out;
  out.n_size = n.size();
  out.k_size = nq.kernel.size();
  out.q_size = q.size();
  out.germ = germ_groupoid(q, act);
  return out;
}

}  // namespace gpdrec
