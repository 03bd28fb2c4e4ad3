#include "gpdrec/groupoid.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "gpdrec/errors.hpp"

namespace gpdrec {

using Object = FiniteGroupoid::Object;
using Arrow = FiniteGroupoid::Arrow;

namespace {

template <class Fn>
FiniteGroupoid assemble(std::vector<std::string> objects, std::vector<FiniteGroupoid::ArrowSpec> arrows,
                        Fn compose) {
  std::size_t n = arrows.size();
  std::vector<std::vector<Arrow>> table(n, std::vector<Arrow>(n, FiniteGroupoid::kNone));
  for (Arrow a = 0; a < n; ++a)
    for (Arrow b = 0; b < n; ++b)
      if (arrows[a].dom == arrows[b].cod) table[a][b] = compose(a, b);
  return FiniteGroupoid::from_parts(std::move(objects), std::move(arrows), table);
}

std::string num(std::size_t i) { return std::to_string(i + 1); }

}  // namespace

FiniteGroupoid FiniteGroupoid::from_parts(std::vector<std::string> objects, std::vector<ArrowSpec> arrows,
                                          std::vector<std::vector<Arrow>> const& compose_table) {
  FiniteGroupoid g;
  std::size_t n = arrows.size();
  std::size_t m = objects.size();
  if (compose_table.size() != n) throw InvalidInput("groupoid: composition table has wrong size");
  for (auto const& row : compose_table)
    if (row.size() != n) throw InvalidInput("groupoid: composition table is not square");
  for (Arrow a = 0; a < n; ++a) {
    if (arrows[a].dom >= m || arrows[a].cod >= m)
      throw InvalidInput("groupoid: arrow " + std::to_string(a) + " has an unknown endpoint");
    if (arrows[a].name.empty()) arrows[a].name = "a" + std::to_string(a);
  }
  {
    std::set<std::string> seen;
    for (auto const& a : arrows)
      if (!seen.insert(a.name).second) throw InvalidInput("groupoid: duplicate arrow name " + a.name);
  }
  g.compose_.assign(n, std::vector<Arrow>(n, kNone));
  for (Arrow a = 0; a < n; ++a)
    for (Arrow b = 0; b < n; ++b) {
      if (arrows[a].dom != arrows[b].cod) continue;
      Arrow c = compose_table[a][b];
      if (c >= n)
        throw InvalidInput("groupoid: missing composite " + arrows[a].name + " o " + arrows[b].name);
      if (arrows[c].dom != arrows[b].dom || arrows[c].cod != arrows[a].cod)
        throw InvalidInput("groupoid: composite " + arrows[a].name + " o " + arrows[b].name +
                           " has wrong endpoints");
      g.compose_[a][b] = c;
      g.pairs_.emplace_back(a, b);
    }
  for (auto [a, b] : g.pairs_)
    for (Arrow c = 0; c < n; ++c) {
      if (arrows[b].dom != arrows[c].cod) continue;
      if (g.compose_[g.compose_[a][b]][c] != g.compose_[a][g.compose_[b][c]])
        throw InvalidInput("groupoid: composition not associative at (" + arrows[a].name + ", " +
                           arrows[b].name + ", " + arrows[c].name + ")");
    }
  g.units_.assign(m, kNone);
  for (Object x = 0; x < m; ++x) {
    for (Arrow u = 0; u < n && g.units_[x] == kNone; ++u) {
      if (arrows[u].dom != x || arrows[u].cod != x) continue;
      bool ok = true;
      for (Arrow a = 0; a < n && ok; ++a) {
        if (arrows[a].cod == x && g.compose_[u][a] != a) ok = false;
        if (arrows[a].dom == x && g.compose_[a][u] != a) ok = false;
      }
      if (ok) g.units_[x] = u;
    }
    if (g.units_[x] == kNone) throw InvalidInput("groupoid: object " + objects[x] + " has no identity");
  }
  g.inverse_.assign(n, kNone);
  for (Arrow a = 0; a < n; ++a) {
    for (Arrow b = 0; b < n; ++b) {
      if (arrows[b].dom != arrows[a].cod || arrows[b].cod != arrows[a].dom) continue;
      if (g.compose_[a][b] == g.units_[arrows[a].cod] && g.compose_[b][a] == g.units_[arrows[a].dom]) {
        g.inverse_[a] = b;
        break;
      }
    }
    if (g.inverse_[a] == kNone) throw InvalidInput("groupoid: arrow " + arrows[a].name + " has no inverse");
  }
  g.objects_ = std::move(objects);
  g.arrows_ = std::move(arrows);
  return g;
}

FiniteGroupoid FiniteGroupoid::pair_groupoid(std::uint32_t n) {
  if (n == 0 || n > 64) throw InvalidInput("pair groupoid: need 1 <= n <= 64");
  std::vector<std::string> objs;
  for (std::uint32_t i = 0; i < n; ++i) objs.push_back(num(i));
  std::vector<ArrowSpec> arrows;
  for (Object d = 0; d < n; ++d)
    for (Object c = 0; c < n; ++c)
      arrows.push_back({d, c, d == c ? "id" + num(d) : num(d) + "->" + num(c)});
  return assemble(std::move(objs), arrows, [&](Arrow a, Arrow b) {
    return arrows[b].dom * n + arrows[a].cod;
  });
}

FiniteGroupoid FiniteGroupoid::unit_groupoid(std::uint32_t n) {
  if (n == 0 || n > 4096) throw InvalidInput("unit groupoid: need 1 <= n <= 4096");
  std::vector<std::string> objs;
  std::vector<ArrowSpec> arrows;
  for (std::uint32_t i = 0; i < n; ++i) {
    objs.push_back(num(i));
    arrows.push_back({i, i, "id" + num(i)});
  }
  return assemble(std::move(objs), std::move(arrows), [](Arrow a, Arrow) { return a; });
}

FiniteGroupoid FiniteGroupoid::group_as_groupoid(FiniteGroup const& grp) {
  std::vector<ArrowSpec> arrows;
  for (FiniteGroup::Index i = 0; i < grp.order(); ++i) arrows.push_back({0, 0, grp.name(i)});
  return assemble({"*"}, std::move(arrows), [&](Arrow a, Arrow b) { return grp.mul(a, b); });
}

FiniteGroupoid FiniteGroupoid::group_bundle(std::vector<FiniteGroup> const& groups) {
  if (groups.empty()) throw InvalidInput("group bundle: no objects");
  std::vector<std::string> objs;
  std::vector<ArrowSpec> arrows;
  std::vector<std::size_t> offset;
  for (std::size_t x = 0; x < groups.size(); ++x) {
    objs.push_back("x" + num(x));
    offset.push_back(arrows.size());
    for (FiniteGroup::Index i = 0; i < groups[x].order(); ++i)
      arrows.push_back({Object(x), Object(x), groups[x].name(i) + "@x" + num(x)});
  }
  return assemble(std::move(objs), arrows, [&](Arrow a, Arrow b) {
    Object x = arrows[a].dom;
    auto o = offset[x];
    return Arrow(o + groups[x].mul(a - o, b - o));
  });
}

FiniteGroupoid FiniteGroupoid::disjoint_union(FiniteGroupoid const& a, FiniteGroupoid const& b) {
  std::set<std::string> used(a.objects_.begin(), a.objects_.end());
  std::set<std::string> used_arrows;
  for (auto const& s : a.arrows_) used_arrows.insert(s.name);
  auto fresh = [](std::set<std::string>& set, std::string name) {
    while (!set.insert(name).second) name += "'";
    return name;
  };
  std::vector<std::string> objs = a.objects_;
  for (auto const& o : b.objects_) objs.push_back(fresh(used, o));
  std::vector<ArrowSpec> arrows = a.arrows_;
  Object shift = Object(a.object_count());
  Arrow ashift = Arrow(a.arrow_count());
  for (auto const& s : b.arrows_) arrows.push_back({s.dom + shift, s.cod + shift, fresh(used_arrows, s.name)});
  return assemble(std::move(objs), std::move(arrows), [&](Arrow x, Arrow y) {
    if (x < ashift) return a.compose(x, y);
    return b.compose(x - ashift, y - ashift) + ashift;
  });
}

FiniteGroupoid FiniteGroupoid::product(FiniteGroupoid const& a, FiniteGroupoid const& b) {
  if (a.arrow_count() * b.arrow_count() > 4096) throw CapacityExceeded("product groupoid too large");
  std::vector<std::string> objs;
  for (auto const& x : a.objects_)
    for (auto const& y : b.objects_) objs.push_back("(" + x + "," + y + ")");
  std::vector<ArrowSpec> arrows;
  Object bo = Object(b.object_count());
  Arrow ba = Arrow(b.arrow_count());
  for (auto const& s : a.arrows_)
    for (auto const& t : b.arrows_)
      arrows.push_back({s.dom * bo + t.dom, s.cod * bo + t.cod, "(" + s.name + "," + t.name + ")"});
  return assemble(std::move(objs), std::move(arrows), [&](Arrow x, Arrow y) {
    return a.compose(x / ba, y / ba) * ba + b.compose(x % ba, y % ba);
  });
}

std::vector<std::vector<Object>> FiniteGroupoid::orbits() const {
  std::vector<Object> parent(object_count());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<Object(Object)> find = [&](Object x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (auto const& a : arrows_) {
    Object p = find(a.dom), q = find(a.cod);
    if (p != q) parent[std::max(p, q)] = std::min(p, q);
  }
  std::map<Object, std::vector<Object>> groups;
  for (Object x = 0; x < object_count(); ++x) groups[find(x)].push_back(x);
  std::vector<std::vector<Object>> out;
  for (auto& [_, v] : groups) out.push_back(std::move(v));
  return out;
}

Cocycle Cocycle::trivial(FiniteGroupoid const& g) {
  return {GradingGroup::trivial(), std::vector<Grade>(g.arrow_count(), Grade{})};
}

void validate_cocycle(FiniteGroupoid const& g, Cocycle const& c) {
  if (c.grade.size() != g.arrow_count()) throw InvalidInput("cocycle: wrong number of grades");
  for (Arrow a = 0; a < g.arrow_count(); ++a)
    if (!c.group.valid(c.grade[a])) throw InvalidInput("cocycle: invalid grade on " + g.arrow_name(a));
  for (Object x = 0; x < g.object_count(); ++x)
    if (c.grade[g.unit(x)] != c.group.identity())
      throw InvalidInput("cocycle: unit " + g.arrow_name(g.unit(x)) + " is not graded by the identity");
  for (auto [a, b] : g.composable_pairs())
    if (c.grade[g.compose(a, b)] != c.group.mul(c.grade[a], c.grade[b]))
      throw InvalidInput("cocycle: not multiplicative on (" + g.arrow_name(a) + ", " + g.arrow_name(b) + ")");
  for (Arrow a = 0; a < g.arrow_count(); ++a)
    if (c.grade[g.inv(a)] != c.group.inv(c.grade[a]))
      throw InvalidInput("cocycle: inverse of " + g.arrow_name(a) + " has the wrong grade");
}

IsotropyGroup isotropy_group(FiniteGroupoid const& g, Object x) {
  if (x >= g.object_count()) throw InvalidInput("isotropy: unknown object");
  std::vector<Arrow> loops;
  for (Arrow a = 0; a < g.arrow_count(); ++a)
    if (g.dom(a) == x && g.cod(a) == x) loops.push_back(a);
  std::map<Arrow, FiniteGroup::Index> local;
  for (std::size_t i = 0; i < loops.size(); ++i) local[loops[i]] = FiniteGroup::Index(i);
  std::vector<std::vector<FiniteGroup::Index>> table(loops.size(), std::vector<FiniteGroup::Index>(loops.size()));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < loops.size(); ++i) {
    names.push_back(g.arrow_name(loops[i]));
    for (std::size_t j = 0; j < loops.size(); ++j) table[i][j] = local.at(g.compose(loops[i], loops[j]));
  }
  return {FiniteGroup::from_table(std::move(table), std::move(names)), std::move(loops)};
}

namespace {

Subgroupoid restrict_arrows(FiniteGroupoid const& g, std::vector<Object> const& objects,
                            std::vector<Arrow> const& arrows) {
  std::map<Object, Object> lo;
  for (std::size_t i = 0; i < objects.size(); ++i) lo[objects[i]] = Object(i);
  std::map<Arrow, Arrow> la;
  for (std::size_t i = 0; i < arrows.size(); ++i) la[arrows[i]] = Arrow(i);
  std::vector<std::string> names;
  for (auto x : objects) names.push_back(g.object_name(x));
  std::vector<FiniteGroupoid::ArrowSpec> specs;
  for (auto a : arrows) specs.push_back({lo.at(g.dom(a)), lo.at(g.cod(a)), g.arrow_name(a)});
  std::vector<std::vector<Arrow>> table(arrows.size(), std::vector<Arrow>(arrows.size(), FiniteGroupoid::kNone));
  for (std::size_t i = 0; i < arrows.size(); ++i)
    for (std::size_t j = 0; j < arrows.size(); ++j) {
      if (g.dom(arrows[i]) != g.cod(arrows[j])) continue;
      auto it = la.find(g.compose(arrows[i], arrows[j]));
      if (it == la.end()) throw InvalidInput("subgroupoid: arrow set not closed under composition");
      table[i][j] = it->second;
    }
  return {FiniteGroupoid::from_parts(std::move(names), std::move(specs), table), objects, arrows};
}

std::vector<Object> all_objects(FiniteGroupoid const& g) {
  std::vector<Object> v(g.object_count());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

Subgroupoid isotropy_interior(FiniteGroupoid const& g) {
  std::vector<Arrow> arrows;
  for (Arrow a = 0; a < g.arrow_count(); ++a)
    if (g.dom(a) == g.cod(a)) arrows.push_back(a);
  return restrict_arrows(g, all_objects(g), arrows);
}

bool is_effective(FiniteGroupoid const& g) {
  for (Arrow a = 0; a < g.arrow_count(); ++a)
    if (g.dom(a) == g.cod(a) && !g.is_unit(a)) return false;
  return true;
}

Subgroupoid grade_identity_component(FiniteGroupoid const& g, Cocycle const& c) {
  std::vector<Arrow> arrows;
  for (Arrow a = 0; a < g.arrow_count(); ++a)
    if (c.grade[a] == c.group.identity()) arrows.push_back(a);
  return restrict_arrows(g, all_objects(g), arrows);
}

Subgroupoid restrict_to_objects(FiniteGroupoid const& g, std::vector<Object> const& objects) {
  std::vector<Object> objs(objects);
  std::sort(objs.begin(), objs.end());
  objs.erase(std::unique(objs.begin(), objs.end()), objs.end());
  std::vector<bool> in(g.object_count(), false);
  for (auto x : objs) {
    if (x >= g.object_count()) throw InvalidInput("restrict: unknown object");
    in[x] = true;
  }
  std::vector<Arrow> arrows;
  for (Arrow a = 0; a < g.arrow_count(); ++a) {
    if (in[g.dom(a)] != in[g.cod(a)])
      throw InvalidInput("restrict: object set is not invariant (arrow " + g.arrow_name(a) + ")");
    if (in[g.dom(a)]) arrows.push_back(a);
  }
  return restrict_arrows(g, objs, arrows);
}

bool is_local_bisection(FiniteGroupoid const& g, std::vector<Arrow> const& arrows) {
  std::set<Object> doms, cods;
  std::set<Arrow> seen;
  for (auto a : arrows) {
    if (a >= g.arrow_count()) return false;
    if (!seen.insert(a).second) continue;
    if (!doms.insert(g.dom(a)).second || !cods.insert(g.cod(a)).second) return false;
  }
  return true;
}

std::vector<Arrow> bisection_product(FiniteGroupoid const& g, std::vector<Arrow> const& u,
                                     std::vector<Arrow> const& v) {
  std::vector<Arrow> out;
  for (auto a : u)
    for (auto b : v)
      if (g.dom(a) == g.cod(b)) out.push_back(g.compose(a, b));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

BisectionSemigroup bisections(FiniteGroupoid const& g, Cocycle const* c) {
  if (c) validate_cocycle(g, *c);
  std::map<Grade, std::vector<Arrow>> fibers;
  for (Arrow a = 0; a < g.arrow_count(); ++a) fibers[c ? c->grade[a] : Grade{}].push_back(a);

  std::vector<std::vector<Arrow>> sets{{}};
  std::vector<Grade> grades{c ? c->group.identity() : Grade{}};
  for (auto const& [grade, arrows] : fibers) {
    if (arrows.size() > kMaxFiberArrows)
      throw CapacityExceeded("bisections: grade fiber with " + std::to_string(arrows.size()) +
                             " arrows exceeds " + std::to_string(kMaxFiberArrows));
    for (std::uint32_t mask = 1; mask < (1u << arrows.size()); ++mask) {
      std::vector<Arrow> s;
      for (std::size_t i = 0; i < arrows.size(); ++i)
        if (mask >> i & 1u) s.push_back(arrows[i]);
      if (!is_local_bisection(g, s)) continue;
      sets.push_back(std::move(s));
      grades.push_back(grade);
      if (sets.size() > InvSemigroup::kMaxSize)
        throw CapacityExceeded("bisections: more than " + std::to_string(InvSemigroup::kMaxSize) +
                               " elements");
    }
  }
  std::vector<std::size_t> order(sets.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (sets[i].size() != sets[j].size()) return sets[i].size() < sets[j].size();
    return sets[i] < sets[j];
  });
  BisectionSemigroup out;
  std::vector<Grade> theta;
  for (auto i : order) {
    out.index.emplace(sets[i], InvSemigroup::Index(out.sets.size()));
    out.sets.push_back(sets[i]);
    theta.push_back(grades[i]);
  }
  std::size_t n = out.sets.size();
  std::vector<std::vector<InvSemigroup::Index>> table(n, std::vector<InvSemigroup::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto it = out.index.find(bisection_product(g, out.sets[i], out.sets[j]));
      if (it == out.index.end())
        throw PropertyFailure("bisections: product is not a listed bisection", "");
      table[i][j] = it->second;
    }
  std::vector<std::string> names;
  for (auto const& s : out.sets) {
    std::string name = "{";
    for (std::size_t k = 0; k < s.size(); ++k) name += (k ? "," : "") + g.arrow_name(s[k]);
    names.push_back(name + "}");
  }
  out.semigroup = InvSemigroup::from_table(std::move(table), InvSemigroup::Index(0), std::move(names));
  out.semigroup.set_grading({c ? c->group : GradingGroup::trivial(), std::move(theta)});
  return out;
}

bool is_graded_isomorphism(FiniteGroupoid const& g1, Cocycle const& c1, FiniteGroupoid const& g2,
                           Cocycle const& c2, GroupoidIso const& iso) {
  if (!(c1.group == c2.group)) return false;
  if (g1.object_count() != g2.object_count() || g1.arrow_count() != g2.arrow_count()) return false;
  if (iso.objects.size() != g1.object_count() || iso.arrows.size() != g1.arrow_count()) return false;
  std::vector<bool> hit_o(g2.object_count(), false), hit_a(g2.arrow_count(), false);
  for (auto x : iso.objects) {
    if (x >= g2.object_count() || hit_o[x]) return false;
    hit_o[x] = true;
  }
  for (auto a : iso.arrows) {
    if (a >= g2.arrow_count() || hit_a[a]) return false;
    hit_a[a] = true;
  }
  for (Arrow a = 0; a < g1.arrow_count(); ++a) {
    Arrow b = iso.arrows[a];
    if (g2.dom(b) != iso.objects[g1.dom(a)] || g2.cod(b) != iso.objects[g1.cod(a)]) return false;
    if (c1.grade[a] != c2.grade[b]) return false;
  }
  for (Object x = 0; x < g1.object_count(); ++x)
    if (iso.arrows[g1.unit(x)] != g2.unit(iso.objects[x])) return false;
  for (auto [a, b] : g1.composable_pairs())
    if (iso.arrows[g1.compose(a, b)] != g2.compose(iso.arrows[a], iso.arrows[b])) return false;
  return true;
}

namespace {

// Isomorphism-invariant labels used for pruning.
struct Signatures {
  std::vector<std::vector<std::int64_t>> object;
  std::vector<std::vector<std::int64_t>> arrow;
};

Signatures signatures(FiniteGroupoid const& g) {
  Signatures s;
  std::vector<std::size_t> orbit_size(g.object_count());
  for (auto const& orb : g.orbits())
    for (auto x : orb) orbit_size[x] = orb.size();
  std::vector<std::size_t> iso_size(g.object_count(), 0);
  for (Arrow a = 0; a < g.arrow_count(); ++a)
    if (g.dom(a) == g.cod(a)) ++iso_size[g.dom(a)];
  for (Object x = 0; x < g.object_count(); ++x)
    s.object.push_back({std::int64_t(orbit_size[x]), std::int64_t(iso_size[x])});
  for (Arrow a = 0; a < g.arrow_count(); ++a) {
    std::int64_t loop = g.dom(a) == g.cod(a);
    std::int64_t order = 0;
    if (loop) {
      Arrow p = a;
      order = 1;
      while (!g.is_unit(p)) {
        p = g.compose(p, a);
        ++order;
      }
    }
    s.arrow.push_back({g.is_unit(a) ? 1 : 0, loop, order});
  }
  return s;
}

class IsoSearch {
 public:
  IsoSearch(FiniteGroupoid const& g1, Cocycle const& c1, FiniteGroupoid const& g2, Cocycle const& c2,
            std::size_t cap, std::mt19937_64* rng)
      : g1_(g1), c1_(c1), g2_(g2), c2_(c2), cap_(cap), rng_(rng), s1_(signatures(g1)), s2_(signatures(g2)) {
    omap_.assign(g1.object_count(), FiniteGroupoid::kNone);
    oused_.assign(g2.object_count(), false);
    amap_.assign(g1.arrow_count(), FiniteGroupoid::kNone);
    aused_.assign(g2.arrow_count(), false);
    by_dom_.resize(g1.object_count());
    by_cod_.resize(g1.object_count());
    for (Arrow a = 0; a < g1.arrow_count(); ++a) {
      by_dom_[g1.dom(a)].push_back(a);
      by_cod_[g1.cod(a)].push_back(a);
    }
    // Units first (they pin objects), then loops, then the rest.
    for (int pass = 0; pass < 3; ++pass)
      for (Arrow a = 0; a < g1.arrow_count(); ++a) {
        int kind = g1.is_unit(a) ? 0 : (g1.dom(a) == g1.cod(a) ? 1 : 2);
        if (kind == pass) order_.push_back(a);
      }
  }

  std::optional<GroupoidIso> run() {
    if (search()) return GroupoidIso{omap_, amap_};
    return std::nullopt;
  }

 private:
  bool set_object(Object x, Object y) {
    if (omap_[x] != FiniteGroupoid::kNone) return omap_[x] == y;
    if (oused_[y] || s1_.object[x] != s2_.object[y]) return false;
    omap_[x] = y;
    oused_[y] = true;
    trail_.push_back({true, x});
    return true;
  }

  bool set_arrow(Arrow a, Arrow b) {
    if (amap_[a] != FiniteGroupoid::kNone) return amap_[a] == b;
    if (aused_[b] || c1_.grade[a] != c2_.grade[b] || s1_.arrow[a] != s2_.arrow[b]) return false;
    amap_[a] = b;
    aused_[b] = true;
    trail_.push_back({false, a});
    queue_.push_back(a);
    return true;
  }

  bool propagate() {
    while (!queue_.empty()) {
      Arrow a = queue_.back();
      queue_.pop_back();
      Arrow b = amap_[a];
      if (!set_object(g1_.dom(a), g2_.dom(b)) || !set_object(g1_.cod(a), g2_.cod(b))) return false;
      if (!set_arrow(g1_.inv(a), g2_.inv(b))) return false;
      for (auto x : {g1_.dom(a), g1_.cod(a)})
        if (!set_arrow(g1_.unit(x), g2_.unit(omap_[x]))) return false;
      for (auto c : by_cod_[g1_.dom(a)])
        if (amap_[c] != FiniteGroupoid::kNone && !set_arrow(g1_.compose(a, c), g2_.compose(b, amap_[c])))
          return false;
      for (auto c : by_dom_[g1_.cod(a)])
        if (amap_[c] != FiniteGroupoid::kNone && !set_arrow(g1_.compose(c, a), g2_.compose(amap_[c], b)))
          return false;
    }
    return true;
  }

  void undo(std::size_t mark) {
    queue_.clear();
    while (trail_.size() > mark) {
      auto [is_obj, i] = trail_.back();
      trail_.pop_back();
      if (is_obj) {
        oused_[omap_[i]] = false;
        omap_[i] = FiniteGroupoid::kNone;
      } else {
        aused_[amap_[i]] = false;
        amap_[i] = FiniteGroupoid::kNone;
      }
    }
  }

  bool search() {
    if (++nodes_ > cap_)
      throw CapacityExceeded("isomorphism search exceeded " + std::to_string(cap_) + " nodes (inconclusive)");
    auto next = std::find_if(order_.begin(), order_.end(),
                             [&](Arrow a) { return amap_[a] == FiniteGroupoid::kNone; });
    if (next == order_.end()) return true;
    Arrow a = *next;
    std::vector<Arrow> cands;
    for (Arrow b = 0; b < g2_.arrow_count(); ++b) {
      if (aused_[b] || c1_.grade[a] != c2_.grade[b] || s1_.arrow[a] != s2_.arrow[b]) continue;
      Object d = omap_[g1_.dom(a)], c = omap_[g1_.cod(a)];
      if (d != FiniteGroupoid::kNone ? g2_.dom(b) != d : oused_[g2_.dom(b)]) continue;
      if (c != FiniteGroupoid::kNone ? g2_.cod(b) != c : oused_[g2_.cod(b)]) continue;
      cands.push_back(b);
    }
    if (rng_) std::shuffle(cands.begin(), cands.end(), *rng_);
    for (auto b : cands) {
      std::size_t mark = trail_.size();
      if (set_arrow(a, b) && propagate() && search()) return true;
      undo(mark);
    }
    return false;
  }

  FiniteGroupoid const& g1_;
  Cocycle const& c1_;
  FiniteGroupoid const& g2_;
  Cocycle const& c2_;
  std::size_t cap_;
  std::mt19937_64* rng_;
  Signatures s1_, s2_;
  std::vector<Object> omap_;
  std::vector<bool> oused_;
  std::vector<Arrow> amap_;
  std::vector<bool> aused_;
  std::vector<std::vector<Arrow>> by_dom_, by_cod_;
  std::vector<Arrow> order_;
  std::vector<std::pair<bool, std::uint32_t>> trail_;
  std::vector<Arrow> queue_;
  std::size_t nodes_ = 0;
};

template <class T>
std::vector<T> sorted(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

std::optional<GroupoidIso> graded_iso_search(FiniteGroupoid const& g1, Cocycle const& c1,
                                             FiniteGroupoid const& g2, Cocycle const& c2,
                                             std::size_t node_cap, std::mt19937_64* rng) {
  validate_cocycle(g1, c1);
  validate_cocycle(g2, c2);
  if (!(c1.group == c2.group)) return std::nullopt;
  if (g1.object_count() != g2.object_count() || g1.arrow_count() != g2.arrow_count()) return std::nullopt;
  if (sorted(c1.grade) != sorted(c2.grade)) return std::nullopt;
  auto s1 = signatures(g1), s2 = signatures(g2);
  if (sorted(s1.object) != sorted(s2.object) || sorted(s1.arrow) != sorted(s2.arrow)) return std::nullopt;
  auto found = IsoSearch(g1, c1, g2, c2, node_cap, rng).run();
  if (found && !is_graded_isomorphism(g1, c1, g2, c2, *found))
    throw PropertyFailure("isomorphism search returned an invalid map", "");
  return found;
}

bool binary_meets_check(InvSemigroup const& s) {
  std::size_t n = s.size();
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  for (InvSemigroup::Index a = 0; a < n; ++a)
    for (InvSemigroup::Index b = 0; b < n; ++b) leq[a][b] = s.natural_leq(a, b);
  std::vector<InvSemigroup::Index> lower;
  for (InvSemigroup::Index a = 0; a < n; ++a)
    for (InvSemigroup::Index b = a; b < n; ++b) {
      lower.clear();
      for (InvSemigroup::Index u = 0; u < n; ++u)
        if (leq[u][a] && leq[u][b]) lower.push_back(u);
      bool found = std::any_of(lower.begin(), lower.end(), [&](InvSemigroup::Index u) {
        return std::all_of(lower.begin(), lower.end(), [&](InvSemigroup::Index v) { return bool(leq[v][u]); });
      });
      if (!found) return false;
    }
  return true;
}

}  // namespace gpdrec
