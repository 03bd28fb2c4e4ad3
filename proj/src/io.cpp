#include "gpdrec/io.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "gpdrec/errors.hpp"

namespace gpdrec::io {

namespace {

[[noreturn]] void fail(std::string const& at, std::string const& msg) {
  throw InvalidInput((at.empty() ? "/" : at) + ": " + msg);
}

std::string type_name(Json const& j) { return j.type_name(); }

void expect_object(Json const& j, std::string const& at) {
  if (!j.is_object()) fail(at, "expected an object, got " + type_name(j));
}

void expect_array(Json const& j, std::string const& at) {
  if (!j.is_array()) fail(at, "expected an array, got " + type_name(j));
}

void only_keys(Json const& j, std::initializer_list<char const*> keys, std::string const& at) {
  for (auto const& [k, v] : j.items())
    if (std::none_of(keys.begin(), keys.end(), [&](char const* s) { return k == s; }))
      fail(at + "/" + k, "unknown key");
}

Json const& member(Json const& j, char const* key, std::string const& at) {
  auto it = j.find(key);
  if (it == j.end()) fail(at, std::string("missing key '") + key + "'");
  return *it;
}

std::uint64_t get_uint(Json const& j, std::string const& at, std::uint64_t max) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0))
    fail(at, "expected a non-negative integer, got " + (j.is_number() ? j.dump() : type_name(j)));
  auto v = j.get<std::uint64_t>();
  if (v > max) fail(at, "value " + std::to_string(v) + " exceeds " + std::to_string(max));
  return v;
}

std::int64_t get_int(Json const& j, std::string const& at) {
  if (!j.is_number_integer()) fail(at, "expected an integer, got " + type_name(j));
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > std::uint64_t(INT64_MAX)) fail(at, "integer out of range");
  return j.get<std::int64_t>();
}

std::string get_string(Json const& j, std::string const& at) {
  if (!j.is_string()) fail(at, "expected a string, got " + type_name(j));
  return j.get<std::string>();
}

std::vector<std::string> get_names(Json const& j, std::string const& at) {
  expect_array(j, at);
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto s = get_string(j[i], at + "/" + std::to_string(i));
    if (s.empty() || !seen.insert(s).second) fail(at + "/" + std::to_string(i), "empty or duplicate name '" + s + "'");
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::vector<std::uint32_t>> get_table(Json const& j, std::size_t n, std::string const& at) {
  expect_array(j, at);
  if (j.size() != n) fail(at, "expected " + std::to_string(n) + " rows, got " + std::to_string(j.size()));
  std::vector<std::vector<std::uint32_t>> t(n, std::vector<std::uint32_t>(n));
  for (std::size_t a = 0; a < n; ++a) {
    auto ra = at + "/" + std::to_string(a);
    expect_array(j[a], ra);
    if (j[a].size() != n) fail(ra, "expected " + std::to_string(n) + " entries, got " + std::to_string(j[a].size()));
    for (std::size_t b = 0; b < n; ++b)
      t[a][b] = std::uint32_t(get_uint(j[a][b], ra + "/" + std::to_string(b), n - 1));
  }
  return t;
}

std::size_t index_of(std::vector<std::string> const& names, Json const& j, std::string const& at, char const* what) {
  if (j.is_number_integer()) return get_uint(j, at, names.size() - 1);
  auto s = get_string(j, at);
  auto it = std::find(names.begin(), names.end(), s);
  if (it == names.end()) fail(at, std::string("unknown ") + what + " '" + s + "'");
  return std::size_t(it - names.begin());
}

// Runs a module constructor and prefixes its validation errors with `at`.
template <class F>
auto located(std::string const& at, F f) -> decltype(f()) {
  try {
    return f();
  } catch (InvalidInput const& e) {
    if (std::string(e.what()).rfind("/", 0) == 0) throw;
    fail(at, e.what());
  } catch (PropertyFailure const& e) {
    fail(at, std::string(e.what()) + (e.witness().empty() ? "" : " (" + e.witness() + ")"));
  }
}

Grade grade_from_json(GradingGroup const& g, Json const& j, std::string const& at) {
  switch (g.kind()) {
    case GradingGroup::Kind::trivial:
      if (get_int(j, at) != 0) fail(at, "the trivial grading group has only the grade 0");
      return Grade{0};
    case GradingGroup::Kind::integers:
      return Grade{get_int(j, at)};
    case GradingGroup::Kind::finite: {
      auto const& grp = g.group();
      if (j.is_string()) {
        auto s = j.get<std::string>();
        for (FiniteGroup::Index i = 0; i < grp.order(); ++i)
          if (grp.name(i) == s) return Grade{std::int64_t(i)};
        fail(at, "unknown group element '" + s + "'");
      }
      return Grade{std::int64_t(get_uint(j, at, grp.order() - 1))};
    }
  }
  fail(at, "bad grading group");
}

Json grade_to_json(Grade g) { return g.value; }

std::vector<Grade> grades_from_json(GradingGroup const& g, Json const& j, std::size_t n, std::string const& at) {
  expect_array(j, at);
  if (j.size() != n) fail(at, "expected " + std::to_string(n) + " grades, got " + std::to_string(j.size()));
  std::vector<Grade> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(grade_from_json(g, j[i], at + "/" + std::to_string(i)));
  return out;
}

// A common grading group for two graded pieces; the trivial group embeds
// into any other.
GradingGroup common_group(GradingGroup const& a, GradingGroup const& b, std::string const& at) {
  if (a == b) return a;
  if (a.kind() == GradingGroup::Kind::trivial) return b;
  if (b.kind() == GradingGroup::Kind::trivial) return a;
  fail(at, "components are graded by different groups (" + a.describe() + ", " + b.describe() + ")");
}

Grade lift(GradingGroup const& from, GradingGroup const& to, Grade g) {
  return from.kind() == GradingGroup::Kind::trivial ? to.identity() : g;
}

GradedGroupoid explicit_groupoid(Json const& j, Json const* grading, std::string const& at) {
  only_keys(j, {"objects", "arrows", "compose"}, at);
  auto objects = get_names(member(j, "objects", at), at + "/objects");
  auto const& ja = member(j, "arrows", at);
  expect_array(ja, at + "/arrows");
  std::optional<GradingGroup> group;
  if (grading && grading->contains("group")) group = grading_group_from_json((*grading)["group"], "/grading/group");
  std::vector<FiniteGroupoid::ArrowSpec> arrows;
  std::vector<Grade> inline_grades;
  bool any_grade = false;
  std::set<std::string> names;
  for (std::size_t i = 0; i < ja.size(); ++i) {
    auto ai = at + "/arrows/" + std::to_string(i);
    expect_object(ja[i], ai);
    only_keys(ja[i], {"name", "dom", "cod", "grade"}, ai);
    auto name = get_string(member(ja[i], "name", ai), ai + "/name");
    if (name.empty() || !names.insert(name).second) fail(ai + "/name", "empty or duplicate arrow name '" + name + "'");
    auto dom = index_of(objects, member(ja[i], "dom", ai), ai + "/dom", "object");
    auto cod = index_of(objects, member(ja[i], "cod", ai), ai + "/cod", "object");
    arrows.push_back({FiniteGroupoid::Object(dom), FiniteGroupoid::Object(cod), name});
    if (ja[i].contains("grade")) {
      if (!group) fail(ai + "/grade", "an inline grade needs \"grading\": {\"group\": ...}");
      any_grade = true;
      inline_grades.push_back(grade_from_json(*group, ja[i]["grade"], ai + "/grade"));
    } else {
      inline_grades.push_back(group ? group->identity() : Grade{0});
    }
  }
  std::size_t n = arrows.size();
  auto const& jc = member(j, "compose", at);
  expect_array(jc, at + "/compose");
  if (jc.size() != n) fail(at + "/compose", "expected " + std::to_string(n) + " rows, got " + std::to_string(jc.size()));
  std::vector<std::vector<FiniteGroupoid::Arrow>> table(n, std::vector<FiniteGroupoid::Arrow>(n, FiniteGroupoid::kNone));
  for (std::size_t a = 0; a < n; ++a) {
    auto ra = at + "/compose/" + std::to_string(a);
    expect_array(jc[a], ra);
    if (jc[a].size() != n) fail(ra, "expected " + std::to_string(n) + " entries");
    for (std::size_t b = 0; b < n; ++b) {
      if (jc[a][b].is_null()) continue;
      table[a][b] = FiniteGroupoid::Arrow(get_uint(jc[a][b], ra + "/" + std::to_string(b), n - 1));
    }
  }
  GradedGroupoid out{located(at, [&] { return FiniteGroupoid::from_parts(objects, arrows, table); }), {}};
  out.cocycle = Cocycle::trivial(out.groupoid);
  if (group && (any_grade || !grading->contains("grades"))) {
    out.cocycle = {*group, inline_grades};
    located(at, [&] {
      validate_cocycle(out.groupoid, out.cocycle);
      return 0;
    });
  }
  return out;
}

GradedGroupoid constructor_groupoid(Json const& j, std::string const& at) {
  expect_object(j, at);
  if (j.size() != 1)
    fail(at, "expected exactly one of pair, unit, group, bundle, leavitt, union, product, or the explicit form");
  auto const& [key, v] = *j.items().begin();
  auto va = at + "/" + key;
  auto trivial = [](FiniteGroupoid g) {
    auto c = Cocycle::trivial(g);
    return GradedGroupoid{std::move(g), std::move(c)};
  };
  if (key == "pair") return trivial(located(va, [&] { return FiniteGroupoid::pair_groupoid(std::uint32_t(get_uint(v, va, 64))); }));
  if (key == "unit") return trivial(located(va, [&] { return FiniteGroupoid::unit_groupoid(std::uint32_t(get_uint(v, va, 4096))); }));
  if (key == "group") return trivial(FiniteGroupoid::group_as_groupoid(group_from_json(v, va)));
  if (key == "bundle") {
    expect_array(v, va);
    std::vector<FiniteGroup> groups;
    for (std::size_t i = 0; i < v.size(); ++i) groups.push_back(group_from_json(v[i], va + "/" + std::to_string(i)));
    return trivial(located(va, [&] { return FiniteGroupoid::group_bundle(groups); }));
  }
  if (key == "leavitt") {
    auto graph = graph_from_json(v, va);
    auto pg = located(va, [&] { return path_groupoid(graph); });
    return {std::move(pg.groupoid), std::move(pg.cocycle)};
  }
  if (key == "union" || key == "product") {
    expect_array(v, va);
    if (v.size() != 2) fail(va, "expected two groupoids");
    auto a = groupoid_from_json(v[0], nullptr, va + "/0");
    auto b = groupoid_from_json(v[1], nullptr, va + "/1");
    auto group = common_group(a.cocycle.group, b.cocycle.group, va);
    std::vector<Grade> grades;
    if (key == "union") {
      auto g = located(va, [&] { return FiniteGroupoid::disjoint_union(a.groupoid, b.groupoid); });
      for (auto x : a.cocycle.grade) grades.push_back(lift(a.cocycle.group, group, x));
      for (auto x : b.cocycle.grade) grades.push_back(lift(b.cocycle.group, group, x));
      return {std::move(g), {group, std::move(grades)}};
    }
    auto g = located(va, [&] { return FiniteGroupoid::product(a.groupoid, b.groupoid); });
    for (auto x : a.cocycle.grade)
      for (auto y : b.cocycle.grade)
        grades.push_back(located(va, [&] {
          return group.mul(lift(a.cocycle.group, group, x), lift(b.cocycle.group, group, y));
        }));
    GradedGroupoid out{std::move(g), {group, std::move(grades)}};
    located(va, [&] {
      validate_cocycle(out.groupoid, out.cocycle);
      return 0;
    });
    return out;
  }
  fail(va, "unknown groupoid form");
}

}  // namespace

Ring ring_from_json(Json const& j, std::string const& at) {
  if (j.is_string()) return located(at, [&] { return Ring::parse(j.get<std::string>()); });
  expect_object(j, at);
  if (j.size() != 1) fail(at, "expected exactly one of mod, product");
  if (j.contains("mod")) {
    auto n = get_uint(j["mod"], at + "/mod", Ring::kMaxSize);
    if (n < 2) fail(at + "/mod", "modulus must be >= 2, got " + std::to_string(n));
    return Ring::modular(std::uint32_t(n));
  }
  if (j.contains("product")) {
    auto const& p = j["product"];
    expect_array(p, at + "/product");
    std::vector<std::uint32_t> mods;
    for (std::size_t i = 0; i < p.size(); ++i) {
      auto n = get_uint(p[i], at + "/product/" + std::to_string(i), Ring::kMaxSize);
      if (n < 2) fail(at + "/product/" + std::to_string(i), "modulus must be >= 2, got " + std::to_string(n));
      mods.push_back(std::uint32_t(n));
    }
    return located(at, [&] { return Ring::product(mods); });
  }
  fail(at, "expected exactly one of mod, product");
}

Json ring_to_json(Ring const& r) {
  Json j = Json::object();
  if (r.is_product()) {
    j["product"] = r.moduli();
  } else {
    j["mod"] = r.moduli().front();
  }
  return j;
}

Ring ring_from_text(std::string const& text) {
  if (!text.empty() && text.front() == '{') return ring_from_json(parse_text(text, "--ring"), "--ring");
  return located("--ring", [&] { return Ring::parse(text); });
}

FiniteGroup group_from_json(Json const& j, std::string const& at) {
  if (j.is_string()) return group_from_text(j.get<std::string>());
  expect_object(j, at);
  if (j.contains("cyclic")) {
    only_keys(j, {"cyclic"}, at);
    return located(at, [&] { return FiniteGroup::cyclic(std::uint32_t(get_uint(j["cyclic"], at + "/cyclic", 4096))); });
  }
  if (j.contains("product")) {
    only_keys(j, {"product"}, at);
    auto const& p = j["product"];
    expect_array(p, at + "/product");
    if (p.size() != 2) fail(at + "/product", "expected two groups");
    auto a = group_from_json(p[0], at + "/product/0");
    auto b = group_from_json(p[1], at + "/product/1");
    return located(at, [&] { return FiniteGroup::direct_product(a, b); });
  }
  if (j.contains("table")) {
    only_keys(j, {"table", "names"}, at);
    auto const& t = j["table"];
    expect_array(t, at + "/table");
    if (t.empty() || t.size() > 4096) fail(at + "/table", "group order must be in [1, 4096]");
    auto table = get_table(t, t.size(), at + "/table");
    std::vector<std::string> names;
    if (j.contains("names")) {
      names = get_names(j["names"], at + "/names");
      if (names.size() != table.size()) fail(at + "/names", "expected one name per element");
    }
    return located(at, [&] { return FiniteGroup::from_table(table, names); });
  }
  fail(at, "expected one of cyclic, product, table");
}

Json group_to_json(FiniteGroup const& g) {
  Json j = Json::object();
  j["table"] = g.table();
  std::vector<std::string> names;
  for (FiniteGroup::Index i = 0; i < g.order(); ++i) names.push_back(g.name(i));
  j["names"] = names;
  return j;
}

FiniteGroup group_from_text(std::string const& text) {
  if (!text.empty() && text.front() == '{') return group_from_json(parse_text(text, "--group"), "--group");
  auto one = [&](std::string const& s) {
    if (s == "trivial") return FiniteGroup::trivial();
    if (s.rfind("cyclic", 0) == 0) {
      auto digits = s.substr(6);
      if (digits.empty() || digits.size() > 4 || !std::all_of(digits.begin(), digits.end(), ::isdigit))
        fail("--group", "cannot parse '" + text + "'");
      return located("--group", [&] { return FiniteGroup::cyclic(std::uint32_t(std::stoul(digits))); });
    }
    fail("--group", "cannot parse '" + text + "' (expected trivial, cyclicN or products like cyclic2xcyclic2)");
  };
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t pos; (pos = text.find('x', start)) != std::string::npos; start = pos + 1)
    parts.push_back(text.substr(start, pos - start));
  parts.push_back(text.substr(start));
  FiniteGroup g = one(parts.front());
  for (std::size_t i = 1; i < parts.size(); ++i) {
    auto h = one(parts[i]);
    g = located("--group", [&] { return FiniteGroup::direct_product(g, h); });
  }
  return g;
}

GradingGroup grading_group_from_json(Json const& j, std::string const& at) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "trivial") return GradingGroup::trivial();
    if (s == "integers") return GradingGroup::integers();
    return GradingGroup::finite(group_from_text(s));
  }
  return GradingGroup::finite(group_from_json(j, at));
}

Json grading_group_to_json(GradingGroup const& g) {
  switch (g.kind()) {
    case GradingGroup::Kind::trivial:
      return "trivial";
    case GradingGroup::Kind::integers:
      return "integers";
    case GradingGroup::Kind::finite:
      return group_to_json(g.group());
  }
  return nullptr;
}

DirectedGraph graph_from_json(Json const& j, std::string const& at) {
  expect_object(j, at);
  only_keys(j, {"vertices", "edges"}, at);
  auto vertices = get_names(member(j, "vertices", at), at + "/vertices");
  if (vertices.empty()) fail(at + "/vertices", "a graph needs at least one vertex");
  auto const& je = member(j, "edges", at);
  expect_array(je, at + "/edges");
  std::vector<DirectedGraph::EdgeSpec> edges;
  for (std::size_t i = 0; i < je.size(); ++i) {
    auto ei = at + "/edges/" + std::to_string(i);
    expect_object(je[i], ei);
    only_keys(je[i], {"name", "src", "dst"}, ei);
    edges.push_back({get_string(member(je[i], "name", ei), ei + "/name"),
                     DirectedGraph::Vertex(index_of(vertices, member(je[i], "src", ei), ei + "/src", "vertex")),
                     DirectedGraph::Vertex(index_of(vertices, member(je[i], "dst", ei), ei + "/dst", "vertex"))});
  }
  return located(at, [&] { return DirectedGraph::from_parts(vertices, edges); });
}

Json graph_to_json(DirectedGraph const& g) {
  Json j = Json::object();
  j["vertices"] = g.vertices();
  Json edges = Json::array();
  for (auto const& e : g.edges())
    edges.push_back(Json{{"name", e.name}, {"src", g.vertex_name(e.src)}, {"dst", g.vertex_name(e.dst)}});
  j["edges"] = edges;
  return j;
}

GradedGroupoid groupoid_from_json(Json const& j, Json const* grading, std::string const& at) {
  expect_object(j, at);
  if (grading) {
    expect_object(*grading, "/grading");
    only_keys(*grading, {"group", "grades"}, "/grading");
    member(*grading, "group", "/grading");
  }
  GradedGroupoid out =
      j.contains("objects") ? explicit_groupoid(j, grading, at) : constructor_groupoid(j, at);
  if (grading && grading->contains("grades")) {
    auto group = grading_group_from_json((*grading)["group"], "/grading/group");
    out.cocycle = {group, grades_from_json(group, (*grading)["grades"], out.groupoid.arrow_count(), "/grading/grades")};
    located("/grading", [&] {
      validate_cocycle(out.groupoid, out.cocycle);
      return 0;
    });
  } else if (grading && !j.contains("objects")) {
    fail("/grading", "a grading for a constructor form needs \"grades\"");
  }
  return out;
}

Json groupoid_to_json(FiniteGroupoid const& g, Cocycle const& c) {
  Json gj = Json::object();
  gj["objects"] = g.object_names();
  Json arrows = Json::array();
  for (FiniteGroupoid::Arrow a = 0; a < g.arrow_count(); ++a)
    arrows.push_back(Json{{"name", g.arrow_name(a)},
                          {"dom", g.object_name(g.dom(a))},
                          {"cod", g.object_name(g.cod(a))},
                          {"grade", grade_to_json(c.grade[a])}});
  gj["arrows"] = arrows;
  Json compose = Json::array();
  for (FiniteGroupoid::Arrow a = 0; a < g.arrow_count(); ++a) {
    Json row = Json::array();
    for (FiniteGroupoid::Arrow b = 0; b < g.arrow_count(); ++b) {
      if (g.dom(a) == g.cod(b)) {
        row.push_back(g.compose(a, b));
      } else {
        row.push_back(nullptr);
      }
    }
    compose.push_back(row);
  }
  gj["compose"] = compose;
  Json out = Json::object();
  out["groupoid"] = gj;
  out["grading"] = Json{{"group", grading_group_to_json(c.group)}};
  return out;
}

InvSemigroup semigroup_from_json(Json const& j, std::string const& at) {
  expect_object(j, at);
  only_keys(j, {"elements", "table", "zero", "grading"}, at);
  auto names = get_names(member(j, "elements", at), at + "/elements");
  if (names.empty() || names.size() > InvSemigroup::kMaxSize)
    fail(at + "/elements", "size must be in [1, " + std::to_string(InvSemigroup::kMaxSize) + "]");
  auto table = get_table(member(j, "table", at), names.size(), at + "/table");
  std::optional<InvSemigroup::Index> zero;
  if (j.contains("zero") && !j["zero"].is_null())
    zero = InvSemigroup::Index(index_of(names, j["zero"], at + "/zero", "element"));
  auto s = located(at, [&] { return InvSemigroup::from_table(table, zero, names); });
  if (j.contains("grading")) {
    auto ga = at + "/grading";
    auto const& g = j["grading"];
    expect_object(g, ga);
    only_keys(g, {"group", "grades"}, ga);
    auto group = grading_group_from_json(member(g, "group", ga), ga + "/group");
    auto const& gr = member(g, "grades", ga);
    expect_array(gr, ga + "/grades");
    if (gr.size() != names.size()) fail(ga + "/grades", "expected one grade per element");
    std::vector<Grade> theta;
    for (std::size_t i = 0; i < gr.size(); ++i) {
      if (gr[i].is_null()) {
        if (!s.is_zero(InvSemigroup::Index(i))) fail(ga + "/grades/" + std::to_string(i), "only the zero may be ungraded");
        theta.push_back(group.identity());
      } else {
        theta.push_back(grade_from_json(group, gr[i], ga + "/grades/" + std::to_string(i)));
      }
    }
    located(ga, [&] {
      s.set_grading({group, theta});
      return 0;
    });
  }
  return s;
}

Json semigroup_to_json(InvSemigroup const& s) {
  Json j = Json::object();
  std::vector<std::string> names;
  for (InvSemigroup::Index i = 0; i < s.size(); ++i) names.push_back(s.name(i));
  j["elements"] = names;
  j["table"] = s.table();
  j["zero"] = s.zero() ? Json(*s.zero()) : Json(nullptr);
  if (s.grading()) {
    Json grades = Json::array();
    for (InvSemigroup::Index i = 0; i < s.size(); ++i)
      grades.push_back(s.is_zero(i) ? Json(nullptr) : grade_to_json(s.grading()->theta[i]));
    j["grading"] = Json{{"group", grading_group_to_json(s.grading()->group)}, {"grades", grades}};
  }
  return j;
}

Action action_from_json(InvSemigroup const& s, Json const& j, std::string const& at) {
  expect_object(j, at);
  only_keys(j, {"points", "map"}, at);
  auto points = get_names(member(j, "points", at), at + "/points");
  auto const& jm = member(j, "map", at);
  expect_object(jm, at + "/map");
  Action a;
  a.point_names = points;
  a.map.assign(s.size(), std::vector<std::int64_t>(points.size(), -1));
  std::vector<bool> given(s.size(), false);
  std::vector<std::string> names;
  for (InvSemigroup::Index i = 0; i < s.size(); ++i) names.push_back(s.name(i));
  for (auto const& [k, row] : jm.items()) {
    auto ra = at + "/map/" + k;
    auto x = index_of(names, Json(k), ra, "element");
    given[x] = true;
    expect_array(row, ra);
    if (row.size() != points.size()) fail(ra, "expected one entry per point");
    for (std::size_t p = 0; p < points.size(); ++p)
      if (!row[p].is_null()) a.map[x][p] = std::int64_t(index_of(points, row[p], ra + "/" + std::to_string(p), "point"));
  }
  for (InvSemigroup::Index i = 0; i < s.size(); ++i)
    if (!given[i]) fail(at + "/map", "no entry for element '" + s.name(i) + "'");
  Semilattice::of_idempotents(s, &a.idempotents);
  for (std::size_t p = 0; p < points.size(); ++p) {
    Character t(a.idempotents.size(), 0);
    for (std::size_t i = 0; i < a.idempotents.size(); ++i) t[i] = a.map[a.idempotents[i]][p] >= 0;
    a.points.push_back(std::move(t));
  }
  located(at, [&] {
    verify_action(s, a);
    return 0;
  });
  return a;
}

AlgebraPresentation presentation_from_json(Json const& j, std::string const& at) {
  expect_object(j, at);
  only_keys(j, {"ring", "dim", "labels", "grading", "diagonal", "products"}, at);
  AlgebraPresentation p;
  p.ring = ring_from_json(member(j, "ring", at), at + "/ring");
  auto dim = get_uint(member(j, "dim", at), at + "/dim", kMaxPresentationDim);
  if (dim == 0) fail(at + "/dim", "dimension must be positive");
  p.labels = get_names(member(j, "labels", at), at + "/labels");
  if (p.labels.size() != dim) fail(at + "/labels", "expected " + std::to_string(dim) + " labels");
  auto const& g = member(j, "grading", at);
  expect_object(g, at + "/grading");
  only_keys(g, {"group", "grades"}, at + "/grading");
  p.group = grading_group_from_json(member(g, "group", at + "/grading"), at + "/grading/group");
  p.grades = grades_from_json(p.group, member(g, "grades", at + "/grading"), dim, at + "/grading/grades");
  auto const& d = member(j, "diagonal", at);
  expect_array(d, at + "/diagonal");
  for (std::size_t i = 0; i < d.size(); ++i)
    p.diagonal.push_back(std::uint32_t(get_uint(d[i], at + "/diagonal/" + std::to_string(i), dim - 1)));
  if (!std::is_sorted(p.diagonal.begin(), p.diagonal.end()) ||
      std::adjacent_find(p.diagonal.begin(), p.diagonal.end()) != p.diagonal.end())
    fail(at + "/diagonal", "indices must be strictly increasing");
  p.products.assign(dim * dim, Vec(dim, 0));
  auto const& pr = member(j, "products", at);
  expect_array(pr, at + "/products");
  std::set<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> seen;
  for (std::size_t t = 0; t < pr.size(); ++t) {
    auto ta = at + "/products/" + std::to_string(t);
    expect_array(pr[t], ta);
    if (pr[t].size() != 4) fail(ta, "expected [i, j, k, coefficient]");
    auto i = get_uint(pr[t][0], ta + "/0", dim - 1);
    auto jj = get_uint(pr[t][1], ta + "/1", dim - 1);
    auto k = get_uint(pr[t][2], ta + "/2", dim - 1);
    auto c = get_uint(pr[t][3], ta + "/3", p.ring.size() - 1);
    if (c == 0) fail(ta + "/3", "zero coefficients are omitted");
    if (!seen.insert({i, jj, k}).second) fail(ta, "duplicate triple");
    p.products[i * dim + jj][k] = Ring::Elem(c);
  }
  located(at, [&] {
    p.validate();
    return 0;
  });
  return p;
}

Json presentation_to_json(AlgebraPresentation const& p) {
  Json j = Json::object();
  j["ring"] = ring_to_json(p.ring);
  j["dim"] = p.dim();
  j["labels"] = p.labels;
  Json grades = Json::array();
  for (auto g : p.grades) grades.push_back(grade_to_json(g));
  j["grading"] = Json{{"group", grading_group_to_json(p.group)}, {"grades", grades}};
  j["diagonal"] = p.diagonal;
  Json products = Json::array();
  for (std::uint32_t i = 0; i < p.dim(); ++i)
    for (std::uint32_t k = 0; k < p.dim(); ++k)
      for (std::uint32_t l = 0; l < p.dim(); ++l) {
        auto c = p.product(i, k)[l];
        if (c != 0) products.push_back(Json::array({i, k, l, c}));
      }
  j["products"] = products;
  return j;
}

std::string dump(Json const& j) { return j.dump(2) + "\n"; }

Json parse_text(std::string const& text, std::string const& origin) {
  try {
    return Json::parse(text);
  } catch (Json::parse_error const& e) {
    throw InvalidInput(origin + ": parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

InstanceSpec parse_instance(Json const& j) {
  if (!j.is_object()) fail("", "expected an object, got " + type_name(j));
  InstanceSpec spec;
  spec.source = j;
  std::vector<std::string> issues;
  auto attempt = [&](auto f) {
    try {
      f();
    } catch (InvalidInput const& e) {
      issues.push_back(e.what());
    } catch (CapacityExceeded const&) {
      throw;
    }
  };
  if (j.contains("products")) {
    attempt([&] { spec.presentation = presentation_from_json(j, ""); });
  } else if (j.contains("vertices")) {
    attempt([&] { spec.graph = graph_from_json(j, ""); });
  } else if (j.contains("table") && j.contains("elements")) {
    attempt([&] { spec.semigroup = semigroup_from_json(j, ""); });
  } else {
    for (auto const& [k, v] : j.items()) {
      static std::set<std::string> const known{"name", "description", "ring", "group", "groupoid", "grading", "graph",
                                               "semigroup", "action", "presentation", "cap", "seed"};
      if (!known.count(k)) issues.push_back("/" + k + ": unknown key");
    }
    if (j.contains("name")) attempt([&] { get_string(j["name"], "/name"); });
    if (j.contains("description")) attempt([&] { get_string(j["description"], "/description"); });
    if (j.contains("ring")) attempt([&] { spec.ring = ring_from_json(j["ring"], "/ring"); });
    if (j.contains("group")) attempt([&] { spec.group = group_from_json(j["group"], "/group"); });
    if (j.contains("groupoid")) {
      attempt([&] { spec.groupoid = groupoid_from_json(j["groupoid"], j.contains("grading") ? &j["grading"] : nullptr); });
    } else if (j.contains("grading")) {
      issues.push_back("/grading: a grading needs a groupoid");
    }
    if (j.contains("graph")) attempt([&] { spec.graph = graph_from_json(j["graph"], "/graph"); });
    if (j.contains("semigroup")) attempt([&] { spec.semigroup = semigroup_from_json(j["semigroup"], "/semigroup"); });
    if (j.contains("action")) {
      if (!j.contains("semigroup")) issues.push_back("/action: an action needs a semigroup");
      if (spec.semigroup) attempt([&] {
        action_from_json(*spec.semigroup, j["action"], "/action");
        spec.action = j["action"];
      });
    }
    if (j.contains("presentation"))
      attempt([&] { spec.presentation = presentation_from_json(j["presentation"], "/presentation"); });
    if (j.contains("cap")) attempt([&] { spec.cap = get_uint(j["cap"], "/cap", std::uint64_t(1) << 40); });
    if (j.contains("seed")) attempt([&] { spec.seed = get_uint(j["seed"], "/seed", UINT64_MAX); });
  }
  if (!issues.empty()) {
    std::string msg = std::to_string(issues.size()) + " violation" + (issues.size() == 1 ? "" : "s");
    for (auto const& s : issues) msg += "\n  " + s;
    throw InvalidInput(msg);
  }
  return spec;
}

InstanceSpec parse_instance_text(std::string const& text, std::string const& origin) {
  return parse_instance(parse_text(text, origin));
}

}  // namespace gpdrec::io
