#include "gpdrec/leavitt.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "gpdrec/errors.hpp"

namespace gpdrec {

using Vertex = DirectedGraph::Vertex;
using Edge = DirectedGraph::Edge;
using Arrow = FiniteGroupoid::Arrow;

DirectedGraph DirectedGraph::from_parts(std::vector<std::string> vertices, std::vector<EdgeSpec> edges) {
  if (vertices.empty()) throw InvalidInput("graph: no vertices");
  std::set<std::string> names;
  for (auto const& v : vertices)
    if (v.empty() || !names.insert(v).second) throw InvalidInput("graph: empty or duplicate vertex name '" + v + "'");
  std::set<std::string> enames;
  for (auto const& e : edges) {
    if (e.src >= vertices.size() || e.dst >= vertices.size())
      throw InvalidInput("graph: edge " + e.name + " has an unknown endpoint");
    if (e.name.empty() || !enames.insert(e.name).second)
      throw InvalidInput("graph: empty or duplicate edge name '" + e.name + "'");
  }
  DirectedGraph g;
  g.out_.resize(vertices.size());
  for (Edge e = 0; e < edges.size(); ++e) g.out_[edges[e].src].push_back(e);
  g.vertices_ = std::move(vertices);
  g.edges_ = std::move(edges);
  return g;
}

Vertex terminal(DirectedGraph const& g, Path const& p) {
  return p.edges.empty() ? p.vertex : g.dst(p.edges.back());
}

bool is_path(DirectedGraph const& g, Path const& p) {
  if (p.vertex >= g.vertex_count()) return false;
  Vertex at = p.vertex;
  for (auto e : p.edges) {
    if (e >= g.edge_count() || g.src(e) != at) return false;
    at = g.dst(e);
  }
  return true;
}

std::string format_path(DirectedGraph const& g, Path const& p) {
  if (p.edges.empty()) return "eps_" + g.vertex_name(p.vertex);
  std::string s;
  for (std::size_t i = 0; i < p.edges.size(); ++i) s += (i ? "." : "") + g.edge(p.edges[i]).name;
  return s;
}

std::vector<Cycle> simple_cycles(DirectedGraph const& g) {
  std::vector<Cycle> out;
  std::vector<Edge> stack;
  std::vector<bool> on_path(g.vertex_count(), false);
  for (Vertex start = 0; start < g.vertex_count(); ++start) {
    std::function<void(Vertex)> dfs = [&](Vertex v) {
      for (auto e : g.out_edges(v)) {
        Vertex w = g.dst(e);
        if (w == start) {
          stack.push_back(e);
          out.push_back({stack, false});
          stack.pop_back();
          if (out.size() > kMaxCycles) throw CapacityExceeded("graph: more than " + std::to_string(kMaxCycles) + " cycles");
        } else if (w > start && !on_path[w]) {
          on_path[w] = true;
          stack.push_back(e);
          dfs(w);
          stack.pop_back();
          on_path[w] = false;
        }
      }
    };
    on_path[start] = true;
    dfs(start);
    on_path[start] = false;
  }
  for (auto& c : out)
    c.has_exit = std::any_of(c.edges.begin(), c.edges.end(), [&](Edge e) { return g.out_edges(g.src(e)).size() >= 2; });
  return out;
}

bool is_acyclic(DirectedGraph const& g) {
  std::vector<int> state(g.vertex_count(), 0);
  std::function<bool(Vertex)> visit = [&](Vertex v) {
    state[v] = 1;
    for (auto e : g.out_edges(v)) {
      Vertex w = g.dst(e);
      if (state[w] == 1) return false;
      if (state[w] == 0 && !visit(w)) return false;
    }
    state[v] = 2;
    return true;
  };
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (state[v] == 0 && !visit(v)) return false;
  return true;
}

bool condition_l(DirectedGraph const& g) {
  auto cycles = simple_cycles(g);
  return std::all_of(cycles.begin(), cycles.end(), [](Cycle const& c) { return c.has_exit; });
}

std::vector<Path> boundary_paths(DirectedGraph const& g) {
  if (!is_acyclic(g)) throw InvalidInput("boundary paths: graph has a cycle, so the path space is infinite");
  std::vector<std::vector<Edge>> in(g.vertex_count());
  for (Edge e = 0; e < g.edge_count(); ++e) in[g.dst(e)].push_back(e);
  std::vector<Path> out;
  constexpr std::size_t kMaxPaths = 4096;
  for (Vertex w = 0; w < g.vertex_count(); ++w) {
    if (!g.is_sink(w)) continue;
    std::vector<Path> at_sink;
    // grow paths backwards from the sink
    std::vector<Path> frontier{{w, {}}};
    while (!frontier.empty()) {
      std::vector<Path> next;
      for (auto const& p : frontier) {
        at_sink.push_back(p);
        if (out.size() + at_sink.size() > kMaxPaths) throw CapacityExceeded("boundary paths: more than 4096 paths");
        for (auto e : in[p.vertex]) {
          Path q{g.src(e), {e}};
          q.edges.insert(q.edges.end(), p.edges.begin(), p.edges.end());
          next.push_back(std::move(q));
        }
      }
      frontier = std::move(next);
    }
    std::sort(at_sink.begin(), at_sink.end(), [](Path const& a, Path const& b) {
      if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
      return a < b;
    });
    out.insert(out.end(), at_sink.begin(), at_sink.end());
  }
  return out;
}

PathGroupoid path_groupoid(DirectedGraph const& g) {
  PathGroupoid pg;
  pg.paths = boundary_paths(g);
  std::size_t n = pg.paths.size();
  std::vector<std::string> objects;
  for (auto const& p : pg.paths) objects.push_back(format_path(g, p));
  std::vector<FiniteGroupoid::ArrowSpec> arrows;
  std::vector<Grade> grades;
  pg.arrow_of.assign(n, std::vector<Arrow>(n, FiniteGroupoid::kNone));
  for (std::size_t eta = 0; eta < n; ++eta)
    for (std::size_t xi = 0; xi < n; ++xi) {
      if (terminal(g, pg.paths[eta]) != terminal(g, pg.paths[xi])) continue;
      auto k = std::int64_t(pg.paths[eta].edges.size()) - std::int64_t(pg.paths[xi].edges.size());
      pg.arrow_of[eta][xi] = Arrow(arrows.size());
      arrows.push_back({FiniteGroupoid::Object(xi), FiniteGroupoid::Object(eta),
                        "(" + objects[eta] + "," + std::to_string(k) + "," + objects[xi] + ")"});
      grades.push_back(Grade{k});
    }
  std::size_t na = arrows.size();
  std::vector<std::vector<Arrow>> table(na, std::vector<Arrow>(na, FiniteGroupoid::kNone));
  for (Arrow a = 0; a < na; ++a)
    for (Arrow b = 0; b < na; ++b)
      if (arrows[a].dom == arrows[b].cod) table[a][b] = pg.arrow_of[arrows[a].cod][arrows[b].dom];
  pg.groupoid = FiniteGroupoid::from_parts(std::move(objects), std::move(arrows), table);
  pg.cocycle = {GradingGroup::integers(), std::move(grades)};
  validate_cocycle(pg.groupoid, pg.cocycle);
  return pg;
}

std::vector<Arrow> cylinder_bisection(DirectedGraph const& g, PathGroupoid const& pg, Path const& alpha,
                                      Path const& beta) {
  if (!is_path(g, alpha) || !is_path(g, beta)) throw InvalidInput("cylinder: not a path");
  if (terminal(g, alpha) != terminal(g, beta))
    throw InvalidInput("cylinder: " + format_path(g, alpha) + " and " + format_path(g, beta) + " end at different vertices");
  std::map<Path, std::size_t> index;
  for (std::size_t i = 0; i < pg.paths.size(); ++i) index[pg.paths[i]] = i;
  std::vector<Arrow> out;
  for (auto const& p : pg.paths) {
    if (p.vertex != alpha.vertex || p.edges.size() < alpha.edges.size() ||
        !std::equal(alpha.edges.begin(), alpha.edges.end(), p.edges.begin()))
      continue;
    Path q{beta.vertex, beta.edges};
    q.edges.insert(q.edges.end(), p.edges.begin() + std::ptrdiff_t(alpha.edges.size()), p.edges.end());
    auto it = index.find(q);
    if (it == index.end()) throw PropertyFailure("cylinder: shifted path is not a boundary path", format_path(g, q));
    out.push_back(pg.arrow_of[index.at(p)][it->second]);
  }
  std::sort(out.begin(), out.end());
  if (!is_local_bisection(pg.groupoid, out)) throw PropertyFailure("cylinder: not a local bisection", "");
  Grade k{std::int64_t(alpha.edges.size()) - std::int64_t(beta.edges.size())};
  for (auto a : out)
    if (pg.cocycle.grade[a] != k) throw PropertyFailure("cylinder: not homogeneous", pg.groupoid.arrow_name(a));
  return out;
}

CkReport verify_ck_relations(DirectedGraph const& g, Ring const& r) {
  auto pg = path_groupoid(g);
  auto const& gr = pg.groupoid;
  auto chi = [&](Path const& a, Path const& b) { return characteristic(gr, r, cylinder_bisection(g, pg, a, b)); };
  auto eps = [](Vertex v) { return Path{v, {}}; };
  std::vector<Vec> vert, edge, star;
  for (Vertex v = 0; v < g.vertex_count(); ++v) vert.push_back(chi(eps(v), eps(v)));
  for (Edge e = 0; e < g.edge_count(); ++e) {
    Path pe{g.src(e), {e}};
    edge.push_back(chi(pe, eps(g.dst(e))));
    star.push_back(chi(eps(g.dst(e)), pe));
  }
  auto mul = [&](Vec const& a, Vec const& b) { return convolve(gr, r, a, b); };
  Vec zero = alg_zero(gr);
  CkReport rep;
  auto check = [&](bool ok, std::string rel, std::string inst) {
    ++rep.checked;
    if (!ok) rep.failures.push_back({std::move(rel), std::move(inst), false});
  };
  auto graded = [&](Vec const& x, std::int64_t k) {
    for (Arrow a = 0; a < x.size(); ++a)
      if (x[a] != 0 && pg.cocycle.grade[a] != Grade{k}) return false;
    return true;
  };
  auto vn = [&](Vertex v) { return g.vertex_name(v); };
  auto en = [&](Edge e) { return g.edge(e).name; };

  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    check(graded(vert[v], 0), "grade(v) = 0", vn(v));
    for (Vertex w = 0; w < g.vertex_count(); ++w)
      check(mul(vert[v], vert[w]) == (v == w ? vert[v] : zero), "v w = delta(v,w) v", vn(v) + ", " + vn(w));
  }
  for (Edge e = 0; e < g.edge_count(); ++e) {
    check(graded(edge[e], 1), "grade(e) = 1", en(e));
    check(graded(star[e], -1), "grade(e*) = -1", en(e));
    check(mul(vert[g.src(e)], edge[e]) == edge[e] && mul(edge[e], vert[g.dst(e)]) == edge[e], "s(e) e = e = e r(e)", en(e));
    check(mul(vert[g.dst(e)], star[e]) == star[e] && mul(star[e], vert[g.src(e)]) == star[e], "r(e) e* = e* = e* s(e)",
          en(e));
    for (Edge f = 0; f < g.edge_count(); ++f)
      check(mul(star[e], edge[f]) == (e == f ? vert[g.dst(e)] : zero), "e* f = delta(e,f) r(e)", en(e) + ", " + en(f));
  }
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (g.is_sink(v)) continue;
    Vec sum = zero;
    for (auto e : g.out_edges(v)) {
      Vec t = mul(edge[e], star[e]);
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = r.add(sum[i], t[i]);
    }
    check(sum == vert[v], "v = sum e e*", vn(v));
  }
  return rep;
}

HypothesisReport leavitt_hypothesis_check(DirectedGraph const& g, Ring const& r) {
  HypothesisReport rep;
  rep.cycles = simple_cycles(g);
  rep.condition_l = std::all_of(rep.cycles.begin(), rep.cycles.end(), [](Cycle const& c) { return c.has_exit; });
  rep.indecomposable = r.is_indecomposable();
  rep.reduced = r.is_reduced();
  rep.applies = rep.indecomposable && (rep.condition_l || rep.reduced);
  std::set<Vertex> on_cycle;
  for (auto const& c : rep.cycles)
    for (auto e : c.edges) on_cycle.insert(g.src(e));
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    std::vector<bool> seen(g.vertex_count(), false);
    std::vector<Vertex> todo{v};
    seen[v] = true;
    bool reach = false;
    while (!todo.empty() && !reach) {
      Vertex x = todo.back();
      todo.pop_back();
      if (on_cycle.count(x)) reach = true;
      for (auto e : g.out_edges(x))
        if (!seen[g.dst(e)]) {
          seen[g.dst(e)] = true;
          todo.push_back(g.dst(e));
        }
    }
    if (reach) rep.periodic_sources.push_back(v);
  }
  return rep;
}

}  // namespace gpdrec
