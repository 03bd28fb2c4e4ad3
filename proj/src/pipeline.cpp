#include "gpdrec/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <new>
#include <set>
#include <sstream>

#include "gpdrec/errors.hpp"
#include "gpdrec/germ.hpp"
#include "gpdrec/leavitt.hpp"
#include "gpdrec/normalizer.hpp"

namespace gpdrec {

using io::Json;

namespace {

constexpr std::size_t kListLimit = 64;

Json vec_json(Vec const& v) { return Json(v); }

Vec vec_from(Json const& j, std::size_t dim, Ring const& r, std::string const& at) {
  if (!j.is_array() || j.size() != dim) throw InvalidInput(at + ": expected an array of " + std::to_string(dim) + " coefficients");
  Vec v;
  for (auto const& x : j) {
    if (!x.is_number_integer() || x.get<std::int64_t>() < 0 || x.get<std::uint64_t>() >= r.size()) throw InvalidInput(at + ": bad coefficient");
    v.push_back(Ring::Elem(x.get<std::uint64_t>()));
  }
  return v;
}

std::string join(std::vector<std::string> const& parts, std::string const& sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
  return s;
}

class Context {
 public:
  explicit Context(Request const& req) : req_(req) {
    static std::set<std::string> const known{"cap",  "seed",  "seeds", "format",         "ring",      "group",
                                             "engine", "build-groupoid", "verify-ck", "hypothesis"};
    if (!req.options.is_object()) throw InvalidInput("options: expected an object");
    for (auto const& [k, v] : req.options.items())
      if (!known.count(k)) throw InvalidInput("options: unknown option '" + k + "'");
  }

  std::size_t input_count() const { return req_.inputs.size(); }

  Json const& raw(std::size_t i) const {
    if (i >= req_.inputs.size()) throw InvalidInput("missing input file #" + std::to_string(i + 1));
    return req_.inputs[i];
  }

  io::InstanceSpec const& spec(std::size_t i = 0) {
    if (!specs_.count(i)) specs_.emplace(i, io::parse_instance(raw(i)));
    return specs_.at(i);
  }

  std::optional<std::uint64_t> opt_uint(char const* key) const {
    auto it = req_.options.find(key);
    if (it == req_.options.end()) return std::nullopt;
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0) throw InvalidInput(std::string("--") + key + ": expected a non-negative integer");
    return it->get<std::uint64_t>();
  }

  std::optional<std::string> opt_str(char const* key) const {
    auto it = req_.options.find(key);
    if (it == req_.options.end()) return std::nullopt;
    if (!it->is_string()) throw InvalidInput(std::string("--") + key + ": expected a string");
    return it->get<std::string>();
  }

  bool opt_flag(char const* key) const {
    auto it = req_.options.find(key);
    if (it == req_.options.end()) return false;
    if (!it->is_boolean()) throw InvalidInput(std::string("--") + key + ": expected a boolean");
    return it->get<bool>();
  }

  std::size_t cap() {
    if (auto c = opt_uint("cap")) return std::size_t(*c);
    if (input_count() && raw(0).is_object() && raw(0).contains("cap") && spec().cap) return *spec().cap;
    return kDefaultFiberCap;
  }

  std::uint64_t seed() {
    if (auto s = opt_uint("seed")) return *s;
    if (input_count() && raw(0).is_object() && raw(0).contains("seed") && spec().seed) return *spec().seed;
    return 1;
  }

  Ring ring() {
    if (auto r = opt_str("ring")) return io::ring_from_text(*r);
    if (input_count() && spec().ring) return *spec().ring;
    if (input_count() && spec().presentation) return spec().presentation->ring;
    throw InvalidInput("no ring given: pass --ring or add \"ring\" to the instance");
  }

  io::GradedGroupoid groupoid() {
    auto const& s = spec();
    if (s.groupoid) return *s.groupoid;
    if (s.graph) {
      auto pg = path_groupoid(*s.graph);
      return {pg.groupoid, pg.cocycle};
    }
    throw InvalidInput("the input has no groupoid (or graph)");
  }

  bool has_groupoid() { return spec().groupoid || spec().graph; }

  AlgebraPresentation presentation() {
    if (spec().presentation) return *spec().presentation;
    auto g = groupoid();
    return export_presentation(g.groupoid, g.cocycle, ring());
  }

  DirectedGraph graph() {
    auto const& s = spec();
    if (s.graph) return *s.graph;
    if (s.source.contains("groupoid") && s.source["groupoid"].is_object() && s.source["groupoid"].contains("leavitt"))
      return io::graph_from_json(s.source["groupoid"]["leavitt"], "/groupoid/leavitt");
    throw InvalidInput("the input has no graph");
  }

  Request const& request() const { return req_; }

 private:
  Request const& req_;
  std::map<std::size_t, io::InstanceSpec> specs_;
};

// Thrown by command handlers for a failed asserted property that carries a
// structured witness.
struct WitnessFailure {
  std::string message;
  Json witness;
};

Json grade_histogram(Cocycle const& c) {
  std::map<Grade, std::size_t> hist;
  for (auto g : c.grade) ++hist[g];
  Json out = Json::array();
  for (auto const& [g, n] : hist) out.push_back(Json{{"grade", c.group.format(g)}, {"arrows", n}});
  return out;
}

Json groupoid_summary(FiniteGroupoid const& g, Cocycle const& c) {
  Json j = Json::object();
  j["objects"] = g.object_count();
  j["arrows"] = g.arrow_count();
  if (g.object_count() <= kListLimit) j["object_names"] = g.object_names();
  std::vector<std::size_t> orbit_sizes, isotropy;
  for (auto const& o : g.orbits()) orbit_sizes.push_back(o.size());
  std::sort(orbit_sizes.begin(), orbit_sizes.end());
  for (FiniteGroupoid::Object x = 0; x < g.object_count(); ++x) isotropy.push_back(isotropy_group(g, x).group.order());
  j["orbit_sizes"] = orbit_sizes;
  j["isotropy_orders"] = isotropy;
  j["effective"] = is_effective(g);
  j["grading_group"] = c.group.describe();
  j["grades"] = grade_histogram(c);
  return j;
}

Json lbh_witness(AlgebraPresentation const& p, NormalizerSet const& n, LbhVerdict const& v, std::string const& text) {
  auto idx = n.find(*v.witness);
  Json w = Json::object();
  w["kind"] = "lbh";
  w["text"] = text;
  w["m"] = vec_json(*v.witness);
  w["m_prime"] = vec_json(n.primes.at(*idx));
  w["grade"] = n.grades.at(*idx).value;
  w["presentation"] = io::presentation_to_json(p);
  return w;
}

// --- commands -------------------------------------------------------------

void cmd_check_ring(Context& ctx, Json& out) {
  Ring r = ctx.ring();
  auto list = [&](std::vector<Ring::Elem> const& xs) {
    std::vector<std::string> s;
    for (std::size_t i = 0; i < xs.size() && i < kListLimit; ++i) s.push_back(r.format(xs[i]));
    return s;
  };
  out["ring"] = r.name();
  out["size"] = r.size();
  out["units"] = r.units().size();
  out["idempotents"] = list(r.idempotents());
  out["nilpotents"] = list(r.nilpotents());
  out["indecomposable"] = r.is_indecomposable();
  out["reduced"] = r.is_reduced();
  out["reduced_and_indecomposable"] = r.is_indecomposable() && r.is_reduced();
}

void cmd_units(Context& ctx, Json& out) {
  Ring r = ctx.ring();
  std::optional<FiniteGroup> g;
  if (auto s = ctx.opt_str("group")) g = io::group_from_text(*s);
  else if (ctx.input_count() && ctx.spec().group) g = ctx.spec().group;
  if (!g) throw InvalidInput("no group given: pass --group or add \"group\" to the instance");
  auto census = unit_census(r, *g, std::max<std::size_t>(ctx.cap(), kDefaultCensusCap));
  out["ring"] = r.name();
  out["group_order"] = g->order();
  out["elements"] = census.element_count;
  out["units"] = census.unit_count;
  out["trivial_units"] = census.trivial_count;
  out["nontrivial_units"] = census.nontrivial.size();
  Json sample = Json::array();
  for (std::size_t i = 0; i < census.nontrivial.size() && i < 16; ++i)
    sample.push_back(Json{{"unit", census.nontrivial[i].first.format()}, {"inverse", census.nontrivial[i].second.format()}});
  out["nontrivial_sample"] = sample;
  out["reduced"] = r.is_reduced();
  out["indecomposable"] = r.is_indecomposable();
  if (g->order() > 1) {
    if (auto w = nontrivial_unit_witness(r, *g)) {
      auto owner = w->unit.owner_ptr();
      auto one = GroupRingElem::one(owner);
      bool verified = gr_multiply(w->unit, w->inverse) == one && gr_multiply(w->inverse, w->unit) == one &&
                      !is_trivial_unit(w->unit);
      out["necessity_witness"] = Json{{"unit", w->unit.format()},
                                      {"inverse", w->inverse.format()},
                                      {"shape", w->shape == UnitWitness::Shape::decomposable ? "idempotent" : "nilpotent"},
                                      {"verified", verified}};
      if (!verified) throw PropertyFailure("units: the necessity witness is not a nontrivial unit", w->unit.format());
    }
  }
}

void cmd_groupoid_info(Context& ctx, Json& out) {
  auto gc = ctx.groupoid();
  out["groupoid"] = groupoid_summary(gc.groupoid, gc.cocycle);
  bool have_ring = ctx.opt_str("ring") || ctx.spec().ring;
  if (!have_ring) return;
  Ring r = ctx.ring();
  out["ring"] = r.name();
  auto cr = centralizer_of_diagonal(gc.groupoid, r);
  Json c = Json::object();
  c["kernel_generators"] = cr.linear.size();
  c["isotropy_arrows"] = cr.isotropy.size();
  c["equals_isotropy_span"] = cr.equal;
  if (cr.brute_size) c["exhaustive_size"] = *cr.brute_size;
  if (cr.brute_equal) c["exhaustive_agrees"] = *cr.brute_equal;
  out["centralizer"] = c;
  bool maxcomm = is_diag_maximal_commutative(gc.groupoid, r);
  out["diagonal_maximal_commutative"] = maxcomm;
  bool eff = is_effective(gc.groupoid);
  if (!cr.equal || (cr.brute_equal && !*cr.brute_equal))
    throw PropertyFailure("groupoid-info: the centralizer of the diagonal differs from the isotropy span", r.name());
  if (maxcomm != eff)
    throw PropertyFailure("groupoid-info: effectiveness and maximal commutativity of the diagonal disagree",
                          "effective=" + std::to_string(eff));
}

void cmd_bisections(Context& ctx, Json& out) {
  auto gc = ctx.groupoid();
  auto b = bisections(gc.groupoid, &gc.cocycle);
  auto const& s = b.semigroup;
  out["elements"] = s.size();
  out["idempotents"] = s.idempotents().size();
  bool meets = binary_meets_check(s);
  out["binary_meets"] = meets;
  if (s.size() <= kListLimit) {
    Json list = Json::array();
    for (InvSemigroup::Index i = 0; i < s.size(); ++i) {
      Json e{{"set", s.name(i)}};
      if (!b.sets[i].empty()) e["grade"] = gc.cocycle.group.format(gc.cocycle.grade[b.sets[i].front()]);
      list.push_back(e);
    }
    out["list"] = list;
  }
  if (!meets) throw PropertyFailure("bisections: some pair has no meet", "");
}

void cmd_normalizer(Context& ctx, Json& out) {
  auto engine = ctx.opt_str("engine").value_or("brute");
  if (engine != "brute" && engine != "generated" && engine != "both")
    throw InvalidInput("--engine: expected brute, generated or both");
  auto p = ctx.presentation();
  out["ring"] = p.ring.name();
  out["dim"] = p.dim();
  out["engine"] = engine;
  std::optional<NormalizerSet> n;
  if (engine != "generated") {
    n = compute_n_bruteforce(p, ctx.cap());
    out["n_brute"] = n->size();
  }
  if (engine != "brute") {
    if (!ctx.has_groupoid()) throw InvalidInput("--engine generated needs a groupoid input");
    auto gc = ctx.groupoid();
    auto gen = compute_n_generated(gc.groupoid, gc.cocycle, ctx.ring());
    out["n_generated"] = gen.size();
    if (n) {
      bool agree = n->elements == gen.elements && n->primes == gen.primes;
      out["engines_agree"] = agree;
      if (!agree) throw PropertyFailure("normalizer: the engines disagree", "");
    } else {
      n = std::move(gen);
    }
  }
  out["diagonal_idempotents"] = n->diagonal_idempotents.size();
  if (!p.ring.is_indecomposable()) {
    out["indecomposable"] = false;
    return;
  }
  auto q = quotient_n(*n);
  out["kernel"] = q.kernel.size();
  out["classes"] = q.quotient.semigroup.size();
  Json checks = Json::array();
  std::optional<CheckResult> failed;
  for (auto const& c : structure_checks(*n)) {
    checks.push_back(Json{{"check", c.name}, {"passed", c.passed}});
    if (!c.passed && !failed) failed = c;
  }
  out["structure_checks"] = checks;
  auto ends = basis_endpoints(p, n->diagonal_idempotents);
  if (ends.monomial) {
    auto v = lbh_check(*n);
    out["lbh"] = v.holds;
    if (!v.holds) out["lbh_witness"] = v.witness_text;
  } else {
    out["lbh"] = "undetermined: " + ends.reason;
  }
  if (failed) throw PropertyFailure("normalizer: structure check failed: " + failed->name, failed->witness);
}

void cmd_lbh(Context& ctx, Json& out) {
  auto p = ctx.presentation();
  out["ring"] = p.ring.name();
  auto n = compute_n_bruteforce(p, ctx.cap());
  auto v = lbh_check(n);
  std::string text = v.witness_text;
  std::optional<IsotropyLbhVerdict> iso;
  if (!ctx.spec().presentation && ctx.has_groupoid()) {
    auto gc = ctx.groupoid();
    if (v.witness) text = format_element(gc.groupoid, p.ring, *v.witness);
    iso = lbh_via_isotropy(gc.groupoid, gc.cocycle, p.ring);
  }
  out["normalizer"] = n.size();
  out["holds"] = v.holds;
  if (iso) {
    Json j{{"holds", iso->holds}};
    if (iso->object) {
      auto gc = ctx.groupoid();
      j["object"] = gc.groupoid.object_name(*iso->object);
      j["unit"] = iso->unit->format();
    }
    out["via_isotropy"] = j;
    out["agree"] = iso->holds == v.holds;
    if (iso->holds != v.holds)
      throw PropertyFailure("lbh: the normalizer and isotropy criteria disagree", "");
  }
  if (!v.holds) {
    throw WitnessFailure{"lbh: the local bisection hypothesis fails", lbh_witness(p, n, v, text)};
  }
}

void cmd_scramble(Context& ctx, Json& out) {
  auto seed = ctx.seed();
  out["seed"] = seed;
  AlgebraPresentation result;
  if (ctx.spec().presentation) {
    auto const& p = *ctx.spec().presentation;
    std::vector<std::uint32_t> phi(p.dim());
    for (std::uint32_t i = 0; i < p.dim(); ++i) phi[i] = i;
    auto sc = scramble(p, phi, Vec(p.dim(), p.ring.one()), seed);
    result = sc.presentation;
    out["isomorphism_verified"] = !check_isomorphism(p, sc.presentation, sc.map).has_value();
  } else {
    auto gc = ctx.groupoid();
    Ring r = ctx.ring();
    auto sc = scramble_groupoid(gc.groupoid, gc.cocycle, r, seed);
    result = sc.result.presentation;
    Json phi = Json::array();
    for (FiniteGroupoid::Arrow a = 0; a < gc.groupoid.arrow_count(); ++a)
      phi.push_back(gc.groupoid.arrow_name(a) + " -> " + gc.groupoid.arrow_name(sc.phi.arrows[a]));
    out["automorphism"] = phi;
    out["isomorphism_verified"] =
        !check_isomorphism(export_presentation(gc.groupoid, gc.cocycle, r), sc.result.presentation, sc.result.map)
             .has_value();
  }
  auto text = io::dump(io::presentation_to_json(result));
  out["dim"] = result.dim();
  out["presentation_digest"] = fnv1a_hex(text);
  if (!out["isomorphism_verified"].get<bool>()) throw PropertyFailure("scramble: the scramble map is not an isomorphism", "");
  // artifacts are attached by the caller
  out["_artifact"] = text;
}

void run_pipeline(AlgebraPresentation const& p, std::size_t cap, Json& out, PipelineResult& pr) {
  try {
    pr = full_pipeline(p, cap);
  } catch (PropertyFailure const& e) {
    auto n = compute_n_bruteforce(p, cap);
    auto v = lbh_check(n);
    if (v.holds) throw;
    out["lbh"] = false;
    out["lbh_witness"] = v.witness_text;
    throw WitnessFailure{e.what(), lbh_witness(p, n, v, v.witness_text)};
  }
  out["normalizer"] = pr.n_size;
  out["kernel"] = pr.k_size;
  out["classes"] = pr.q_size;
}

void cmd_reconstruct(Context& ctx, Json& out) {
  auto p = ctx.presentation();
  out["ring"] = p.ring.name();
  out["dim"] = p.dim();
  PipelineResult pr;
  run_pipeline(p, ctx.cap(), out, pr);
  out["groupoid"] = groupoid_summary(pr.germ.groupoid, pr.germ.cocycle);
  if (!ctx.spec().presentation && ctx.has_groupoid()) {
    auto gc = ctx.groupoid();
    bool iso = graded_iso_search(pr.germ.groupoid, pr.germ.cocycle, gc.groupoid, gc.cocycle).has_value();
    out["isomorphic_to_input"] = iso;
    if (!iso) throw PropertyFailure("reconstruct: the result is not isomorphic to the input groupoid", "");
  }
  out["_artifact"] = io::dump(io::groupoid_to_json(pr.germ.groupoid, pr.germ.cocycle));
}

void cmd_roundtrip(Context& ctx, Json& out) {
  auto gc = ctx.groupoid();
  Ring r = ctx.ring();
  auto seeds = ctx.opt_uint("seeds").value_or(5);
  if (seeds == 0 || seeds > 1000) throw InvalidInput("--seeds: expected 1..1000");
  auto first = ctx.seed();
  out["ring"] = r.name();
  out["groupoid"] = groupoid_summary(gc.groupoid, gc.cocycle);
  Json runs = Json::array();
  std::size_t passed = 0;
  for (std::uint64_t s = first; s < first + seeds; ++s) {
    Json run{{"seed", s}};
    auto sc = scramble_groupoid(gc.groupoid, gc.cocycle, r, s);
    PipelineResult pr;
    try {
      run_pipeline(sc.result.presentation, ctx.cap(), run, pr);
    } catch (...) {
      runs.push_back(run);
      out["runs"] = runs;
      throw;
    }
    auto iso = graded_iso_search(pr.germ.groupoid, pr.germ.cocycle, gc.groupoid, gc.cocycle);
    bool ok = iso && is_graded_isomorphism(pr.germ.groupoid, pr.germ.cocycle, gc.groupoid, gc.cocycle, *iso);
    run["isomorphic"] = ok;
    runs.push_back(run);
    if (ok) ++passed;
  }
  out["runs"] = runs;
  out["passed"] = passed;
  out["total"] = seeds;
  if (passed != seeds) throw PropertyFailure("roundtrip: some seeds did not reconstruct the input", "");
}

void cmd_germ(Context& ctx, Json& out) {
  auto const& s0 = ctx.spec();
  if (!s0.semigroup && (s0.groupoid || s0.graph)) {
    auto gc = ctx.groupoid();
    auto rec = reconstruct_from_bisections(gc.groupoid, gc.cocycle);
    out["semigroup"] = rec.bisections.semigroup.size();
    out["points"] = rec.action.point_count();
    out["germ"] = groupoid_summary(rec.germ.groupoid, rec.germ.cocycle);
    out["isomorphic_to_input"] = rec.found.has_value();
    out["germ_map_verified"] = rec.direct_ok;
    if (!rec.found || !rec.direct_ok)
      throw PropertyFailure("germ: the germ groupoid of the bisections is not isomorphic to the input", "");
    return;
  }
  if (!s0.semigroup) throw InvalidInput("germ: the input has no semigroup");
  auto const& s = *s0.semigroup;
  auto e = Semilattice::of_idempotents(s);
  auto sp = spectrum(e);
  out["semigroup"] = s.size();
  out["idempotents"] = e.size();
  out["characters"] = sp.spec.size();
  out["ultracharacters"] = sp.ultra.size();
  Action a;
  if (s0.action) {
    a = io::action_from_json(s, *s0.action);
    out["action"] = "given";
  } else if (ctx.input_count() > 1) {
    a = io::action_from_json(s, ctx.raw(1), "/");
    out["action"] = "given";
  } else {
    a = spectral_action(s);
    out["action"] = "spectral";
  }
  out["point_names"] = a.point_names;
  auto germ = germ_groupoid(s, a);
  out["germ"] = groupoid_summary(germ.groupoid, germ.cocycle);
  out["_artifact"] = io::dump(io::groupoid_to_json(germ.groupoid, germ.cocycle));
}

void cmd_leavitt(Context& ctx, Json& out) {
  auto g = ctx.graph();
  Ring r = ctx.ring();
  bool build = ctx.opt_flag("build-groupoid"), ck = ctx.opt_flag("verify-ck"), hyp = ctx.opt_flag("hypothesis");
  bool all = !build && !ck && !hyp;
  bool acyclic = is_acyclic(g);
  out["ring"] = r.name();
  out["vertices"] = g.vertex_count();
  out["edges"] = g.edge_count();
  out["acyclic"] = acyclic;
  if (hyp || all) {
    auto h = leavitt_hypothesis_check(g, r);
    Json cycles = Json::array();
    for (auto const& c : h.cycles) {
      std::vector<std::string> names;
      for (auto e : c.edges) names.push_back(g.edge(e).name);
      cycles.push_back(Json{{"cycle", join(names, ".")}, {"has_exit", c.has_exit}});
    }
    std::vector<std::string> periodic;
    for (auto v : h.periodic_sources) periodic.push_back(g.vertex_name(v));
    out["hypothesis"] = Json{{"condition_l", h.condition_l},
                             {"indecomposable", h.indecomposable},
                             {"reduced", h.reduced},
                             {"applies", h.applies},
                             {"cycles", cycles},
                             {"infinite_cyclic_isotropy_from", periodic}};
  }
  if ((build || ck) && !acyclic)
    throw InvalidInput("leavitt: the graph has a cycle, so its path groupoid is infinite");
  if (!acyclic) return;
  if (build || all) {
    auto pg = path_groupoid(g);
    std::map<DirectedGraph::Vertex, std::size_t> per_sink;
    for (auto const& p : pg.paths) ++per_sink[terminal(g, p)];
    std::size_t formula = 0;
    for (auto const& [w, k] : per_sink) formula += k * k;
    std::vector<std::string> paths;
    for (auto const& p : pg.paths) paths.push_back(format_path(g, p));
    Json b = groupoid_summary(pg.groupoid, pg.cocycle);
    b["boundary_paths"] = paths;
    b["arrow_formula"] = formula;
    out["path_groupoid"] = b;
    if (formula != pg.groupoid.arrow_count())
      throw PropertyFailure("leavitt: arrow count differs from the sum of squared path counts",
                            std::to_string(pg.groupoid.arrow_count()) + " != " + std::to_string(formula));
  }
  if (ck || all) {
    auto rep = verify_ck_relations(g, r);
    Json failures = Json::array();
    for (auto const& f : rep.failures) failures.push_back(Json{{"relation", f.relation}, {"instance", f.instance}});
    out["relations"] = Json{{"checked", rep.checked}, {"failures", failures}};
    if (!rep.ok())
      throw PropertyFailure("leavitt: a Cuntz-Krieger relation fails",
                            rep.failures.front().relation + " at " + rep.failures.front().instance);
  }
}

Report run_request(Request const& req);

void cmd_verify_witness(Context& ctx, Json& out) {
  Json const& doc = ctx.raw(0);
  if (!doc.is_object()) throw InvalidInput("verify-witness: expected a report or a witness object");
  Json w = doc.contains("witness") ? doc["witness"] : doc;
  if (!w.is_object() || !w.contains("kind") || !w["kind"].is_string())
    throw InvalidInput("verify-witness: no witness with a \"kind\"");
  auto kind = w["kind"].get<std::string>();
  out["kind"] = kind;
  bool confirmed = false;
  if (kind == "lbh") {
    for (auto key : {"presentation", "m", "m_prime", "grade"})
      if (!w.contains(key)) throw InvalidInput(std::string("verify-witness: missing \"") + key + "\"");
    auto p = io::presentation_from_json(w["presentation"], "/witness/presentation");
    auto m = vec_from(w["m"], p.dim(), p.ring, "/witness/m");
    auto mp = vec_from(w["m_prime"], p.dim(), p.ring, "/witness/m_prime");
    if (!w["grade"].is_number_integer()) throw InvalidInput("/witness/grade: expected an integer");
    Grade g{w["grade"].get<std::int64_t>()};
    bool pair = is_normalizer_pair(p, m, mp, g);
    auto idems = diagonal_idempotents(p, ctx.cap());
    auto ends = basis_endpoints(p, idems);
    if (!ends.monomial) throw InvalidInput("verify-witness: " + ends.reason);
    std::set<Vec> doms, rans;
    bool bis = true;
    for (std::uint32_t k = 0; k < p.dim(); ++k)
      if (m[k] != 0 && (!doms.insert(ends.dom[k]).second || !rans.insert(ends.ran[k]).second)) bis = false;
    out["normalizer_pair"] = pair;
    out["support_is_bisection"] = bis;
    confirmed = pair && !bis;
  } else if (kind == "property") {
    if (!w.contains("request") || !w.contains("message")) throw InvalidInput("verify-witness: missing request or message");
    auto sub = Request::from_json(w["request"]);
    if (sub.command == "verify-witness") throw InvalidInput("verify-witness: nested witness requests are not replayed");
    auto rep = run_request(sub);
    out["replayed_exit_code"] = int(rep.exit_code);
    out["replayed_error"] = rep.error.value_or("");
    confirmed = rep.exit_code == ExitCode::property_failed && rep.error == w["message"].get<std::string>();
  } else {
    throw InvalidInput("verify-witness: unknown witness kind '" + kind + "'");
  }
  out["confirmed"] = confirmed;
  if (!confirmed) throw PropertyFailure("verify-witness: the witness does not establish the failure", kind);
}

using Handler = void (*)(Context&, Json&);

std::vector<std::pair<std::string, Handler>> const& handlers() {
  static std::vector<std::pair<std::string, Handler>> const h{
      {"check-ring", cmd_check_ring}, {"units", cmd_units},         {"groupoid-info", cmd_groupoid_info},
      {"bisections", cmd_bisections}, {"normalizer", cmd_normalizer}, {"lbh", cmd_lbh},
      {"scramble", cmd_scramble},     {"reconstruct", cmd_reconstruct}, {"roundtrip", cmd_roundtrip},
      {"germ", cmd_germ},             {"leavitt", cmd_leavitt},     {"verify-witness", cmd_verify_witness}};
  return h;
}

std::string digest_of(Request const& req) {
  Json j = req.to_json();
  j["options"].erase("format");
  j["version"] = kVersion;
  return fnv1a_hex(j.dump());
}

Report run_request(Request const& req) {
  Report rep;
  rep.command = req.command;
  try {
    rep.digest = digest_of(req);
    auto const& hs = handlers();
    auto it = std::find_if(hs.begin(), hs.end(), [&](auto const& h) { return h.first == req.command; });
    if (it == hs.end()) throw InvalidInput("unknown command '" + req.command + "'");
    Context ctx(req);
    try {
      it->second(ctx, rep.result);
    } catch (...) {
      rep.result.erase("_artifact");
      throw;
    }
    if (rep.result.contains("_artifact")) {
      rep.artifacts[req.command == "scramble" ? "presentation" : "groupoid"] = rep.result["_artifact"].get<std::string>();
      rep.result.erase("_artifact");
    }
  } catch (WitnessFailure const& f) {
    rep.exit_code = ExitCode::property_failed;
    rep.error = f.message;
    rep.witness = f.witness;
  } catch (PropertyFailure const& e) {
    rep.exit_code = ExitCode::property_failed;
    rep.error = e.what();
    Json w{{"kind", "property"}, {"message", e.what()}, {"detail", e.witness()}, {"request", req.to_json()}};
    w["request"]["options"].erase("format");
    rep.witness = w;
  } catch (InvalidInput const& e) {
    rep.exit_code = ExitCode::invalid_input;
    rep.error = e.what();
  } catch (CapacityExceeded const& e) {
    rep.exit_code = ExitCode::capacity;
    rep.error = e.what();
  } catch (std::bad_alloc const&) {
    rep.exit_code = ExitCode::capacity;
    rep.error = "out of memory";
  } catch (std::exception const& e) {
    rep.exit_code = ExitCode::internal;
    rep.error = std::string("internal error: ") + e.what();
  }
  return rep;
}

void render_value(std::ostringstream& os, Json const& v, int indent);

std::string scalar(Json const& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

bool is_flat(Json const& v) {
  return v.is_array() && std::all_of(v.begin(), v.end(), [](Json const& x) { return !x.is_structured(); });
}

void render_object(std::ostringstream& os, Json const& obj, int indent) {
  std::string pad(std::size_t(indent), ' ');
  for (auto const& [k, v] : obj.items()) {
    if (!v.is_structured()) {
      os << pad << k << ": " << scalar(v) << "\n";
    } else if (is_flat(v)) {
      std::vector<std::string> parts;
      for (auto const& x : v) parts.push_back(scalar(x));
      os << pad << k << ": [" << join(parts, ", ") << "]\n";
    } else {
      os << pad << k << ":\n";
      render_value(os, v, indent + 2);
    }
  }
}

void render_value(std::ostringstream& os, Json const& v, int indent) {
  std::string pad(std::size_t(indent), ' ');
  if (v.is_object()) {
    render_object(os, v, indent);
  } else if (v.is_array()) {
    for (auto const& x : v) {
      if (x.is_object()) {
        std::vector<std::string> parts;
        bool flat = true;
        for (auto const& [k, y] : x.items()) {
          if (y.is_structured()) flat = false;
          parts.push_back(k + "=" + scalar(y));
        }
        if (flat) {
          os << pad << "- " << join(parts, ", ") << "\n";
          continue;
        }
        os << pad << "-\n";
        render_object(os, x, indent + 2);
      } else if (!x.is_structured()) {
        os << pad << "- " << scalar(x) << "\n";
      } else {
        os << pad << "- " << x.dump() << "\n";
      }
    }
  }
}

}  // namespace

Json Request::to_json() const {
  Json j = Json::object();
  j["command"] = command;
  j["inputs"] = inputs;
  j["options"] = options.is_object() ? options : Json::object();
  return j;
}

Request Request::from_json(Json const& j) {
  if (!j.is_object() || !j.contains("command") || !j["command"].is_string())
    throw InvalidInput("request: expected {\"command\", \"inputs\", \"options\"}");
  Request r;
  r.command = j["command"].get<std::string>();
  if (j.contains("inputs")) {
    if (!j["inputs"].is_array()) throw InvalidInput("request: inputs must be an array");
    for (auto const& x : j["inputs"]) r.inputs.push_back(x);
  }
  if (j.contains("options")) {
    if (!j["options"].is_object()) throw InvalidInput("request: options must be an object");
    r.options = j["options"];
  }
  return r;
}

Json Report::to_json() const {
  Json j = Json::object();
  j["command"] = command;
  j["version"] = kVersion;
  j["digest"] = digest;
  j["exit_code"] = int(exit_code);
  j["result"] = result;
  if (error) j["error"] = *error;
  if (witness) j["witness"] = *witness;
  return j;
}

std::string Report::render(bool machine) const {
  if (machine) return io::dump(to_json());
  std::ostringstream os;
  os << "command: " << command << "\n";
  os << "version: " << kVersion << "\n";
  os << "digest: " << digest << "\n";
  render_object(os, result, 0);
  if (error) os << "error: " << *error << "\n";
  if (witness) {
    if (witness->contains("text")) {
      os << "witness: " << (*witness)["text"].get<std::string>() << "\n";
    } else if (witness->contains("detail") && !(*witness)["detail"].get<std::string>().empty()) {
      os << "witness: " << (*witness)["detail"].get<std::string>() << "\n";
    }
    os << "witness_kind: " << (*witness)["kind"].get<std::string>() << " (full witness in --format machine)\n";
  }
  os << "exit: " << int(exit_code) << "\n";
  return os.str();
}

std::vector<std::string> const& command_names() {
  static std::vector<std::string> const names = [] {
    std::vector<std::string> n;
    for (auto const& h : handlers()) n.push_back(h.first);
    return n;
  }();
  return names;
}

std::string fnv1a_hex(std::string const& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Report run_command(Request const& request) { return run_request(request); }

}  // namespace gpdrec
