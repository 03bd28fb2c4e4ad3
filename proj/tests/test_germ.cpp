#include <algorithm>
#include <set>

#include "doctest.h"
#include "gpdrec/errors.hpp"
#include "gpdrec/germ.hpp"
#include "gpdrec/io.hpp"
#include "gpdrec/leavitt.hpp"
#include "gpdrec/normalizer.hpp"
#include "support.hpp"

using namespace gpdrec;
using Index = InvSemigroup::Index;

namespace {

// Boolean algebra of subsets of {0..k-1}, elements as bitmasks, zero = 0.
Semilattice boolean_algebra(std::uint32_t k) {
  std::uint32_t n = 1u << k;
  std::vector<std::vector<std::uint32_t>> meet(n, std::vector<std::uint32_t>(n));
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) meet[a][b] = a & b;
  return Semilattice::from_table(meet, 0u);
}

// Chain 0 < 1 < ... < n-1 with zero 0.
Semilattice chain(std::uint32_t n) {
  std::vector<std::vector<std::uint32_t>> meet(n, std::vector<std::uint32_t>(n));
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) meet[a][b] = std::min(a, b);
  return Semilattice::from_table(meet, 0u);
}

// All characters by enumerating every 0/1 assignment.
std::set<Character> oracle_characters(Semilattice const& e) {
  std::set<Character> out;
  std::size_t n = e.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
    Character t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = std::uint8_t(mask >> i & 1);
    if (e.zero && t[*e.zero]) continue;
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a)
      for (std::size_t b = 0; b < n && ok; ++b) ok = t[e.meet[a][b]] == (t[a] & t[b]);
    if (ok) out.insert(t);
  }
  return out;
}

std::set<Character> oracle_ultra(std::set<Character> const& chars) {
  std::set<Character> out;
  for (auto const& t : chars) {
    bool maximal = true;
    for (auto const& u : chars) {
      if (u == t) continue;
      bool above = true;
      for (std::size_t i = 0; i < t.size(); ++i) above = above && t[i] <= u[i];
      if (above) maximal = false;
    }
    if (maximal) out.insert(t);
  }
  return out;
}

void check_spectrum(Semilattice const& e) {
  auto sp = spectrum(e);
  auto chars = oracle_characters(e);
  CHECK(std::set<Character>(sp.spec.begin(), sp.spec.end()) == chars);
  CHECK(sp.spec.size() == chars.size());
  std::set<Character> ultra;
  for (auto i : sp.ultra) ultra.insert(sp.spec[i]);
  CHECK(ultra == oracle_ultra(chars));
}

InvSemigroup c2_with_zero() {
  return InvSemigroup::from_table({{0, 0, 0}, {0, 1, 2}, {0, 2, 1}}, Index(0), {"0", "1", "g"});
}

bool iso(FiniteGroupoid const& a, Cocycle const& ca, FiniteGroupoid const& b, Cocycle const& cb) {
  return graded_iso_search(a, ca, b, cb).has_value();
}

}  // namespace

TEST_CASE("spectrum examples") {
  auto b2 = spectrum(boolean_algebra(2));
  CHECK(b2.spec.size() == 3);
  CHECK(b2.ultra.size() == 2);
  auto c = spectrum(chain(2));
  CHECK(c.spec.size() == 1);
  CHECK(c.ultra.size() == 1);
  auto p2 = bisections(FiniteGroupoid::pair_groupoid(2));
  std::vector<Index> emb;
  auto e = Semilattice::of_idempotents(p2.semigroup, &emb);
  auto sp = spectrum(e);
  REQUIRE(sp.ultra.size() == 2);
  // tau_x(U) = chi_U(x): each ultracharacter is the set of unit bisections containing one object.
  for (auto i : sp.ultra) {
    std::set<std::uint32_t> objects;
    for (std::size_t k = 0; k < e.size(); ++k)
      if (sp.spec[i][k])
        for (auto a : p2.sets[emb[k]]) objects.insert(a);
    std::size_t hits = 0;
    for (auto obj : {0u, 3u}) {
      bool all = true;
      for (std::size_t k = 0; k < e.size(); ++k) {
        auto const& set = p2.sets[emb[k]];
        bool in = std::find(set.begin(), set.end(), obj) != set.end();
        all = all && bool(sp.spec[i][k]) == in;
      }
      hits += all;
    }
    CHECK(hits == 1);
  }
}

TEST_CASE("spectrum agrees with exhaustive character enumeration") {
  for (std::uint32_t k = 1; k <= 3; ++k) check_spectrum(boolean_algebra(k));
  for (std::uint32_t n = 1; n <= 5; ++n) check_spectrum(chain(n));
  for (auto const& file : testing::groupoid_files()) {
    CAPTURE(file);
    auto gg = testing::load_groupoid(file);
    check_spectrum(Semilattice::of_idempotents(bisections(gg.groupoid, &gg.cocycle).semigroup));
  }
  check_spectrum(Semilattice::of_idempotents(*testing::load("i2.json").semigroup));
  // A semilattice without zero: the diamond plus a bottom that is not declared zero.
  check_spectrum(Semilattice::from_table({{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 0, 2, 2}, {0, 1, 2, 3}}));
  CHECK_THROWS_AS(Semilattice::from_table({{0, 1}, {0, 1}}), InvalidInput);
}

TEST_CASE("spectral action examples") {
  auto p2 = bisections(FiniteGroupoid::pair_groupoid(2));
  auto sub = p2.semigroup.subsemigroup(p2.semigroup.idempotents());
  auto a = spectral_action(sub.semigroup);
  for (Index s = 0; s < sub.semigroup.size(); ++s)
    for (std::size_t x = 0; x < a.point_count(); ++x) CHECK((a.map[s][x] == -1 || a.map[s][x] == std::int64_t(x)));

  auto full = spectral_action(p2.semigroup);
  CHECK(full.point_count() == 2);
  auto cross = p2.index.at({1});  // 0 -> 1
  std::size_t defined = 0;
  for (std::size_t x = 0; x < 2; ++x)
    if (full.map[cross][x] >= 0) {
      ++defined;
      CHECK(full.map[cross][x] != std::int64_t(x));
    }
  CHECK(defined == 1);
  CHECK_NOTHROW(verify_action(p2.semigroup, full));

  auto c = spectral_action(c2_with_zero());
  CHECK(c.point_count() == 1);
  CHECK(c.map[2][0] == 0);
}

TEST_CASE("germ groupoid examples") {
  auto p2 = bisections(FiniteGroupoid::pair_groupoid(2));
  auto sub = p2.semigroup.subsemigroup(p2.semigroup.idempotents());
  auto ge = germ_groupoid(sub.semigroup, spectral_action(sub.semigroup));
  CHECK(ge.groupoid.arrow_count() == 2);
  CHECK(ge.groupoid.object_count() == 2);

  auto gp = germ_groupoid(p2.semigroup, spectral_action(p2.semigroup));
  CHECK(gp.groupoid.arrow_count() == 4);
  auto pair2 = FiniteGroupoid::pair_groupoid(2);
  CHECK(iso(gp.groupoid, gp.cocycle, pair2, Cocycle::trivial(pair2)));

  auto pg = path_groupoid(testing::load_graph("graph_a2.json"));
  auto bh = bisections(pg.groupoid, &pg.cocycle);
  auto gl = germ_groupoid(bh.semigroup, spectral_action(bh.semigroup));
  CHECK(gl.groupoid.arrow_count() == 4);
  std::multiset<std::int64_t> grades;
  for (auto g : gl.cocycle.grade) grades.insert(g.value);
  CHECK(grades == std::multiset<std::int64_t>{-1, 0, 0, 1});
  CHECK(iso(gl.groupoid, gl.cocycle, pg.groupoid, pg.cocycle));

  auto i2 = testing::load("i2.json");
  auto act = io::action_from_json(*i2.semigroup, io::parse_text(testing::read_file(testing::corpus_path("i2_action.json")), "a"));
  auto gi = germ_groupoid(*i2.semigroup, act);
  CHECK(iso(gi.groupoid, gi.cocycle, pair2, Cocycle::trivial(pair2)));
}

TEST_CASE("germ grading is well defined") {
  for (auto const& file : testing::groupoid_files()) {
    CAPTURE(file);
    auto gg = testing::load_groupoid(file);
    auto bh = bisections(gg.groupoid, &gg.cocycle);
    auto const& s = bh.semigroup;
    auto a = spectral_action(s);
    auto germ = germ_groupoid(s, a);
    auto const& theta = s.grading()->theta;
    for (Index x = 0; x < s.size(); ++x)
      for (Index y = 0; y < s.size(); ++y)
        for (std::size_t p = 0; p < a.point_count(); ++p) {
          auto gx = germ.arrow_of[x][p], gy = germ.arrow_of[y][p];
          if (gx >= 0 && gx == gy) CHECK(theta[x] == theta[y]);
          if (gx >= 0) CHECK(germ.cocycle.grade[gx] == theta[x]);
        }
  }
}

TEST_CASE("cofinality") {
  auto g = FiniteGroupoid::pair_groupoid(2);
  auto b = bisections(g);
  auto a = spectral_action(b.semigroup);
  std::vector<Index> all(b.semigroup.size());
  for (Index i = 0; i < all.size(); ++i) all[i] = i;
  CHECK(cofinal_check(b.semigroup, all, a).cofinal);
  CHECK_FALSE(cofinal_check(b.semigroup, b.semigroup.idempotents(), a).cofinal);
  CHECK_THROWS_AS(cofinal_check(b.semigroup, {0, 1}, a), InvalidInput);

  for (auto const& file : testing::groupoid_files()) {
    CAPTURE(file);
    auto gg = testing::load_groupoid(file);
    auto full = bisections(gg.groupoid);
    auto hom = bisections(gg.groupoid, &gg.cocycle);
    std::vector<Index> t;
    for (auto const& set : hom.sets) t.push_back(full.index.at(set));
    std::sort(t.begin(), t.end());
    auto rep = cofinal_check(full.semigroup, t, spectral_action(full.semigroup));
    CHECK(rep.cofinal);
    CHECK(rep.isomorphic == std::optional<bool>(true));
  }
}

TEST_CASE("reconstruction from bisections over the corpus") {
  for (auto const& file : testing::groupoid_files()) {
    CAPTURE(file);
    auto gg = testing::load_groupoid(file);
    auto rec = reconstruct_from_bisections(gg.groupoid, gg.cocycle);
    REQUIRE(rec.found);
    CHECK(is_graded_isomorphism(rec.germ.groupoid, rec.germ.cocycle, gg.groupoid, gg.cocycle, *rec.found));
    CHECK(rec.direct_ok);
    CHECK(is_graded_isomorphism(gg.groupoid, gg.cocycle, rec.germ.groupoid, rec.germ.cocycle, rec.direct));
  }
  for (auto const& file : testing::acyclic_graph_files()) {
    CAPTURE(file);
    auto pg = path_groupoid(testing::load_graph(file));
    auto rec = reconstruct_from_bisections(pg.groupoid, pg.cocycle);
    CHECK(rec.found);
    CHECK(rec.direct_ok);
  }
}

TEST_CASE("full pipeline examples") {
  auto pair2 = FiniteGroupoid::pair_groupoid(2);
  auto t = Cocycle::trivial(pair2);
  std::vector<GermGroupoid> outs;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto s = scramble_groupoid(pair2, t, Ring::modular(2), seed);
    auto out = full_pipeline(s.result.presentation);
    CHECK(out.n_size == 7);
    CHECK(out.q_size == 7);
    CHECK(iso(out.germ.groupoid, out.germ.cocycle, pair2, t));
    outs.push_back(out.germ);
  }
  for (auto const& a : outs)
    for (auto const& b : outs) CHECK(iso(a.groupoid, a.cocycle, b.groupoid, b.cocycle));

  auto bundle = testing::load_groupoid("bundle_c2_c2.json");
  auto sb = scramble_groupoid(bundle.groupoid, bundle.cocycle, Ring::modular(2), 3);
  auto ob = full_pipeline(sb.result.presentation);
  CHECK(iso(ob.germ.groupoid, ob.germ.cocycle, bundle.groupoid, bundle.cocycle));

  auto c2 = testing::load_groupoid("c2.json");
  auto p = export_presentation(c2.groupoid, c2.cocycle, Ring::modular(4));
  CHECK_THROWS_AS(full_pipeline(p), PropertyFailure);
  try {
    full_pipeline(p);
  } catch (PropertyFailure const& e) {
    CHECK(e.witness().find("2") != std::string::npos);
  }
  CHECK_THROWS_AS(full_pipeline(export_presentation(c2.groupoid, c2.cocycle, Ring::modular(6))), InvalidInput);
}
