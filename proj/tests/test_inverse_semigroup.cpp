#include <algorithm>
#include <set>

#include "doctest.h"
#include "gpdrec/errors.hpp"
#include "gpdrec/groupoid.hpp"
#include "gpdrec/inverse_semigroup.hpp"
#include "gpdrec/leavitt.hpp"
#include "gpdrec/normalizer.hpp"
#include "support.hpp"

using namespace gpdrec;
using Index = InvSemigroup::Index;

namespace {

// C2 with an adjoined zero: 0 = zero, 1 = identity, 2 = g.
InvSemigroup c2_with_zero() {
  return InvSemigroup::from_table({{0, 0, 0}, {0, 1, 2}, {0, 2, 1}}, Index(0), {"0", "1", "g"});
}

struct PairFixture {
  FiniteGroupoid g = FiniteGroupoid::pair_groupoid(2);
  BisectionSemigroup b = bisections(g);
  Index of(std::vector<FiniteGroupoid::Arrow> s) const { return b.index.at(s); }
  // arrows: 0 = id0, 1 = 0->1, 2 = 1->0, 3 = id1
};

// Uniqueness of inverses, checked from the table alone.
bool unique_inverses(InvSemigroup const& s) {
  for (Index a = 0; a < s.size(); ++a) {
    std::size_t count = 0;
    for (Index b = 0; b < s.size(); ++b)
      if (s.mul(s.mul(a, b), a) == a && s.mul(s.mul(b, a), b) == b) ++count;
    if (count != 1) return false;
  }
  return true;
}

std::vector<InvSemigroup> corpus_semigroups() {
  std::vector<InvSemigroup> out;
  for (auto const& f : testing::groupoid_files()) {
    auto gg = testing::load_groupoid(f);
    out.push_back(bisections(gg.groupoid).semigroup);
    out.push_back(bisections(gg.groupoid, &gg.cocycle).semigroup);
  }
  out.push_back(c2_with_zero());
  out.push_back(*testing::load("i2.json").semigroup);
  return out;
}

}  // namespace

TEST_CASE("natural order examples") {
  PairFixture f;
  auto e = f.of({0});
  CHECK(f.b.semigroup.natural_leq(e, e));
  CHECK(f.b.semigroup.natural_leq(f.of({0}), f.of({0, 3})));
  CHECK_FALSE(f.b.semigroup.natural_leq(f.of({0, 3}), f.of({0})));
  for (Index s = 0; s < f.b.semigroup.size(); ++s) CHECK(f.b.semigroup.natural_leq(0, s));
}

TEST_CASE("compatibility and joins") {
  PairFixture f;
  auto const& s = f.b.semigroup;
  for (Index a = 0; a < s.size(); ++a) {
    CHECK(s.is_compatible(a, a));
    CHECK(s.join(a, a) == a);
    CHECK(s.join(0, a) == a);
  }
  // {id0} and {1->0}: domains 0 and 1, ranges 0 and 0; not a bisection.
  CHECK_FALSE(s.is_compatible(f.of({0}), f.of({2})));
  // {id0} and {id1}
  CHECK(s.is_compatible(f.of({0}), f.of({3})));
  CHECK(s.join(f.of({0}), f.of({3})) == f.of({0, 3}));
  CHECK(s.join(f.of({1}), f.of({2})) == f.of({1, 2}));
  CHECK_THROWS_AS(s.join(f.of({0}), f.of({2})), InvalidInput);
  CHECK(s.meet(f.of({0, 3}), f.of({0})) == f.of({0}));
}

TEST_CASE("congruence from a kernel") {
  auto s = c2_with_zero();
  auto c = congruence_from_kernel(s, {0, 1, 2});
  CHECK(c.classes == std::vector<std::vector<Index>>{{0}, {1, 2}});
  auto q = quotient(s, c);
  CHECK(q.semigroup.size() == 2);
  CHECK(q.semigroup.idempotents().size() == 2);

  auto eq = congruence_from_kernel(s, s.idempotents());
  CHECK(eq.classes.size() == s.size());
  CHECK(quotient(s, eq).semigroup.size() == s.size());

  // Not full.
  CHECK_THROWS_AS(congruence_from_kernel(s, {0, 2}), InvalidInput);
  // Not normal: {id0, id1, 0->1 ...} fails a*a = aa* or normality in Γc(pair2).
  PairFixture f;
  auto k = f.b.semigroup.idempotents();
  k.push_back(f.of({1}));
  CHECK_THROWS_AS(congruence_from_kernel(f.b.semigroup, k), InvalidInput);
}

TEST_CASE("congruence on the normalizer of C2 over Z/2") {
  auto g = FiniteGroupoid::group_as_groupoid(FiniteGroup::cyclic(2));
  auto p = export_presentation(g, Cocycle::trivial(g), Ring::modular(2));
  auto n = compute_n_bruteforce(p);
  auto q = quotient_n(n);
  CHECK(n.size() == 3);
  CHECK(q.kernel.size() == 2);
  CHECK(q.congruence.classes.size() == 3);
}

TEST_CASE("partial homomorphism examples") {
  PairFixture f;
  auto const& s = f.b.semigroup;
  std::vector<Grade> trivial(s.size());
  CHECK(check_partial_hom(s, GradingGroup::trivial(), trivial));

  auto pg = path_groupoid(testing::load_graph("graph_a2.json"));
  auto bh = bisections(pg.groupoid, &pg.cocycle);
  // Homogeneous subsets of all bisections; the cross pair {(e,1,w), (w,-1,e)}
  // mixes grades 1 and -1.
  std::size_t homogeneous = 0;
  for (auto const& u : testing::oracle_bisections(pg.groupoid)) {
    std::set<std::int64_t> gs;
    for (auto a : u) gs.insert(pg.cocycle.grade[a].value);
    if (gs.size() <= 1) ++homogeneous;
  }
  CHECK(homogeneous == 6);
  CHECK(bh.semigroup.size() == homogeneous);
  REQUIRE(bh.semigroup.grading());
  auto const& theta = bh.semigroup.grading()->theta;
  CHECK(check_partial_hom(bh.semigroup, GradingGroup::integers(), theta));
  std::set<std::int64_t> grades;
  for (Index i = 1; i < bh.semigroup.size(); ++i) grades.insert(theta[i].value);
  CHECK(grades == std::set<std::int64_t>{-1, 0, 1});

  auto bad = theta;
  bad[bh.semigroup.idempotents().back()] = Grade{1};
  CHECK_FALSE(check_partial_hom(bh.semigroup, GradingGroup::integers(), bad));
}

TEST_CASE("invalid tables are rejected") {
  // Not associative.
  CHECK_THROWS_AS(InvSemigroup::from_table({{0, 2, 1}, {1, 0, 2}, {2, 1, 0}}), InvalidInput);
  // Left-zero band: associative, but idempotents do not commute.
  CHECK_THROWS_AS(InvSemigroup::from_table({{0, 0}, {1, 1}}), InvalidInput);
  // Claimed zero that is not absorbing.
  CHECK_THROWS_AS(InvSemigroup::from_table({{0, 0, 0}, {0, 1, 2}, {0, 2, 1}}, Index(1)), InvalidInput);
}

TEST_CASE("inverse semigroup invariants on every constructed semigroup") {
  for (auto const& s : corpus_semigroups()) {
    CAPTURE(s.size());
    CHECK(unique_inverses(s));
    for (Index a = 0; a < s.size(); ++a) {
      CHECK(s.mul(s.mul(a, s.star(a)), a) == a);
      CHECK(s.mul(s.mul(s.star(a), a), s.star(a)) == s.star(a));
    }
    for (auto e : s.idempotents())
      for (auto f : s.idempotents()) CHECK(s.mul(e, f) == s.mul(f, e));
    if (s.zero())
      for (Index a = 0; a < s.size(); ++a) {
        CHECK(s.mul(*s.zero(), a) == *s.zero());
        CHECK(s.mul(a, *s.zero()) == *s.zero());
      }
  }
}

TEST_CASE("homogeneous bisections are a full order ideal of all bisections") {
  for (auto const& f : testing::groupoid_files()) {
    CAPTURE(f);
    auto gg = testing::load_groupoid(f);
    auto all = bisections(gg.groupoid);
    auto hom = bisections(gg.groupoid, &gg.cocycle);
    std::vector<Index> t;
    for (auto const& set : hom.sets) t.push_back(all.index.at(set));
    std::sort(t.begin(), t.end());
    CHECK(all.semigroup.is_inverse_subsemigroup(t));
    CHECK(all.semigroup.is_full(t));
    CHECK(all.semigroup.is_order_ideal(t));
    // Joins computed inside T, when they exist, agree with joins in S.
    auto sub = all.semigroup.subsemigroup(t);
    for (Index a = 0; a < sub.semigroup.size(); ++a)
      for (Index b = 0; b < sub.semigroup.size(); ++b) {
        if (!sub.semigroup.is_compatible(a, b)) continue;
        auto jt = sub.semigroup.join(a, b);
        if (jt) CHECK(sub.embedding[*jt] == all.semigroup.join(sub.embedding[a], sub.embedding[b]));
      }
  }
}

TEST_CASE("kernel congruences are idempotent separating with the given kernel") {
  for (auto [file, mod] : {std::pair{"c2.json", 2u}, {"c2.json", 3u}, {"c2.json", 4u}, {"pair2.json", 2u},
                           {"pair2.json", 4u}, {"bundle_c2_c2.json", 2u}, {"c2_graded.json", 4u}}) {
    CAPTURE(file);
    CAPTURE(mod);
    auto gg = testing::load_groupoid(file);
    auto p = export_presentation(gg.groupoid, gg.cocycle, Ring::modular(mod));
    auto nq = quotient_n(compute_n_bruteforce(p));
    auto const& s = nq.semigroup;
    CHECK(is_congruence(s, nq.congruence));
    auto k = congruence_kernel(s, nq.congruence);
    CHECK(k == nq.kernel);
    std::set<std::uint32_t> idem_classes;
    for (auto e : s.idempotents()) idem_classes.insert(nq.congruence.class_of[e]);
    CHECK(idem_classes.size() == s.idempotents().size());
    for (Index a = 0; a < s.size(); ++a) CHECK(nq.quotient.projection[s.star(a)] ==
                                               nq.quotient.semigroup.star(nq.quotient.projection[a]));
  }
}

TEST_CASE("closure builder") {
  // Partial bijections of {0, 1} encoded as pairs (image of 0, image of 1), 2 = undefined.
  using PB = std::pair<int, int>;
  auto mul = [](PB a, PB b) {
    auto at = [](PB p, int x) { return x == 2 ? 2 : (x == 0 ? p.first : p.second); };
    return PB{at(a, at(b, 0)), at(a, at(b, 1))};
  };
  auto star = [](PB a) {
    PB r{2, 2};
    if (a.first != 2) (a.first == 0 ? r.first : r.second) = 0;
    if (a.second != 2) (a.second == 0 ? r.first : r.second) = 1;
    return r;
  };
  auto c = generate_closure<PB>({{1, 2}, {1, 0}}, mul, star, PB{2, 2});
  CHECK(c.semigroup.size() == 7);
  CHECK(c.semigroup.idempotents().size() == 4);
}
