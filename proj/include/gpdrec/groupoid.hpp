#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gpdrec/group.hpp"
#include "gpdrec/inverse_semigroup.hpp"

namespace gpdrec {

// Finite groupoid with the discrete topology.  Every finite Hausdorff space
// is discrete, so every subset of arrows is open and compact: such a
// groupoid is automatically ample and Hausdorff, its isotropy interior is
// the whole isotropy bundle, and every object is an isolated point.
//
// Composition follows the functional convention: compose(a, b) = "a after
// b" is defined iff dom(a) == cod(b).
class FiniteGroupoid {
 public:
  using Object = std::uint32_t;
  using Arrow = std::uint32_t;
  static constexpr Arrow kNone = 0xffffffffu;

  struct ArrowSpec {
    Object dom;
    Object cod;
    std::string name;
  };

  // compose_table[a][b] is the index of a∘b, or kNone; entries for
  // non-composable pairs are ignored.  All groupoid axioms are checked
  // exhaustively and violations raise InvalidInput with the witness.
  static FiniteGroupoid from_parts(std::vector<std::string> objects, std::vector<ArrowSpec> arrows,
                                   std::vector<std::vector<Arrow>> const& compose_table);

  static FiniteGroupoid pair_groupoid(std::uint32_t n);
  static FiniteGroupoid unit_groupoid(std::uint32_t n);
  static FiniteGroupoid group_as_groupoid(FiniteGroup const& g);
  static FiniteGroupoid group_bundle(std::vector<FiniteGroup> const& groups);
  static FiniteGroupoid disjoint_union(FiniteGroupoid const& a, FiniteGroupoid const& b);
  static FiniteGroupoid product(FiniteGroupoid const& a, FiniteGroupoid const& b);

  std::size_t object_count() const noexcept { return objects_.size(); }
  std::size_t arrow_count() const noexcept { return arrows_.size(); }
  Object dom(Arrow a) const { return arrows_[a].dom; }
  Object cod(Arrow a) const { return arrows_[a].cod; }
  Arrow compose(Arrow a, Arrow b) const { return compose_[a][b]; }
  Arrow inv(Arrow a) const { return inverse_[a]; }
  Arrow unit(Object x) const { return units_[x]; }
  bool is_unit(Arrow a) const { return units_[arrows_[a].dom] == a; }
  std::string const& object_name(Object x) const { return objects_[x]; }
  std::string const& arrow_name(Arrow a) const { return arrows_[a].name; }
  std::vector<std::string> const& object_names() const noexcept { return objects_; }
  std::vector<ArrowSpec> const& arrows() const noexcept { return arrows_; }
  // All (a, b) with dom(a) == cod(b).
  std::vector<std::pair<Arrow, Arrow>> const& composable_pairs() const noexcept { return pairs_; }

  // Connected components as sorted object lists, ordered by least object.
  std::vector<std::vector<Object>> orbits() const;

 private:
  std::vector<std::string> objects_;
  std::vector<ArrowSpec> arrows_;
  std::vector<std::vector<Arrow>> compose_;
  std::vector<Arrow> inverse_;
  std::vector<Arrow> units_;
  std::vector<std::pair<Arrow, Arrow>> pairs_;
};

// Groupoid homomorphism into a grading group.
struct Cocycle {
  GradingGroup group = GradingGroup::trivial();
  std::vector<Grade> grade;  // per arrow

  static Cocycle trivial(FiniteGroupoid const& g);
};

// Checks grade(unit) = 1, grade(a∘b) = grade(a) grade(b), grade(a^-1) =
// grade(a)^-1; InvalidInput naming the failing arrows otherwise.
void validate_cocycle(FiniteGroupoid const& g, Cocycle const& c);

// A subgroupoid together with its arrow embedding into the parent.
struct Subgroupoid {
  FiniteGroupoid groupoid;
  std::vector<FiniteGroupoid::Object> objects;  // sub object -> parent object
  std::vector<FiniteGroupoid::Arrow> arrows;    // sub arrow -> parent arrow
};

struct IsotropyGroup {
  FiniteGroup group;
  std::vector<FiniteGroupoid::Arrow> arrows;  // group element -> arrow
};

IsotropyGroup isotropy_group(FiniteGroupoid const& g, FiniteGroupoid::Object x);

// The interior of the isotropy bundle, which for a discrete groupoid is the
// bundle itself, as a wide subgroupoid.
Subgroupoid isotropy_interior(FiniteGroupoid const& g);

bool is_effective(FiniteGroupoid const& g);

// Wide subgroupoid of arrows whose grade is the identity.
Subgroupoid grade_identity_component(FiniteGroupoid const& g, Cocycle const& c);

// Full subgroupoid on an object set closed under the orbit relation;
// InvalidInput if the set is not invariant.
Subgroupoid restrict_to_objects(FiniteGroupoid const& g,
                                std::vector<FiniteGroupoid::Object> const& objects);

bool is_local_bisection(FiniteGroupoid const& g, std::vector<FiniteGroupoid::Arrow> const& arrows);

// Inverse semigroup of (homogeneous) local bisections.  Index 0 is the empty
// bisection (the zero); the rest are ordered by size, then lexicographically.
struct BisectionSemigroup {
  InvSemigroup semigroup;
  std::vector<std::vector<FiniteGroupoid::Arrow>> sets;
  std::map<std::vector<FiniteGroupoid::Arrow>, InvSemigroup::Index> index;
};

// Fibers with more than this many arrows are rejected.
constexpr std::size_t kMaxFiberArrows = 16;

// With a cocycle only homogeneous bisections are kept and the result is
// graded; without one, the result is the full (trivially graded) Γc.
BisectionSemigroup bisections(FiniteGroupoid const& g, Cocycle const* c = nullptr);

std::vector<FiniteGroupoid::Arrow> bisection_product(FiniteGroupoid const& g,
                                                     std::vector<FiniteGroupoid::Arrow> const& u,
                                                     std::vector<FiniteGroupoid::Arrow> const& v);

struct GroupoidIso {
  std::vector<FiniteGroupoid::Object> objects;  // G1 object -> G2 object
  std::vector<FiniteGroupoid::Arrow> arrows;    // G1 arrow -> G2 arrow
};

constexpr std::size_t kDefaultIsoNodeCap = 5'000'000;

// Exhaustive search for a grade-preserving groupoid isomorphism G1 -> G2.
// Returns nullopt when none exists; throws CapacityExceeded (inconclusive)
// when the node budget runs out.  With `rng`, candidate orders are shuffled
// so that the first isomorphism found is a random one.
std::optional<GroupoidIso> graded_iso_search(FiniteGroupoid const& g1, Cocycle const& c1,
                                             FiniteGroupoid const& g2, Cocycle const& c2,
                                             std::size_t node_cap = kDefaultIsoNodeCap,
                                             std::mt19937_64* rng = nullptr);

// Verifies that `iso` is a bijective, grade-preserving functor.
bool is_graded_isomorphism(FiniteGroupoid const& g1, Cocycle const& c1, FiniteGroupoid const& g2,
                           Cocycle const& c2, GroupoidIso const& iso);

// Every pair of elements has a greatest lower bound.
bool binary_meets_check(InvSemigroup const& s);

}  // namespace gpdrec
