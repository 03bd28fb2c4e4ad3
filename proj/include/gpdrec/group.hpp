#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gpdrec/linalg.hpp"
#include "gpdrec/ring.hpp"

namespace gpdrec {

// Finite group given by its Cayley table; element 0 need not be the identity.
class FiniteGroup {
 public:
  using Index = std::uint32_t;

  // Validates closure, associativity, identity and inverses exhaustively.
  static FiniteGroup from_table(std::vector<std::vector<Index>> table,
                                std::vector<std::string> names = {});
  static FiniteGroup cyclic(std::uint32_t n);
  static FiniteGroup trivial() { return cyclic(1); }
  static FiniteGroup direct_product(FiniteGroup const& a, FiniteGroup const& b);

  std::size_t order() const noexcept { return table_.size(); }
  Index identity() const noexcept { return identity_; }
  Index mul(Index a, Index b) const { return table_[a][b]; }
  Index inv(Index a) const { return inverse_[a]; }
  std::string const& name(Index a) const { return names_[a]; }
  std::vector<std::vector<Index>> const& table() const noexcept { return table_; }
  bool is_abelian() const;
  // Smallest element generating the group, when cyclic.
  std::optional<Index> cyclic_generator() const;
  Index element_order(Index a) const;

  friend bool operator==(FiniteGroup const& a, FiniteGroup const& b) {
    return a.table_ == b.table_;
  }

 private:
  std::vector<std::vector<Index>> table_;
  std::vector<Index> inverse_;
  Index identity_ = 0;
  std::vector<std::string> names_;
};

// Value of a grading.  Its meaning depends on the GradingGroup: unused for
// the trivial group, an integer for Z, an element index for a finite group.
struct Grade {
  std::int64_t value = 0;
  friend auto operator<=>(Grade const&, Grade const&) = default;
};

class GradingGroup {
 public:
  enum class Kind { trivial, integers, finite };

  static GradingGroup trivial() { return GradingGroup(Kind::trivial, {}); }
  static GradingGroup integers() { return GradingGroup(Kind::integers, {}); }
  static GradingGroup finite(FiniteGroup g);

  Kind kind() const noexcept { return kind_; }
  FiniteGroup const& group() const { return *group_; }

  Grade identity() const;
  // Integer addition is overflow checked and throws CapacityExceeded.
  Grade mul(Grade a, Grade b) const;
  Grade inv(Grade a) const;
  bool valid(Grade a) const;
  std::string format(Grade a) const;
  std::string describe() const;  // "trivial", "integers", "cyclic3", "table"

  friend bool operator==(GradingGroup const& a, GradingGroup const& b);

 private:
  GradingGroup(Kind k, std::shared_ptr<FiniteGroup const> g) : kind_(k), group_(std::move(g)) {}
  Kind kind_;
  std::shared_ptr<FiniteGroup const> group_;
};

// The group ring R[G].
class GroupRing {
 public:
  GroupRing(Ring ring, FiniteGroup group) : ring_(std::move(ring)), group_(std::move(group)) {}

  Ring const& ring() const noexcept { return ring_; }
  FiniteGroup const& group() const noexcept { return group_; }
  std::size_t dim() const noexcept { return group_.order(); }

  friend bool operator==(GroupRing const& a, GroupRing const& b) {
    return a.ring_ == b.ring_ && a.group_ == b.group_;
  }

 private:
  Ring ring_;
  FiniteGroup group_;
};

// Element of R[G], stored densely (coefficient per group element).
class GroupRingElem {
 public:
  GroupRingElem(std::shared_ptr<GroupRing const> owner, Vec coeffs);
  static GroupRingElem zero(std::shared_ptr<GroupRing const> owner);
  static GroupRingElem one(std::shared_ptr<GroupRing const> owner);
  static GroupRingElem basis(std::shared_ptr<GroupRing const> owner, FiniteGroup::Index g,
                             Ring::Elem c);

  GroupRing const& owner() const noexcept { return *owner_; }
  std::shared_ptr<GroupRing const> const& owner_ptr() const noexcept { return owner_; }
  Vec const& coeffs() const noexcept { return coeffs_; }
  Ring::Elem coeff(FiniteGroup::Index g) const { return coeffs_[g]; }
  std::size_t support_size() const;
  bool is_zero() const { return support_size() == 0; }

  GroupRingElem operator+(GroupRingElem const& o) const;
  GroupRingElem operator-(GroupRingElem const& o) const;
  GroupRingElem scaled(Ring::Elem c) const;

  friend bool operator==(GroupRingElem const& a, GroupRingElem const& b) {
    return a.coeffs_ == b.coeffs_ && *a.owner_ == *b.owner_;
  }

  // "3 + 4g", using ring formatting and group element names.
  std::string format() const;

 private:
  std::shared_ptr<GroupRing const> owner_;
  Vec coeffs_;
};

// Convolution product.  Throws InvalidInput for mismatched rings or groups.
GroupRingElem gr_multiply(GroupRingElem const& a, GroupRingElem const& b);

bool is_trivial_unit(GroupRingElem const& a);

// Two-sided inverse, if any (solved exactly, then verified).
std::optional<GroupRingElem> gr_inverse(GroupRingElem const& a);

struct UnitCensus {
  std::size_t element_count = 0;
  std::size_t unit_count = 0;
  std::size_t trivial_count = 0;
  // (unit, inverse), sorted by coefficient vector.
  std::vector<std::pair<GroupRingElem, GroupRingElem>> nontrivial;
};

constexpr std::size_t kDefaultCensusCap = 10'000'000;

// Exhaustive unit census of R[G]; CapacityExceeded when |R|^|G| > cap.
UnitCensus unit_census(Ring const& ring, FiniteGroup const& group,
                       std::size_t cap = kDefaultCensusCap);

struct UnitWitness {
  GroupRingElem unit;
  GroupRingElem inverse;
  enum class Shape { decomposable, nilpotent } shape;
};

// e + (1-e)h for a nontrivial idempotent e, else 1 - n h for a nonzero
// nilpotent n, else nullopt.  h is the first non-identity group element.
// InvalidInput for the trivial group.
std::optional<UnitWitness> nontrivial_unit_witness(Ring const& ring, FiniteGroup const& group);

}  // namespace gpdrec
