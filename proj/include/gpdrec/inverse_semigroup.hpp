#pragma once

#include <cstdint>
#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gpdrec/errors.hpp"
#include "gpdrec/group.hpp"

namespace gpdrec {

// A grading of an inverse semigroup: grades of the nonzero elements.  The
// entry at the zero element (if any) is ignored.
struct SemigroupGrading {
  GradingGroup group;
  std::vector<Grade> theta;
};

// Finite inverse semigroup stored by its full multiplication table.
class InvSemigroup {
 public:
  using Index = std::uint32_t;
  static constexpr std::size_t kMaxSize = 2000;

  // Validates associativity, unique inverses, commuting idempotents and the
  // zero exhaustively.  The involution is derived from the table.
  static InvSemigroup from_table(std::vector<std::vector<Index>> table,
                                 std::optional<Index> zero = std::nullopt,
                                 std::vector<std::string> names = {});

  std::size_t size() const noexcept { return table_.size(); }
  Index mul(Index a, Index b) const { return table_[a][b]; }
  Index star(Index a) const { return star_[a]; }
  std::optional<Index> zero() const noexcept { return zero_; }
  bool is_zero(Index a) const { return zero_ && *zero_ == a; }
  std::string const& name(Index a) const { return names_[a]; }
  std::vector<std::vector<Index>> const& table() const noexcept { return table_; }

  bool is_idempotent(Index a) const { return mul(a, a) == a; }
  std::vector<Index> const& idempotents() const noexcept { return idempotents_; }

  // s <= t iff s = t e for some idempotent e.
  bool natural_leq(Index s, Index t) const;
  // s t* and t* s both idempotent.
  bool is_compatible(Index s, Index t) const;
  // Least upper bound; InvalidInput if the pair is incompatible.
  std::optional<Index> join(Index s, Index t) const;
  // Greatest lower bound, when it exists.
  std::optional<Index> meet(Index s, Index t) const;

  std::optional<SemigroupGrading> const& grading() const noexcept { return grading_; }
  // Attaches a grading after checking it is a partial homomorphism.
  void set_grading(SemigroupGrading g);

  // Subset predicates (subsets as sorted index lists).
  bool is_inverse_subsemigroup(std::vector<Index> const& subset) const;
  bool is_full(std::vector<Index> const& subset) const;
  bool is_normal(std::vector<Index> const& subset) const;
  bool is_order_ideal(std::vector<Index> const& subset) const;

  struct Sub;
  // Restriction to an inverse subsemigroup; grading is inherited.
  Sub subsemigroup(std::vector<Index> const& subset) const;

 private:
  std::vector<std::vector<Index>> table_;
  std::vector<Index> star_;
  std::optional<Index> zero_;
  std::vector<std::string> names_;
  std::vector<Index> idempotents_;
  std::optional<SemigroupGrading> grading_;
};

struct InvSemigroup::Sub {
  InvSemigroup semigroup;
  std::vector<Index> embedding;  // sub index -> parent index
};

struct Congruence {
  std::vector<std::uint32_t> class_of;
  std::vector<std::vector<InvSemigroup::Index>> classes;  // ordered by least member
};

// s ~ t iff s*s = t*t and s t* in K.  K must be a full normal inverse
// subsemigroup with a*a = a a* on K; violations raise InvalidInput naming
// the failing element.  The result is verified to be an idempotent
// separating congruence whose kernel is K.
Congruence congruence_from_kernel(InvSemigroup const& s, std::vector<InvSemigroup::Index> kernel);

// Kernel of a congruence: the union of classes containing an idempotent.
std::vector<InvSemigroup::Index> congruence_kernel(InvSemigroup const& s, Congruence const& c);
bool is_congruence(InvSemigroup const& s, Congruence const& c);

struct Quotient {
  InvSemigroup semigroup;
  std::vector<InvSemigroup::Index> projection;
};

// Quotient by a congruence.  The grading descends when it is constant on
// the nonzero classes.
Quotient quotient(InvSemigroup const& s, Congruence const& c);

// theta(st) = theta(s) theta(t) whenever st != 0.  When this holds, the
// derived facts (idempotents graded 1, theta(s*) = theta(s)^-1, monotone on
// nonzero elements) are rechecked and a PropertyFailure is raised if any
// of them fails.
bool check_partial_hom(InvSemigroup const& s, GradingGroup const& group,
                       std::vector<Grade> const& theta);

// Saturates `gens` under the product and involution.  T must be totally
// ordered; elements are returned sorted, with the semigroup indexed
// accordingly.
template <class T>
struct Closure {
  std::vector<T> elements;
  InvSemigroup semigroup;
};

template <class T, class Mul, class Star>
Closure<T> generate_closure(std::vector<T> const& gens, Mul mul, Star star,
                            std::optional<T> zero = std::nullopt,
                            std::size_t cap = InvSemigroup::kMaxSize) {
  std::map<T, std::size_t> seen;
  std::vector<T> elems;
  auto add = [&](T const& x) {
    if (seen.emplace(x, elems.size()).second) {
      elems.push_back(x);
      if (elems.size() > cap)
        throw CapacityExceeded("closure exceeds " + std::to_string(cap) + " elements");
    }
  };
  for (auto const& g : gens) {
    add(g);
    add(star(g));
  }
  if (zero) add(*zero);
  for (std::size_t done = 0; done < elems.size();) {
    std::size_t upto = elems.size();
    for (std::size_t i = 0; i < upto; ++i)
      for (std::size_t j = (i < done ? done : 0); j < upto; ++j) {
        add(mul(elems[i], elems[j]));
        add(mul(elems[j], elems[i]));
      }
    for (std::size_t i = done; i < upto; ++i) add(star(elems[i]));
    done = upto;
  }
  std::vector<T> sorted(elems);
  std::sort(sorted.begin(), sorted.end());
  std::map<T, InvSemigroup::Index> index;
  for (std::size_t i = 0; i < sorted.size(); ++i)
    index.emplace(sorted[i], static_cast<InvSemigroup::Index>(i));
  std::vector<std::vector<InvSemigroup::Index>> table(sorted.size(),
                                                      std::vector<InvSemigroup::Index>(sorted.size()));
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      auto it = index.find(mul(sorted[i], sorted[j]));
      if (it == index.end()) throw PropertyFailure("closure is not closed", "");
      table[i][j] = it->second;
    }
  std::optional<InvSemigroup::Index> z;
  if (zero) z = index.at(*zero);
  auto sg = InvSemigroup::from_table(std::move(table), z);
  return {std::move(sorted), std::move(sg)};
}

}  // namespace gpdrec
