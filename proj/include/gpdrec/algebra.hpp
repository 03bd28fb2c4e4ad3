#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gpdrec/groupoid.hpp"
#include "gpdrec/linalg.hpp"
#include "gpdrec/ring.hpp"

namespace gpdrec {

// Elements of the groupoid algebra RG are dense coefficient vectors indexed
// by arrows.  G has finitely many objects, so RG is unital.
Vec alg_zero(FiniteGroupoid const& g);
Vec alg_unit(FiniteGroupoid const& g, Ring const& r);
Vec characteristic(FiniteGroupoid const& g, Ring const& r, std::vector<FiniteGroupoid::Arrow> const& arrows);

// (f * h)(c) = sum over a o b = c of f(a) h(b).
Vec convolve(FiniteGroupoid const& g, Ring const& r, Vec const& f, Vec const& h);

std::vector<FiniteGroupoid::Arrow> support(Vec const& f);

// Generators of the diagonal D: characteristic functions of single units.
std::vector<Vec> diagonal_generators(FiniteGroupoid const& g, Ring const& r);

struct CentralizerReport {
  std::vector<Vec> linear;    // kernel generators of f*d = d*f, d in D
  std::vector<Vec> isotropy;  // characteristic functions of isotropy arrows
  bool equal = false;         // same R-span
  // Exhaustive membership over R^dim when small enough.
  std::optional<std::size_t> brute_size;
  std::optional<bool> brute_equal;
};

constexpr std::size_t kBruteCentralizerCap = 1'000'000;

CentralizerReport centralizer_of_diagonal(FiniteGroupoid const& g, Ring const& r,
                                          std::size_t brute_cap = kBruteCentralizerCap);

// The centralizer of D equals D.
bool is_diag_maximal_commutative(FiniteGroupoid const& g, Ring const& r);

struct Restriction {
  Subgroupoid sub;
  Vec value;
};

// Restriction of f to the full subgroupoid on an invariant object set.
Restriction restrict_to_invariant(FiniteGroupoid const& g, Vec const& f,
                                  std::vector<FiniteGroupoid::Object> const& objects);
// Checks restriction is multiplicative on all basis pairs.
bool restriction_is_multiplicative(FiniteGroupoid const& g, Ring const& r,
                                   std::vector<FiniteGroupoid::Object> const& objects);

// Abstract presentation of a graded algebra with a distinguished diagonal.
// Basis elements are homogeneous; the diagonal is spanned by a subset of
// the basis.
struct AlgebraPresentation {
  Ring ring = Ring::modular(2);
  GradingGroup group = GradingGroup::trivial();
  std::vector<std::string> labels;
  // products[i * dim + j] = b_i b_j in the basis.
  std::vector<Vec> products;
  std::vector<std::uint32_t> diagonal;  // sorted
  std::vector<Grade> grades;

  std::size_t dim() const noexcept { return labels.size(); }
  Vec basis(std::uint32_t i) const;
  Vec zero() const { return Vec(dim(), 0); }
  Vec multiply(Vec const& x, Vec const& y) const;
  Vec const& product(std::uint32_t i, std::uint32_t j) const { return products[std::size_t(i) * dim() + j]; }
  bool in_diagonal(Vec const& x) const;
  bool is_diagonal_index(std::uint32_t i) const;
  // Grade of a nonzero homogeneous element; nullopt otherwise.
  std::optional<Grade> homogeneous_grade(Vec const& x) const;
  std::string format(Vec const& x) const;

  // Exhaustive checks: associativity, diagonal closed and commutative,
  // grading respected, valid coefficients.  InvalidInput on failure.
  void validate() const;

  friend bool operator==(AlgebraPresentation const& a, AlgebraPresentation const& b) {
    return a.ring == b.ring && a.group == b.group && a.labels == b.labels && a.products == b.products &&
           a.diagonal == b.diagonal && a.grades == b.grades;
  }
};

constexpr std::size_t kMaxPresentationDim = 256;

// Basis = arrows in order (labels "b0", "b1", ...), diagonal = unit arrows.
AlgebraPresentation export_presentation(FiniteGroupoid const& g, Cocycle const& c, Ring const& r);

// Generators of the centralizer of the diagonal, computed from the
// presentation alone.
std::vector<Vec> centralizer_of_diagonal(AlgebraPresentation const& p);

// Sub-presentation on the basis elements of identity grade.
struct SubPresentation {
  AlgebraPresentation presentation;
  std::vector<std::uint32_t> embedding;
};
SubPresentation grade_identity_part(AlgebraPresentation const& p);
// Sub-presentation on a set of basis indices closed under multiplication.
SubPresentation basis_subpresentation(AlgebraPresentation const& p, std::vector<std::uint32_t> indices);

// Unit-valued cocycle sigma: arrow -> R^x.  Throws InvalidInput naming the
// first failing composable pair.
void validate_unit_cocycle(FiniteGroupoid const& g, Ring const& r, Vec const& sigma);

// Seeded sigma: random unit values on a transversal of each orbit, and a
// random homomorphism on the root isotropy group when it is cyclic.
Vec random_unit_cocycle(FiniteGroupoid const& g, Ring const& r, std::mt19937_64& rng);

// The map b_i -> m_i as a linear map between presentations.
struct PresentationMap {
  std::vector<Vec> images;
  Vec apply(Vec const& x, Ring const& r) const;
};

// Checks that `m` is a bijective, diagonal-preserving, grade-preserving
// algebra homomorphism p -> q.  On failure returns a description.
std::optional<std::string> check_isomorphism(AlgebraPresentation const& p, AlgebraPresentation const& q,
                                             PresentationMap const& m);

struct ScrambleResult {
  AlgebraPresentation presentation;
  PresentationMap map;  // the verified isomorphism from the input
};

// Applies b_i -> sigma_i b_phi(i), then relabels the basis by a seeded
// permutation and rescales non-diagonal basis elements by seeded units.
// phi must preserve structure constants and grades; sigma must make the
// map multiplicative.  The result is re-derived and verified.
ScrambleResult scramble(AlgebraPresentation const& p, std::vector<std::uint32_t> const& phi, Vec const& sigma,
                        std::uint64_t seed);

// Random graded automorphism and unit cocycle of (g, c), then scramble of
// its exported presentation.
struct GroupoidScramble {
  GroupoidIso phi;
  Vec sigma;
  ScrambleResult result;
};
GroupoidScramble scramble_groupoid(FiniteGroupoid const& g, Cocycle const& c, Ring const& r, std::uint64_t seed);

}  // namespace gpdrec
