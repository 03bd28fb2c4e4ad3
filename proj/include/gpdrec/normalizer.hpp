#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gpdrec/algebra.hpp"
#include "gpdrec/inverse_semigroup.hpp"

namespace gpdrec {

// The graded normalizer N of the diagonal in an algebra presentation:
// homogeneous m admitting m' with m m' m = m, m' m m' = m', and
// m D m' + m' D m inside D.  Elements are stored sorted, so the zero
// vector comes first.
struct NormalizerSet {
  AlgebraPresentation presentation;
  std::vector<Vec> elements;
  std::vector<Vec> primes;    // the (unique) m' of each element
  std::vector<Grade> grades;  // identity for zero
  std::vector<Vec> diagonal_idempotents;  // E(D), sorted

  std::size_t size() const noexcept { return elements.size(); }
  std::optional<std::size_t> find(Vec const& m) const;
};

constexpr std::size_t kDefaultFiberCap = 10'000;

// Idempotents of the diagonal, by enumerating its span.
std::vector<Vec> diagonal_idempotents(AlgebraPresentation const& p, std::size_t cap = kDefaultFiberCap);

// The quasi-inverse of a homogeneous m, when m is in N.  m'm is forced to be
// the least e in E(D) with m e = m (dually for m m'), which makes the
// remaining conditions on m' linear; the solution is unique.
std::optional<Vec> normalizer_prime(AlgebraPresentation const& p, std::vector<Vec> const& idempotents,
                                    Vec const& m);

// All axioms for the pair (m, m') at grade g.  InvalidInput when m or m' is
// not homogeneous of grade g, g^-1.
bool is_normalizer_pair(AlgebraPresentation const& p, Vec const& m, Vec const& m_prime, Grade g);

// Exhaustive N, fiber by fiber; CapacityExceeded naming the fiber when
// |R|^(fiber dim) exceeds `cap`.
NormalizerSet compute_n_bruteforce(AlgebraPresentation const& p, std::size_t cap = kDefaultFiberCap);

// {f chi_U : U homogeneous bisection, f unit-valued on r(U)} plus zero, in
// the exported basis.  InvalidInput for a decomposable ring.
NormalizerSet compute_n_generated(FiniteGroupoid const& g, Cocycle const& c, Ring const& r);

// N under convolution as a graded inverse semigroup (index = element index).
InvSemigroup normalizer_semigroup(NormalizerSet const& n);

// Per basis element: the least idempotents e, f of D with b e = b, f b = b.
// The basis is monomial when every b is in N and e, f are atoms of E(D);
// supports of elements are then sets of "arrows" with well-defined
// endpoints.
struct BasisEndpoints {
  bool monomial = false;
  std::string reason;  // why not monomial
  std::vector<Vec> dom, ran;
  std::vector<Vec> primes;
};
BasisEndpoints basis_endpoints(AlgebraPresentation const& p, std::vector<Vec> const& idempotents);

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string witness;
};

// Exhaustive checks over N: m'm and mm' are idempotents of D; E(N) = E(D);
// m'm = d(supp m) and mm' = r(supp m); for arrows in one support, equal
// domains iff equal ranges; products of supports with inverse supports lie
// in the isotropy; m in N and D implies m' in N and D; the semigroup
// involution is m -> m'.  InvalidInput for a decomposable ring.
std::vector<CheckResult> structure_checks(NormalizerSet const& n);

struct LbhVerdict {
  bool holds = true;
  std::optional<Vec> witness;  // element of N whose support is not a bisection
  std::string witness_text;
};

// Requires an indecomposable ring and a monomial basis.
LbhVerdict lbh_check(NormalizerSet const& n);
LbhVerdict lbh_check(AlgebraPresentation const& p, std::size_t cap = kDefaultFiberCap);
LbhVerdict lbh_check(FiniteGroupoid const& g, Cocycle const& c, Ring const& r, std::size_t cap = kDefaultFiberCap);

struct IsotropyLbhVerdict {
  bool holds = true;
  std::optional<FiniteGroupoid::Object> object;  // first failing object
  std::optional<GroupRingElem> unit;              // nontrivial unit of R[H_x]
};

// LBH holds iff every r[H_x] (isotropy of the grade-identity component) has
// only trivial units; decided by unit censuses.
IsotropyLbhVerdict lbh_via_isotropy(FiniteGroupoid const& g, Cocycle const& c, Ring const& r,
                                    std::size_t census_cap = kDefaultCensusCap);

struct NilpotentWitness {
  Vec m;
  Vec m_prime;
  bool valid_pair = false;
  bool support_is_bisection = false;
};

// m = chi_d(U) - n chi_U, m' = chi_d(U) + sum_{j<k} n^j chi_U^j.
NilpotentWitness nilpotent_nonbisection_witness(FiniteGroupoid const& g, Cocycle const& c, Ring const& r,
                                                std::vector<FiniteGroupoid::Arrow> const& u, Ring::Elem n);

struct NormalizerQuotient {
  InvSemigroup semigroup;  // N
  std::vector<InvSemigroup::Index> kernel;  // K = N and D
  Congruence congruence;
  Quotient quotient;  // N / ~
};

NormalizerQuotient quotient_n(NormalizerSet const& n);

struct PsiReport {
  std::size_t domain = 0;    // |homogeneous bisections|
  std::size_t codomain = 0;  // |N / ~|
  bool injective = false;
  bool surjective = false;
  bool homomorphism = false;
};

// psi(U) = [chi_U] from homogeneous bisections to N / ~.
PsiReport psi_check(FiniteGroupoid const& g, Cocycle const& c, Ring const& r, std::size_t cap = kDefaultFiberCap);

// "1 + 2g" style rendering with arrow names.
std::string format_element(FiniteGroupoid const& g, Ring const& r, Vec const& v);

}  // namespace gpdrec
