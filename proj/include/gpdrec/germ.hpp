#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gpdrec/algebra.hpp"
#include "gpdrec/groupoid.hpp"
#include "gpdrec/inverse_semigroup.hpp"

namespace gpdrec {

// Finite meet semilattice, optionally with a zero.
struct Semilattice {
  std::vector<std::vector<std::uint32_t>> meet;
  std::optional<std::uint32_t> zero;
  std::vector<std::string> names;

  // Validates commutativity, idempotence, associativity and the zero.
  static Semilattice from_table(std::vector<std::vector<std::uint32_t>> meet,
                                std::optional<std::uint32_t> zero = std::nullopt,
                                std::vector<std::string> names = {});
  // E(S) under the product; embedding[i] is the index in S.
  static Semilattice of_idempotents(InvSemigroup const& s, std::vector<InvSemigroup::Index>* embedding = nullptr);

  std::size_t size() const noexcept { return meet.size(); }
  bool leq(std::uint32_t a, std::uint32_t b) const { return meet[a][b] == a; }
};

// 0/1 values per semilattice element.
using Character = std::vector<std::uint8_t>;

bool is_character(Semilattice const& e, Character const& t);

struct Spectrum {
  std::vector<Character> spec;
  std::vector<std::size_t> ultra;  // indices into spec of the maximal characters
};

constexpr std::size_t kMaxSemilattice = 1u << 16;

// Every character of a finite semilattice is the indicator of a principal
// filter of a nonzero element; each candidate is checked to be a character,
// and the maximal ones are selected by pointwise comparison.
Spectrum spectrum(Semilattice const& e);

// A semigroup acting on a finite set of ultracharacters of E(S) by partial
// bijections: map[s][x] is s.x or -1 when x is outside the domain of s.
struct Action {
  std::vector<InvSemigroup::Index> idempotents;  // semilattice index -> S index
  std::vector<Character> points;
  std::vector<std::string> point_names;
  std::vector<std::vector<std::int64_t>> map;

  std::size_t point_count() const noexcept { return points.size(); }
};

// (s tau)(e) = tau(s* e s), defined when tau(s*s) = 1.  InvalidInput if an
// ultracharacter is mapped outside the ultracharacters; the result is
// checked to be a nondegenerate action.
Action spectral_action(InvSemigroup const& s);

// Functoriality ((st).x = s.(t.x) with matching domains) and
// nondegeneracy; PropertyFailure with a witness otherwise.
void verify_action(InvSemigroup const& s, Action const& a);

// The action of an inverse subsemigroup (embedding into S).
Action restrict_action(Action const& a, std::vector<InvSemigroup::Index> const& embedding);

struct GermGroupoid {
  FiniteGroupoid groupoid;
  Cocycle cocycle;
  std::vector<std::pair<InvSemigroup::Index, std::uint32_t>> germs;  // representative (s, x) per arrow
  std::vector<std::vector<std::int64_t>> arrow_of;                   // [s][x] -> arrow, or -1
};

// [s, x] = [t, x] iff some u <= s, t has x in its domain.  The grading
// c([s, x]) = theta(s) uses `theta` or else the grading attached to S (or
// the trivial one); it is checked to be well defined on germs.
GermGroupoid germ_groupoid(InvSemigroup const& s, Action const& a,
                           std::optional<SemigroupGrading> theta = std::nullopt);

struct CofinalReport {
  bool cofinal = false;
  std::optional<bool> isomorphic;  // germ groupoids of T and S, when cofinal
};

// T given as a sorted subset of S; InvalidInput when T is not a full
// inverse subsemigroup.
CofinalReport cofinal_check(InvSemigroup const& s, std::vector<InvSemigroup::Index> const& t, Action const& a);

struct Reconstruction {
  BisectionSemigroup bisections;
  Action action;
  GermGroupoid germ;
  std::optional<GroupoidIso> found;  // germ -> G, from the isomorphism search
  GroupoidIso direct;                // G -> germ, gamma -> [{gamma}, tau_d(gamma)]
  bool direct_ok = false;
};

Reconstruction reconstruct_from_bisections(FiniteGroupoid const& g, Cocycle const& c);

struct PipelineResult {
  std::size_t n_size = 0;
  std::size_t k_size = 0;
  std::size_t q_size = 0;
  GermGroupoid germ;
};

// Recovers (G, c) from a presentation of (RG, D): brute-force normalizer,
// quotient by the kernel congruence, spectral action, germ groupoid.
// InvalidInput for a decomposable ring; PropertyFailure with the witness
// when the local bisection hypothesis fails.
PipelineResult full_pipeline(AlgebraPresentation const& p, std::size_t cap = 10'000);

}  // namespace gpdrec
