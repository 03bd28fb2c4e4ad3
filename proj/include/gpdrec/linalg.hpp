#pragma once

#include <optional>
#include <vector>

#include "gpdrec/ring.hpp"

namespace gpdrec {

using Vec = std::vector<Ring::Elem>;
using Matrix = std::vector<Vec>;  // row-major, rows x cols

// Solution set of A x = b over a finite ring: x = particular + span(kernel).
struct LinearSolution {
  Vec particular;
  std::vector<Vec> kernel;  // generators of the solution module of A x = 0
};

// Exact solver over Z/n and products thereof.  Each primary component Z/p^k
// is brought to Smith normal form (pivots of minimal p-valuation), and the
// component solutions are glued by the Chinese remainder theorem.
std::optional<LinearSolution> solve_linear(Ring const& ring, Matrix const& a, Vec const& b,
                                           std::size_t cols);

// Generators of {x : A x = 0}.
std::vector<Vec> kernel_generators(Ring const& ring, Matrix const& a, std::size_t cols);

// Membership of v in the R-span of `gens`.
bool in_span(Ring const& ring, std::vector<Vec> const& gens, Vec const& v);

// span(a) == span(b) as submodules of R^n.
bool same_span(Ring const& ring, std::vector<Vec> const& a, std::vector<Vec> const& b,
               std::size_t n);

// Every element of span(gens), sorted; throws CapacityExceeded past `cap`.
std::vector<Vec> enumerate_span(Ring const& ring, std::vector<Vec> const& gens, std::size_t n,
                                std::size_t cap);

}  // namespace gpdrec
