#include "gpdrec/linalg.hpp"

#include <algorithm>
#include <set>

#include "gpdrec/errors.hpp"

namespace gpdrec {

namespace {

using U64 = std::uint64_t;

struct LocalSolve {
  bool solvable = true;
  std::vector<U64> particular;
  std::vector<std::vector<U64>> kernel;
};

std::uint32_t valuation(U64 x, std::uint32_t p, std::uint32_t k) {
  if (x == 0) return k;
  std::uint32_t v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

U64 inv_mod(U64 a, U64 m) {
  std::int64_t g = static_cast<std::int64_t>(m), x = 0, x1 = 1,
               a1 = static_cast<std::int64_t>(a % m);
  while (a1) {
    std::int64_t q = g / a1;
    std::int64_t t = g - q * a1;
    g = a1;
    a1 = t;
    t = x - q * x1;
    x = x1;
    x1 = t;
  }
  std::int64_t mm = static_cast<std::int64_t>(m);
  return static_cast<U64>(((x % mm) + mm) % mm);
}

// Smith reduction of [A | b] over Z/q, q = p^k, tracking column operations.
LocalSolve solve_local(std::vector<std::vector<U64>> a, std::vector<U64> b, std::size_t cols,
                       std::uint32_t p, std::uint32_t k, U64 q) {
  std::size_t rows = a.size();
  std::vector<std::vector<U64>> v(cols, std::vector<U64>(cols, 0));  // v[row][col]
  for (std::size_t i = 0; i < cols; ++i) v[i][i] = 1;

  std::vector<std::uint32_t> pivots;
  std::size_t r = 0;
  while (r < rows && r < cols) {
    std::uint32_t best = k;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = r; i < rows && best > 0; ++i)
      for (std::size_t j = r; j < cols; ++j) {
        auto val = valuation(a[i][j], p, k);
        if (val < best) {
          best = val;
          bi = i;
          bj = j;
          if (best == 0) break;
        }
      }
    if (best == k) break;
    std::swap(a[r], a[bi]);
    std::swap(b[r], b[bi]);
    if (bj != r) {
      for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][r], a[i][bj]);
      for (std::size_t i = 0; i < cols; ++i) std::swap(v[i][r], v[i][bj]);
    }
    U64 pv = 1;
    for (std::uint32_t i = 0; i < best; ++i) pv *= p;
    U64 unit_inv = inv_mod(a[r][r] / pv, q);
    for (std::size_t j = 0; j < cols; ++j) a[r][j] = a[r][j] * unit_inv % q;
    b[r] = b[r] * unit_inv % q;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][r] == 0) continue;
      U64 t = a[i][r] / pv;
      for (std::size_t j = 0; j < cols; ++j) a[i][j] = (a[i][j] + (q - t) * a[r][j]) % q;
      b[i] = (b[i] + (q - t) * b[r]) % q;
    }
    for (std::size_t j = 0; j < cols; ++j) {
      if (j == r || a[r][j] == 0) continue;
      U64 t = a[r][j] / pv;
      for (std::size_t i = 0; i < rows; ++i) a[i][j] = (a[i][j] + (q - t) * a[i][r]) % q;
      for (std::size_t i = 0; i < cols; ++i) v[i][j] = (v[i][j] + (q - t) * v[i][r]) % q;
    }
    pivots.push_back(best);
    ++r;
  }

  LocalSolve out;
  std::vector<U64> y(cols, 0);
  for (std::size_t i = 0; i < rows; ++i) {
    if (i < pivots.size()) {
      U64 pv = 1;
      for (std::uint32_t t = 0; t < pivots[i]; ++t) pv *= p;
      if (b[i] % pv != 0) out.solvable = false;
      y[i] = b[i] / pv;
    } else if (b[i] != 0) {
      out.solvable = false;
    }
  }
  auto column = [&](std::size_t j, U64 scale) {
    std::vector<U64> c(cols);
    for (std::size_t i = 0; i < cols; ++i) c[i] = v[i][j] * scale % q;
    return c;
  };
  out.particular.assign(cols, 0);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < cols; ++i) out.particular[i] = (out.particular[i] + v[i][j] * y[j]) % q;
  for (std::size_t j = 0; j < cols; ++j) {
    if (j < pivots.size()) {
      if (pivots[j] == 0) continue;
      U64 scale = 1;
      for (std::uint32_t t = 0; t < k - pivots[j]; ++t) scale *= p;
      out.kernel.push_back(column(j, scale));
    } else {
      out.kernel.push_back(column(j, 1));
    }
  }
  return out;
}

}  // namespace

std::optional<LinearSolution> solve_linear(Ring const& ring, Matrix const& a, Vec const& b,
                                           std::size_t cols) {
  auto const& comps = ring.local_components();
  std::size_t nc = comps.size();
  std::vector<LocalSolve> locals;
  for (auto const& c : comps) {
    std::vector<std::vector<U64>> la(a.size(), std::vector<U64>(cols));
    std::vector<U64> lb(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < cols; ++j) la[i][j] = ring.project(a[i][j], c);
      lb[i] = ring.project(b[i], c);
    }
    locals.push_back(solve_local(std::move(la), std::move(lb), cols, c.p, c.k, c.q));
    if (!locals.back().solvable) return std::nullopt;
  }
  LinearSolution sol;
  sol.particular.resize(cols);
  std::vector<std::uint32_t> vals(nc);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t c = 0; c < nc; ++c) vals[c] = static_cast<std::uint32_t>(locals[c].particular[j]);
    sol.particular[j] = ring.lift(vals);
  }
  for (std::size_t c = 0; c < nc; ++c) {
    for (auto const& g : locals[c].kernel) {
      Vec lifted(cols);
      for (std::size_t j = 0; j < cols; ++j) {
        std::fill(vals.begin(), vals.end(), 0);
        vals[c] = static_cast<std::uint32_t>(g[j]);
        lifted[j] = ring.lift(vals);
      }
      if (std::any_of(lifted.begin(), lifted.end(), [](auto x) { return x != 0; }))
        sol.kernel.push_back(std::move(lifted));
    }
  }
  return sol;
}

std::vector<Vec> kernel_generators(Ring const& ring, Matrix const& a, std::size_t cols) {
  return solve_linear(ring, a, Vec(a.size(), 0), cols)->kernel;
}

bool in_span(Ring const& ring, std::vector<Vec> const& gens, Vec const& v) {
  std::size_t n = v.size();
  if (gens.empty()) return std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; });
  Matrix a(n, Vec(gens.size()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < gens.size(); ++j) a[i][j] = gens[j][i];
  return solve_linear(ring, a, v, gens.size()).has_value();
}

bool same_span(Ring const& ring, std::vector<Vec> const& a, std::vector<Vec> const& b,
               std::size_t n) {
  (void)n;
  for (auto const& v : a)
    if (!in_span(ring, b, v)) return false;
  for (auto const& v : b)
    if (!in_span(ring, a, v)) return false;
  return true;
}

std::vector<Vec> enumerate_span(Ring const& ring, std::vector<Vec> const& gens, std::size_t n,
                                std::size_t cap) {
  std::set<Vec> span{Vec(n, 0)};
  for (auto const& g : gens) {
    std::set<Vec> next;
    for (auto const& s : span) {
      for (Ring::Elem c = 0; c < ring.size(); ++c) {
        Vec t = s;
        for (std::size_t i = 0; i < n; ++i) t[i] = ring.add(t[i], ring.mul(c, g[i]));
        next.insert(std::move(t));
        if (next.size() > cap)
          throw CapacityExceeded("span enumeration exceeds cap " + std::to_string(cap));
      }
    }
    span = std::move(next);
  }
  return {span.begin(), span.end()};
}

}  // namespace gpdrec
