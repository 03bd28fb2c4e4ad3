#include "gpdrec/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "gpdrec/errors.hpp"

namespace gpdrec {

using Arrow = FiniteGroupoid::Arrow;
using Object = FiniteGroupoid::Object;

Vec alg_zero(FiniteGroupoid const& g) { return Vec(g.arrow_count(), 0); }

Vec alg_unit(FiniteGroupoid const& g, Ring const& r) {
  Vec v = alg_zero(g);
  for (Object x = 0; x < g.object_count(); ++x) v[g.unit(x)] = r.one();
  return v;
}

Vec characteristic(FiniteGroupoid const& g, Ring const& r, std::vector<Arrow> const& arrows) {
  Vec v = alg_zero(g);
  for (auto a : arrows) {
    if (a >= g.arrow_count()) throw InvalidInput("characteristic: unknown arrow");
    v[a] = r.one();
  }
  return v;
}

Vec convolve(FiniteGroupoid const& g, Ring const& r, Vec const& f, Vec const& h) {
  if (f.size() != g.arrow_count() || h.size() != g.arrow_count())
    throw InvalidInput("convolve: element does not belong to this groupoid");
  Vec out = alg_zero(g);
  for (auto [a, b] : g.composable_pairs()) {
    if (f[a] == 0 || h[b] == 0) continue;
    Arrow c = g.compose(a, b);
    out[c] = r.add(out[c], r.mul(f[a], h[b]));
  }
  return out;
}

std::vector<Arrow> support(Vec const& f) {
  std::vector<Arrow> s;
  for (Arrow a = 0; a < f.size(); ++a)
    if (f[a] != 0) s.push_back(a);
  return s;
}

std::vector<Vec> diagonal_generators(FiniteGroupoid const& g, Ring const& r) {
  std::vector<Vec> out;
  for (Object x = 0; x < g.object_count(); ++x) out.push_back(characteristic(g, r, {g.unit(x)}));
  return out;
}

CentralizerReport centralizer_of_diagonal(FiniteGroupoid const& g, Ring const& r, std::size_t brute_cap) {
  CentralizerReport rep;
  rep.linear = centralizer_of_diagonal(export_presentation(g, Cocycle::trivial(g), r));
  for (Arrow a = 0; a < g.arrow_count(); ++a)
    if (g.dom(a) == g.cod(a)) rep.isotropy.push_back(characteristic(g, r, {a}));
  std::size_t n = g.arrow_count();
  rep.equal = same_span(r, rep.linear, rep.isotropy, n);

  double total = std::pow(double(r.size()), double(n));
  if (total <= double(brute_cap)) {
    auto diag = diagonal_generators(g, r);
    std::vector<Vec> found;
    Vec f(n, 0);
    for (std::size_t idx = 0; idx < std::size_t(total); ++idx) {
      std::size_t rest = idx;
      for (std::size_t k = n; k-- > 0;) {
        f[k] = Ring::Elem(rest % r.size());
        rest /= r.size();
      }
      bool central = std::all_of(diag.begin(), diag.end(),
                                 [&](Vec const& d) { return convolve(g, r, f, d) == convolve(g, r, d, f); });
      if (central) found.push_back(f);
    }
    rep.brute_size = found.size();
    rep.brute_equal = found == enumerate_span(r, rep.isotropy, n, brute_cap);
  }
  return rep;
}

bool is_diag_maximal_commutative(FiniteGroupoid const& g, Ring const& r) {
  auto lin = centralizer_of_diagonal(export_presentation(g, Cocycle::trivial(g), r));
  return same_span(r, lin, diagonal_generators(g, r), g.arrow_count());
}

Restriction restrict_to_invariant(FiniteGroupoid const& g, Vec const& f, std::vector<Object> const& objects) {
  if (f.size() != g.arrow_count()) throw InvalidInput("restrict: element does not belong to this groupoid");
  auto sub = restrict_to_objects(g, objects);
  Vec v;
  for (auto a : sub.arrows) v.push_back(f[a]);
  return {std::move(sub), std::move(v)};
}

bool restriction_is_multiplicative(FiniteGroupoid const& g, Ring const& r, std::vector<Object> const& objects) {
  auto sub = restrict_to_objects(g, objects);
  for (Arrow a = 0; a < g.arrow_count(); ++a)
    for (Arrow b = 0; b < g.arrow_count(); ++b) {
      Vec ea = characteristic(g, r, {a}), eb = characteristic(g, r, {b});
      auto lhs = restrict_to_invariant(g, convolve(g, r, ea, eb), objects).value;
      auto ra = restrict_to_invariant(g, ea, objects).value;
      auto rb = restrict_to_invariant(g, eb, objects).value;
      if (lhs != convolve(sub.groupoid, r, ra, rb)) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------

Vec AlgebraPresentation::basis(std::uint32_t i) const {
  Vec v = zero();
  v.at(i) = ring.one();
  return v;
}

Vec AlgebraPresentation::multiply(Vec const& x, Vec const& y) const {
  std::size_t n = dim();
  if (x.size() != n || y.size() != n) throw InvalidInput("presentation: element has wrong dimension");
  Vec out(n, 0);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    for (std::uint32_t j = 0; j < n; ++j) {
      if (y[j] == 0) continue;
      Ring::Elem c = ring.mul(x[i], y[j]);
      auto const& p = product(i, j);
      for (std::size_t k = 0; k < n; ++k)
        if (p[k] != 0) out[k] = ring.add(out[k], ring.mul(c, p[k]));
    }
  }
  return out;
}

bool AlgebraPresentation::is_diagonal_index(std::uint32_t i) const {
  return std::binary_search(diagonal.begin(), diagonal.end(), i);
}

bool AlgebraPresentation::in_diagonal(Vec const& x) const {
  for (std::uint32_t i = 0; i < x.size(); ++i)
    if (x[i] != 0 && !is_diagonal_index(i)) return false;
  return true;
}

std::optional<Grade> AlgebraPresentation::homogeneous_grade(Vec const& x) const {
  std::optional<Grade> g;
  for (std::uint32_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    if (g && *g != grades[i]) return std::nullopt;
    g = grades[i];
  }
  return g;
}

std::string AlgebraPresentation::format(Vec const& x) const {
  std::string s;
  for (std::uint32_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    if (!s.empty()) s += " + ";
    if (x[i] != ring.one()) s += ring.format(x[i]) + "*";
    s += labels[i];
  }
  return s.empty() ? "0" : s;
}

void AlgebraPresentation::validate() const {
  std::size_t n = dim();
  if (n == 0) throw InvalidInput("presentation: empty basis");
  if (n > kMaxPresentationDim) throw CapacityExceeded("presentation: dimension above " + std::to_string(kMaxPresentationDim));
  {
    std::set<std::string> seen;
    for (auto const& l : labels)
      if (l.empty() || !seen.insert(l).second) throw InvalidInput("presentation: empty or duplicate label '" + l + "'");
  }
  if (products.size() != n * n) throw InvalidInput("presentation: wrong number of structure constants");
  for (auto const& v : products) {
    if (v.size() != n) throw InvalidInput("presentation: structure constant vector has wrong length");
    for (auto c : v)
      if (c >= ring.size()) throw InvalidInput("presentation: coefficient outside the ring");
  }
  if (grades.size() != n) throw InvalidInput("presentation: wrong number of grades");
  for (std::uint32_t i = 0; i < n; ++i)
    if (!group.valid(grades[i])) throw InvalidInput("presentation: invalid grade for " + labels[i]);
  if (!std::is_sorted(diagonal.begin(), diagonal.end()) ||
      std::adjacent_find(diagonal.begin(), diagonal.end()) != diagonal.end())
    throw InvalidInput("presentation: diagonal indices must be sorted and distinct");
  for (auto d : diagonal)
    if (d >= n) throw InvalidInput("presentation: diagonal index out of range");

  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      auto const& p = product(i, j);
      Grade g = group.mul(grades[i], grades[j]);
      for (std::uint32_t k = 0; k < n; ++k)
        if (p[k] != 0 && grades[k] != g)
          throw InvalidInput("presentation: " + labels[i] + " * " + labels[j] + " is not homogeneous of the product grade");
    }
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      Vec ij = product(i, j);
      for (std::uint32_t k = 0; k < n; ++k) {
        if (multiply(ij, basis(k)) != multiply(basis(i), product(j, k)))
          throw InvalidInput("presentation: product not associative at (" + labels[i] + ", " + labels[j] + ", " +
                             labels[k] + ")");
      }
    }
  for (auto d : diagonal) {
    if (grades[d] != group.identity()) throw InvalidInput("presentation: diagonal element " + labels[d] + " not of identity grade");
    for (auto e : diagonal) {
      if (!in_diagonal(product(d, e))) throw InvalidInput("presentation: diagonal not closed at (" + labels[d] + ", " + labels[e] + ")");
      if (product(d, e) != product(e, d)) throw InvalidInput("presentation: diagonal not commutative at (" + labels[d] + ", " + labels[e] + ")");
    }
  }
}

AlgebraPresentation export_presentation(FiniteGroupoid const& g, Cocycle const& c, Ring const& r) {
  validate_cocycle(g, c);
  std::size_t n = g.arrow_count();
  if (n > kMaxPresentationDim) throw CapacityExceeded("export: more than " + std::to_string(kMaxPresentationDim) + " arrows");
  AlgebraPresentation p;
  p.ring = r;
  p.group = c.group;
  for (std::size_t i = 0; i < n; ++i) p.labels.push_back("b" + std::to_string(i));
  p.products.assign(n * n, Vec(n, 0));
  for (auto [a, b] : g.composable_pairs()) p.products[std::size_t(a) * n + b][g.compose(a, b)] = r.one();
  for (Object x = 0; x < g.object_count(); ++x) p.diagonal.push_back(g.unit(x));
  std::sort(p.diagonal.begin(), p.diagonal.end());
  p.grades = c.grade;
  return p;
}

std::vector<Vec> centralizer_of_diagonal(AlgebraPresentation const& p) {
  std::size_t n = p.dim();
  Matrix a;
  for (auto d : p.diagonal)
    for (std::size_t row = 0; row < n; ++row) {
      Vec line(n, 0);
      for (std::uint32_t i = 0; i < n; ++i) line[i] = p.ring.sub(p.product(i, d)[row], p.product(d, i)[row]);
      a.push_back(std::move(line));
    }
  return kernel_generators(p.ring, a, n);
}

SubPresentation basis_subpresentation(AlgebraPresentation const& p, std::vector<std::uint32_t> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  std::vector<std::int64_t> local(p.dim(), -1);
  for (std::size_t i = 0; i < indices.size(); ++i) local.at(indices[i]) = std::int64_t(i);
  SubPresentation out;
  auto& q = out.presentation;
  q.ring = p.ring;
  q.group = p.group;
  std::size_t n = indices.size();
  for (auto i : indices) {
    q.labels.push_back(p.labels[i]);
    q.grades.push_back(p.grades[i]);
    if (p.is_diagonal_index(i)) q.diagonal.push_back(std::uint32_t(q.labels.size() - 1));
  }
  for (auto i : indices)
    for (auto j : indices) {
      Vec v(n, 0);
      auto const& prod = p.product(i, j);
      for (std::uint32_t k = 0; k < p.dim(); ++k) {
        if (prod[k] == 0) continue;
        if (local[k] < 0)
          throw InvalidInput("subpresentation: " + p.labels[i] + " * " + p.labels[j] + " leaves the index set");
        v[local[k]] = prod[k];
      }
      q.products.push_back(std::move(v));
    }
  out.embedding = std::move(indices);
  return out;
}

SubPresentation grade_identity_part(AlgebraPresentation const& p) {
  std::vector<std::uint32_t> idx;
  for (std::uint32_t i = 0; i < p.dim(); ++i)
    if (p.grades[i] == p.group.identity()) idx.push_back(i);
  return basis_subpresentation(p, std::move(idx));
}

void validate_unit_cocycle(FiniteGroupoid const& g, Ring const& r, Vec const& sigma) {
  if (sigma.size() != g.arrow_count()) throw InvalidInput("sigma: wrong number of values");
  for (Arrow a = 0; a < g.arrow_count(); ++a)
    if (sigma[a] >= r.size() || !r.is_unit(sigma[a]))
      throw InvalidInput("sigma: value on " + g.arrow_name(a) + " is not a unit");
  for (auto [a, b] : g.composable_pairs())
    if (sigma[g.compose(a, b)] != r.mul(sigma[a], sigma[b]))
      throw InvalidInput("sigma: not a cocycle on the composable pair (" + g.arrow_name(a) + ", " + g.arrow_name(b) + ")");
}

Vec random_unit_cocycle(FiniteGroupoid const& g, Ring const& r, std::mt19937_64& rng) {
  auto const& units = r.units();
  auto pick = [&](std::vector<Ring::Elem> const& from) {
    return from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)];
  };
  Vec sigma(g.arrow_count(), 0);
  for (auto const& orbit : g.orbits()) {
    Object root = orbit.front();
    // transversal[x]: an arrow root -> x
    std::map<Object, Arrow> transversal;
    std::map<Object, Ring::Elem> value;
    for (Arrow a = 0; a < g.arrow_count(); ++a)
      if (g.dom(a) == root && !transversal.count(g.cod(a))) transversal[g.cod(a)] = a;
    transversal[root] = g.unit(root);
    for (auto x : orbit) value[x] = x == root ? r.one() : pick(units);

    auto iso = isotropy_group(g, root);
    std::map<Arrow, Ring::Elem> chi;
    for (auto a : iso.arrows) chi[a] = r.one();
    if (auto gen = iso.group.cyclic_generator(); gen && iso.group.order() > 1) {
      std::size_t m = iso.group.order();
      std::vector<Ring::Elem> roots;
      for (auto u : units)
        if (r.pow(u, m) == r.one()) roots.push_back(u);
      Ring::Elem u = pick(roots);
      Arrow h = iso.arrows[*gen];
      Arrow p = h;
      Ring::Elem v = u;
      while (!g.is_unit(p)) {
        chi[p] = v;
        p = g.compose(p, h);
        v = r.mul(v, u);
      }
    }
    for (Arrow a = 0; a < g.arrow_count(); ++a) {
      if (!std::binary_search(orbit.begin(), orbit.end(), g.dom(a))) continue;
      Object x = g.dom(a), y = g.cod(a);
      Arrow h = g.compose(g.inv(transversal[y]), g.compose(a, transversal[x]));
      sigma[a] = r.mul(r.mul(value[y], chi.at(h)), *r.inverse(value[x]));
    }
  }
  validate_unit_cocycle(g, r, sigma);
  return sigma;
}

Vec PresentationMap::apply(Vec const& x, Ring const& r) const {
  Vec out(images.empty() ? 0 : images.front().size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t k = 0; k < out.size(); ++k)
      if (images[i][k] != 0) out[k] = r.add(out[k], r.mul(x[i], images[i][k]));
  }
  return out;
}

std::optional<std::string> check_isomorphism(AlgebraPresentation const& p, AlgebraPresentation const& q,
                                             PresentationMap const& m) {
  std::size_t n = p.dim();
  if (!(p.ring == q.ring)) return "rings differ";
  if (!(p.group == q.group)) return "grading groups differ";
  if (q.dim() != n || m.images.size() != n) return "dimensions differ";
  for (auto const& v : m.images)
    if (v.size() != n) return "image has wrong dimension";
  for (std::uint32_t i = 0; i < n; ++i) {
    auto g = q.homogeneous_grade(m.images[i]);
    if (!g || *g != p.grades[i]) return "image of " + p.labels[i] + " is not homogeneous of the same grade";
  }
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      if (q.multiply(m.images[i], m.images[j]) != m.apply(p.product(i, j), p.ring))
        return "not multiplicative on the pair (" + p.labels[i] + ", " + p.labels[j] + ")";
  for (std::uint32_t k = 0; k < n; ++k)
    if (!in_span(q.ring, m.images, q.basis(k))) return "not surjective: " + q.labels[k] + " is not in the image";
  std::vector<Vec> diag_images;
  for (auto d : p.diagonal) {
    if (!q.in_diagonal(m.images[d])) return "image of diagonal element " + p.labels[d] + " leaves the diagonal";
    diag_images.push_back(m.images[d]);
  }
  for (auto d : q.diagonal)
    if (!in_span(q.ring, diag_images, q.basis(d))) return "diagonal of the target not covered: " + q.labels[d];
  return std::nullopt;
}

ScrambleResult scramble(AlgebraPresentation const& p, std::vector<std::uint32_t> const& phi, Vec const& sigma,
                        std::uint64_t seed) {
  std::size_t n = p.dim();
  auto const& r = p.ring;
  if (phi.size() != n || sigma.size() != n) throw InvalidInput("scramble: phi and sigma must cover the basis");
  {
    std::vector<std::uint32_t> s(phi);
    std::sort(s.begin(), s.end());
    for (std::uint32_t i = 0; i < n; ++i)
      if (s[i] != i) throw InvalidInput("scramble: phi is not a permutation of the basis");
  }
  for (std::uint32_t i = 0; i < n; ++i)
    if (sigma[i] >= r.size() || !r.is_unit(sigma[i])) throw InvalidInput("scramble: sigma(" + p.labels[i] + ") is not a unit");
  PresentationMap twist;
  for (std::uint32_t i = 0; i < n; ++i) {
    Vec v = p.zero();
    v[phi[i]] = sigma[i];
    twist.images.push_back(std::move(v));
  }
  if (auto err = check_isomorphism(p, p, twist)) throw InvalidInput("scramble: (phi, sigma) rejected: " + *err);

  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  auto const& units = r.units();
  Vec scale(n, r.one());  // d_{perm i} = scale_{perm i} b_i
  for (std::uint32_t i = 0; i < n; ++i)
    if (!p.is_diagonal_index(i))
      scale[perm[i]] = units[std::uniform_int_distribution<std::size_t>(0, units.size() - 1)(rng)];

  ScrambleResult out;
  auto& q = out.presentation;
  q.ring = r;
  q.group = p.group;
  q.labels.resize(n);
  q.grades.resize(n);
  for (std::uint32_t k = 0; k < n; ++k) q.labels[k] = "e" + std::to_string(k);
  for (std::uint32_t i = 0; i < n; ++i) q.grades[perm[i]] = p.grades[i];
  for (auto d : p.diagonal) q.diagonal.push_back(perm[d]);
  std::sort(q.diagonal.begin(), q.diagonal.end());
  q.products.assign(n * n, Vec(n, 0));
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      Ring::Elem c = r.mul(scale[perm[i]], scale[perm[j]]);
      auto const& prod = p.product(i, j);
      Vec& dst = q.products[std::size_t(perm[i]) * n + perm[j]];
      for (std::uint32_t m = 0; m < n; ++m)
        if (prod[m] != 0) dst[perm[m]] = r.mul(r.mul(c, prod[m]), *r.inverse(scale[perm[m]]));
    }
  for (std::uint32_t i = 0; i < n; ++i) {
    Vec v = q.zero();
    std::uint32_t k = perm[phi[i]];
    v[k] = r.mul(sigma[i], *r.inverse(scale[k]));
    out.map.images.push_back(std::move(v));
  }
  q.validate();
  if (auto err = check_isomorphism(p, q, out.map)) throw PropertyFailure("scramble: output verification failed", *err);
  return out;
}

GroupoidScramble scramble_groupoid(FiniteGroupoid const& g, Cocycle const& c, Ring const& r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto phi = graded_iso_search(g, c, g, c, kDefaultIsoNodeCap, &rng);
  if (!phi) throw PropertyFailure("scramble: no graded automorphism found", "identity");
  Vec sigma = random_unit_cocycle(g, r, rng);
  auto p = export_presentation(g, c, r);
  auto res = scramble(p, phi->arrows, sigma, rng());
  return {std::move(*phi), std::move(sigma), std::move(res)};
}

}  // namespace gpdrec
