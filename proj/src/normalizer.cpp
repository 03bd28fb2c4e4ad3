#include "gpdrec/normalizer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "gpdrec/errors.hpp"

namespace gpdrec {

using Arrow = FiniteGroupoid::Arrow;
using Object = FiniteGroupoid::Object;

std::optional<std::size_t> NormalizerSet::find(Vec const& m) const {
  auto it = std::lower_bound(elements.begin(), elements.end(), m);
  if (it == elements.end() || *it != m) return std::nullopt;
  return std::size_t(it - elements.begin());
}

std::vector<Vec> diagonal_idempotents(AlgebraPresentation const& p, std::size_t cap) {
  std::vector<Vec> gens;
  for (auto d : p.diagonal) gens.push_back(p.basis(d));
  std::vector<Vec> out;
  for (auto& x : enumerate_span(p.ring, gens, p.dim(), cap))
    if (p.multiply(x, x) == x) out.push_back(std::move(x));
  return out;
}

namespace {

Vec sub(Ring const& r, Vec a, Vec const& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = r.sub(a[i], b[i]);
  return a;
}

Vec add(Ring const& r, Vec a, Vec const& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = r.add(a[i], b[i]);
  return a;
}

bool is_zero(Vec const& v) {
  return std::all_of(v.begin(), v.end(), [](Ring::Elem x) { return x == 0; });
}

// Least idempotent e of D with m e = m (right) or e m = m (left).
std::optional<Vec> least_fixing(AlgebraPresentation const& p, std::vector<Vec> const& idems, Vec const& m,
                                bool right) {
  std::optional<Vec> acc;
  for (auto const& f : idems) {
    if ((right ? p.multiply(m, f) : p.multiply(f, m)) != m) continue;
    acc = acc ? p.multiply(*acc, f) : f;
  }
  return acc;
}

bool pair_axioms(AlgebraPresentation const& p, Vec const& m, Vec const& mp) {
  if (p.multiply(p.multiply(m, mp), m) != m) return false;
  if (p.multiply(p.multiply(mp, m), mp) != mp) return false;
  for (auto d : p.diagonal) {
    Vec b = p.basis(d);
    if (!p.in_diagonal(p.multiply(p.multiply(m, b), mp))) return false;
    if (!p.in_diagonal(p.multiply(p.multiply(mp, b), m))) return false;
  }
  return true;
}

std::vector<std::uint32_t> supp(Vec const& v) {
  std::vector<std::uint32_t> s;
  for (std::uint32_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) s.push_back(i);
  return s;
}

void require_indecomposable(Ring const& r, char const* what) {
  if (!r.is_indecomposable())
    throw InvalidInput(std::string(what) + ": ring " + r.name() + " is decomposable");
}

}  // namespace

std::optional<Vec> normalizer_prime(AlgebraPresentation const& p, std::vector<Vec> const& idems, Vec const& m) {
  if (is_zero(m)) return p.zero();
  auto g = p.homogeneous_grade(m);
  if (!g) return std::nullopt;
  auto e1 = least_fixing(p, idems, m, true);
  auto e2 = least_fixing(p, idems, m, false);
  if (!e1 || !e2) return std::nullopt;
  Grade gi = p.group.inv(*g);
  std::vector<std::uint32_t> cols;
  for (std::uint32_t i = 0; i < p.dim(); ++i)
    if (p.grades[i] == gi) cols.push_back(i);
  if (cols.empty()) return std::nullopt;
  std::size_t n = p.dim();
  Matrix a(4 * n, Vec(cols.size(), 0));
  Vec rhs(4 * n, 0);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    Vec b = p.basis(cols[c]);
    Vec xm = p.multiply(b, m), mx = p.multiply(m, b);
    Vec ex = sub(p.ring, p.multiply(*e1, b), b), xe = sub(p.ring, p.multiply(b, *e2), b);
    for (std::size_t k = 0; k < n; ++k) {
      a[k][c] = xm[k];
      a[n + k][c] = mx[k];
      a[2 * n + k][c] = ex[k];
      a[3 * n + k][c] = xe[k];
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    rhs[k] = (*e1)[k];
    rhs[n + k] = (*e2)[k];
  }
  auto sol = solve_linear(p.ring, a, rhs, cols.size());
  if (!sol) return std::nullopt;
  Vec x = p.zero();
  for (std::size_t c = 0; c < cols.size(); ++c) x[cols[c]] = sol->particular[c];
  if (!pair_axioms(p, m, x)) return std::nullopt;
  return x;
}

bool is_normalizer_pair(AlgebraPresentation const& p, Vec const& m, Vec const& m_prime, Grade g) {
  if (m.size() != p.dim() || m_prime.size() != p.dim()) throw InvalidInput("normalizer pair: wrong dimension");
  if (!p.group.valid(g)) throw InvalidInput("normalizer pair: invalid grade");
  if (!is_zero(m) && p.homogeneous_grade(m) != g)
    throw InvalidInput("normalizer pair: m is not homogeneous of grade " + p.group.format(g));
  if (!is_zero(m_prime) && p.homogeneous_grade(m_prime) != p.group.inv(g))
    throw InvalidInput("normalizer pair: m' is not homogeneous of the inverse grade");
  return pair_axioms(p, m, m_prime);
}

namespace {

NormalizerSet finish(AlgebraPresentation const& p, std::vector<Vec> idems,
                     std::vector<std::tuple<Vec, Vec, Grade>> found) {
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end(),
                          [](auto const& a, auto const& b) { return std::get<0>(a) == std::get<0>(b); }),
              found.end());
  NormalizerSet n;
  n.presentation = p;
  n.diagonal_idempotents = std::move(idems);
  for (auto& [m, mp, g] : found) {
    n.elements.push_back(std::move(m));
    n.primes.push_back(std::move(mp));
    n.grades.push_back(g);
  }
  return n;
}

}  // namespace

NormalizerSet compute_n_bruteforce(AlgebraPresentation const& p, std::size_t cap) {
  p.validate();
  auto idems = diagonal_idempotents(p, cap);
  std::map<Grade, std::vector<std::uint32_t>> fibers;
  for (std::uint32_t i = 0; i < p.dim(); ++i) fibers[p.grades[i]].push_back(i);
  std::size_t q = p.ring.size();
  for (auto const& [g, idx] : fibers) {
    double count = std::pow(double(q), double(idx.size()));
    if (count > double(cap))
      throw CapacityExceeded("normalizer: fiber of grade " + p.group.format(g) + " has " + std::to_string(q) + "^" +
                             std::to_string(idx.size()) + " candidates, above the cap " + std::to_string(cap));
  }
  std::vector<std::tuple<Vec, Vec, Grade>> found{{p.zero(), p.zero(), p.group.identity()}};
  for (auto const& [g, idx] : fibers) {
    std::size_t count = 1;
    for (std::size_t k = 0; k < idx.size(); ++k) count *= q;
    for (std::size_t code = 1; code < count; ++code) {
      Vec m = p.zero();
      std::size_t rest = code;
      for (std::size_t k = idx.size(); k-- > 0;) {
        m[idx[k]] = Ring::Elem(rest % q);
        rest /= q;
      }
      if (auto mp = normalizer_prime(p, idems, m)) found.emplace_back(std::move(m), std::move(*mp), g);
    }
  }
  return finish(p, std::move(idems), std::move(found));
}

NormalizerSet compute_n_generated(FiniteGroupoid const& g, Cocycle const& c, Ring const& r) {
  require_indecomposable(r, "generated normalizer");
  auto p = export_presentation(g, c, r);
  auto gamma = bisections(g, &c);
  auto const& units = r.units();
  std::vector<std::tuple<Vec, Vec, Grade>> found{{p.zero(), p.zero(), c.group.identity()}};
  for (std::size_t s = 1; s < gamma.sets.size(); ++s) {
    auto const& u = gamma.sets[s];
    Grade grade = c.grade[u.front()];
    std::size_t count = 1;
    for (std::size_t k = 0; k < u.size(); ++k) {
      count *= units.size();
      if (count > kDefaultFiberCap * 100) throw CapacityExceeded("generated normalizer: too many unit labelings");
    }
    for (std::size_t code = 0; code < count; ++code) {
      Vec m = p.zero(), mp = p.zero();
      std::size_t rest = code;
      for (auto a : u) {
        Ring::Elem f = units[rest % units.size()];
        rest /= units.size();
        m[a] = f;
        mp[g.inv(a)] = *r.inverse(f);
      }
      found.emplace_back(std::move(m), std::move(mp), grade);
    }
  }
  auto idems = diagonal_idempotents(p);
  return finish(p, std::move(idems), std::move(found));
}

InvSemigroup normalizer_semigroup(NormalizerSet const& n) {
  auto const& p = n.presentation;
  std::size_t k = n.size();
  if (k > InvSemigroup::kMaxSize) throw CapacityExceeded("normalizer: more than " + std::to_string(InvSemigroup::kMaxSize) + " elements");
  std::vector<std::vector<InvSemigroup::Index>> table(k, std::vector<InvSemigroup::Index>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      auto idx = n.find(p.multiply(n.elements[i], n.elements[j]));
      if (!idx)
        throw PropertyFailure("normalizer is not closed under the product",
                              p.format(n.elements[i]) + " * " + p.format(n.elements[j]));
      table[i][j] = InvSemigroup::Index(*idx);
    }
  std::vector<std::string> names;
  for (auto const& m : n.elements) names.push_back(p.format(m));
  auto zero = n.find(p.zero());
  if (!zero) throw PropertyFailure("normalizer does not contain zero", "");
  auto s = InvSemigroup::from_table(std::move(table), InvSemigroup::Index(*zero), std::move(names));
  s.set_grading({p.group, n.grades});
  return s;
}

BasisEndpoints basis_endpoints(AlgebraPresentation const& p, std::vector<Vec> const& idems) {
  BasisEndpoints out;
  std::vector<Vec> atoms;
  for (auto const& e : idems) {
    if (is_zero(e)) continue;
    bool atom = std::none_of(idems.begin(), idems.end(), [&](Vec const& f) {
      return !is_zero(f) && f != e && p.multiply(e, f) == f;
    });
    if (atom) atoms.push_back(e);
  }
  auto is_atom = [&](Vec const& e) { return std::find(atoms.begin(), atoms.end(), e) != atoms.end(); };
  out.monomial = true;
  for (std::uint32_t i = 0; i < p.dim(); ++i) {
    Vec b = p.basis(i);
    auto prime = normalizer_prime(p, idems, b);
    if (!prime) {
      out.monomial = false;
      out.reason = "basis element " + p.labels[i] + " is not in the normalizer";
      return out;
    }
    Vec d = p.multiply(*prime, b), r = p.multiply(b, *prime);
    if (!is_atom(d) || !is_atom(r)) {
      out.monomial = false;
      out.reason = "basis element " + p.labels[i] + " does not have atomic endpoints";
      return out;
    }
    out.dom.push_back(std::move(d));
    out.ran.push_back(std::move(r));
    out.primes.push_back(std::move(*prime));
  }
  return out;
}

std::vector<CheckResult> structure_checks(NormalizerSet const& n) {
  auto const& p = n.presentation;
  auto const& r = p.ring;
  require_indecomposable(r, "structure checks");
  std::vector<CheckResult> out;
  auto fail = [](CheckResult& c, std::string w) {
    if (c.passed) {
      c.passed = false;
      c.witness = std::move(w);
    }
  };

  CheckResult are_idem{"m'm and mm' are idempotents of D", true, {}};
  CheckResult idempotents{"E(N) = E(D)", true, {}};
  CheckResult the_idems{"m'm = d(supp m) and mm' = r(supp m)", true, {}};
  CheckResult isotropy{"within a support, equal domains iff equal ranges", true, {}};
  CheckResult iso_support{"supp(m)^-1 supp(m) and supp(m) supp(m)^-1 lie in the isotropy", true, {}};
  CheckResult diag_inv{"m in N and D implies m' in N and D", true, {}};
  CheckResult inverse_sgp{"N is an inverse semigroup with involution m -> m'", true, {}};

  for (std::size_t i = 0; i < n.size(); ++i) {
    auto const& m = n.elements[i];
    auto const& mp = n.primes[i];
    Vec e = p.multiply(mp, m), f = p.multiply(m, mp);
    if (p.multiply(e, e) != e || !p.in_diagonal(e) || p.multiply(f, f) != f || !p.in_diagonal(f))
      fail(are_idem, p.format(m));
    if (p.in_diagonal(m) && (!p.in_diagonal(mp) || !n.find(mp))) fail(diag_inv, p.format(m));
  }
  {
    std::vector<Vec> en;
    for (auto const& m : n.elements)
      if (p.multiply(m, m) == m) en.push_back(m);
    if (en != n.diagonal_idempotents)
      fail(idempotents, "|E(N)| = " + std::to_string(en.size()) + ", |E(D)| = " +
                            std::to_string(n.diagonal_idempotents.size()));
  }

  auto ends = basis_endpoints(p, n.diagonal_idempotents);
  if (!ends.monomial) {
    fail(the_idems, ends.reason);
    fail(isotropy, ends.reason);
    fail(iso_support, ends.reason);
  } else {
    auto join = [&](Vec const& a, Vec const& b) { return sub(r, add(r, a, b), p.multiply(a, b)); };
    auto central = [&](Vec const& x) {
      return std::all_of(p.diagonal.begin(), p.diagonal.end(), [&](std::uint32_t d) {
        return p.multiply(x, p.basis(d)) == p.multiply(p.basis(d), x);
      });
    };
    for (std::size_t i = 0; i < n.size(); ++i) {
      auto const& m = n.elements[i];
      auto s = supp(m);
      Vec dj = p.zero(), rj = p.zero();
      for (auto k : s) {
        dj = join(dj, ends.dom[k]);
        rj = join(rj, ends.ran[k]);
      }
      if (p.multiply(n.primes[i], m) != dj || p.multiply(m, n.primes[i]) != rj) fail(the_idems, p.format(m));
      for (auto a : s)
        for (auto b : s) {
          if ((ends.dom[a] == ends.dom[b]) != (ends.ran[a] == ends.ran[b])) fail(isotropy, p.format(m));
          if (!central(p.multiply(ends.primes[a], p.basis(b))) || !central(p.multiply(p.basis(a), ends.primes[b])))
            fail(iso_support, p.format(m));
        }
    }
  }

  try {
    auto sg = normalizer_semigroup(n);
    for (std::size_t i = 0; i < n.size(); ++i) {
      auto j = n.find(n.primes[i]);
      if (!j || sg.star(InvSemigroup::Index(i)) != *j) fail(inverse_sgp, p.format(n.elements[i]));
    }
  } catch (std::exception const& ex) {
    fail(inverse_sgp, ex.what());
  }

  for (auto* c : {&are_idem, &idempotents, &the_idems, &isotropy, &iso_support, &diag_inv, &inverse_sgp})
    out.push_back(std::move(*c));
  return out;
}

LbhVerdict lbh_check(NormalizerSet const& n) {
  auto const& p = n.presentation;
  require_indecomposable(p.ring, "local bisection hypothesis");
  auto ends = basis_endpoints(p, n.diagonal_idempotents);
  if (!ends.monomial) throw InvalidInput("local bisection hypothesis: supports undefined: " + ends.reason);
  LbhVerdict v;
  for (auto const& m : n.elements) {
    std::set<Vec> doms, rans;
    bool bis = true;
    for (auto k : supp(m))
      if (!doms.insert(ends.dom[k]).second || !rans.insert(ends.ran[k]).second) bis = false;
    if (!bis) {
      v.holds = false;
      v.witness = m;
      v.witness_text = p.format(m);
      return v;
    }
  }
  return v;
}

LbhVerdict lbh_check(AlgebraPresentation const& p, std::size_t cap) {
  require_indecomposable(p.ring, "local bisection hypothesis");
  return lbh_check(compute_n_bruteforce(p, cap));
}

LbhVerdict lbh_check(FiniteGroupoid const& g, Cocycle const& c, Ring const& r, std::size_t cap) {
  auto v = lbh_check(export_presentation(g, c, r), cap);
  if (v.witness) v.witness_text = format_element(g, r, *v.witness);
  return v;
}

IsotropyLbhVerdict lbh_via_isotropy(FiniteGroupoid const& g, Cocycle const& c, Ring const& r,
                                    std::size_t census_cap) {
  require_indecomposable(r, "local bisection hypothesis");
  validate_cocycle(g, c);
  auto comp = grade_identity_component(g, c);
  IsotropyLbhVerdict v;
  for (Object x = 0; x < comp.groupoid.object_count(); ++x) {
    auto iso = isotropy_group(comp.groupoid, x);
    auto census = unit_census(r, iso.group, census_cap);
    if (!census.nontrivial.empty()) {
      v.holds = false;
      v.object = x;
      v.unit = census.nontrivial.front().first;
      return v;
    }
  }
  return v;
}

NilpotentWitness nilpotent_nonbisection_witness(FiniteGroupoid const& g, Cocycle const& c, Ring const& r,
                                                std::vector<Arrow> const& u, Ring::Elem n) {
  validate_cocycle(g, c);
  if (n == 0 || n >= r.size() || !r.is_nilpotent(n))
    throw InvalidInput("nilpotent witness: n must be a nonzero nilpotent");
  if (u.empty()) throw InvalidInput("nilpotent witness: U is empty");
  if (!is_local_bisection(g, u)) throw InvalidInput("nilpotent witness: U is not a local bisection");
  std::vector<Arrow> du;
  for (auto a : u) {
    if (a >= g.arrow_count()) throw InvalidInput("nilpotent witness: unknown arrow");
    if (g.dom(a) != g.cod(a) || g.is_unit(a))
      throw InvalidInput("nilpotent witness: " + g.arrow_name(a) + " is not a non-unit isotropy arrow");
    if (c.grade[a] != c.group.identity())
      throw InvalidInput("nilpotent witness: " + g.arrow_name(a) + " is not of identity grade");
    du.push_back(g.unit(g.dom(a)));
  }
  Vec chi_d = characteristic(g, r, du), chi_u = characteristic(g, r, u);
  NilpotentWitness w;
  w.m = chi_d;
  for (auto a : u) w.m[a] = r.neg(n);
  w.m_prime = chi_d;
  Vec power = chi_u;
  for (Ring::Elem nj = n; nj != 0; nj = r.mul(nj, n)) {
    for (std::size_t k = 0; k < power.size(); ++k) w.m_prime[k] = r.add(w.m_prime[k], r.mul(nj, power[k]));
    power = convolve(g, r, power, chi_u);
  }
  w.valid_pair = is_normalizer_pair(export_presentation(g, c, r), w.m, w.m_prime, c.group.identity());
  w.support_is_bisection = is_local_bisection(g, support(w.m));
  return w;
}

NormalizerQuotient quotient_n(NormalizerSet const& n) {
  auto sg = normalizer_semigroup(n);
  std::vector<InvSemigroup::Index> kernel;
  for (std::size_t i = 0; i < n.size(); ++i)
    if (n.presentation.in_diagonal(n.elements[i])) kernel.push_back(InvSemigroup::Index(i));
  auto cong = congruence_from_kernel(sg, kernel);
  auto q = quotient(sg, cong);
  return {std::move(sg), std::move(kernel), std::move(cong), std::move(q)};
}

PsiReport psi_check(FiniteGroupoid const& g, Cocycle const& c, Ring const& r, std::size_t cap) {
  require_indecomposable(r, "psi");
  auto gamma = bisections(g, &c);
  auto n = compute_n_bruteforce(export_presentation(g, c, r), cap);
  auto nq = quotient_n(n);
  std::vector<InvSemigroup::Index> cls;
  for (auto const& u : gamma.sets) {
    auto idx = n.find(characteristic(g, r, u));
    if (!idx) throw PropertyFailure("psi: characteristic function of a bisection is not in N", "");
    cls.push_back(nq.quotient.projection[*idx]);
  }
  PsiReport rep;
  rep.domain = gamma.sets.size();
  rep.codomain = nq.quotient.semigroup.size();
  std::set<InvSemigroup::Index> image(cls.begin(), cls.end());
  rep.injective = image.size() == cls.size();
  rep.surjective = image.size() == rep.codomain;
  rep.homomorphism = true;
  auto const& gs = gamma.semigroup;
  for (std::size_t a = 0; a < cls.size(); ++a)
    for (std::size_t b = 0; b < cls.size(); ++b)
      if (cls[gs.mul(InvSemigroup::Index(a), InvSemigroup::Index(b))] != nq.quotient.semigroup.mul(cls[a], cls[b]))
        rep.homomorphism = false;
  return rep;
}

std::string format_element(FiniteGroupoid const& g, Ring const& r, Vec const& v) {
  auto simple = [](std::string const& s) {
    if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
    if (s.size() == 1) return true;
    if (s[1] != '^') return false;
    return s.size() > 2 && std::all_of(s.begin() + 2, s.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
  };
  std::vector<std::string> terms;
  for (Arrow a = 0; a < v.size(); ++a) {
    if (v[a] == 0) continue;
    auto const& name = g.arrow_name(a);
    std::string coef = r.format(v[a]);
    if (v[a] == r.one()) terms.push_back(name);
    else if (name == "1") terms.push_back(coef);
    else if (simple(name)) terms.push_back(coef + name);
    else terms.push_back(coef + "*" + name);
  }
  // identity-named arrows first, matching group ring formatting
  std::stable_partition(terms.begin(), terms.end(), [&](std::string const& t) {
    return !t.empty() && std::isdigit(static_cast<unsigned char>(t[0])) && t.find_first_not_of("0123456789") == std::string::npos;
  });
  if (terms.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < terms.size(); ++i) s += (i ? " + " : "") + terms[i];
  return s;
}

}  // namespace gpdrec
