#include "gpdrec/ring.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "gpdrec/errors.hpp"

namespace gpdrec {

namespace {

std::uint64_t modpow(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

// Inverse of a modulo m, assuming gcd(a, m) == 1.
std::uint64_t modinv(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, x1 = 1, a1 = a % m;
  while (a1) {
    std::int64_t q = g / a1;
    std::tie(g, a1) = std::make_tuple(a1, g - q * a1);
    std::tie(x, x1) = std::make_tuple(x1, x - q * x1);
  }
  return static_cast<std::uint64_t>(((x % m) + m) % m);
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> factorize(std::uint32_t n) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    std::uint32_t k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    out.emplace_back(p, k);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

}  // namespace

Ring::Ring(std::vector<std::uint32_t> moduli, bool product)
    : moduli_(std::move(moduli)), product_(product) {
  if (moduli_.empty()) throw InvalidInput("ring: product needs at least one factor");
  std::uint64_t size = 1;
  for (auto n : moduli_) {
    if (n < 2) throw InvalidInput("ring: modulus must be >= 2, got " + std::to_string(n));
    size *= n;
    if (size > kMaxSize)
      throw InvalidInput("ring: order exceeds the cap of " + std::to_string(kMaxSize));
  }
  size_ = static_cast<std::size_t>(size);
  one_ = from_residues(std::vector<std::uint32_t>(moduli_.size(), 1));

  for (std::size_t f = 0; f < moduli_.size(); ++f) {
    for (auto [p, k] : factorize(moduli_[f])) {
      std::uint32_t q = 1;
      for (std::uint32_t i = 0; i < k; ++i) q *= p;
      components_.push_back({f, p, k, q});
    }
  }
  for (auto const& c : components_) {
    std::uint64_t n = moduli_[c.factor];
    std::uint64_t rest = n / c.q;
    // e == 1 mod q, e == 0 mod rest
    crt_lift_.push_back(rest * modinv(static_cast<std::int64_t>(rest % c.q), c.q) % n);
  }

  inverse_.assign(size_, kNoInverse);
  for (Elem a = 0; a < size_; ++a) {
    auto r = residues(a);
    bool unit = true;
    std::vector<std::uint32_t> inv(r.size());
    for (std::size_t f = 0; f < r.size() && unit; ++f) {
      if (std::gcd(r[f], moduli_[f]) != 1) {
        unit = false;
      } else {
        inv[f] = static_cast<std::uint32_t>(modinv(r[f], moduli_[f]));
      }
    }
    if (unit) {
      inverse_[a] = from_residues(inv);
      units_.push_back(a);
    }
    if (mul(a, a) == a) idempotents_.push_back(a);
    if (pow(a, size_) == 0) nilpotents_.push_back(a);
  }
}

Ring Ring::modular(std::uint32_t n) { return Ring({n}, false); }

Ring Ring::product(std::vector<std::uint32_t> moduli) { return Ring(std::move(moduli), true); }

Ring Ring::parse(std::string const& text) {
  auto number = [&](std::string const& s) -> std::uint32_t {
    if (s.empty() || s.size() > 9 || !std::all_of(s.begin(), s.end(), ::isdigit))
      throw InvalidInput("ring: cannot parse '" + text + "'");
    return static_cast<std::uint32_t>(std::stoul(s));
  };
  if (text.rfind("mod", 0) == 0) return modular(number(text.substr(3)));
  if (text.rfind("prod", 0) == 0) {
    std::vector<std::uint32_t> mods;
    std::stringstream ss(text.substr(4));
    std::string part;
    while (std::getline(ss, part, 'x')) mods.push_back(number(part));
    return product(std::move(mods));
  }
  throw InvalidInput("ring: expected modN or prodAxB..., got '" + text + "'");
}

Ring::Elem Ring::from_int(std::int64_t v) const {
  std::vector<std::uint32_t> r(moduli_.size());
  for (std::size_t f = 0; f < r.size(); ++f) {
    std::int64_t n = moduli_[f];
    r[f] = static_cast<std::uint32_t>(((v % n) + n) % n);
  }
  return from_residues(r);
}

std::vector<std::uint32_t> Ring::residues(Elem a) const {
  std::vector<std::uint32_t> r(moduli_.size());
  for (std::size_t f = moduli_.size(); f-- > 0;) {
    r[f] = a % moduli_[f];
    a /= moduli_[f];
  }
  return r;
}

Ring::Elem Ring::from_residues(std::vector<std::uint32_t> const& r) const {
  Elem a = 0;
  for (std::size_t f = 0; f < moduli_.size(); ++f) a = a * moduli_[f] + r[f] % moduli_[f];
  return a;
}

Ring::Elem Ring::add(Elem a, Elem b) const {
  if (moduli_.size() == 1) return (a + b) % moduli_[0];
  auto ra = residues(a), rb = residues(b);
  for (std::size_t f = 0; f < ra.size(); ++f) ra[f] = (ra[f] + rb[f]) % moduli_[f];
  return from_residues(ra);
}

Ring::Elem Ring::neg(Elem a) const {
  if (moduli_.size() == 1) return (moduli_[0] - a) % moduli_[0];
  auto ra = residues(a);
  for (std::size_t f = 0; f < ra.size(); ++f) ra[f] = (moduli_[f] - ra[f]) % moduli_[f];
  return from_residues(ra);
}

Ring::Elem Ring::sub(Elem a, Elem b) const { return add(a, neg(b)); }

Ring::Elem Ring::mul(Elem a, Elem b) const {
  if (moduli_.size() == 1)
    return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % moduli_[0]);
  auto ra = residues(a), rb = residues(b);
  for (std::size_t f = 0; f < ra.size(); ++f)
    ra[f] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(ra[f]) * rb[f] % moduli_[f]);
  return from_residues(ra);
}

Ring::Elem Ring::pow(Elem a, std::uint64_t e) const {
  auto ra = residues(a);
  for (std::size_t f = 0; f < ra.size(); ++f)
    ra[f] = static_cast<std::uint32_t>(modpow(ra[f], e, moduli_[f]));
  return from_residues(ra);
}

std::optional<Ring::Elem> Ring::inverse(Elem a) const {
  if (inverse_[a] == kNoInverse) return std::nullopt;
  return inverse_[a];
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> Ring::prime_power() const {
  if (moduli_.size() != 1 || components_.size() != 1) return std::nullopt;
  return std::make_pair(components_[0].p, components_[0].k);
}

std::uint32_t Ring::project(Elem a, LocalComponent const& c) const {
  return residues(a)[c.factor] % c.q;
}

Ring::Elem Ring::lift(std::vector<std::uint32_t> const& values) const {
  std::vector<std::uint64_t> r(moduli_.size(), 0);
  for (std::size_t i = 0; i < components_.size(); ++i) {
    auto const& c = components_[i];
    r[c.factor] = (r[c.factor] + values[i] % c.q * crt_lift_[i]) % moduli_[c.factor];
  }
  std::vector<std::uint32_t> out(r.begin(), r.end());
  return from_residues(out);
}

std::string Ring::name() const {
  if (!product_) return "mod" + std::to_string(moduli_[0]);
  std::string s = "prod";
  for (std::size_t f = 0; f < moduli_.size(); ++f) {
    if (f) s += 'x';
    s += std::to_string(moduli_[f]);
  }
  return s;
}

std::string Ring::format(Elem a) const {
  if (!product_) return std::to_string(a);
  auto r = residues(a);
  std::string s = "(";
  for (std::size_t f = 0; f < r.size(); ++f) {
    if (f) s += ',';
    s += std::to_string(r[f]);
  }
  return s + ")";
}

// ---------------------------------------------------------------------------

LaurentPoly::LaurentPoly(Ring const& ring, std::map<int, Ring::Elem> coeffs) : ring_(&ring) {
  for (auto [e, c] : coeffs) set(e, c);
}

LaurentPoly LaurentPoly::monomial(Ring const& ring, Ring::Elem c, int exponent) {
  LaurentPoly p(ring);
  p.set(exponent, c);
  return p;
}

void LaurentPoly::set(int exponent, Ring::Elem c) {
  if (exponent < -kMaxExponent || exponent > kMaxExponent)
    throw CapacityExceeded("laurent: exponent " + std::to_string(exponent) +
                           " outside [-64, 64]");
  if (c == 0) {
    coeffs_.erase(exponent);
  } else {
    coeffs_[exponent] = c;
  }
}

bool LaurentPoly::is_one() const {
  return coeffs_.size() == 1 && coeffs_.begin()->first == 0 &&
         coeffs_.begin()->second == ring_->one();
}

Ring::Elem LaurentPoly::coeff(int exponent) const {
  auto it = coeffs_.find(exponent);
  return it == coeffs_.end() ? 0 : it->second;
}

LaurentPoly LaurentPoly::operator+(LaurentPoly const& o) const {
  LaurentPoly r = *this;
  for (auto [e, c] : o.coeffs_) r.set(e, ring_->add(r.coeff(e), c));
  return r;
}

LaurentPoly LaurentPoly::operator-(LaurentPoly const& o) const {
  LaurentPoly r = *this;
  for (auto [e, c] : o.coeffs_) r.set(e, ring_->sub(r.coeff(e), c));
  return r;
}

LaurentPoly LaurentPoly::operator*(LaurentPoly const& o) const {
  LaurentPoly r(*ring_);
  for (auto [e1, c1] : coeffs_)
    for (auto [e2, c2] : o.coeffs_) r.set(e1 + e2, ring_->add(r.coeff(e1 + e2), ring_->mul(c1, c2)));
  return r;
}

std::string LaurentPoly::format() const {
  if (coeffs_.empty()) return "0";
  std::string s;
  for (auto [e, c] : coeffs_) {
    if (!s.empty()) s += " + ";
    s += ring_->format(c);
    if (e == 1) {
      s += "x";
    } else if (e != 0) {
      s += "x^" + std::to_string(e);
    }
  }
  return s;
}

std::optional<LaurentPoly> laurent_unit_inverse(LaurentPoly const& poly) {
  Ring const& ring = poly.ring();
  auto pk = ring.prime_power();
  if (!pk) throw InvalidInput("laurent_unit_inverse: coefficient ring must be Z/p^k");
  auto [p, k] = *pk;

  // The image modulo the nilradical (p) must be a single monomial c x^m.
  std::optional<int> lead;
  for (auto [e, c] : poly.coeffs()) {
    if (c % p == 0) continue;
    if (lead) return std::nullopt;
    lead = e;
  }
  if (!lead) return std::nullopt;

  Ring::Elem c_inv = *ring.inverse(poly.coeff(*lead));
  LaurentPoly normalizer = LaurentPoly::monomial(ring, c_inv, -*lead);
  LaurentPoly one = LaurentPoly::monomial(ring, ring.one(), 0);
  // poly = c x^m (1 + nu) with every coefficient of nu divisible by p, so
  // nu^k = 0 and (1 + nu)^{-1} = sum_{j<k} (-nu)^j.
  LaurentPoly minus_nu = one - normalizer * poly;
  LaurentPoly series = one;
  LaurentPoly term = one;
  for (std::uint32_t j = 1; j < k; ++j) {
    term = term * minus_nu;
    series = series + term;
  }
  LaurentPoly inverse = series * normalizer;
  if (!(poly * inverse).is_one())
    throw PropertyFailure("laurent_unit_inverse: geometric series did not invert",
                          poly.format());
  return inverse;
}

}  // namespace gpdrec
