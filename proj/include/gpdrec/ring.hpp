#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gpdrec {

// Finite commutative ring with unit, Z/n or a finite product of such.
//
// Elements are encoded as a mixed-radix index in [0, size()); for a product
// ring the first factor is the most significant digit.  Unit, idempotent and
// nilpotent sets are computed once at construction.
class Ring {
 public:
  using Elem = std::uint32_t;

  static constexpr std::size_t kMaxSize = 10000;

  // A primary component Z/p^k of one factor, used by the linear solver.
  struct LocalComponent {
    std::size_t factor;
    std::uint32_t p;
    std::uint32_t k;
    std::uint32_t q;  // p^k
  };

  static Ring modular(std::uint32_t n);
  static Ring product(std::vector<std::uint32_t> moduli);

  // Parses the short form used on the command line: "mod6", "prod2x3".
  static Ring parse(std::string const& text);

  std::size_t size() const noexcept { return size_; }
  std::vector<std::uint32_t> const& moduli() const noexcept { return moduli_; }
  bool is_product() const noexcept { return product_; }

  Elem zero() const noexcept { return 0; }
  Elem one() const noexcept { return one_; }
  Elem from_int(std::int64_t v) const;

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  Elem pow(Elem a, std::uint64_t e) const;

  std::vector<std::uint32_t> residues(Elem a) const;
  Elem from_residues(std::vector<std::uint32_t> const& r) const;

  bool is_unit(Elem a) const { return inverse_[a] != kNoInverse; }
  std::optional<Elem> inverse(Elem a) const;
  bool is_idempotent(Elem a) const { return mul(a, a) == a; }
  bool is_nilpotent(Elem a) const { return pow(a, size_) == 0; }

  std::vector<Elem> const& units() const noexcept { return units_; }
  std::vector<Elem> const& idempotents() const noexcept { return idempotents_; }
  std::vector<Elem> const& nilpotents() const noexcept { return nilpotents_; }

  bool is_indecomposable() const noexcept { return idempotents_.size() == 2; }
  bool is_reduced() const noexcept { return nilpotents_.size() == 1; }

  // (p, k) when the ring is Z/p^k.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> prime_power() const;

  std::vector<LocalComponent> const& local_components() const noexcept {
    return components_;
  }
  std::uint32_t project(Elem a, LocalComponent const& c) const;
  // Inverse of the family of projections: one value per local component.
  Elem lift(std::vector<std::uint32_t> const& component_values) const;

  std::string name() const;  // "mod6" or "prod2x3"
  std::string format(Elem a) const;

  friend bool operator==(Ring const& a, Ring const& b) {
    return a.product_ == b.product_ && a.moduli_ == b.moduli_;
  }

 private:
  Ring(std::vector<std::uint32_t> moduli, bool product);

  static constexpr Elem kNoInverse = 0xffffffffu;

  std::vector<std::uint32_t> moduli_;
  bool product_ = false;
  std::size_t size_ = 0;
  Elem one_ = 0;
  std::vector<Elem> inverse_;
  std::vector<Elem> units_;
  std::vector<Elem> idempotents_;
  std::vector<Elem> nilpotents_;
  std::vector<LocalComponent> components_;
  // CRT idempotent lifts: component i -> residue in its factor.
  std::vector<std::uint64_t> crt_lift_;
};

// Laurent polynomial over Z/p^k; exponents are confined to [-64, 64].
class LaurentPoly {
 public:
  static constexpr int kMaxExponent = 64;

  explicit LaurentPoly(Ring const& ring) : ring_(&ring) {}
  LaurentPoly(Ring const& ring, std::map<int, Ring::Elem> coeffs);

  static LaurentPoly monomial(Ring const& ring, Ring::Elem c, int exponent);

  Ring const& ring() const noexcept { return *ring_; }
  std::map<int, Ring::Elem> const& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_one() const;
  Ring::Elem coeff(int exponent) const;

  LaurentPoly operator+(LaurentPoly const& o) const;
  LaurentPoly operator-(LaurentPoly const& o) const;
  LaurentPoly operator*(LaurentPoly const& o) const;
  friend bool operator==(LaurentPoly const& a, LaurentPoly const& b) {
    return a.coeffs_ == b.coeffs_;
  }

  std::string format() const;

 private:
  void set(int exponent, Ring::Elem c);

  Ring const* ring_;
  std::map<int, Ring::Elem> coeffs_;
};

// Inverse of a Laurent polynomial over Z/p^k, or nullopt when it is not a
// unit.  Throws InvalidInput when the coefficient ring is not Z/p^k and
// CapacityExceeded when the inverse leaves the exponent window.
std::optional<LaurentPoly> laurent_unit_inverse(LaurentPoly const& p);

}  // namespace gpdrec
