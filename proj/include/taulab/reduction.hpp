#pragma once

// Completely split primes and the reduction maps onto SL(2,p) and onto
// products of SL(2,p_i) for coprime products of split primes.

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "taulab/groups.hpp"
#include "taulab/matgroup.hpp"

namespace taulab {

namespace detail {

inline std::uint64_t mod_p(const BigInt& x, std::uint64_t p) {
  BigInt r = x % p;
  if (r < 0) r += p;
  return r.convert_to<std::uint64_t>();
}

inline std::vector<std::uint64_t> minpoly_mod(const NumberField& f, std::uint64_t p) {
  std::vector<std::uint64_t> c;
  for (const auto& x : f.minpoly()) c.push_back(mod_p(x, p));
  return c;
}

/// Roots in [0, p) of the minimal polynomial mod p, by exhaustive evaluation.
inline std::vector<std::uint32_t> roots_mod(const NumberField& f, std::uint32_t p) {
  const auto c = minpoly_mod(f, p);
  std::vector<std::uint32_t> roots;
  for (std::uint64_t x = 0; x < p; ++x) {
    std::uint64_t v = 0;
    for (std::size_t k = c.size(); k-- > 0;) v = (v * x + c[k]) % p;
    if (v == 0) roots.push_back(static_cast<std::uint32_t>(x));
  }
  return roots;
}

}  // namespace detail

/// A prime ideal P above a completely split rational prime p, identified by
/// the root of the minimal polynomial mod p that theta maps to.
class PrimeSite {
 public:
  static PrimeSite create(FieldPtr field, std::uint32_t p, std::uint32_t root) {
    if (p < 3 || !is_prime(p)) throw InvalidIdeal("site prime must be an odd prime, got " + std::to_string(p));
    if (detail::mod_p(field->discriminant(), p) == 0)
      throw InvalidIdeal(std::to_string(p) + " divides the discriminant");
    const auto roots = detail::roots_mod(*field, p);
    if (std::find(roots.begin(), roots.end(), root) == roots.end())
      throw InvalidIdeal(std::to_string(root) + " is not a root of the minimal polynomial mod " + std::to_string(p));
    if (roots.size() != field->degree()) throw InvalidIdeal(std::to_string(p) + " does not split completely");
    return PrimeSite(std::move(field), p, root);
  }

  std::uint32_t p() const { return p_; }
  std::uint32_t root() const { return root_; }
  const FieldPtr& field() const { return field_; }

 private:
  PrimeSite(FieldPtr field, std::uint32_t p, std::uint32_t root) : p_(p), root_(root), field_(std::move(field)) {}

  std::uint32_t p_;
  std::uint32_t root_;
  FieldPtr field_;
};

/// A 2x2 matrix of residues mod p.
struct ModpMatrix {
  std::uint32_t p = 0;
  Residues entries{};

  std::uint32_t det() const {
    const std::uint64_t q = p;
    return static_cast<std::uint32_t>(
        (std::uint64_t{entries[0]} * entries[3] % q + q - std::uint64_t{entries[1]} * entries[2] % q) % q);
  }
  bool is_unimodular() const { return det() == 1 % p; }

  friend bool operator==(const ModpMatrix&, const ModpMatrix&) = default;
};

inline ModpMatrix modp_mul(const ModpMatrix& x, const ModpMatrix& y) {
  const std::uint64_t p = x.p;
  const auto& a = x.entries;
  const auto& b = y.entries;
  return {x.p,
          {static_cast<std::uint32_t>((std::uint64_t{a[0]} * b[0] + std::uint64_t{a[1]} * b[2]) % p),
           static_cast<std::uint32_t>((std::uint64_t{a[0]} * b[1] + std::uint64_t{a[1]} * b[3]) % p),
           static_cast<std::uint32_t>((std::uint64_t{a[2]} * b[0] + std::uint64_t{a[3]} * b[2]) % p),
           static_cast<std::uint32_t>((std::uint64_t{a[2]} * b[1] + std::uint64_t{a[3]} * b[3]) % p)}};
}

/// Image of a field element in Z/p under theta -> site.root().
inline std::uint32_t reduce_element(const PrimeSite& site, const FieldElement& e) {
  const std::uint64_t p = site.p();
  std::uint64_t acc = 0;
  for (std::size_t k = e.coeffs().size(); k-- > 0;) {
    const Rational& c = e.coeffs()[k];
    const std::uint64_t den = detail::mod_p(boost::multiprecision::denominator(c), p);
    if (den == 0)
      throw NonInvertibleDenominator("denominator of " + format_rational(c) + " vanishes mod " + std::to_string(p));
    const std::uint64_t num = detail::mod_p(boost::multiprecision::numerator(c), p);
    acc = (acc * site.root() + num * inv_mod(den, p)) % p;
  }
  return static_cast<std::uint32_t>(acc);
}

inline ModpMatrix reduce_mod(const PrimeSite& site, const Mat2K& m) {
  if (!m.field()->same_as(*site.field())) throw FieldMismatch("matrix and prime site over different fields");
  ModpMatrix r{site.p(), {}};
  for (std::size_t i = 0; i < 4; ++i) r.entries[i] = reduce_element(site, m.entries()[i]);
  return r;
}

/// The symmetric generating multiset {pi(a), pi(a^-1), pi(b), pi(b^-1)},
/// indexed by Letter.
struct ReducedGenerators {
  std::uint32_t p = 0;
  std::array<ModpMatrix, 4> images{};
  /// Some two of the four images are equal.
  bool coincident = false;
  /// Some image is its own inverse (an involution or the identity).
  bool has_involution = false;
  /// All four images are the identity.
  bool degenerate = false;
};

inline ReducedGenerators reduce_generators(const PrimeSite& site, const GeneratorSystem& gs) {
  ReducedGenerators r;
  r.p = site.p();
  for (Letter l : kLetters) r.images[index(l)] = reduce_mod(site, gs.matrix(l));
  const ModpMatrix id{site.p(), {1, 0, 0, 1}};
  r.degenerate = std::all_of(r.images.begin(), r.images.end(), [&](const ModpMatrix& m) { return m == id; });
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) r.coincident |= r.images[i] == r.images[j];
  r.has_involution = r.images[0] == r.images[1] || r.images[2] == r.images[3];
  return r;
}

/// Product of prime ideals above pairwise distinct rational primes.
class IdealProduct {
 public:
  IdealProduct() = default;
  explicit IdealProduct(std::vector<PrimeSite> sites) : sites_(std::move(sites)) {
    for (std::size_t i = 0; i < sites_.size(); ++i)
      for (std::size_t j = i + 1; j < sites_.size(); ++j)
        if (sites_[i].p() == sites_[j].p())
          throw InvalidIdeal("prime " + std::to_string(sites_[i].p()) + " repeated in ideal product");
  }

  const std::vector<PrimeSite>& sites() const { return sites_; }
  std::vector<std::uint32_t> primes() const {
    std::vector<std::uint32_t> ps;
    for (const auto& s : sites_) ps.push_back(s.p());
    return ps;
  }

 private:
  std::vector<PrimeSite> sites_;
};

/// Componentwise reduction into the product group.
inline std::vector<ModpMatrix> crt_reduce(const IdealProduct& ideal, const Mat2K& m) {
  std::vector<ModpMatrix> out;
  out.reserve(ideal.sites().size());
  for (const auto& s : ideal.sites()) out.push_back(reduce_mod(s, m));
  return out;
}

struct SplitPrime {
  std::uint32_t p = 0;
  std::vector<std::uint32_t> roots;  // ascending
};

struct ExcludedPrime {
  std::uint32_t p = 0;
  std::string reason;
  /// Excluded for ramification or a denominator rather than for failing to
  /// split; such primes still get a report row.
  bool reported = false;
};

struct SplitScan {
  std::vector<SplitPrime> split;
  std::vector<ExcludedPrime> excluded;
};

/// Scans the odd primes in [p_min, p_max] for complete splitting by
/// exhaustive root search. Primes dividing the discriminant or some
/// generator denominator are excluded with a reason.
inline SplitScan split_primes(const NumberField& nf, const GeneratorSystem& gs, std::uint32_t p_min,
                              std::uint32_t p_max) {
  if (p_min <= 2 || p_min > p_max) throw EmptyRange("prime range must satisfy 2 < p_min <= p_max");
  BigInt denominators = 1;
  for (Letter l : kLetters) denominators *= boost::multiprecision::numerator(gs.cleared(l).denom.coeffs()[0]);

  SplitScan scan;
  for (std::uint32_t p = p_min; p <= p_max; ++p) {
    if (!is_prime(p)) continue;
    auto roots = detail::roots_mod(nf, p);
    if (detail::mod_p(nf.discriminant(), p) == 0) {
      scan.excluded.push_back({p, "divides discriminant", true});
    } else if (detail::mod_p(denominators, p) == 0) {
      scan.excluded.push_back({p, "divides generator denominator", true});
    } else if (roots.size() != nf.degree()) {
      scan.excluded.push_back({p, "not completely split (" + std::to_string(roots.size()) + " roots)", false});
    } else {
      scan.split.push_back({p, std::move(roots)});
    }
  }
  return scan;
}

}  // namespace taulab
