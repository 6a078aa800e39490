#pragma once

// Finite groups with a perfect ranking (element <-> integer in [0, order)),
// which is what the Cayley graph builder indexes vertices by.

#include <array>
#include <concepts>
#include <cstdint>
#include <string>
#include <vector>

#include "taulab/error.hpp"

namespace taulab {

template <class G>
concept FiniteGroup = requires(const G& g, const typename G::Element& x, std::uint64_t r) {
  { g.identity() } -> std::same_as<typename G::Element>;
  { g.multiply(x, x) } -> std::same_as<typename G::Element>;
  { g.inverse(x) } -> std::same_as<typename G::Element>;
  { g.rank(x) } -> std::same_as<std::uint64_t>;
  { g.unrank(r) } -> std::same_as<typename G::Element>;
  { g.order() } -> std::same_as<std::uint64_t>;
  { g.describe() } -> std::convertible_to<std::string>;
};

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
  std::uint64_t result = 1 % p;
  base %= p;
  while (exp) {
    if (exp & 1U) result = static_cast<std::uint64_t>(static_cast<__uint128_t>(result) * base % p);
    base = static_cast<std::uint64_t>(static_cast<__uint128_t>(base) * base % p);
    exp >>= 1U;
  }
  return result;
}

/// Inverse modulo a prime p; x must be nonzero mod p.
inline std::uint64_t inv_mod(std::uint64_t x, std::uint64_t p) { return pow_mod(x, p - 2, p); }

/// |SL(2,p)| = p(p^2 - 1).
constexpr std::uint64_t sl2_order(std::uint64_t p) { return p * (p * p - 1); }

/// A 2x2 matrix mod p, entries row-major in [0, p).
using Residues = std::array<std::uint32_t, 4>;

/// SL(2, p) for an odd prime p < 2^16.
///
/// Ranking: elements with a != 0 are (a-1) p^2 + b p + c (d is forced);
/// elements with a = 0 have c = -1/b and come after, ranked by (b-1) p + d.
class SL2Group {
 public:
  using Element = Residues;

  explicit SL2Group(std::uint32_t p) : p_(p), inv_(p) {
    if (p < 3 || p >= (1U << 16) || !is_prime(p)) throw Error("SL2Group: p must be an odd prime below 65536");
    for (std::uint32_t x = 1; x < p; ++x) inv_[x] = static_cast<std::uint32_t>(inv_mod(x, p));
  }

  std::uint32_t prime() const { return p_; }
  std::uint64_t order() const { return sl2_order(p_); }
  std::string describe() const { return "SL(2," + std::to_string(p_) + ")"; }

  Element identity() const { return {1, 0, 0, 1}; }

  Element multiply(const Element& x, const Element& y) const {
    const std::uint64_t p = p_;
    return {static_cast<std::uint32_t>((std::uint64_t{x[0]} * y[0] + std::uint64_t{x[1]} * y[2]) % p),
            static_cast<std::uint32_t>((std::uint64_t{x[0]} * y[1] + std::uint64_t{x[1]} * y[3]) % p),
            static_cast<std::uint32_t>((std::uint64_t{x[2]} * y[0] + std::uint64_t{x[3]} * y[2]) % p),
            static_cast<std::uint32_t>((std::uint64_t{x[2]} * y[1] + std::uint64_t{x[3]} * y[3]) % p)};
  }

  Element inverse(const Element& x) const { return {x[3], neg(x[1]), neg(x[2]), x[0]}; }

  std::uint64_t rank(const Element& x) const {
    const std::uint64_t p = p_;
    if (x[0] != 0) return (std::uint64_t{x[0]} - 1) * p * p + std::uint64_t{x[1]} * p + x[2];
    return (p - 1) * p * p + (std::uint64_t{x[1]} - 1) * p + x[3];
  }

  Element unrank(std::uint64_t r) const {
    const std::uint64_t p = p_;
    const std::uint64_t head = (p - 1) * p * p;
    if (r < head) {
      const auto a = static_cast<std::uint32_t>(r / (p * p) + 1);
      const auto b = static_cast<std::uint32_t>(r / p % p);
      const auto c = static_cast<std::uint32_t>(r % p);
      const auto d = static_cast<std::uint32_t>((1 + std::uint64_t{b} * c) % p * inv_[a] % p);
      return {a, b, c, d};
    }
    r -= head;
    const auto b = static_cast<std::uint32_t>(r / p + 1);
    const auto d = static_cast<std::uint32_t>(r % p);
    return {0, b, neg(inv_[b]), d};
  }

  bool contains(const Element& x) const {
    const std::uint64_t p = p_;
    return x[0] < p && x[1] < p && x[2] < p && x[3] < p &&
           (std::uint64_t{x[0]} * x[3] + (p - 1) * (std::uint64_t{x[1]} * x[2] % p)) % p == 1 % p;
  }

 private:
  std::uint32_t neg(std::uint32_t x) const { return x == 0 ? 0 : p_ - x; }

  std::uint32_t p_;
  std::vector<std::uint32_t> inv_;
};

/// SL(2,p_1) x ... x SL(2,p_m), ranked in mixed radix (first factor most significant).
class SL2ProductGroup {
 public:
  using Element = std::vector<Residues>;

  explicit SL2ProductGroup(const std::vector<std::uint32_t>& primes) {
    for (auto p : primes) factors_.emplace_back(p);
  }

  std::size_t factor_count() const { return factors_.size(); }
  const SL2Group& factor(std::size_t i) const { return factors_[i]; }

  std::uint64_t order() const {
    std::uint64_t o = 1;
    for (const auto& f : factors_) o *= f.order();
    return o;
  }

  std::string describe() const {
    if (factors_.empty()) return "trivial";
    std::string s;
    for (const auto& f : factors_) s += (s.empty() ? "" : " x ") + f.describe();
    return s;
  }

  Element identity() const { return Element(factors_.size(), Residues{1, 0, 0, 1}); }

  Element multiply(const Element& x, const Element& y) const {
    Element r(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i) r[i] = factors_[i].multiply(x[i], y[i]);
    return r;
  }

  Element inverse(const Element& x) const {
    Element r(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i) r[i] = factors_[i].inverse(x[i]);
    return r;
  }

  std::uint64_t rank(const Element& x) const {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) r = r * factors_[i].order() + factors_[i].rank(x[i]);
    return r;
  }

  Element unrank(std::uint64_t r) const {
    Element x(factors_.size());
    for (std::size_t i = factors_.size(); i-- > 0;) {
      x[i] = factors_[i].unrank(r % factors_[i].order());
      r /= factors_[i].order();
    }
    return x;
  }

 private:
  std::vector<SL2Group> factors_;
};

/// Z/m_1 x ... x Z/m_k, for small diagnostic graphs (cycles, K_4, K_2).
class CyclicProductGroup {
 public:
  using Element = std::vector<std::uint32_t>;

  explicit CyclicProductGroup(std::vector<std::uint32_t> moduli) : moduli_(std::move(moduli)) {
    for (auto m : moduli_)
      if (m == 0) throw Error("CyclicProductGroup: modulus must be positive");
  }

  std::uint64_t order() const {
    std::uint64_t o = 1;
    for (auto m : moduli_) o *= m;
    return o;
  }

  std::string describe() const {
    std::string s;
    for (auto m : moduli_) s += (s.empty() ? "Z/" : " x Z/") + std::to_string(m);
    return s.empty() ? "trivial" : s;
  }

  Element identity() const { return Element(moduli_.size(), 0); }

  Element multiply(const Element& x, const Element& y) const {
    Element r(moduli_.size());
    for (std::size_t i = 0; i < moduli_.size(); ++i) r[i] = (x[i] + y[i]) % moduli_[i];
    return r;
  }

  Element inverse(const Element& x) const {
    Element r(moduli_.size());
    for (std::size_t i = 0; i < moduli_.size(); ++i) r[i] = (moduli_[i] - x[i]) % moduli_[i];
    return r;
  }

  std::uint64_t rank(const Element& x) const {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < moduli_.size(); ++i) r = r * moduli_[i] + x[i];
    return r;
  }

  Element unrank(std::uint64_t r) const {
    Element x(moduli_.size());
    for (std::size_t i = moduli_.size(); i-- > 0;) {
      x[i] = static_cast<std::uint32_t>(r % moduli_[i]);
      r /= moduli_[i];
    }
    return x;
  }

 private:
  std::vector<std::uint32_t> moduli_;
};

static_assert(FiniteGroup<SL2Group>);
static_assert(FiniteGroup<SL2ProductGroup>);
static_assert(FiniteGroup<CyclicProductGroup>);

}  // namespace taulab
