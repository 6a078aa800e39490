#pragma once

// Exact arithmetic in Q(theta) = Q[x]/(f) for a monic squarefree integer
// polynomial f, with complex embeddings for the house function.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_int.hpp>

#include "taulab/error.hpp"

namespace taulab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q", "-p/q" or a plain integer. Throws ParseError on junk or q = 0.
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) -> BigInt {
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
      neg = s[i] == '-';
      ++i;
    }
    if (i == s.size()) throw ParseError("malformed rational \"" + std::string(text) + "\"");
    BigInt v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9')
        throw ParseError("malformed rational \"" + std::string(text) + "\"");
      v = v * 10 + (s[i] - '0');
    }
    return neg ? BigInt(-v) : v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const BigInt num = parse_int(text.substr(0, slash));
  const BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in rational \"" + std::string(text) + "\"");
  return Rational(num, den);
}

/// Canonical text form: "n" for integers, "p/q" otherwise.
inline std::string format_rational(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace detail {

inline long double to_ld(const Rational& r) { return r.convert_to<long double>(); }

/// Determinant of a square rational matrix by Gaussian elimination.
inline Rational determinant(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      const Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

/// Solves m x = rhs exactly; returns empty vector when m is singular.
inline std::vector<Rational> solve(std::vector<std::vector<Rational>> m, std::vector<Rational> rhs) {
  const std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return {};
    std::swap(m[pivot], m[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      const Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) rhs[i] /= m[i][i];
  return rhs;
}

}  // namespace detail

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

/// A number field Q(theta) given by the monic minimal polynomial of theta.
///
/// Immutable after construction. The complex embeddings are the roots of the
/// minimal polynomial, each with an a-posteriori error radius: the disc of
/// radius `embedding_error(i)` around `embeddings()[i]` contains a true root.
class NumberField {
 public:
  /// `minpoly` lists coefficients from the constant term up; the last must be 1.
  static FieldPtr create(std::vector<BigInt> minpoly) {
    return FieldPtr(new NumberField(std::move(minpoly)));
  }

  /// The rational field, presented as Q[x]/(x).
  static FieldPtr rationals() { return create({0, 1}); }

  std::size_t degree() const { return minpoly_.size() - 1; }
  std::span<const BigInt> minpoly() const { return minpoly_; }
  std::span<const std::complex<long double>> embeddings() const { return embeddings_; }
  long double embedding_error(std::size_t i) const { return embedding_error_[i]; }
  long double max_embedding_error() const {
    return embedding_error_.empty() ? 0.0L
                                    : *std::max_element(embedding_error_.begin(), embedding_error_.end());
  }

  /// disc(f) = (-1)^(n(n-1)/2) * Res(f, f').
  const BigInt& discriminant() const { return discriminant_; }

  bool same_as(const NumberField& other) const {
    return this == &other || minpoly_ == other.minpoly_;
  }

  /// Reduces a polynomial (coefficients from degree 0) modulo the minimal
  /// polynomial, returning exactly degree() coefficients.
  template <class T>
  std::vector<T> reduce(std::vector<T> poly) const {
    const std::size_t n = degree();
    for (std::size_t k = poly.size(); k-- > n;) {
      if (poly[k] == 0) continue;
      const T c = poly[k];
      for (std::size_t i = 0; i < n; ++i) poly[k - n + i] -= c * T(minpoly_[i]);
      poly[k] = 0;
    }
    poly.resize(n, T(0));
    return poly;
  }

  std::string describe() const {
    std::string s;
    for (std::size_t k = minpoly_.size(); k-- > 0;) {
      const BigInt& c = minpoly_[k];
      if (c == 0) continue;
      if (!s.empty()) s += c < 0 ? " - " : " + ";
      else if (c < 0) s += "-";
      const BigInt a = boost::multiprecision::abs(c);
      if (k == 0 || a != 1) s += a.str();
      if (k >= 1) s += "x";
      if (k >= 2) s += "^" + std::to_string(k);
    }
    return s;
  }

 private:
  explicit NumberField(std::vector<BigInt> minpoly) : minpoly_(std::move(minpoly)) {
    while (minpoly_.size() > 1 && minpoly_.back() == 0) minpoly_.pop_back();
    if (minpoly_.size() < 2) throw DegreeZero("minimal polynomial must have degree >= 1");
    if (minpoly_.back() != 1) throw NotMonic("minimal polynomial must be monic");
    compute_discriminant();
    if (discriminant_ == 0) throw NotSquarefree("minimal polynomial is not squarefree");
    compute_embeddings();
    if (degree() == 2 || degree() == 3) reject_rational_roots();
  }

  // For monic f with root theta, Res(f, f') = N(f'(theta)), computed as the
  // determinant of multiplication by f'(theta) on the power basis.
  void compute_discriminant() {
    const std::size_t n = degree();
    std::vector<Rational> deriv(n);
    for (std::size_t i = 1; i <= n; ++i) deriv[i - 1] = Rational(minpoly_[i] * BigInt(i));
    std::vector<std::vector<Rational>> mat(n, std::vector<Rational>(n));
    std::vector<Rational> col = deriv;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) mat[i][j] = col[i];
      std::vector<Rational> shifted(n + 1, Rational(0));
      for (std::size_t i = 0; i < n; ++i) shifted[i + 1] = col[i];
      col = reduce(std::move(shifted));
    }
    const Rational res = detail::determinant(std::move(mat));
    const BigInt r = boost::multiprecision::numerator(res);
    discriminant_ = ((n * (n - 1) / 2) % 2 == 0) ? r : BigInt(-r);
  }

  void compute_embeddings() {
    using cld = std::complex<long double>;
    const std::size_t n = degree();
    if (n == 1) {
      embeddings_ = {cld(-detail::to_ld(Rational(minpoly_[0])), 0.0L)};
      // x + c0 has the exact root -c0 whenever it is representable.
      const long double r = embeddings_[0].real();
      embedding_error_ = {BigInt(static_cast<long long>(r)) == -minpoly_[0] && std::fabs(r) < 9e15L
                              ? 0.0L
                              : std::fabs(r) * std::numeric_limits<long double>::epsilon()};
      return;
    }
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 1; i < n; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    for (std::size_t i = 0; i < n; ++i)
      companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) = -minpoly_[i].convert_to<double>();
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    const auto& ev = solver.eigenvalues();

    std::vector<long double> coeffs(n + 1);
    for (std::size_t i = 0; i <= n; ++i) coeffs[i] = minpoly_[i].convert_to<long double>();
    auto eval = [&](cld z, cld& deriv, long double& abs_sum) {
      cld f = 0, d = 0;
      abs_sum = 0;
      for (std::size_t k = n + 1; k-- > 0;) {
        d = d * z + f;
        f = f * z + coeffs[k];
        abs_sum = abs_sum * std::abs(z) + std::fabs(coeffs[k]);
      }
      deriv = d;
      return f;
    };

    const long double eps = std::numeric_limits<long double>::epsilon();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      cld z(ev[i].real(), ev[i].imag());
      for (int it = 0; it < 100; ++it) {
        cld d;
        long double s;
        const cld f = eval(z, d, s);
        if (d == cld(0)) break;
        const cld step = f / d;
        z -= step;
        if (std::abs(step) <= 4 * eps * std::max(1.0L, std::abs(z))) break;
      }
      if (std::fabs(z.imag()) <= 8 * eps * std::max(1.0L, std::abs(z))) z = cld(z.real(), 0.0L);
      cld d;
      long double abs_sum;
      const cld f = eval(z, d, abs_sum);
      // Some root lies within n |f(z)/f'(z)| of z; the evaluated |f(z)| is
      // itself uncertain by about (2n+2) eps times the absolute sum.
      const long double f_bound = std::abs(f) + 2.0L * static_cast<long double>(n + 1) * eps * abs_sum;
      long double radius = std::abs(d) > 0 ? static_cast<long double>(n) * f_bound / std::abs(d)
                                           : std::numeric_limits<long double>::infinity();
      radius = std::max(radius, eps * std::abs(z));
      embeddings_.push_back(z);
      embedding_error_.push_back(radius);
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (embeddings_[a].real() != embeddings_[b].real()) return embeddings_[a].real() < embeddings_[b].real();
      return embeddings_[a].imag() < embeddings_[b].imag();
    });
    std::vector<cld> e;
    std::vector<long double> err;
    for (auto i : order) {
      e.push_back(embeddings_[i]);
      err.push_back(embedding_error_[i]);
    }
    embeddings_ = std::move(e);
    embedding_error_ = std::move(err);
  }

  // A rational root of a monic integer polynomial is an integer and one of
  // the real embeddings, so checking the nearest integer of each is exact.
  void reject_rational_roots() const {
    for (std::size_t i = 0; i < embeddings_.size(); ++i) {
      const auto z = embeddings_[i];
      if (std::fabs(z.imag()) > 0.5L) continue;
      const long double r = std::nearbyint(z.real());
      if (std::fabs(r) > 9e18L) continue;
      const BigInt candidate = static_cast<long long>(r);
      BigInt value = 0;
      for (std::size_t k = minpoly_.size(); k-- > 0;) value = value * candidate + minpoly_[k];
      if (value == 0)
        throw Reducible("minimal polynomial has the rational root " + candidate.str());
    }
  }

  std::vector<BigInt> minpoly_;
  std::vector<std::complex<long double>> embeddings_;
  std::vector<long double> embedding_error_;
  BigInt discriminant_;
};

/// An element of Q(theta) in the power basis 1, theta, ..., theta^(n-1).
class FieldElement {
 public:
  FieldElement(FieldPtr field, std::vector<Rational> coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() > field_->degree()) {
      coeffs_ = field_->reduce(std::move(coeffs_));
    }
    coeffs_.resize(field_->degree(), Rational(0));
  }

  static FieldElement from_rational(FieldPtr field, const Rational& value) {
    std::vector<Rational> c(field->degree(), Rational(0));
    c[0] = value;
    return FieldElement(std::move(field), std::move(c));
  }
  static FieldElement zero(FieldPtr field) { return from_rational(std::move(field), 0); }
  static FieldElement one(FieldPtr field) { return from_rational(std::move(field), 1); }

  /// theta itself (for degree 1 this is the rational root of the minimal polynomial).
  static FieldElement generator(FieldPtr field) {
    std::vector<Rational> c(2, Rational(0));
    c[1] = 1;
    return FieldElement(std::move(field), std::move(c));
  }

  const FieldPtr& field() const { return field_; }
  std::span<const Rational> coeffs() const { return coeffs_; }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c == 0; });
  }
  bool is_rational() const {
    return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const Rational& c) { return c == 0; });
  }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    a.check_same(b);
    return a.coeffs_ == b.coeffs_;
  }

  FieldElement operator-() const {
    FieldElement r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    a.check_same(b);
    FieldElement r = a;
    for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] += b.coeffs_[i];
    return r;
  }

  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) { return a + (-b); }

  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    a.check_same(b);
    const std::size_t n = a.coeffs_.size();
    std::vector<Rational> prod(2 * n - 1, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (b.coeffs_[j] == 0) continue;
        prod[i + j] += a.coeffs_[i] * b.coeffs_[j];
      }
    }
    return FieldElement(a.field_, a.field_->reduce(std::move(prod)));
  }

  friend FieldElement operator*(const Rational& s, const FieldElement& a) {
    FieldElement r = a;
    for (auto& c : r.coeffs_) c *= s;
    return r;
  }

  /// Matrix of multiplication by this element on the power basis; column j
  /// holds the coordinates of this * theta^j.
  std::vector<std::vector<Rational>> multiplication_matrix() const {
    const std::size_t n = coeffs_.size();
    std::vector<std::vector<Rational>> mat(n, std::vector<Rational>(n));
    std::vector<Rational> col = coeffs_;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) mat[i][j] = col[i];
      std::vector<Rational> shifted(n + 1, Rational(0));
      for (std::size_t i = 0; i < n; ++i) shifted[i + 1] = col[i];
      col = field_->reduce(std::move(shifted));
    }
    return mat;
  }

  /// Value under the i-th complex embedding.
  std::complex<long double> embed(std::size_t i) const {
    const auto z = field_->embeddings()[i];
    std::complex<long double> v = 0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) v = v * z + detail::to_ld(coeffs_[k]);
    return v;
  }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (i) s += ", ";
      s += format_rational(coeffs_[i]);
    }
    return s + "]";
  }

 private:
  void check_same(const FieldElement& other) const {
    if (!field_->same_as(*other.field_)) throw FieldMismatch("field elements belong to different fields");
  }

  FieldPtr field_;
  std::vector<Rational> coeffs_;
};

/// Multiplicative inverse; throws DivisionByZero for a == 0.
inline FieldElement inverse(const FieldElement& a) {
  if (a.is_zero()) throw DivisionByZero("inverse of zero field element");
  const std::size_t n = a.coeffs().size();
  std::vector<Rational> rhs(n, Rational(0));
  rhs[0] = 1;
  auto x = detail::solve(a.multiplication_matrix(), std::move(rhs));
  if (x.empty()) throw DivisionByZero("element is a zero divisor (reducible minimal polynomial?)");
  return FieldElement(a.field(), std::move(x));
}

/// Exact field norm: determinant of the multiplication matrix.
inline Rational norm(const FieldElement& a) {
  if (a.is_zero()) return 0;
  return detail::determinant(a.multiplication_matrix());
}

/// True iff every power-basis coordinate is an integer, i.e. a lies in Z[theta].
inline bool is_integral(const FieldElement& a) {
  return std::all_of(a.coeffs().begin(), a.coeffs().end(),
                     [](const Rational& c) { return boost::multiprecision::denominator(c) == 1; });
}

/// A floating value together with a bound on its absolute error.
struct Bounded {
  double value = 0;
  double error = 0;

  double upper() const { return value + error; }
  double lower() const { return value - error; }
};

/// The house: max |sigma(a)| over the complex embeddings sigma. house(0) = 0.
inline Bounded house(const FieldElement& a) {
  if (a.is_zero()) return {0.0, 0.0};
  if (a.is_rational()) {
    // Every conjugate of a rational number is itself.
    const Rational r = boost::multiprecision::abs(a.coeffs()[0]);
    const double v = r.convert_to<double>();
    const Rational diff = boost::multiprecision::abs(Rational(v) - r);
    return {v, diff == 0 ? 0.0 : std::nextafter(diff.convert_to<double>(), std::numeric_limits<double>::infinity())};
  }
  const NumberField& f = *a.field();
  const long double eps = std::numeric_limits<long double>::epsilon();
  const std::size_t n = f.degree();
  long double best = 0, best_err = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto z = f.embeddings()[i];
    const long double delta = f.embedding_error(i);
    const long double rz = std::abs(z) + delta;
    std::complex<long double> v = 0;
    long double abs_sum = 0, deriv_bound = 0;
    for (std::size_t k = n; k-- > 0;) {
      const long double c = detail::to_ld(a.coeffs()[k]);
      v = v * z + c;
      deriv_bound = deriv_bound * rz + abs_sum;
      abs_sum = abs_sum * rz + std::fabs(c);
    }
    const long double err = deriv_bound * delta + 4.0L * static_cast<long double>(n + 1) * eps * abs_sum;
    best = std::max(best, std::abs(v));
    best_err = std::max(best_err, err);
  }
  const double value = static_cast<double>(best);
  const double slack = std::fabs(value - static_cast<double>(best)) + static_cast<double>(best_err);
  return {value, slack == 0.0 ? 0.0 : std::nextafter(slack, std::numeric_limits<double>::infinity())};
}

}  // namespace taulab
