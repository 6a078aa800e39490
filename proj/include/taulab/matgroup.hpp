#pragma once

// 2x2 matrices over a number field, word evaluation in <a, b>, and the
// growth constants M and C that drive the girth lower bound.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "taulab/numberfield.hpp"
#include "taulab/words.hpp"

namespace taulab {

/// Row-major 2x2 matrix over a number field.
class Mat2K {
 public:
  Mat2K(FieldElement e00, FieldElement e01, FieldElement e10, FieldElement e11)
      : e_{std::move(e00), std::move(e01), std::move(e10), std::move(e11)} {
    for (const auto& x : e_)
      if (!x.field()->same_as(*e_[0].field())) throw FieldMismatch("matrix entries belong to different fields");
  }

  /// Matrix with rational entries.
  static Mat2K rational(const FieldPtr& f, const Rational& e00, const Rational& e01, const Rational& e10,
                        const Rational& e11) {
    return {FieldElement::from_rational(f, e00), FieldElement::from_rational(f, e01),
            FieldElement::from_rational(f, e10), FieldElement::from_rational(f, e11)};
  }

  static Mat2K identity(const FieldPtr& f) { return rational(f, 1, 0, 0, 1); }

  const FieldElement& operator()(std::size_t row, std::size_t col) const { return e_[2 * row + col]; }
  const std::array<FieldElement, 4>& entries() const { return e_; }
  const FieldPtr& field() const { return e_[0].field(); }

  friend bool operator==(const Mat2K& x, const Mat2K& y) { return x.e_ == y.e_; }

  std::string str() const {
    return "[[" + e_[0].str() + ", " + e_[1].str() + "], [" + e_[2].str() + ", " + e_[3].str() + "]]";
  }

 private:
  std::array<FieldElement, 4> e_;
};

inline Mat2K mat_mul(const Mat2K& x, const Mat2K& y) {
  return {x(0, 0) * y(0, 0) + x(0, 1) * y(1, 0), x(0, 0) * y(0, 1) + x(0, 1) * y(1, 1),
          x(1, 0) * y(0, 0) + x(1, 1) * y(1, 0), x(1, 0) * y(0, 1) + x(1, 1) * y(1, 1)};
}

inline FieldElement mat_det(const Mat2K& x) { return x(0, 0) * x(1, 1) - x(0, 1) * x(1, 0); }

inline Mat2K mat_inv(const Mat2K& x) {
  const FieldElement det = mat_det(x);
  if (det.is_zero()) throw SingularMatrix("matrix is singular");
  const FieldElement adj00 = x(1, 1), adj01 = -x(0, 1), adj10 = -x(1, 0), adj11 = x(0, 0);
  if (det == FieldElement::one(x.field())) return {adj00, adj01, adj10, adj11};
  const FieldElement inv = inverse(det);
  return {inv * adj00, inv * adj01, inv * adj10, inv * adj11};
}

inline bool is_unimodular(const Mat2K& x) { return mat_det(x) == FieldElement::one(x.field()); }

/// t = (1/denom) * star with star integral and denom a positive rational integer.
struct ClearedMatrix {
  Mat2K star;
  FieldElement denom;
};

/// Clears denominators with the least positive integer d making d*t integral.
inline ClearedMatrix clear_denominators(const Mat2K& t) {
  BigInt d = 1;
  for (const auto& e : t.entries())
    for (const auto& c : e.coeffs()) d = boost::multiprecision::lcm(d, BigInt(boost::multiprecision::denominator(c)));
  const Rational dr(d);
  return {Mat2K(dr * t(0, 0), dr * t(0, 1), dr * t(1, 0), dr * t(1, 1)), FieldElement::from_rational(t.field(), dr)};
}

/// Max house over the star entries of a*, (a^-1)*, b*, (b^-1)* and the four
/// denominators. The error field bounds the floating error of the maximum.
inline Bounded compute_M(const Mat2K& a, const Mat2K& b) {
  Bounded best{0.0, 0.0};
  auto consider = [&](const FieldElement& e) {
    const Bounded h = house(e);
    if (h.upper() > best.upper()) best = h;
  };
  for (const Mat2K* m : {&a, &b}) {
    for (const Mat2K& t : {*m, mat_inv(*m)}) {
      const ClearedMatrix c = clear_denominators(t);
      for (const auto& e : c.star.entries()) consider(e);
      consider(c.denom);
    }
  }
  return best;
}

/// C = 1 / (n ln(3M)), rounded down so girth >= C ln p stays certified.
inline double margulis_constant(std::size_t degree, double M) {
  const double c = 1.0 / (static_cast<double>(degree) * std::log(3.0 * M));
  return std::nextafter(c, 0.0);
}

/// The free generators a, b with their cleared forms and the constants M, C.
///
/// Letters index the cleared forms: a, A = a^-1, b, B = b^-1.
class GeneratorSystem {
 public:
  /// Rejects non-unimodular, coincident (a = +-b^+-1) and finite-order
  /// generators, none of which can generate a free group of rank 2.
  static GeneratorSystem create(Mat2K a, Mat2K b) {
    validate(a, b);
    return GeneratorSystem(std::move(a), std::move(b));
  }

  /// Skips the freeness-related validation (diagnostic inputs only). The
  /// generators must still be invertible.
  static GeneratorSystem unchecked(Mat2K a, Mat2K b) { return GeneratorSystem(std::move(a), std::move(b)); }

  static GeneratorSystem sanov() {
    const auto q = NumberField::rationals();
    return create(Mat2K::rational(q, 1, 2, 0, 1), Mat2K::rational(q, 1, 0, 2, 1));
  }

  const FieldPtr& field() const { return a_.field(); }
  std::size_t degree() const { return field()->degree(); }
  const Mat2K& a() const { return a_; }
  const Mat2K& b() const { return b_; }
  const Mat2K& matrix(Letter l) const { return mats_[index(l)]; }
  const ClearedMatrix& cleared(Letter l) const { return cleared_[index(l)]; }

  /// M as computed (with its floating error bound).
  const Bounded& M() const { return M_; }
  /// M rounded up by its error bound.
  double M_certified() const { return M_.upper(); }
  double C() const { return C_; }

 private:
  GeneratorSystem(Mat2K a, Mat2K b)
      : a_(a), b_(b), mats_{a, mat_inv(a), b, mat_inv(b)},
        cleared_{clear_denominators(mats_[0]), clear_denominators(mats_[1]), clear_denominators(mats_[2]),
                 clear_denominators(mats_[3])},
        M_(compute_M(a_, b_)), C_(margulis_constant(degree(), M_certified())) {}

  static void validate(const Mat2K& a, const Mat2K& b) {
    if (!a.field()->same_as(*b.field())) throw FieldMismatch("generators over different fields");
    if (!is_unimodular(a) || !is_unimodular(b)) throw DegenerateGenerators("generators must have determinant 1");
    const Mat2K ai = mat_inv(a), id = Mat2K::identity(a.field());
    const Mat2K neg_id = Mat2K::rational(a.field(), -1, 0, 0, -1);
    for (const Mat2K& x : {a, ai}) {
      for (const Mat2K& sign : {id, neg_id}) {
        if (mat_mul(sign, x) == b) throw DegenerateGenerators("generators coincide: a = +-b^(+-1)");
      }
    }
    // An element of finite order m has a primitive m-th root of unity as an
    // eigenvalue, which lives in an extension of degree <= 2n, so phi(m) <= 2n.
    const std::size_t max_order = max_torsion_order(2 * a.field()->degree());
    for (const auto& [name, g] : {std::pair<const char*, const Mat2K&>{"a", a}, {"b", b}}) {
      Mat2K power = g;
      for (std::size_t m = 1; m <= max_order; ++m) {
        if (power == id)
          throw DegenerateGenerators(std::string("generator ") + name + " has finite order " + std::to_string(m));
        power = mat_mul(power, g);
      }
    }
  }

  static std::size_t max_torsion_order(std::size_t phi_bound) {
    auto phi = [](std::size_t m) {
      std::size_t result = m;
      for (std::size_t q = 2; q * q <= m; ++q) {
        if (m % q) continue;
        while (m % q == 0) m /= q;
        result -= result / q;
      }
      if (m > 1) result -= result / m;
      return result;
    };
    // phi(m) >= sqrt(m / 2), so nothing beyond 2 * bound^2 qualifies.
    std::size_t best = 1;
    for (std::size_t m = 1; m <= 2 * phi_bound * phi_bound + 2; ++m)
      if (phi(m) <= phi_bound) best = m;
    return best;
  }

  Mat2K a_, b_;
  std::array<Mat2K, 4> mats_;
  std::array<ClearedMatrix, 4> cleared_;
  Bounded M_;
  double C_;
};

inline Mat2K eval_word(const ReducedWord& w, const GeneratorSystem& gs) {
  Mat2K m = Mat2K::identity(gs.field());
  for (Letter l : w.letters()) m = mat_mul(m, gs.matrix(l));
  return m;
}

/// Product of the cleared star matrices along w, and the product Z of the
/// letter denominators; (1/Z) * star == eval_word(w).
inline ClearedMatrix eval_word_cleared(const ReducedWord& w, const GeneratorSystem& gs) {
  ClearedMatrix acc{Mat2K::identity(gs.field()), FieldElement::one(gs.field())};
  for (Letter l : w.letters()) {
    const ClearedMatrix& c = gs.cleared(l);
    acc.star = mat_mul(acc.star, c.star);
    acc.denom = acc.denom * c.denom;
  }
  return acc;
}

struct RelationReport {
  std::size_t max_length = 0;
  std::uint64_t words_checked = 0;
  /// Shortest reduced word equal to the identity, if any up to max_length.
  std::optional<ReducedWord> identity_relation;
  /// Shortest reduced word equal to +-identity, if any up to max_length.
  std::optional<ReducedWord> pm_identity_relation;

  bool free_up_to_length() const { return !identity_relation.has_value(); }
};

/// Exhaustively evaluates every reduced word of length 1..max_length with
/// exact integral arithmetic and reports the shortest relations found. Once
/// a relation is known, subtrees at or beyond its length are skipped.
inline RelationReport assert_no_short_relations(const GeneratorSystem& gs, std::size_t max_length) {
  RelationReport report;
  report.max_length = max_length;
  struct Node {
    Mat2K star;
    FieldElement z;
  };
  const Node root{Mat2K::identity(gs.field()), FieldElement::one(gs.field())};
  auto extend = [&](const Node& n, Letter l) {
    const ClearedMatrix& c = gs.cleared(l);
    return Node{mat_mul(n.star, c.star), n.z * c.denom};
  };
  auto better = [](const std::optional<ReducedWord>& cur, const std::vector<Letter>& path) {
    return !cur || cur->size() > path.size() || (cur->size() == path.size() && cur->letters() > path);
  };
  auto descend = [&](const Node& n, const std::vector<Letter>& path) {
    ++report.words_checked;
    if (n.star(0, 1).is_zero() && n.star(1, 0).is_zero()) {
      const bool plus = n.star(0, 0) == n.z && n.star(1, 1) == n.z;
      const bool minus = n.star(0, 0) == -n.z && n.star(1, 1) == -n.z;
      if (plus && better(report.identity_relation, path)) report.identity_relation = ReducedWord(path);
      if ((plus || minus) && better(report.pm_identity_relation, path)) report.pm_identity_relation = ReducedWord(path);
    }
    // Nothing below a known relation can be shorter than it.
    return !report.identity_relation || path.size() < report.identity_relation->size();
  };
  enumerate_reduced_words(root, max_length, extend, descend);
  return report;
}

}  // namespace taulab
