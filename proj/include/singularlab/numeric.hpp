#pragma once

// Exact and controlled-precision scalars.
//
// A Scalar is one of three backends:
//   * Rational   big rational in lowest terms (GMP mpq)
//   * QuadIrr    a + b*sqrt(d) with rational a, b (b != 0) and squarefree d >= 2
//   * HPFloat    binary float with >= 128 mantissa bits and a propagated
//                absolute error bound
// Arithmetic promotes Rational -> QuadIrr -> HPFloat as needed; quadratic
// numbers over different radicands meet in HPFloat. Comparisons are exact for
// the first two backends and raise UndecidableComparison for HPFloat when the
// error interval straddles the decision boundary.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

#include <Eigen/Core>

#include "singularlab/error.hpp"

namespace singlab {

using Integer = mpz_class;
using Rational = mpq_class;

/// Mantissa bits used when a value is promoted to HPFloat.
int default_precision();
void set_default_precision(int bits);

inline constexpr int kMinPrecision = 128;

struct QuadIrr {
  Rational a;
  Rational b;
  long d = 2;
};

class HPFloat {
 public:
  HPFloat() = default;

  static HPFloat from_integer(const Integer& v, int prec = default_precision());
  static HPFloat from_rational(const Rational& v, int prec = default_precision());
  /// Value known only up to `err` (absolute); conversion error is added on top.
  static HPFloat from_rational(const Rational& v, double err, int prec);
  static HPFloat sqrt_of(long d, int prec = default_precision());

  const Integer& mantissa() const { return mant_; }
  long exponent() const { return exp_; }
  double error() const { return err_; }
  int precision() const { return prec_; }

  /// The stored binary value (exact dyadic rational).
  Rational midpoint() const;
  double to_double() const;
  /// Upper bound on |midpoint| as a double.
  double magnitude_upper() const;
  /// Lower bound on |midpoint| as a double.
  double magnitude_lower() const;

  bool exact_zero() const { return mant_ == 0 && err_ == 0.0; }
  int sign() const;
  Integer floor() const;

  HPFloat operator-() const;
  friend HPFloat operator+(const HPFloat& x, const HPFloat& y);
  friend HPFloat operator-(const HPFloat& x, const HPFloat& y);
  friend HPFloat operator*(const HPFloat& x, const HPFloat& y);
  friend HPFloat operator/(const HPFloat& x, const HPFloat& y);

  std::string to_string() const;

 private:
  void normalize();

  Integer mant_{0};
  long exp_ = 0;
  double err_ = 0.0;
  int prec_ = 192;
};

/// Rational approximation with a rigorous absolute error bound.
struct RationalApprox {
  Rational value;
  Rational error;
};

class Scalar {
 public:
  enum class Kind { Rational, Quadratic, HPFloat };

  Scalar() : v_(Rational(0)) {}
  Scalar(int v) : v_(Rational(v)) {}
  Scalar(long v) : v_(Rational(v)) {}
  Scalar(long long v) : v_(Rational(static_cast<long>(v))) {}
  Scalar(const Integer& v) : v_(Rational(v)) {}
  Scalar(Rational v);
  Scalar(QuadIrr q);
  Scalar(HPFloat h) : v_(std::move(h)) {}

  /// Grammar: + - * / parentheses, decimal/scientific literals (read
  /// exactly), sqrt(<rational expr>), and a trailing "±err" that turns the
  /// value into an HPFloat with the given absolute error.
  static Scalar parse(std::string_view text);
  /// sqrt of a nonnegative rational; rational when it is a perfect square.
  static Scalar sqrt(const Rational& r);

  Kind kind() const { return static_cast<Kind>(v_.index()); }
  bool is_rational() const { return v_.index() == 0; }
  bool is_quadratic() const { return v_.index() == 1; }
  bool is_hpfloat() const { return v_.index() == 2; }
  bool is_exact() const { return v_.index() != 2; }
  const Rational& rational() const;
  const QuadIrr& quadratic() const;
  const HPFloat& hpfloat() const;
  HPFloat to_hpfloat(int prec = default_precision()) const;

  int sign() const;
  /// True only for an exact zero; never throws.
  bool is_exact_zero() const;
  Scalar abs() const;
  Integer floor() const;
  Integer ceil() const;
  /// Nearest integer, halves rounded up.
  Integer round() const;
  double to_double() const;
  /// Natural log of |x|, accurate for values far below double range.
  double log_abs() const;
  RationalApprox approximate(int bits) const;

  std::string to_string() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  friend Scalar operator+(const Scalar& x, const Scalar& y);
  friend Scalar operator-(const Scalar& x, const Scalar& y);
  friend Scalar operator*(const Scalar& x, const Scalar& y);
  friend Scalar operator/(const Scalar& x, const Scalar& y);

 private:
  std::variant<Rational, QuadIrr, HPFloat> v_;
};

/// Exact ordering; throws UndecidableComparison for overlapping HPFloats.
std::strong_ordering scalar_cmp(const Scalar& a, const Scalar& b);

inline std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) { return scalar_cmp(a, b); }
inline bool operator==(const Scalar& a, const Scalar& b) { return scalar_cmp(a, b) == 0; }

inline Scalar abs(const Scalar& x) { return x.abs(); }
inline const Scalar& max(const Scalar& a, const Scalar& b) { return a < b ? b : a; }
inline const Scalar& min(const Scalar& a, const Scalar& b) { return b < a ? b : a; }

/// b^k for any integer k (b nonzero).
Scalar pow_base(const Scalar& b, long k);
Rational pow_rational(const Rational& b, long k);
Integer pow_integer(const Integer& b, unsigned long k);

/// Squarefree decomposition n = k^2 * d for positive n.
std::pair<Integer, Integer> split_square(const Integer& n);

/// Decimal or fraction literal, read exactly ("0.05", "3/7", "1e-3").
Rational parse_rational(std::string_view text);
std::string rational_to_string(const Rational& r);

std::ostream& operator<<(std::ostream& os, const Scalar& x);

}  // namespace singlab

namespace Eigen {

template <>
struct NumTraits<singlab::Scalar> : GenericNumTraits<singlab::Scalar> {
  using Real = singlab::Scalar;
  using NonInteger = singlab::Scalar;
  using Literal = singlab::Scalar;
  using Nested = singlab::Scalar;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 8,
    MulCost = 8
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace singlab {

using ScalarMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using ScalarVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// Max of absolute values; zero for an empty vector.
template <class Derived>
Scalar sup_norm(const Eigen::MatrixBase<Derived>& v) {
  Scalar best(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    Scalar a = v(i).abs();
    if (best < a) best = std::move(a);
  }
  return best;
}

template <class Derived>
std::int64_t sup_norm_int(const Eigen::MatrixBase<Derived>& v) {
  std::int64_t best = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) best = std::max<std::int64_t>(best, v(i) < 0 ? -v(i) : v(i));
  return best;
}

ScalarVector to_scalar(const IntVector& v);
ScalarMatrix to_scalar(const IntMatrix& m);

/// x < c / Q^omega for x >= 0, c > 0, omega = m/d >= 0, decided exactly by
/// comparing x^d * Q^m against c^d.
bool below_power_threshold(const Scalar& x, const Scalar& c, long Q, const Rational& omega);

}  // namespace singlab
