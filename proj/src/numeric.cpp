#include "singularlab/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

namespace singlab {

namespace {

std::atomic<int> g_precision{192};

constexpr double kInf = std::numeric_limits<double>::infinity();

double up(double x) { return std::nextafter(x, kInf); }
double down(double x) { return std::nextafter(x, -kInf); }
double add_up(double a, double b) { return up(a + b); }
double mul_up(double a, double b) { return up(a * b); }

// 2^e rounded up to something representable and >= the true value.
double pow2_up(long e) {
  if (e < -1074) return std::numeric_limits<double>::denorm_min();
  if (e > 1023) return kInf;
  return std::ldexp(1.0, static_cast<int>(e));
}

long bit_length(const Integer& m) {
  if (m == 0) return 0;
  return static_cast<long>(mpz_sizeinbase(m.get_mpz_t(), 2));
}

// |m| * 2^e as a double, truncated toward zero (a lower bound).
double scaled_lower(const Integer& m, long e) {
  if (m == 0) return 0.0;
  long e2 = 0;
  double d = std::fabs(mpz_get_d_2exp(&e2, m.get_mpz_t()));
  long total = e2 + e;
  if (total < -1074 - 60) return 0.0;
  if (total > 1100) return std::numeric_limits<double>::max();
  return std::ldexp(d, static_cast<int>(total));
}

double scaled_upper(const Integer& m, long e) {
  if (m == 0) return 0.0;
  long e2 = 0;
  double d = up(std::fabs(mpz_get_d_2exp(&e2, m.get_mpz_t())));
  long total = e2 + e;
  if (total < -1074 - 60) return std::numeric_limits<double>::denorm_min();
  if (total > 1100) return kInf;
  return up(std::ldexp(d, static_cast<int>(total)));
}

Rational dyadic(const Integer& m, long e) {
  Rational r(m);
  if (e >= 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(e));
  } else {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(-e));
  }
  return r;
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer floor_of(const Rational& r) { return floor_div(r.get_num(), r.get_den()); }

Integer isqrt(const Integer& n) {
  Integer s;
  mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
  return s;
}

int sgn(const Rational& r) { return sgn(r.get_num()); }


QuadIrr conj(const QuadIrr& q) { return QuadIrr{q.a, Rational(-q.b), q.d}; }

// Exact sign of a + b sqrt(d).
int quad_sign(const QuadIrr& q) {
  int sa = sgn(q.a);
  int sb = sgn(q.b);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  Rational lhs = q.a * q.a;
  Rational rhs = q.b * q.b * q.d;
  int c = cmp(lhs, rhs);
  // c > 0 means |a| dominates.
  return c > 0 ? sa : sb;
}

// Exact floor of a + b sqrt(d) with b != 0.
Integer quad_floor(const QuadIrr& q) {
  Integer den;
  mpz_lcm(den.get_mpz_t(), q.a.get_den().get_mpz_t(), q.b.get_den().get_mpz_t());
  Integer A = q.a.get_num() * (den / q.a.get_den());
  Integer B = q.b.get_num() * (den / q.b.get_den());
  Integer absB = abs(B);
  Integer s = isqrt(absB * absB * q.d);  // floor(|B| sqrt d), never exact
  if (B > 0) return floor_div(A + s, den);
  return floor_div(A - s - 1, den);
}

double quad_to_double(const QuadIrr& q) {
  double a = q.a.get_d();
  double b = q.b.get_d();
  double r = std::sqrt(static_cast<double>(q.d));
  if (sgn(q.a) == 0 || sgn(q.a) == sgn(q.b)) return a + b * r;
  Rational norm = q.a * q.a - q.b * q.b * q.d;
  return norm.get_d() / (a - b * r);
}

double log_abs_rational(const Rational& r) {
  long en = 0;
  long ed = 0;
  double n = std::fabs(mpz_get_d_2exp(&en, r.get_num().get_mpz_t()));
  double d = mpz_get_d_2exp(&ed, r.get_den().get_mpz_t());
  return std::log(n) - std::log(d) + static_cast<double>(en - ed) * std::log(2.0);
}

Scalar make_quad(Rational a, Rational b, long d) {
  if (sgn(b) == 0) return Scalar(std::move(a));
  return Scalar(QuadIrr{std::move(a), std::move(b), d});
}

}  // namespace

int default_precision() { return g_precision.load(); }

void set_default_precision(int bits) {
  if (bits < kMinPrecision) throw Error(Errc::InvalidInput, "HPFloat precision must be at least 128 bits");
  g_precision.store(bits);
}

// ---------------------------------------------------------------------------
// HPFloat

void HPFloat::normalize() {
  if (mant_ == 0) {
    exp_ = 0;
    return;
  }
  long bits = bit_length(mant_);
  if (bits > prec_) {
    long shift = bits - prec_;
    mpz_fdiv_q_2exp(mant_.get_mpz_t(), mant_.get_mpz_t(), static_cast<unsigned long>(shift));
    exp_ += shift;
    err_ = add_up(err_, pow2_up(exp_));
  }
  if (mant_ == 0) {
    exp_ = 0;
    return;
  }
  auto tz = mpz_scan1(mant_.get_mpz_t(), 0);
  if (tz > 0) {
    mpz_fdiv_q_2exp(mant_.get_mpz_t(), mant_.get_mpz_t(), tz);
    exp_ += static_cast<long>(tz);
  }
}

HPFloat HPFloat::from_integer(const Integer& v, int prec) {
  HPFloat h;
  h.prec_ = prec;
  h.mant_ = v;
  h.normalize();
  return h;
}

HPFloat HPFloat::from_rational(const Rational& v, int prec) {
  HPFloat h;
  h.prec_ = prec;
  const Integer& num = v.get_num();
  const Integer& den = v.get_den();
  if (den == 1) {
    h.mant_ = num;
    h.normalize();
    return h;
  }
  long shift = prec + bit_length(den) - bit_length(num) + 2;
  if (shift < 0) shift = 0;
  Integer scaled = num;
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<unsigned long>(shift));
  Integer rem;
  mpz_fdiv_qr(h.mant_.get_mpz_t(), rem.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
  h.exp_ = -shift;
  if (rem != 0) h.err_ = pow2_up(h.exp_);
  h.normalize();
  return h;
}

HPFloat HPFloat::from_rational(const Rational& v, double err, int prec) {
  if (!(err >= 0.0)) throw Error(Errc::InvalidInput, "error bound must be nonnegative");
  HPFloat h = from_rational(v, prec);
  h.err_ = add_up(h.err_, err);
  return h;
}

HPFloat HPFloat::sqrt_of(long d, int prec) {
  if (d < 0) throw Error(Errc::InvalidInput, "sqrt of a negative number");
  HPFloat h;
  h.prec_ = prec;
  Integer scaled(d);
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<unsigned long>(2 * prec));
  Integer root;
  Integer rem;
  mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), scaled.get_mpz_t());
  h.mant_ = root;
  h.exp_ = -prec;
  if (rem != 0) h.err_ = pow2_up(-prec);
  h.normalize();
  return h;
}

Rational HPFloat::midpoint() const { return dyadic(mant_, exp_); }

double HPFloat::to_double() const {
  if (mant_ == 0) return 0.0;
  long e2 = 0;
  double d = mpz_get_d_2exp(&e2, mant_.get_mpz_t());
  return std::ldexp(d, static_cast<int>(std::clamp<long>(e2 + exp_, -2000, 2000)));
}

double HPFloat::magnitude_upper() const { return scaled_upper(mant_, exp_); }
double HPFloat::magnitude_lower() const { return scaled_lower(mant_, exp_); }

int HPFloat::sign() const {
  int s = sgn(mant_);
  if (err_ == 0.0) return s;
  if (s != 0 && magnitude_lower() > err_) return s;
  throw Error(Errc::UndecidableComparison, "HPFloat error bound straddles zero (" + to_string() + ")");
}

Integer HPFloat::floor() const {
  Rational mid = midpoint();
  if (err_ == 0.0) return floor_of(mid);
  Rational e(err_);
  Integer lo = floor_of(Rational(mid - e));
  Integer hi = floor_of(Rational(mid + e));
  if (lo != hi) throw Error(Errc::UndecidableComparison, "floor of HPFloat straddles an integer");
  return lo;
}

HPFloat HPFloat::operator-() const {
  HPFloat h = *this;
  h.mant_ = -h.mant_;
  return h;
}

HPFloat operator+(const HPFloat& x, const HPFloat& y) {
  HPFloat r;
  r.prec_ = std::max(x.prec_, y.prec_);
  if (x.mant_ == 0 || y.mant_ == 0) {
    const HPFloat& nz = x.mant_ == 0 ? y : x;
    r.mant_ = nz.mant_;
    r.exp_ = nz.exp_;
    r.err_ = add_up(x.err_, y.err_);
    r.normalize();
    return r;
  }
  long top_x = x.exp_ + bit_length(x.mant_);
  long top_y = y.exp_ + bit_length(y.mant_);
  // An operand lying entirely below the other's precision window is folded
  // into the error bound instead of being shifted in.
  if (top_y < top_x - r.prec_ - 8 || top_x < top_y - r.prec_ - 8) {
    const HPFloat& big = top_x >= top_y ? x : y;
    const HPFloat& small = top_x >= top_y ? y : x;
    r.mant_ = big.mant_;
    r.exp_ = big.exp_;
    r.err_ = add_up(add_up(x.err_, y.err_), small.magnitude_upper());
    r.normalize();
    return r;
  }
  long e = std::min(x.exp_, y.exp_);
  Integer mx = x.mant_;
  Integer my = y.mant_;
  mpz_mul_2exp(mx.get_mpz_t(), mx.get_mpz_t(), static_cast<unsigned long>(x.exp_ - e));
  mpz_mul_2exp(my.get_mpz_t(), my.get_mpz_t(), static_cast<unsigned long>(y.exp_ - e));
  r.mant_ = mx + my;
  r.exp_ = e;
  r.err_ = add_up(x.err_, y.err_);
  r.normalize();
  return r;
}

HPFloat operator-(const HPFloat& x, const HPFloat& y) { return x + (-y); }

HPFloat operator*(const HPFloat& x, const HPFloat& y) {
  HPFloat r;
  r.prec_ = std::max(x.prec_, y.prec_);
  r.mant_ = x.mant_ * y.mant_;
  r.exp_ = x.exp_ + y.exp_;
  double mx = x.magnitude_upper();
  double my = y.magnitude_upper();
  r.err_ = add_up(add_up(mul_up(mx, y.err_), mul_up(my, x.err_)), mul_up(x.err_, y.err_));
  r.normalize();
  return r;
}

HPFloat operator/(const HPFloat& x, const HPFloat& y) {
  double ylow = y.magnitude_lower();
  if (y.mant_ == 0 || !(ylow > y.err_)) {
    throw Error(Errc::UndecidableComparison, "HPFloat divisor interval contains zero");
  }
  HPFloat r;
  r.prec_ = std::max(x.prec_, y.prec_);
  long shift = r.prec_ + bit_length(y.mant_) - bit_length(x.mant_) + 2;
  if (shift < 0) shift = 0;
  Integer scaled = x.mant_;
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<unsigned long>(shift));
  Integer rem;
  mpz_fdiv_qr(r.mant_.get_mpz_t(), rem.get_mpz_t(), scaled.get_mpz_t(), y.mant_.get_mpz_t());
  r.exp_ = x.exp_ - y.exp_ - shift;
  double trunc = rem != 0 ? pow2_up(r.exp_) : 0.0;
  double q = add_up(scaled_upper(r.mant_, r.exp_), trunc);
  double denom = down(ylow - y.err_);
  if (!(denom > 0.0)) denom = std::numeric_limits<double>::denorm_min();
  double prop = up(add_up(x.err_, mul_up(q, y.err_)) / denom);
  r.err_ = add_up(trunc, prop);
  r.normalize();
  return r;
}

std::string HPFloat::to_string() const {
  int digits = static_cast<int>(std::ceil(prec_ * 0.30103)) + 1;
  std::string mid_text;
  long exp10 = 0;
  if (mant_ == 0) {
    mid_text = "0";
  } else {
    mpf_class f(0, static_cast<mp_bitcnt_t>(prec_ + 64));
    f = midpoint();
    std::vector<char> buf(static_cast<size_t>(digits) + 64);
    gmp_snprintf(buf.data(), buf.size(), "%.*Fe", digits - 1, f.get_mpf_t());
    std::string s(buf.data());
    auto epos = s.find('e');
    std::string mant = s.substr(0, epos);
    exp10 = std::stol(s.substr(epos + 1));
    while (!mant.empty() && mant.back() == '0') mant.pop_back();
    if (!mant.empty() && mant.back() == '.') mant.pop_back();
    mid_text = mant + "e" + std::to_string(exp10);
  }
  // Decimal truncation of the midpoint is charged to the printed error.
  double shown = err_;
  if (mant_ != 0) shown = add_up(shown, std::pow(10.0, static_cast<double>(exp10 - digits + 2)));
  char ebuf[64];
  std::snprintf(ebuf, sizeof ebuf, "%.3g", shown);
  while (std::strtod(ebuf, nullptr) < shown) {
    shown = up(shown * (1.0 + 1e-3));
    std::snprintf(ebuf, sizeof ebuf, "%.3g", shown);
  }
  return mid_text + "±" + ebuf;
}

// ---------------------------------------------------------------------------
// Scalar

Scalar::Scalar(Rational v) : v_(std::move(v)) { std::get<0>(v_).canonicalize(); }

Scalar::Scalar(QuadIrr q) {
  if (q.d < 2) throw Error(Errc::InvalidInput, "quadratic radicand must be >= 2");
  auto [k, d] = split_square(Integer(q.d));
  if (k != 1) q.b *= Rational(k);
  q.d = d.get_si();
  if (q.d == 1) {
    v_ = Rational(q.a + q.b);
    return;
  }
  if (sgn(q.b) == 0) {
    v_ = std::move(q.a);
    return;
  }
  v_ = std::move(q);
}

const Rational& Scalar::rational() const {
  if (!is_rational()) throw Error(Errc::InvalidInput, "expected a rational value, got " + to_string());
  return std::get<0>(v_);
}

const QuadIrr& Scalar::quadratic() const {
  if (!is_quadratic()) throw Error(Errc::InvalidInput, "expected a quadratic irrational, got " + to_string());
  return std::get<1>(v_);
}

const HPFloat& Scalar::hpfloat() const {
  if (!is_hpfloat()) throw Error(Errc::InvalidInput, "expected an HPFloat");
  return std::get<2>(v_);
}

HPFloat Scalar::to_hpfloat(int prec) const {
  switch (v_.index()) {
    case 0: return HPFloat::from_rational(std::get<0>(v_), prec);
    case 1: {
      const auto& q = std::get<1>(v_);
      return HPFloat::from_rational(q.a, prec) + HPFloat::from_rational(q.b, prec) * HPFloat::sqrt_of(q.d, prec);
    }
    default: return std::get<2>(v_);
  }
}

int Scalar::sign() const {
  switch (v_.index()) {
    case 0: return sgn(std::get<0>(v_));
    case 1: return quad_sign(std::get<1>(v_));
    default: return std::get<2>(v_).sign();
  }
}

bool Scalar::is_exact_zero() const {
  switch (v_.index()) {
    case 0: return sgn(std::get<0>(v_)) == 0;
    case 1: return false;
    default: return std::get<2>(v_).exact_zero();
  }
}

Scalar Scalar::abs() const { return sign() < 0 ? -*this : *this; }

Integer Scalar::floor() const {
  switch (v_.index()) {
    case 0: return floor_of(std::get<0>(v_));
    case 1: return quad_floor(std::get<1>(v_));
    default: return std::get<2>(v_).floor();
  }
}

Integer Scalar::ceil() const { return -((-*this).floor()); }

Integer Scalar::round() const { return (*this + Scalar(Rational(1, 2))).floor(); }

double Scalar::to_double() const {
  switch (v_.index()) {
    case 0: return std::get<0>(v_).get_d();
    case 1: return quad_to_double(std::get<1>(v_));
    default: return std::get<2>(v_).to_double();
  }
}

double Scalar::log_abs() const {
  switch (v_.index()) {
    case 0: {
      const auto& r = std::get<0>(v_);
      if (sgn(r) == 0) return -kInf;
      return log_abs_rational(r);
    }
    case 1: {
      const auto& q = std::get<1>(v_);
      if (sgn(q.a) == 0 || sgn(q.a) == sgn(q.b)) {
        return std::log(std::fabs(q.a.get_d()) + std::fabs(q.b.get_d()) * std::sqrt(static_cast<double>(q.d)));
      }
      Rational norm = q.a * q.a - q.b * q.b * q.d;
      double conj_mag = std::fabs(q.a.get_d()) + std::fabs(q.b.get_d()) * std::sqrt(static_cast<double>(q.d));
      return log_abs_rational(norm) - std::log(conj_mag);
    }
    default: {
      const auto& h = std::get<2>(v_);
      if (h.mantissa() == 0) return -kInf;
      long e2 = 0;
      double d = std::fabs(mpz_get_d_2exp(&e2, h.mantissa().get_mpz_t()));
      return std::log(d) + static_cast<double>(e2 + h.exponent()) * std::log(2.0);
    }
  }
}

RationalApprox Scalar::approximate(int bits) const {
  switch (v_.index()) {
    case 0: return {std::get<0>(v_), Rational(0)};
    case 1: {
      const auto& q = std::get<1>(v_);
      Integer scaled(q.d);
      mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<unsigned long>(2 * bits));
      Rational root = dyadic(isqrt(scaled), -bits);
      Rational value = q.a + q.b * root;
      Rational err = dyadic(Integer(1), -bits) * ::abs(q.b);
      return {value, err};
    }
    default: {
      const auto& h = std::get<2>(v_);
      return {h.midpoint(), Rational(h.error())};
    }
  }
}

std::string rational_to_string(const Rational& r) { return r.get_str(); }

std::string Scalar::to_string() const {
  switch (v_.index()) {
    case 0: return rational_to_string(std::get<0>(v_));
    case 1: {
      const auto& q = std::get<1>(v_);
      std::string out;
      if (sgn(q.a) != 0) out = rational_to_string(q.a);
      Rational mag = ::abs(q.b);
      std::string radical = "sqrt(" + std::to_string(q.d) + ")";
      std::string term = mag == 1 ? radical : rational_to_string(mag) + "*" + radical;
      if (sgn(q.b) < 0) {
        out += "-" + term;
      } else {
        out += (out.empty() ? "" : "+") + term;
      }
      return out;
    }
    default: return std::get<2>(v_).to_string();
  }
}

std::ostream& operator<<(std::ostream& os, const Scalar& x) { return os << x.to_string(); }

Scalar Scalar::operator-() const {
  switch (v_.index()) {
    case 0: return Scalar(Rational(-std::get<0>(v_)));
    case 1: {
      const auto& q = std::get<1>(v_);
      return Scalar(QuadIrr{Rational(-q.a), Rational(-q.b), q.d});
    }
    default: return Scalar(-std::get<2>(v_));
  }
}

namespace {

enum class Op { Add, Sub, Mul, Div };

HPFloat hp_apply(Op op, const HPFloat& x, const HPFloat& y) {
  switch (op) {
    case Op::Add: return x + y;
    case Op::Sub: return x - y;
    case Op::Mul: return x * y;
    case Op::Div: return x / y;
  }
  return x;
}

Scalar quad_apply(Op op, const QuadIrr& x, const QuadIrr& y) {
  const long d = x.d;
  switch (op) {
    case Op::Add: return make_quad(x.a + y.a, x.b + y.b, d);
    case Op::Sub: return make_quad(x.a - y.a, x.b - y.b, d);
    case Op::Mul: return make_quad(x.a * y.a + x.b * y.b * d, x.a * y.b + x.b * y.a, d);
    case Op::Div: {
      Rational norm = y.a * y.a - y.b * y.b * d;
      if (sgn(norm) == 0) throw Error(Errc::InvalidInput, "division by zero");
      QuadIrr c = conj(y);
      return make_quad((x.a * c.a + x.b * c.b * d) / norm, (x.a * c.b + x.b * c.a) / norm, d);
    }
  }
  return Scalar();
}

Scalar apply(Op op, const Scalar& x, const Scalar& y) {
  if (x.is_rational() && y.is_rational()) {
    const Rational& a = x.rational();
    const Rational& b = y.rational();
    switch (op) {
      case Op::Add: return Scalar(Rational(a + b));
      case Op::Sub: return Scalar(Rational(a - b));
      case Op::Mul: return Scalar(Rational(a * b));
      case Op::Div:
        if (sgn(b) == 0) throw Error(Errc::InvalidInput, "division by zero");
        return Scalar(Rational(a / b));
    }
  }
  const bool x_zero = x.is_rational() && sgn(x.rational()) == 0;
  const bool y_zero = y.is_rational() && sgn(y.rational()) == 0;
  if (op == Op::Mul && (x_zero || y_zero)) return Scalar(Rational(0));
  if (op == Op::Add && x_zero) return y;
  if ((op == Op::Add || op == Op::Sub) && y_zero) return x;
  if (op == Op::Sub && x_zero) return -y;
  if (!x.is_hpfloat() && !y.is_hpfloat()) {
    long d =x.is_quadratic() ? x.quadratic().d : y.quadratic().d;
    bool same_field = !(x.is_quadratic() && y.is_quadratic() && x.quadratic().d != y.quadratic().d);
    if (same_field) {
      QuadIrr qx = x.is_quadratic() ? x.quadratic() : QuadIrr{x.rational(), Rational(0), d};
      QuadIrr qy = y.is_quadratic() ? y.quadratic() : QuadIrr{y.rational(), Rational(0), d};
      return quad_apply(op, qx, qy);
    }
  }
  int prec = std::max(x.is_hpfloat() ? x.hpfloat().precision() : 0, y.is_hpfloat() ? y.hpfloat().precision() : 0);
  prec = std::max(prec, default_precision());
  return Scalar(hp_apply(op, x.to_hpfloat(prec), y.to_hpfloat(prec)));
}

}  // namespace

Scalar operator+(const Scalar& x, const Scalar& y) { return apply(Op::Add, x, y); }
Scalar operator-(const Scalar& x, const Scalar& y) { return apply(Op::Sub, x, y); }
Scalar operator*(const Scalar& x, const Scalar& y) { return apply(Op::Mul, x, y); }
Scalar operator/(const Scalar& x, const Scalar& y) { return apply(Op::Div, x, y); }

std::strong_ordering scalar_cmp(const Scalar& a, const Scalar& b) {
  int s = 0;
  if (a.is_rational() && b.is_rational()) {
    s = cmp(a.rational(), b.rational());
  } else {
    s = (a - b).sign();
  }
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Integer pow_integer(const Integer& b, unsigned long k) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), k);
  return r;
}

Rational pow_rational(const Rational& b, long k) {
  if (sgn(b) == 0) {
    if (k < 0) throw Error(Errc::InvalidInput, "zero to a negative power");
    return k == 0 ? Rational(1) : Rational(0);
  }
  unsigned long e = static_cast<unsigned long>(k < 0 ? -k : k);
  Rational r(pow_integer(b.get_num(), e), pow_integer(b.get_den(), e));
  r.canonicalize();
  if (k < 0) r = 1 / r;
  return r;
}

Scalar pow_base(const Scalar& b, long k) {
  if (b.is_rational()) return Scalar(pow_rational(b.rational(), k));
  Scalar result(1);
  Scalar base = b;
  unsigned long e = static_cast<unsigned long>(k < 0 ? -k : k);
  while (e) {
    if (e & 1UL) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  if (k < 0) result = Scalar(1) / result;
  return result;
}

std::pair<Integer, Integer> split_square(const Integer& n) {
  if (n <= 0) throw Error(Errc::InvalidInput, "split_square expects a positive integer");
  Integer rest = n;
  Integer k = 1;
  Integer d = 1;
  for (unsigned long p = 2; Integer(p) * p <= rest; p += (p == 2 ? 1 : 2)) {
    if (p > 2000000UL) {
      if (mpz_perfect_square_p(rest.get_mpz_t())) {
        Integer r = isqrt(rest);
        k *= r;
        rest = 1;
      } else if (rest > Integer(p) * p * p) {
        throw Error(Errc::InvalidInput, "cannot certify the squarefree part of " + n.get_str());
      }
      break;
    }
    if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) continue;
    int mult = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      rest /= p;
      ++mult;
    }
    for (int i = 0; i + 1 < mult; i += 2) k *= p;
    if (mult % 2) d *= p;
  }
  d *= rest;
  return {k, d};
}

Scalar Scalar::sqrt(const Rational& r) {
  if (sgn(r) < 0) throw Error(Errc::InvalidInput, "sqrt of a negative number");
  if (sgn(r) == 0) return Scalar(0);
  // sqrt(p/q) = sqrt(p q) / q
  Integer pq = r.get_num() * r.get_den();
  auto [k, d] = split_square(pq);
  Rational coeff(k, r.get_den());
  coeff.canonicalize();
  if (d == 1) return Scalar(coeff);
  if (!d.fits_slong_p()) throw Error(Errc::InvalidInput, "radicand too large");
  return Scalar(QuadIrr{Rational(0), coeff, d.get_si()});
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Scalar parse_all() {
    Scalar v = expr();
    skip_ws();
    if (consume_pm()) {
      skip_ws();
      size_t start = pos_;
      Rational e = number();
      std::string etext(s_.substr(start, pos_ - start));
      double err = std::strtod(etext.c_str(), nullptr);
      if (Rational(err) < e) err = up(err);
      skip_ws();
      if (pos_ != s_.size()) fail("trailing characters");
      if (!v.is_rational()) fail("± applies to a plain decimal value");
      return Scalar(HPFloat::from_rational(v.rational(), err, default_precision()));
    }
    if (pos_ != s_.size()) fail("trailing characters");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(Errc::InvalidInput, "cannot parse scalar '" + std::string(s_) + "': " + why);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  bool consume_pm() {
    static constexpr std::string_view pm = "±";
    if (s_.substr(pos_, pm.size()) == pm) {
      pos_ += pm.size();
      return true;
    }
    return false;
  }

  Scalar expr() {
    Scalar v = term();
    for (;;) {
      skip_ws();
      if (pos_ >= s_.size()) break;
      char c = s_[pos_];
      if (c == '+') {
        ++pos_;
        v = v + term();
      } else if (c == '-') {
        ++pos_;
        v = v - term();
      } else {
        break;
      }
    }
    return v;
  }

  Scalar term() {
    Scalar v = unary();
    for (;;) {
      skip_ws();
      if (pos_ >= s_.size()) break;
      char c = s_[pos_];
      if (c == '*') {
        ++pos_;
        v = v * unary();
      } else if (c == '/') {
        ++pos_;
        v = v / unary();
      } else {
        break;
      }
    }
    return v;
  }

  Scalar unary() {
    skip_ws();
    if (peek('-')) {
      ++pos_;
      return -unary();
    }
    if (peek('+')) {
      ++pos_;
      return unary();
    }
    return primary();
  }

  Scalar primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (s_[pos_] == '(') {
      ++pos_;
      Scalar v = expr();
      if (!peek(')')) fail("missing ')'");
      ++pos_;
      return v;
    }
    if (s_.substr(pos_, 4) == "sqrt") {
      pos_ += 4;
      if (!peek('(')) fail("sqrt needs '('");
      ++pos_;
      Scalar arg = expr();
      if (!peek(')')) fail("missing ')'");
      ++pos_;
      if (!arg.is_rational()) fail("sqrt argument must be rational");
      return Scalar::sqrt(arg.rational());
    }
    return Scalar(number());
  }

  Rational number() {
    skip_ws();
    size_t start = pos_;
    Integer mant = 0;
    long frac_digits = 0;
    bool any = false;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      mant = mant * 10 + (s_[pos_] - '0');
      ++pos_;
      any = true;
    }
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        mant = mant * 10 + (s_[pos_] - '0');
        ++frac_digits;
        ++pos_;
        any = true;
      }
    }
    if (!any) {
      pos_ = start;
      fail("expected a number");
    }
    long exp10 = 0;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      size_t save = pos_;
      ++pos_;
      int sign = 1;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
        sign = s_[pos_] == '-' ? -1 : 1;
        ++pos_;
      }
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        long e = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
          e = e * 10 + (s_[pos_] - '0');
          if (e > 100000) fail("exponent too large");
          ++pos_;
        }
        exp10 = sign * e;
      } else {
        pos_ = save;
      }
    }
    long net = exp10 - frac_digits;
    Rational r(mant);
    Integer scale = pow_integer(Integer(10), static_cast<unsigned long>(net < 0 ? -net : net));
    if (net >= 0) {
      r *= Rational(scale);
    } else {
      r /= Rational(scale);
    }
    r.canonicalize();
    return r;
  }

  std::string_view s_;
  size_t pos_ = 0;
};

}  // namespace

Scalar Scalar::parse(std::string_view text) { return Parser(text).parse_all(); }

Rational parse_rational(std::string_view text) {
  Scalar s = Scalar::parse(text);
  if (!s.is_rational()) throw Error(Errc::InvalidInput, "expected a rational value: '" + std::string(text) + "'");
  return s.rational();
}

ScalarVector to_scalar(const IntVector& v) {
  ScalarVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = Scalar(static_cast<long>(v(i)));
  return out;
}

ScalarMatrix to_scalar(const IntMatrix& m) {
  ScalarMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = Scalar(static_cast<long>(m(i, j)));
  return out;
}

bool below_power_threshold(const Scalar& x, const Scalar& c, long Q, const Rational& omega) {
  if (sgn(omega) < 0) throw Error(Errc::InvalidInput, "exponent must be nonnegative");
  if (Q < 1) throw Error(Errc::InvalidInput, "Q must be positive");
  if (!omega.get_num().fits_ulong_p() || !omega.get_den().fits_ulong_p()) {
    throw Error(Errc::InvalidInput, "exponent too large");
  }
  unsigned long m = omega.get_num().get_ui();
  unsigned long d = omega.get_den().get_ui();
  Scalar lhs = pow_base(x, static_cast<long>(d)) * Scalar(pow_integer(Integer(Q), m));
  Scalar rhs = pow_base(c, static_cast<long>(d));
  return lhs < rhs;
}

}  // namespace singlab
