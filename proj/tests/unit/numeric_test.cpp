#include <doctest.h>

#include <functional>
#include <random>

#include "singularlab/numeric.hpp"

using namespace singlab;

namespace {

Scalar S(const char* text) { return Scalar::parse(text); }

Rational random_rational(std::mt19937_64& rng, int range = 20) {
  std::uniform_int_distribution<long> num(-range, range);
  std::uniform_int_distribution<long> den(1, range);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

Scalar random_quad(std::mt19937_64& rng, long d) {
  return Scalar(QuadIrr{random_rational(rng), random_rational(rng), d});
}

}  // namespace

TEST_CASE("comparisons across backends") {
  CHECK(scalar_cmp(Scalar(Rational(1, 2)), Scalar(Rational(1, 3))) == std::strong_ordering::greater);
  CHECK(scalar_cmp(Scalar(QuadIrr{0, 1, 2}), Scalar(Rational(3, 2))) == std::strong_ordering::less);
  CHECK(S("sqrt(2)") > S("1.414"));
  CHECK(S("sqrt(2)") < S("1.4143"));
  CHECK(S("-sqrt(3)") < S("-1.732"));
  CHECK(S("1 - sqrt(2)") < 0);
  CHECK(S("3 - 2*sqrt(2)") > 0);

  HPFloat a = HPFloat::from_rational(Rational(1), 1e-30, 192);
  HPFloat b = HPFloat::from_rational(Rational(1) + Rational(1, Integer("10000000000000000000000000000000000000000")), 1e-30, 192);
  CHECK_THROWS_AS(scalar_cmp(Scalar(a), Scalar(b)), Error);
  try {
    (void)scalar_cmp(Scalar(a), Scalar(b));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UndecidableComparison);
  }
  HPFloat c = HPFloat::from_rational(Rational(2), 1e-30, 192);
  CHECK(Scalar(a) < Scalar(c));
}

TEST_CASE("pow_base") {
  CHECK(pow_base(Scalar(2), 3) == Scalar(8));
  CHECK(pow_base(Scalar(2), -2) == Scalar(Rational(1, 4)));
  CHECK(pow_base(Scalar(Rational(3, 2)), 2) == Scalar(Rational(9, 4)));
  CHECK(pow_base(S("sqrt(2)"), 2) == Scalar(2));
  CHECK(pow_base(S("sqrt(2)"), -3) == S("sqrt(2)/4"));
  CHECK(pow_base(Scalar(7), 0) == Scalar(1));
}

TEST_CASE("parsing and printing") {
  CHECK(S("3/7").to_string() == "3/7");
  CHECK(S("0.05") == Scalar(Rational(1, 20)));
  CHECK(S("1e-3") == Scalar(Rational(1, 1000)));
  CHECK(S("1+2*sqrt(5)").to_string() == "1+2*sqrt(5)");
  CHECK(S("sqrt(8)").to_string() == "2*sqrt(2)");
  CHECK(S("sqrt(9/4)") == Scalar(Rational(3, 2)));
  CHECK(S("(1+sqrt(5))/2").to_string() == "1/2+1/2*sqrt(5)");
  CHECK(S("-sqrt(2)").to_string() == "-sqrt(2)");
  CHECK(S("sqrt(1/2)") == S("sqrt(2)/2"));
  CHECK_THROWS_AS(S("1/0"), Error);
  CHECK_THROWS_AS(S("sqrt(-1)"), Error);
  CHECK_THROWS_AS(S("2 +"), Error);
  CHECK_THROWS_AS(S("abc"), Error);

  for (const char* text : {"3/7", "-1/2+sqrt(3)", "5*sqrt(7)", "-4"}) {
    Scalar x = S(text);
    CHECK(Scalar::parse(x.to_string()) == x);
  }

  Scalar h = S("1.5±1e-20");
  REQUIRE(h.is_hpfloat());
  CHECK(h.hpfloat().error() >= 1e-20);
  Scalar back = Scalar::parse(h.to_string());
  REQUIRE(back.is_hpfloat());
  CHECK(back.hpfloat().error() >= h.hpfloat().error());
  CHECK(h.to_string().rfind("1.5e0±", 0) == 0);
}

TEST_CASE("floor, ceil and round") {
  CHECK(S("sqrt(2)").floor() == 1);
  CHECK(S("-sqrt(2)").floor() == -2);
  CHECK(S("-sqrt(2)").ceil() == -1);
  CHECK(S("5*sqrt(2)").floor() == 7);
  CHECK(S("7 - 5*sqrt(2)").floor() == -1);
  CHECK(S("5*sqrt(2) - 7").floor() == 0);
  CHECK(S("-7/2").floor() == -4);
  CHECK(S("-7/2").round() == -3);
  CHECK(S("5/2").round() == 3);
  CHECK(S("(1+sqrt(5))/2").round() == 2);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    Scalar x = random_quad(rng, 3);
    Integer f = x.floor();
    CHECK(Scalar(f) <= x);
    CHECK(x < Scalar(Integer(f + 1)));
  }
}

TEST_CASE("field axioms hold exactly") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    long d = trial % 2 ? 2 : 5;
    Scalar a = random_quad(rng, d);
    Scalar b = random_quad(rng, d);
    Scalar c = trial % 3 ? random_quad(rng, d) : Scalar(random_rational(rng));
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK(a - a == Scalar(0));
    CHECK((a - b) + b == a);
    if (!b.is_exact_zero()) {
      CHECK((a / b) * b == a);
    }
    // identical representations, not just equal values
    CHECK((a * (b + c)).to_string() == (a * b + a * c).to_string());
  }
}

TEST_CASE("HPFloat error bounds are sound on random expression trees") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_int_distribution<int> depth_pick(1, 5);
  int checked = 0;

  std::function<std::pair<Rational, HPFloat>(int)> build = [&](int depth) -> std::pair<Rational, HPFloat> {
    if (depth == 0) {
      Rational r = random_rational(rng, 1000);
      if (r == 0) r = 1;
      return {r, HPFloat::from_rational(r, 128)};
    }
    auto [ra, ha] = build(depth - 1);
    auto [rb, hb] = build(depth - 1);
    switch (pick(rng)) {
      case 0: return {ra + rb, ha + hb};
      case 1: return {ra - rb, ha - hb};
      case 2: return {ra * rb, ha * hb};
      default:
        if (rb == 0) return {ra * rb, ha * hb};
        try {
          return {ra / rb, ha / hb};
        } catch (const Error&) {
          return {ra * rb, ha * hb};
        }
    }
  };

  for (int trial = 0; trial < 10000; ++trial) {
    auto [exact, approx] = build(depth_pick(rng));
    Rational diff = exact - approx.midpoint();
    if (diff < 0) diff = -diff;
    bool sound = diff <= Rational(approx.error());
    if (!sound) FAIL("error bound violated: " << exact.get_str() << " vs " << approx.to_string());
    ++checked;
  }
  CHECK(checked == 10000);
}

TEST_CASE("mixed radicands promote to HPFloat") {
  Scalar x = S("sqrt(2) + sqrt(3)");
  REQUIRE(x.is_hpfloat());
  CHECK(x > S("3.146"));
  CHECK(x < S("3.1463"));
  CHECK(x.floor() == 3);
  CHECK(S("sqrt(2)").to_hpfloat().error() > 0);
}

TEST_CASE("threshold comparison") {
  // 1/7 < 1/Q^(1/2) with Q = 40: 1/49 < 1/40
  CHECK(below_power_threshold(Scalar(Rational(1, 7)), Scalar(1), 40, Rational(1, 2)));
  CHECK_FALSE(below_power_threshold(Scalar(Rational(1, 7)), Scalar(1), 49, Rational(1, 2)));
  CHECK(below_power_threshold(Scalar(0), Scalar(Rational(1, 10)), 1000000, Rational(3)));
  CHECK(below_power_threshold(S("5*sqrt(2)-7"), Scalar(Rational(1, 2)), 5, Rational(1)));
}

TEST_CASE("squarefree split") {
  auto [k, d] = split_square(Integer(72));
  CHECK(k == 6);
  CHECK(d == 2);
  auto [k2, d2] = split_square(Integer(49));
  CHECK(k2 == 7);
  CHECK(d2 == 1);
  auto [k3, d3] = split_square(Integer(30));
  CHECK(k3 == 1);
  CHECK(d3 == 30);
}

TEST_CASE("log of tiny values") {
  Scalar tiny = pow_base(Scalar(2), -3000);
  CHECK(tiny.log_abs() == doctest::Approx(-3000 * std::log(2.0)));
  CHECK(S("99/70 - sqrt(2)").log_abs() == doctest::Approx(std::log(std::fabs(99.0 / 70 - std::sqrt(2.0)))).epsilon(1e-9));
}
