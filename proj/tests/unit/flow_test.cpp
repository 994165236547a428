#include <doctest.h>

#include <random>

#include "singularlab/flow.hpp"

using namespace singlab;

namespace {

Scalar S(const char* t) { return Scalar::parse(t); }

ScalarVector vec(std::initializer_list<const char*> xs) {
  ScalarVector v(xs.size());
  int i = 0;
  for (const char* x : xs) v(i++) = S(x);
  return v;
}

// min over (a, b) != 0 of max(|2^k (a + b x)|, |b| 2^-k), searching b up to
// the bound implied by the trivial vector (a, b) = (1, 0).
Rational brute_delta_1d(const Rational& x, long k) {
  Rational up(1), down(1);
  mpz_class two(2);
  mpz_class pw;
  mpz_pow_ui(pw.get_mpz_t(), two.get_mpz_t(), static_cast<unsigned long>(k));
  up = Rational(pw);
  down = Rational(1) / up;
  Rational best = up;
  const long bmax = mpz_class(best * up).get_si() + 1;
  for (long b = -bmax; b <= bmax; ++b) {
    Rational bx = x * b;
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), bx.get_num_mpz_t(), bx.get_den_mpz_t());
    for (mpz_class a = -fl - 1; a <= -fl + 1; ++a) {
      if (a == 0 && b == 0) continue;
      Rational first = ::abs(Rational(a) + bx) * up;
      Rational second = Rational(std::abs(b)) * down;
      Rational n = first > second ? first : second;
      if (n < best) best = n;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("unipotent lattice examples") {
  CHECK(unipotent_lattice(vec({"0", "0"})).matrix() == ScalarMatrix::Identity(3, 3));
  ScalarMatrix half = unipotent_lattice(vec({"1/2"})).matrix();
  CHECK(half(0, 0) == Scalar(1));
  CHECK(half(1, 0) == Scalar(0));
  CHECK(half(0, 1) == S("1/2"));
  CHECK(half(1, 1) == Scalar(1));
  ScalarMatrix two = unipotent_lattice(vec({"1/3", "2/5"})).matrix();
  CHECK(two(0, 1) == S("1/3"));
  CHECK(two(0, 2) == S("2/5"));
  CHECK(two(2, 2) == Scalar(1));
  CHECK(two(1, 2) == Scalar(0));
}

TEST_CASE("flowed lattice is unimodular") {
  for (long k = 0; k < 6; ++k) {
    ScalarMatrix m = flowed_lattice(vec({"1/3", "sqrt(2)"}), k, Scalar(2)).matrix();
    CHECK(covolume(m) == Scalar(1));
    CHECK(flow_matrix(2, k, Scalar(3))(0, 0) * pow_base(Scalar(3), -2 * k) == Scalar(1));
  }
  CHECK_THROWS_AS(flow_matrix(1, 1, Scalar(1)), Error);
}

TEST_CASE("delta profile examples") {
  FlowParams p{1, Scalar(2), 20};
  DeltaProfile r = delta_profile(vec({"3/7"}), p);
  REQUIRE(r.values.size() == 21);
  for (const auto& e : r.values) {
    CHECK(e.delta > Scalar(0));
    if (e.k >= 3) CHECK(e.delta <= Scalar(7) * pow_base(Scalar(2), -e.k));
  }

  DeltaProfile root = delta_profile(vec({"sqrt(2)"}), FlowParams{1, Scalar(2), 30});
  for (const auto& e : root.values) CHECK(e.delta >= S("1/4"));

  DeltaProfile zero = delta_profile(vec({"0"}), p);
  for (const auto& e : zero.values) CHECK(e.delta == pow_base(Scalar(2), -e.k));
  DeltaProfile zero2 = delta_profile(vec({"0", "0"}), FlowParams{2, Scalar(2), 6});
  for (const auto& e : zero2.values) CHECK(e.delta == pow_base(Scalar(2), -e.k));
}

TEST_CASE("delta profile matches a direct search for rational points") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<long> num(-20, 20), den(1, 20);
  for (int trial = 0; trial < 25; ++trial) {
    Rational x(num(rng), den(rng));
    x.canonicalize();
    ScalarVector v(1);
    v(0) = Scalar(x);
    DeltaProfile prof = delta_profile(v, FlowParams{1, Scalar(2), 6});
    for (const auto& e : prof.values) CHECK(e.delta == Scalar(brute_delta_1d(x, e.k)));
  }
}

TEST_CASE("delta profile is stable under a larger box and threads") {
  ScalarVector x = vec({"sqrt(3)", "2/7"});
  FlowParams p{2, Scalar(2), 8};
  DeltaProfile a = delta_profile(x, p);
  DeltaProfile b = delta_profile(x, p, SvpOptions{8, 2, 200'000'000}, 3);
  REQUIRE(a.values.size() == b.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    CHECK(a.values[i].delta == b.values[i].delta);
    CHECK(a.values[i].coefficients == b.values[i].coefficients);
  }
}

TEST_CASE("divergence classification") {
  FlowParams p{1, Scalar(2), 20};
  Scalar eps = S("1/8");
  DeltaProfile r = delta_profile(vec({"3/7"}), p, eps);
  REQUIRE(r.classification);
  CHECK(r.classification->kind == Divergence::DecaysToZero);

  Classification c = classify_divergence(delta_profile(vec({"sqrt(2)"}), p), eps);
  CHECK(c.kind == Divergence::BoundedBelow);
  CHECK(c.floor >= S("1/4"));
  CHECK(c.k_max == 20);

  DeltaProfile flat;
  for (long k = 0; k <= 10; ++k) flat.values.push_back({k, Scalar(1), {}, {}});
  Classification f = classify_divergence(flat, eps);
  CHECK(f.kind == Divergence::BoundedBelow);
  CHECK(f.floor == Scalar(1));

  DeltaProfile dip = flat;
  dip.values[2].delta = S("1/100");
  CHECK(classify_divergence(dip, eps).kind == Divergence::Mixed);
  CHECK(divergence_name(Divergence::Mixed) == "MIXED");
  CHECK_THROWS_AS(classify_divergence(flat, Scalar(0)), Error);
}

TEST_CASE("quantitative nondivergence check") {
  FlowParams p{1, Scalar(2), 20};
  QndReport id = qnd_hypothesis_check({vec({"0"})}, 0, p, S("1/2"), 3);
  CHECK(id.holds());
  CHECK(id.checked > 0);

  QndReport rat = qnd_hypothesis_check({vec({"3/7"})}, 12, p, S("1/2"), 7);
  REQUIRE_FALSE(rat.holds());
  bool found = false;
  for (const auto& v : rat.violations) {
    const IntMatrix& g = v.gamma.generators();
    if (g.cols() == 1 && g(0, 0) == 3 && g(1, 0) == -7) found = true;
  }
  CHECK(found);

  for (long k = 0; k <= 30; k += 5) {
    QndReport root = qnd_hypothesis_check({vec({"sqrt(2)"})}, k, p, S("1/4"), 4);
    CHECK(root.holds());
  }
}

TEST_CASE("a violating submodule forces a short vector") {
  FlowParams p{2, Scalar(2), 0};
  Scalar rho = S("1/2");
  for (ScalarVector x : {vec({"1/3", "1/5"}), vec({"sqrt(2)", "2/3"})}) {
    for (long k = 2; k <= 5; ++k) {
      QndReport rep = qnd_hypothesis_check({x}, k, p, rho, 2);
      Scalar delta = shortest_vector(flowed_lattice(x, k, p.base)).norm;
      for (const auto& v : rep.violations) {
        int r = v.gamma.rank();
        CHECK(pow_base(delta, r) <= pow_base(Scalar(2), r) * v.max_cov);
        CHECK(delta < Scalar(2) * rho);
      }
    }
  }
}
