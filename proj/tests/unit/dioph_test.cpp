#include <doctest.h>

#include <random>

#include "singularlab/dioph.hpp"

using namespace singlab;

namespace {

Scalar S(const char* t) { return Scalar::parse(t); }

ScalarMatrix mat(std::initializer_list<std::initializer_list<const char*>> rows) {
  ScalarMatrix m(rows.size(), rows.begin()->size());
  int i = 0;
  for (auto row : rows) {
    int j = 0;
    for (const char* v : row) m(i, j++) = S(v);
    ++i;
  }
  return m;
}

std::vector<long> powers(long base, int lo, int hi) {
  std::vector<long> out;
  for (int e = lo; e <= hi; ++e) out.push_back(static_cast<long>(std::pow(base, e)));
  return out;
}

// Plain scan over every integer q in the box with exact arithmetic only.
Scalar brute_min(const ScalarMatrix& A, long bound) {
  const int l = static_cast<int>(A.cols());
  std::vector<long> q(l, -bound);
  bool have = false;
  Scalar best;
  for (;;) {
    if (std::any_of(q.begin(), q.end(), [](long v) { return v != 0; })) {
      Scalar worst(0);
      for (int i = 0; i < A.rows(); ++i) {
        Scalar v(0);
        for (int j = 0; j < l; ++j) v += A(i, j) * Scalar(q[j]);
        Scalar frac = v - Scalar(v.floor());
        worst = max(worst, min(frac, Scalar(1) - frac));
      }
      if (!have || worst < best) best = worst, have = true;
    }
    int i = 0;
    while (i < l && q[i] == bound) q[i++] = -bound;
    if (i == l) break;
    ++q[i];
  }
  return best;
}

}  // namespace

TEST_CASE("best affine approximation examples") {
  Approximation r2 = best_affine_approx(mat({{"sqrt(2)"}}), 5);
  CHECK(r2.q == std::vector<Integer>{5});
  CHECK(r2.p == std::vector<Integer>{-7});
  CHECK(r2.err == S("5*sqrt(2) - 7"));

  Approximation half = best_affine_approx(mat({{"1/2"}}), 2);
  CHECK(half.q == std::vector<Integer>{2});
  CHECK(half.p == std::vector<Integer>{-1});
  CHECK(half.err == Scalar(0));

  Approximation zero = best_affine_approx(mat({{"0", "0"}, {"0", "0"}}), 4);
  CHECK(zero.q == std::vector<Integer>{1, 0});
  CHECK(zero.p == std::vector<Integer>{0, 0});
  CHECK(zero.err == Scalar(0));

  CHECK_FALSE(best_in_box(mat({{"sqrt(2)"}}), 0));
  CHECK(box_bound(BoxRule::StrictCQ, S("1/10"), 100) == 9);
  CHECK(box_bound(BoxRule::StrictCQ, S("1/10"), 101) == 10);
  CHECK(box_bound(BoxRule::StrictCQ, S("1/10"), 5) == 0);
}

TEST_CASE("continued fraction oracle examples") {
  CfApprox r = cf_oracle(S("sqrt(2)"), 5);
  CHECK(r.p == 7);
  CHECK(r.q == 5);
  CHECK(r.err == S("5*sqrt(2) - 7"));
  CfApprox t = cf_oracle(S("3/7"), 100);
  CHECK(t.p == 3);
  CHECK(t.q == 7);
  CHECK(t.err == Scalar(0));
  CfApprox g = cf_oracle(S("(1 + sqrt(5))/2"), 8);
  CHECK(g.p == 13);
  CHECK(g.q == 8);
  CHECK(g.err == abs(S("8*(1 + sqrt(5))/2 - 13")));
}

TEST_CASE("search agrees with the continued fraction oracle") {
  std::vector<Scalar> alphas{S("sqrt(2)"), S("sqrt(3)"), S("(1+sqrt(5))/2"), S("(2 - sqrt(7))/3"), S("sqrt(13)/5")};
  std::vector<long> bounds;
  for (long Q = 1; Q <= 2000; ++Q) bounds.push_back(Q);
  for (const Scalar& a : alphas) {
    ScalarMatrix A(1, 1);
    A(0, 0) = a;
    auto found = best_in_boxes(A, bounds);
    int mismatches = 0;
    for (std::size_t i = 0; i < bounds.size(); ++i) {
      if (!(found[i]->err == cf_oracle(a, bounds[i]).err)) ++mismatches;
      if (i > 0 && found[i - 1]->err < found[i]->err) ++mismatches;
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("lattice search matches brute force") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<long> num(-9, 9), den(1, 9);
  std::vector<const char*> radicals{"sqrt(2)", "sqrt(3)", "sqrt(5)", "sqrt(7)"};
  SearchOptions lattice_only;
  lattice_only.exhaustive_limit = 0;
  for (int trial = 0; trial < 30; ++trial) {
    int k = 1 + trial % 2, l = 2;
    ScalarMatrix A(k, l);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < l; ++j) {
        A(i, j) = Scalar(Rational(num(rng), den(rng)));
        if ((i + j + trial) % 2 == 0) A(i, j) = A(i, j) + S(radicals[(i + j + trial) % 4]) / Scalar(den(rng));
      }
    long bound = 6 + trial % 15;
    auto viaLattice = best_in_box(A, bound, lattice_only);
    auto viaScan = best_in_box(A, bound);
    REQUIRE(viaLattice);
    REQUIRE(viaScan);
    CHECK(viaLattice->err == brute_min(A, bound));
    CHECK(viaScan->err == viaLattice->err);
    CHECK(viaScan->q == viaLattice->q);
  }
}

TEST_CASE("singular test verdicts") {
  SingularityQuery rat{mat({{"3/7"}}), S("1/1000"), 1, powers(10, 1, 4), std::nullopt, BoxRule::LeqQ};
  HorizonVerdict v = singular_test(rat);
  CHECK(v.status == VerdictStatus::Witnessed);
  for (const auto& r : v.records) CHECK(r.best->err == Scalar(0));

  SingularityQuery root{mat({{"sqrt(2)"}}), S("1/10"), 1, powers(10, 1, 4), std::nullopt, BoxRule::LeqQ};
  HorizonVerdict w = singular_test(root);
  CHECK(w.status == VerdictStatus::Refuted);
  REQUIRE(w.refuting_Q);
  CHECK(cf_oracle(S("sqrt(2)"), *w.refuting_Q).err * Scalar(*w.refuting_Q) >= S("1/10"));

  SingularityQuery common{mat({{"1/6", "2/3"}, {"1/2", "5/6"}}), S("1/100"), 7, {6, 12, 24, 48}, 0, BoxRule::LeqQ};
  CHECK(singular_test(common).status == VerdictStatus::Witnessed);

  SingularityQuery bad = root;
  bad.schedule = {5, 5};
  CHECK_THROWS_AS(singular_test(bad), Error);
  bad.schedule = {5, 10};
  bad.c = Scalar(0);
  CHECK_THROWS_AS(singular_test(bad), Error);
}

TEST_CASE("uniform exponent estimates") {
  OmegaHatEstimate r2 = omega_hat_estimate(mat({{"sqrt(2)"}}), powers(10, 1, 5));
  CHECK_FALSE(r2.degenerate);
  CHECK(r2.summary >= 0.9);
  CHECK(r2.summary <= 1.1);

  OmegaHatEstimate third = omega_hat_estimate(mat({{"1/3"}}), {2, 3, 10, 100});
  CHECK(third.degenerate);
  CHECK(*third.degenerate_from == 3);
  CHECK(third.summary_text.rfind("RATIONAL_DEGENERATE", 0) == 0);

  // Dirichlet gives |q.x + p| <= Q^-2 for x in R^2, so the estimate sits near 2
  // and a c = 1 test at omega = 2 is witnessed on the same schedule.
  ScalarMatrix A = mat({{"sqrt(2)", "sqrt(3)"}});
  std::vector<long> sched = powers(2, 3, 10);
  OmegaHatEstimate two = omega_hat_estimate(A, sched);
  HorizonVerdict v = singular_test({A, Scalar(1), 2, sched, std::nullopt, BoxRule::LeqQ});
  CHECK(v.status == VerdictStatus::Witnessed);
  CHECK(two.summary >= 2 - 0.05);
  if (two.summary > 2.1) CHECK(v.status == VerdictStatus::Witnessed);
}

TEST_CASE("ties between errors known only to finite precision") {
  // (-2, 1) and (1, 1) give the same error; sqrt(2) + sqrt(5) is not exact.
  ScalarMatrix A = mat({{"1/3", "sqrt(2) + sqrt(5)"}});
  REQUIRE(A(0, 1).is_hpfloat());
  auto best = best_in_box(A, 2);
  REQUIRE(best);
  CHECK(best->q == std::vector<Integer>{-2, 1});
  CHECK(best->p == std::vector<Integer>{-3});
  CHECK(best->err.to_double() == doctest::Approx(3 + 2.0 / 3 - std::sqrt(2.0) - std::sqrt(5.0)));

  HorizonVerdict v = singular_test({mat({{"3/8", "sqrt(2) + 3/8*sqrt(3)"}}), S("1/20"), Rational(2),
                                    {16, 64, 256, 1024, 4096, 16384}, std::nullopt, BoxRule::LeqQ});
  // the rational first coordinate is hit exactly by q = (8, 0)
  CHECK(v.status == VerdictStatus::Witnessed);
  for (const auto& r : v.records) {
    REQUIRE(r.best);
    CHECK(r.best->err == Scalar(0));
    CHECK(r.best->q == std::vector<Integer>{8, 0});
  }
}
