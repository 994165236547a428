#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "singularlab/exterior.hpp"

using namespace singlab;
using MV = MultiVector<Scalar>;

namespace {

MV e(int dim, std::vector<int> idx, Scalar v = Scalar(1)) { return MV::basis(dim, make_set(idx), v); }

}  // namespace

TEST_CASE("wedge of basis vectors") {
  CHECK(wedge(e(2, {0}), e(2, {1})) == e(2, {0, 1}));
  CHECK(wedge(e(2, {1}), e(2, {0})) == e(2, {0, 1}, Scalar(-1)));
  MV a = e(2, {0}) + e(2, {1});
  MV b = e(2, {0}) - e(2, {1});
  CHECK(wedge(a, b) == e(2, {0, 1}, Scalar(-2)));
  CHECK(wedge(e(3, {1}), e(3, {1})).is_zero());
  CHECK(wedge(e(4, {2}), e(4, {0, 3})) == e(4, {0, 2, 3}, Scalar(-1)));
  CHECK_THROWS_AS(wedge(e(2, {0, 1}), e(2, {0})), Error);
  try {
    wedge(e(2, {0, 1}), e(2, {1}));
  } catch (const Error& err) {
    CHECK(err.code() == Errc::GradeOverflow);
  }
}

TEST_CASE("sup norm and projections") {
  MV w = e(3, {0, 1}) + e(3, {1, 2}, Scalar(2));
  CHECK(sup_norm(w) == Scalar(2));
  CHECK(sup_norm(MV(3, 2)) == Scalar(0));
  CHECK(sup_norm(e(3, {0, 2}, Scalar(-5))) == Scalar(5));

  CHECK(project_pi(w) == e(3, {1, 2}, Scalar(2)));
  CHECK(project_pi(e(3, {0})).is_zero());
  CHECK(project_pi(e(3, {1, 2}, Scalar(3))) == e(3, {1, 2}, Scalar(3)));

  MV v = e(3, {0}, Scalar(3)) + e(3, {1}, Scalar(4)) + e(3, {2}, Scalar(5));
  CHECK(project_pi_bullet(v, 1) == e(3, {2}, Scalar(5)));
  CHECK(project_pi_bullet(e(4, {2, 3}) + e(4, {1, 2}), 1) == e(4, {2, 3}));
  CHECK(project_pi_bullet(e(4, {0, 1}) + e(4, {1, 3}), 1).is_zero());
  CHECK_THROWS_AS(project_pi_bullet(e(4, {1, 2, 3}), 1), Error);
}

TEST_CASE("c decomposition") {
  MV w = e(3, {0, 1}) + e(3, {1, 2}, Scalar(2));
  auto c = c_decompose(w);
  REQUIRE(c.parts.size() == 3);
  CHECK(c.parts[0] == e(3, {1}));
  CHECK(c.parts[1] == e(3, {2}, Scalar(2)));
  CHECK(c.parts[2] == e(3, {1}, Scalar(-2)));

  MV v = e(3, {0}, Scalar(4)) + e(3, {2}, Scalar(-1));
  auto cv = c_decompose(v);
  CHECK(cv.parts[0] == MV::scalar(3, Scalar(4)));
  CHECK(cv.parts[1].is_zero());
  CHECK(cv.parts[2] == MV::scalar(3, Scalar(-1)));

  auto cz = c_decompose(MV(3, 2));
  for (const auto& p : cz.parts) CHECK(p.is_zero());

  Scalar x1 = Scalar::parse("1/3");
  Scalar x2 = Scalar::parse("sqrt(2)");
  std::vector<Scalar> xt{Scalar(1), x1, x2};
  CHECK(contract(xt, c) == e(3, {1}) + e(3, {2}, Scalar(2) * x1) - e(3, {1}, Scalar(2) * x2));
  std::vector<Scalar> unit{Scalar(1), Scalar(0), Scalar(0)};
  CHECK(contract(unit, c) == c.parts[0]);
}

TEST_CASE("flow action examples") {
  ScalarVector x(1);
  x(0) = Scalar(Rational(1, 2));
  MV out = flow_action(e(2, {1}), x, 1, Scalar(2));
  CHECK(out == e(2, {0}) + e(2, {1}, Scalar(Rational(1, 2))));

  ScalarVector zero = ScalarVector::Constant(2, Scalar(0));
  MV w = e(3, {0, 1}, Scalar(3)) + e(3, {1, 2}, Scalar(-1));
  MV flowed = flow_action(w, zero, 2, Scalar(2));
  // n=2, j=2: e_0 part scales by 2^{2}, the rest by 2^{-4}
  CHECK(flowed == e(3, {0, 1}, Scalar(12)) + e(3, {1, 2}, Scalar(Rational(-1, 16))));
}

TEST_CASE("flow action agrees with minors of g_k u_x") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coeff(-2, 2);
  std::uniform_int_distribution<int> num(-3, 3);
  std::uniform_int_distribution<int> den(1, 3);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + trial % 3;
    int dim = n + 1;
    int j = 1 + (trial / 3) % dim;
    long k = trial % 4;
    ScalarVector x(n);
    for (int i = 0; i < n; ++i) x(i) = Scalar(Rational(num(rng), den(rng)));
    MV w(dim, j);
    for (IndexSet I : subsets_of_size(index_range(0, n), j)) w.set(I, Scalar(coeff(rng)));
    ScalarMatrix M = oracle::flow_times_unipotent(x, k, Scalar(2));
    CHECK(flow_action(w, x, k, Scalar(2)) == oracle::minor_action(M, w));
    CHECK(apply_matrix(M, w) == oracle::minor_action(M, w));
  }
}

TEST_CASE("wedge is antisymmetric and bilinear") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coeff(-3, 3);
  auto random_vec = [&](int dim) {
    MV v(dim, 1);
    for (int i = 0; i < dim; ++i) v.set(singleton(i), Scalar(coeff(rng)));
    return v;
  };
  for (int trial = 0; trial < 100; ++trial) {
    int dim = 2 + trial % 4;
    MV a = random_vec(dim), b = random_vec(dim), c = random_vec(dim);
    CHECK(wedge(a, b) == -wedge(b, a));
    CHECK(wedge(a, a).is_zero());
    CHECK(wedge(a + b, c) == wedge(a, c) + wedge(b, c));
    CHECK(wedge(a * Scalar(3), c) == wedge(a, c) * Scalar(3));
    if (dim >= 3) CHECK(wedge(wedge(a, b), c) == wedge(a, wedge(b, c)));
  }
}

TEST_CASE("index set helpers") {
  CHECK(set_to_string(make_set({3, 0, 2})) == "0,2,3");
  CHECK(set_from_string("1,2") == make_set({1, 2}));
  CHECK(subsets_of_size(index_range(0, 3), 2).size() == 6);
  CHECK(subsets_of_size(index_range(0, 3), 2).front() == make_set({0, 1}));
  CHECK(subsets_of_size(index_range(0, 3), 2).back() == make_set({2, 3}));
  CHECK(shuffle_sign(2, make_set({1, 3})) == -1);
  CHECK(shuffle_sign(0, make_set({1, 3})) == 1);
  CHECK(SetLess{}(make_set({0, 2}), make_set({1, 2})));
  CHECK_FALSE(SetLess{}(make_set({1, 2}), make_set({0, 3})));
}
