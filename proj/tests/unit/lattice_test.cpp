#include <doctest.h>

#include <random>
#include <set>

#include "singularlab/lattice.hpp"

using namespace singlab;

namespace {

Scalar S(const char* t) { return Scalar::parse(t); }

ScalarMatrix smat(std::initializer_list<std::initializer_list<const char*>> rows) {
  ScalarMatrix m(rows.size(), rows.begin()->size());
  int i = 0;
  for (auto row : rows) {
    int j = 0;
    for (const char* v : row) m(i, j++) = S(v);
    ++i;
  }
  return m;
}

IntMatrix imat(std::initializer_list<std::initializer_list<long>> rows) {
  IntMatrix m(rows.size(), rows.begin()->size());
  int i = 0;
  for (auto row : rows) {
    int j = 0;
    for (long v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

// Minimum sup norm over a plain coefficient box, no reduction involved.
Scalar brute_force_min(const ScalarMatrix& b, long K) {
  const int r = static_cast<int>(b.cols());
  std::vector<long> a(r, -K);
  bool have = false;
  Scalar best;
  for (;;) {
    bool zero = std::all_of(a.begin(), a.end(), [](long v) { return v == 0; });
    if (!zero) {
      ScalarVector v = ScalarVector::Constant(b.rows(), Scalar(0));
      for (int c = 0; c < r; ++c) v += b.col(c) * Scalar(a[c]);
      Scalar n = sup_norm(v);
      if (!have || n < best) best = n, have = true;
    }
    int i = 0;
    while (i < r && a[i] == K) a[i++] = -K;
    if (i == r) break;
    ++a[i];
  }
  return best;
}

}  // namespace

TEST_CASE("covolume examples") {
  CHECK(covolume(Submodule(imat({{0, 0}, {1, 0}, {0, 1}}))) == Scalar(1));
  CHECK(covolume(Submodule(imat({{1, 0}, {1, 1}, {0, 1}}))) == Scalar(1));
  CHECK(covolume(Submodule(imat({{2}, {0}}))) == Scalar(2));
}

TEST_CASE("covolume does not depend on the basis") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> e(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    IntMatrix g(4, 2);
    do {
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j) g(i, j) = e(rng);
    } while (scalar_rank(to_scalar(g)) < 2);
    IntMatrix u = imat({{1, 0}, {0, 1}});
    for (int s = 0; s < 4; ++s) {
      IntMatrix step = imat({{1, e(rng)}, {0, 1}});
      if (s % 2) step.transposeInPlace();
      u = u * step;
    }
    CHECK(covolume(Submodule(g)) == covolume(Submodule(g * u)));
  }
}

TEST_CASE("shortest vector examples") {
  ShortestVector z2 = shortest_vector(LatticeBasis(ScalarMatrix::Identity(2, 2)));
  CHECK(z2.norm == Scalar(1));
  CHECK(z2.vector(0) == Scalar(1));
  CHECK(z2.vector(1) == Scalar(0));

  ShortestVector g1 = shortest_vector(LatticeBasis(smat({{"2", "1"}, {"0", "1/2"}})));
  CHECK(g1.norm == Scalar(1));

  ShortestVector g2 = shortest_vector(LatticeBasis(smat({{"4", "2"}, {"0", "1/4"}})));
  CHECK(g2.norm == Scalar(Rational(1, 2)));
  CHECK(g2.vector(0) == Scalar(0));
  CHECK(g2.vector(1) == Scalar(Rational(1, 2)));
  CHECK(g2.coefficients[0] == -1);
  CHECK(g2.coefficients[1] == 2);

  ShortestVector irr = shortest_vector(LatticeBasis(smat({{"1024", "1024*sqrt(2)"}, {"0", "1/1024"}})));
  CHECK(irr.norm >= Scalar(Rational(1, 4)));

  ScalarMatrix big = ScalarMatrix::Identity(9, 9);
  try {
    shortest_vector(LatticeBasis(big));
    FAIL("expected DIMENSION_TOO_LARGE");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DimensionTooLarge);
  }
}

TEST_CASE("shortest vector matches brute force") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> e(-4, 4);
  std::uniform_int_distribution<long> den(1, 4);
  for (int trial = 0; trial < 60; ++trial) {
    int m = 2 + trial % 2;
    ScalarMatrix b(m, m);
    do {
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          b(i, j) = Scalar(Rational(e(rng), den(rng)));
          if (trial % 3 == 0 && i == 0 && j == 1) b(i, j) = b(i, j) + S("sqrt(3)");
        }
    } while (scalar_rank(b) < m);
    ShortestVector sv = shortest_vector(LatticeBasis(b));
    ShortestVector doubled = shortest_vector(LatticeBasis(b), SvpOptions{8, 2, 200'000'000});
    CHECK(sv.norm == brute_force_min(b, 10));
    CHECK(sv.norm == doubled.norm);
    CHECK(sv.coefficients == doubled.coefficients);
    ScalarVector check = ScalarVector::Constant(m, Scalar(0));
    for (int c = 0; c < m; ++c) check += b.col(c) * Scalar(sv.coefficients[c]);
    CHECK(sup_norm(check) == sv.norm);
  }
}

TEST_CASE("Hermite and Smith forms") {
  IntMatrix h = hnf(imat({{2, 0}, {2, 4}}));
  CHECK(h == imat({{2, 0}, {2, 4}}));
  CHECK(hnf(imat({{0, 2}, {4, 2}})) == imat({{2, 0}, {2, 4}}));
  CHECK(hnf(imat({{-1}, {1}})) == imat({{1}, {-1}}));

  SmithForm s = smith(imat({{2, 0}, {2, 4}}));
  REQUIRE(s.divisors.size() == 2);
  CHECK(s.divisors[0] == 2);
  CHECK(s.divisors[1] == 4);
  SmithForm t = smith(imat({{1, 0}, {0, 1}, {1, 1}}));
  CHECK(t.divisors == std::vector<Integer>{1, 1});
}

TEST_CASE("primitivity and saturation") {
  CHECK(is_primitive(Submodule(imat({{1}, {0}}))));
  CHECK_FALSE(is_primitive(Submodule(imat({{2}, {0}}))));
  CHECK(is_primitive(Submodule(imat({{1, 0}, {0, 1}, {1, 1}}))));

  CHECK(saturate(Submodule(imat({{2}, {0}}))) == Submodule(imat({{1}, {0}})));
  Submodule p(imat({{1, 0}, {0, 1}, {1, 1}}));
  CHECK(saturate(p) == p);
  // span{(2,2),(0,4)} is all of R^2, so its saturation is Z^2
  CHECK(saturate(Submodule(imat({{2, 0}, {2, 4}}))) == Submodule(imat({{1, 0}, {0, 1}})));

  std::mt19937_64 rng(8);
  std::uniform_int_distribution<long> e(-6, 6);
  for (int trial = 0; trial < 100; ++trial) {
    IntMatrix g(4, 2);
    do {
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j) g(i, j) = e(rng);
    } while (scalar_rank(to_scalar(g)) < 2);
    Submodule d(g);
    Submodule sat = saturate(d);
    CHECK(is_primitive(sat));
    CHECK(saturate(sat) == sat);
    // same real span: every generator of d lies in sat's span
    ScalarMatrix both(4, 4);
    both << to_scalar(sat.generators()), to_scalar(g);
    CHECK(scalar_rank(both) == 2);
  }
}

TEST_CASE("primitive enumeration") {
  auto lines = enumerate_primitive(2, 1, 1);
  REQUIRE(lines.size() == 4);
  std::set<std::pair<long, long>> got;
  for (const auto& d : lines) got.insert({d.generators()(0, 0), d.generators()(1, 0)});
  CHECK(got == std::set<std::pair<long, long>>{{1, 0}, {0, 1}, {1, 1}, {1, -1}});

  auto full = enumerate_primitive(2, 2, 3);
  REQUIRE(full.size() == 1);
  CHECK(full[0] == Submodule(imat({{1, 0}, {0, 1}})));
  CHECK(enumerate_primitive(3, 1, 1).size() == 13);

  // brute force: primitive vectors with entries in [-2, 2] up to sign
  int count = 0;
  for (long a = -2; a <= 2; ++a)
    for (long b = -2; b <= 2; ++b)
      for (long c = -2; c <= 2; ++c) {
        long g = std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c));
        if (g != 1) continue;
        long lead = a != 0 ? a : (b != 0 ? b : c);
        if (lead > 0) ++count;
      }
  CHECK(static_cast<int>(enumerate_primitive(3, 1, 2).size()) == count);

  auto planes = enumerate_primitive(3, 2, 1);
  std::set<std::string> seen;
  for (const auto& d : planes) {
    CHECK(is_primitive(d));
    CHECK(hnf(d.generators()) == d.generators());
    std::string key;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) key += std::to_string(d.generators()(i, j)) + ",";
    CHECK(seen.insert(key).second);
  }
}

TEST_CASE("Minkowski bound") {
  CHECK(minkowski_check(LatticeBasis(ScalarMatrix::Identity(3, 3)), Submodule(imat({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}))));
  CHECK(minkowski_check(LatticeBasis(smat({{"2", "0"}, {"0", "1/2"}})), Submodule(imat({{1}, {0}}))));
  CHECK(shortest_vector(LatticeBasis(smat({{"2", "0"}, {"0", "1/2"}}))).norm == Scalar(Rational(1, 2)));
}

TEST_CASE("short vector enumeration finds everything in the ball") {
  std::vector<std::vector<double>> cols{{1.0, 0.0}, {0.5, 2.0}};
  std::set<std::pair<long, long>> found;
  enumerate_short(cols, 2.0, [&](const std::vector<long>& a) { found.insert({a[0], a[1]}); }, 1'000'000);
  std::set<std::pair<long, long>> expect;
  for (long a = -5; a <= 5; ++a)
    for (long b = -5; b <= 5; ++b) {
      if (a == 0 && b == 0) continue;
      double x = a + 0.5 * b, y = 2.0 * b;
      if (x * x + y * y <= 4.0) expect.insert({a, b});
    }
  CHECK(found == expect);
}
