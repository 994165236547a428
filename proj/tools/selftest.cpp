#include "selftest.hpp"

#include <chrono>
#include <functional>
#include <string>

#include "oracles.hpp"
#include "singularlab/dioph.hpp"
#include "singularlab/lattice.hpp"
#include "singularlab/subspace.hpp"

namespace singlab::tool {

namespace {

using MV = MultiVector<Scalar>;

std::vector<MV> small_multivectors(int dim, int grade) {
  std::vector<MV> out;
  oracle::for_each_multivector(dim, grade, 1, [&](const MV& w) { out.push_back(w); });
  return out;
}

long flow_suite() {
  long bad = 0;
  for (int n = 1; n <= 2; ++n)
    for (int a = -2; a <= 2; ++a) {
      ScalarVector x = ScalarVector::Constant(n, Scalar(Rational(a, 3)));
      if (n == 2) x(1) = Scalar(Rational(1, 2));
      for (long k = 0; k <= 2; ++k) {
        ScalarMatrix M = oracle::flow_times_unipotent(x, k, Scalar(2));
        for (int j = 1; j <= n + 1; ++j)
          for (const MV& w : small_multivectors(n + 1, j))
            if (!(flow_action(w, x, k, Scalar(2)) == oracle::minor_action(M, w))) ++bad;
      }
    }
  return bad;
}

long reconstruction_suite() {
  long bad = 0;
  for (int dim = 2; dim <= 4; ++dim)
    for (int j = 1; j <= dim; ++j)
      for (const MV& w : small_multivectors(dim, j)) {
        auto c = c_decompose(w);
        MV e0 = MV::basis(dim, singleton(0));
        if (!(wedge(e0, c.parts[0]) + project_pi(w) == w)) ++bad;
      }
  return bad;
}

long svp_suite() {
  long bad = 0;
  for (long a = -3; a <= 3; ++a)
    for (long b = 1; b <= 3; ++b) {
      ScalarMatrix basis(2, 2);
      basis << Scalar(b), Scalar(Rational(a, 2)), Scalar(0), Scalar(Rational(1, b));
      Scalar best;
      bool have = false;
      for (long u = -8; u <= 8; ++u)
        for (long v = -8; v <= 8; ++v) {
          if (u == 0 && v == 0) continue;
          ScalarVector vec = basis.col(0) * Scalar(u) + basis.col(1) * Scalar(v);
          Scalar norm = sup_norm(vec);
          if (!have || norm < best) best = norm, have = true;
        }
      if (!(shortest_vector(LatticeBasis(basis)).norm == best)) ++bad;
    }
  return bad;
}

long cf_suite() {
  long bad = 0;
  for (const char* alpha : {"sqrt(2)", "sqrt(3)", "(1+sqrt(5))/2", "3/7"}) {
    ScalarMatrix A(1, 1);
    A(0, 0) = Scalar::parse(alpha);
    for (long Q = 1; Q <= 300; ++Q)
      if (!(best_affine_approx(A, Q).err == cf_oracle(A(0, 0), Q).err)) ++bad;
  }
  return bad;
}

long cross_path_suite(int threads) {
  long bad = 0;
  for (const char* a : {"sqrt(2);1/3", "1/2;1/3", "sqrt(3);sqrt(3)/2"}) {
    ScalarMatrix A(2, 1);
    std::string s(a);
    auto semi = s.find(';');
    A(0, 0) = Scalar::parse(s.substr(0, semi));
    A(1, 0) = Scalar::parse(s.substr(semi + 1));
    SubspaceParam P(2, 1, A);
    ConditionQuery q(P);
    q.schedule = {10, 20, 40, 80, 160};
    q.j_range = {1};
    q.threads = threads;
    ConditionReport cond = condition_check(q);
    HorizonVerdict sing = singular_test({A, q.c, Rational(2), q.schedule, std::nullopt, BoxRule::StrictCQ});
    std::vector<bool> table = cond.solvable_by_Q();
    for (std::size_t i = 0; i < table.size(); ++i)
      if (table[i] != sing.records[i].solved) ++bad;
    if (cond.condition_holds() != (sing.status == VerdictStatus::Refuted)) ++bad;
  }
  return bad;
}

}  // namespace

int run_selftest(std::ostream& out, int threads) {
  const std::vector<std::pair<std::string, std::function<long()>>> suites{
      {"flow action vs minors", flow_suite},
      {"reconstruction identity", reconstruction_suite},
      {"shortest vector vs brute force", svp_suite},
      {"best approximation vs continued fractions", cf_suite},
      {"grade one condition vs singularity test", [threads] { return cross_path_suite(threads); }},
  };
  int failed = 0;
  for (const auto& [name, run] : suites) {
    auto t0 = std::chrono::steady_clock::now();
    long bad = 0;
    std::string note;
    try {
      bad = run();
    } catch (const std::exception& e) {
      bad = 1;
      note = std::string(" (") + e.what() + ")";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out << (bad == 0 ? "PASS " : "FAIL ") << name << ": " << bad << " mismatches, " << secs << " s" << note << '\n';
    if (bad != 0) ++failed;
  }
  return failed;
}

}  // namespace singlab::tool
