#include <doctest.h>

#include <sstream>

#include "singularlab/experiment.hpp"

using namespace singlab;

namespace {

SubspaceParam line(const char* a0, const char* a1) {
  ScalarMatrix A(2, 1);
  A(0, 0) = Scalar::parse(a0);
  A(1, 0) = Scalar::parse(a1);
  return SubspaceParam(2, 1, A);
}

std::string csv(const SurveyReport& r) {
  std::ostringstream out;
  write_survey_csv(r, out);
  return out.str();
}

}  // namespace

TEST_CASE("rational hyperplane surveys are all singular") {
  SurveySpec spec(line("1/2", "1/3"));
  spec.sample_count = 40;
  spec.threads = 4;
  SurveyReport r = run_survey(spec);
  CHECK(r.witnessed == 40);
  CHECK(r.fraction(VerdictStatus::Witnessed) == 1.0);
  for (const auto& s : r.samples) {
    for (const Scalar& v : subspace_residual(spec.subspace, s.point)) CHECK(v.is_exact_zero());
    CHECK(s.verdict.records.back().best->err == Scalar(0));
  }
}

TEST_CASE("irrational hyperplane surveys are mostly refuted") {
  SurveySpec spec(line("sqrt(2)", "sqrt(3)"));
  spec.sample_count = 40;
  spec.threads = 4;
  SurveyReport r = run_survey(spec);
  CHECK(r.fraction(VerdictStatus::Refuted) >= 0.95);
  CHECK(r.witnessed + r.refuted + r.inconclusive == 40);
}

TEST_CASE("surveys are deterministic and independent of threads") {
  SurveySpec spec(line("sqrt(2)", "1/3"));
  spec.sample_count = 24;
  spec.seed = 99;
  spec.threads = 1;
  SurveyReport a = run_survey(spec);
  spec.threads = 6;
  SurveyReport b = run_survey(spec);
  CHECK(csv(a) == csv(b));
  CHECK(survey_json(a).dump() == survey_json(b).dump());
  SurveyDiff d = compare_surveys(a, b);
  CHECK(d.max_abs == 0.0);
  CHECK_FALSE(d.exceeds);

  spec.seed = 100;
  CHECK(csv(run_survey(spec)) != csv(a));
}

TEST_CASE("curve and uniform samplers agree") {
  SubspaceParam P = line("sqrt(2)", "sqrt(3)");
  SurveySpec uni(P);
  uni.sample_count = 40;
  uni.threads = 4;
  SurveySpec cur = uni;
  cur.sampler = graph_curve(P);
  cur.seed = 7;
  SurveyReport a = run_survey(uni), b = run_survey(cur);
  CHECK(b.sampler == "curve");
  CHECK_FALSE(compare_surveys(a, b).exceeds);
  for (const auto& s : b.samples) CHECK(s.verdict.reason.find("NOT_ON_SUBSPACE") == std::string::npos);

  CurveSampler off = graph_curve(P);
  off.coordinates[1][0] = off.coordinates[1][0] + Scalar(1);
  cur.sampler = off;
  cur.sample_count = 3;
  SurveyReport bad = run_survey(cur);
  CHECK(bad.inconclusive == 3);
  CHECK(bad.samples[0].verdict.reason.find("NOT_ON_SUBSPACE") == 0);
}

TEST_CASE("survey comparisons") {
  SurveySpec rat(line("1/2", "1/3"));
  rat.sample_count = 20;
  rat.threads = 4;
  SurveySpec irr(line("sqrt(2)", "sqrt(3)"));
  irr.sample_count = 20;
  irr.threads = 4;
  SurveyDiff d = compare_surveys(run_survey(rat), run_survey(irr));
  CHECK(d.refuted >= 0.95);
  CHECK(d.exceeds);

  SurveySpec shorter = irr;
  shorter.schedule = {16, 64, 256};
  CHECK_THROWS_WITH_AS(compare_surveys(run_survey(irr), run_survey(shorter)), doctest::Contains("HORIZON_MISMATCH"),
                       Error);

  SurveySpec bad = irr;
  bad.sample_count = 0;
  CHECK_THROWS_AS(run_survey(bad), Error);
  bad.sample_count = 1;
  bad.sampler = UniformSampler{Rational(0), Rational(1), 20, 4};
  CHECK_THROWS_AS(run_survey(bad), Error);
}
