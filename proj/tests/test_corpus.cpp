#include "emk/corpus.hpp"

#include <catch_amalgamated.hpp>

using namespace emk;

TEST_CASE("identity corpus passes with the default seed") {
  const IdentityReport rep = run_identity_corpus(IdentityOptions{});
  for (const IdentityResult& r : rep.results) {
    INFO(r.name << " max " << r.max_residual << " tol " << r.tolerance);
    CHECK(r.pass());
  }
  CHECK(rep.results.size() == 12);
  REQUIRE(rep.find("leibniz") != nullptr);
  CHECK(rep.find("leibniz")->samples == 500);
}

TEST_CASE("identity corpus with seed 7 and 1000 samples") {
  IdentityOptions opt;
  opt.seed = 7;
  opt.samples = 1000;
  CHECK(run_identity_corpus(opt).pass());
}

TEST_CASE("flipped codifferential sign fails the Leibniz suite") {
  IdentityOptions opt;
  opt.conventions.flip_codifferential_sign = true;
  const IdentityReport rep = run_identity_corpus(opt);
  CHECK_FALSE(rep.pass());
  CHECK_FALSE(rep.find("leibniz")->pass());
  CHECK_FALSE(rep.find("codifferential_routes")->pass());
  CHECK(rep.find("bianchi")->pass());
}

TEST_CASE("corpus is reproducible") {
  IdentityOptions opt;
  opt.samples = 20;
  const IdentityReport a = run_identity_corpus(opt), b = run_identity_corpus(opt);
  for (std::size_t i = 0; i < a.results.size(); ++i) CHECK(a.results[i].max_residual == b.results[i].max_residual);
}

TEST_CASE("random perturbed metrics stay positive definite") {
  Rng rng(1);
  for (int k = 0; k < 20; ++k) {
    const MetricOracle<4> g = random_perturbed_metric(rng);
    for (int i = 0; i < 10; ++i) {
      Eigen::SelfAdjointEigenSolver<Mat<4>> es(g.metric(random_point(rng, 0.6)));
      CHECK(es.eigenvalues().minCoeff() > 0.3);
    }
  }
}

TEST_CASE("polynomial form fields have exact jets") {
  Rng rng(4);
  const PolynomialFormField f = PolynomialFormField::random(rng);
  const ChartPoint<4> p = random_point(rng);
  const FieldJet<TwoForm, 4> exact = f.jet(p);
  const TwoFormField fd([f](const ChartPoint<4>& q) { return f.value(q); }, corpus_domain());
  const FieldJet<TwoForm, 4> approx = fd.jet(p);
  for (int c = 0; c < 4; ++c) CHECK((exact.d[c] - approx.d[c]).max_abs() < 1e-9);
}
