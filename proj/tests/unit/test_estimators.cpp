#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "hvi/bounds.hpp"
#include "hvi/estimators.hpp"
#include "hvi/quadrature.hpp"

using namespace hvi;

namespace {

std::vector<PathSpec> all_specs() {
  return {PathSpec::geometric(), PathSpec::holder(0.5), PathSpec::holder(-0.7), PathSpec::wasserstein(),
          PathSpec::perturbed(0.1)};
}

// Quadrature value of the sin-toy log marginal at x = 0, shared by tests.
double sin_log_marginal() {
  static const double value = quadrature_log_marginal(*make_sin_toy(0.0));
  return value;
}

}  // namespace

TEST(DrawBatch, DeterministicAndConsistent) {
  auto m = make_sin_toy();
  const auto a = draw_batch(*m, 50, 9), b = draw_batch(*m, 50, 9), c = draw_batch(*m, 50, 10);
  EXPECT_EQ(a.log_ratio, b.log_ratio);
  EXPECT_NE(a.log_ratio, c.log_ratio);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.log_ratio[i], a.log_target[i] - a.log_proposal[i]);
  EXPECT_EQ(a.seed, 9u);
  EXPECT_THROW(draw_batch(*m, 0, 1), std::invalid_argument);
}

TEST(DrawBatch, ScaledFactorRatioIsConstant) {
  const auto batch = draw_batch(*make_scaled_factor(2.0), 100, 3);
  for (double f : batch.log_ratio) EXPECT_NEAR(f, std::log(2.0), 1e-15);
}

TEST(DrawBatch, ExactPosteriorElboMatchesMarginal) {
  auto m = make_conjugate_gaussian(0.5, 1.0);
  const auto batch = draw_batch(*m, 100000, 4);
  const double se = std::sqrt(sample_variance(batch.log_ratio) / static_cast<double>(batch.size()));
  EXPECT_NEAR(elbo(batch), m->exact_log_marginal(), 3 * se + 1e-10);
}

TEST(PartitionSchedule, UniformAndLogBuilders) {
  const auto u = PartitionSchedule::uniform(4);
  EXPECT_EQ(u.betas(), (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  const auto l = PartitionSchedule::log(50);
  ASSERT_EQ(l.betas().size(), 51u);
  EXPECT_EQ(l.betas()[0], 0.0);
  EXPECT_EQ(l.betas()[1], std::pow(10.0, -1.09));
  EXPECT_EQ(l.betas().back(), 1.0);
  const double ratio = l.betas()[2] / l.betas()[1];
  for (std::size_t k = 2; k < l.betas().size(); ++k) EXPECT_NEAR(l.betas()[k] / l.betas()[k - 1], ratio, 1e-12);
  EXPECT_EQ(l.label(), "log(K=50)");
}

TEST(PartitionSchedule, RejectsInvalidPoints) {
  EXPECT_THROW(PartitionSchedule::uniform(0), std::invalid_argument);
  EXPECT_THROW(PartitionSchedule::log(1), std::invalid_argument);
  EXPECT_THROW(PartitionSchedule::from_points({0.0, 0.5, 0.5, 1.0}), std::invalid_argument);
  EXPECT_THROW(PartitionSchedule::from_points({0.1, 1.0}), std::invalid_argument);
  EXPECT_NO_THROW(PartitionSchedule::from_points({0.0, 0.3, 1.0}));
}

TEST(RiemannIntegrate, RulesOnSimpleCurves) {
  const std::vector<double> b2{0.0, 0.5, 1.0};
  for (auto rule : {IntegrationRule::Left, IntegrationRule::Right, IntegrationRule::Trapezoid})
    EXPECT_DOUBLE_EQ(riemann_integrate(b2, {3.0, 3.0, 3.0}, rule), 3.0);
  EXPECT_DOUBLE_EQ(riemann_integrate(b2, b2, IntegrationRule::Left), 0.25);
  EXPECT_DOUBLE_EQ(riemann_integrate(b2, b2, IntegrationRule::Right), 0.75);
  EXPECT_DOUBLE_EQ(riemann_integrate(b2, b2, IntegrationRule::Trapezoid), 0.5);
  const auto b = PartitionSchedule::uniform(100).betas();
  std::vector<double> sq(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) sq[k] = b[k] * b[k];
  EXPECT_NEAR(riemann_integrate(b, sq, IntegrationRule::Trapezoid), 1.0 / 3.0, 1e-4);
  EXPECT_THROW(riemann_integrate({0.0}, {1.0}, IntegrationRule::Left), std::invalid_argument);
  EXPECT_THROW(riemann_integrate({0.0, 0.7}, {1.0, 1.0}, IntegrationRule::Left), std::invalid_argument);
}

TEST(RiemannIntegrate, WeightsReproduceSum) {
  const auto b = PartitionSchedule::log(10).betas();
  std::vector<double> v(b.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::sin(3.0 * b[k]);
  for (auto rule : {IntegrationRule::Left, IntegrationRule::Right, IntegrationRule::Trapezoid}) {
    const auto w = riemann_weights(b, rule);
    EXPECT_NEAR(std::inner_product(w.begin(), w.end(), v.begin(), 0.0), riemann_integrate(b, v, rule), 1e-14);
  }
  EXPECT_EQ(parse_integration_rule("trapezoid"), IntegrationRule::Trapezoid);
  EXPECT_THROW(parse_integration_rule("simpson"), std::invalid_argument);
}

TEST(Bounds, ScaledFactorClosedForms) {
  for (double c : {0.5, 2.0, 10.0}) {
    const auto batch = draw_batch(*make_scaled_factor(c), 37, 5);
    const double lc = std::log(c);
    EXPECT_NEAR(elbo(batch), lc, 1e-14);
    EXPECT_NEAR(iw_elbo(batch), lc, 1e-14);
    EXPECT_NEAR(rvi(batch, 0.5), lc, 1e-14);
    EXPECT_NEAR(eubo(batch), lc, 1e-14);
    EXPECT_NEAR(tvo(batch, PartitionSchedule::log(50), IntegrationRule::Left).value, lc, 1e-14);
    const auto w = wasserstein_bounds(batch);
    EXPECT_NEAR(w.wlbo, 1.0 - 1.0 / c, 1e-14);
    EXPECT_NEAR(w.wubo, c - 1.0, 1e-14);
    EXPECT_LE(w.wlbo, lc);
    EXPECT_GE(w.wubo, lc);
  }
}

TEST(Bounds, RviEndpoints) {
  // rvi(a) - elbo ~ (a / 2) var(f), so the alpha -> 0 check uses a model
  // whose log-ratio has moderate spread.
  const auto near = draw_batch(ConjugateGaussianModel(0.5, 1.0, 0.6, -0.6), 200, 8);
  EXPECT_NEAR(rvi(near, 1e-6), elbo(near), 1e-6);
  const auto batch = draw_batch(*make_sin_toy(), 200, 8);
  EXPECT_EQ(rvi(batch, 1.0), iw_elbo(batch));
  double prev = elbo(batch);
  for (double a : {0.01, 0.1, 0.3, 0.6, 1.0, 2.0}) {
    const double v = rvi(batch, a);
    EXPECT_GE(v, prev - 1e-12);
    prev = v;
  }
  EXPECT_THROW(rvi(batch, 0.0), std::invalid_argument);
  EXPECT_THROW(rvi(batch, -1.0), std::invalid_argument);
}

TEST(Bounds, ElboBelowIwElboBelowMarginal) {
  // elbo <= iw_elbo holds on every batch (Jensen); iw_elbo <= log p(x) only
  // in expectation.
  auto m = make_sin_toy(0.0);
  std::vector<double> iw;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto batch = draw_batch(*m, 10000, seed);
    EXPECT_LE(elbo(batch), iw_elbo(batch));
    iw.push_back(iw_elbo(batch));
  }
  EXPECT_LE(mean(iw), sin_log_marginal() + 3 * std::sqrt(sample_variance(iw) / 100.0));
}

TEST(Bounds, TvoOrderingInExpectation) {
  auto m = make_sin_toy(0.0);
  std::vector<double> e, t;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto batch = draw_batch(*m, 100, seed);
    e.push_back(elbo(batch));
    t.push_back(tvo(batch, PartitionSchedule::log(50), IntegrationRule::Left).value);
  }
  const double n = static_cast<double>(e.size());
  std::vector<double> gap(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) gap[i] = t[i] - e[i];
  EXPECT_GT(mean(gap), 3 * std::sqrt(sample_variance(gap) / n));
  EXPECT_GT(sin_log_marginal() - mean(t), 3 * std::sqrt(sample_variance(t) / n));
}

TEST(LocalEvidence, ScaledFactorConstants) {
  const auto batch = draw_batch(*make_scaled_factor(2.0), 64, 2);
  for (double beta : {0.0, 0.4, 1.0}) {
    const auto est = local_evidence(batch, PathSpec::geometric(), beta);
    EXPECT_NEAR(est.value, std::log(2.0), 1e-14);
    EXPECT_NEAR(est.ess, 1.0, 1e-12);
  }
  EXPECT_NEAR(local_evidence(batch, PathSpec::holder(1.0), 0.5).value, 2.0 / 3.0, 1e-14);
  for (double alpha : {-1.0, 0.3, 0.7, 2.0})
    for (double beta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const double ca = std::pow(2.0, alpha);
      EXPECT_NEAR(local_evidence(batch, PathSpec::holder(alpha), beta).value,
                  (ca - 1.0) / (alpha * (beta * ca + 1.0 - beta)), 1e-12);
    }
}

TEST(LocalEvidence, MatchesQuadratureOnSinToy) {
  auto m = make_sin_toy(0.0);
  const auto batch = draw_batch(*m, 100000, 11);
  const auto est = local_evidence(batch, PathSpec::holder(0.8), 0.5);
  const double exact = QuadratureTable(*m).local_evidence(PathSpec::holder(0.8), 0.5);
  EXPECT_NEAR(est.value, exact, 3 * est.std_err);
  EXPECT_GT(est.std_err, 0.0);
}

TEST(LocalEvidence, WeightsNormalizedAndEssBounded) {
  const auto batch = draw_batch(*make_sin_toy(), 300, 1);
  for (const auto& s : all_specs())
    for (double beta : {0.0, 0.3, 0.7, 1.0}) {
      const auto w = normalize_log_weights(path_log_weights(batch, s, beta));
      EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
      const auto est = local_evidence(batch, s, beta);
      EXPECT_GE(est.ess, 1.0 / 300.0);
      EXPECT_LE(est.ess, 1.0);
      EXPECT_GE(est.std_err, 0.0);
      EXPECT_TRUE(std::isfinite(est.value));
    }
  EXPECT_DOUBLE_EQ(local_evidence(batch, PathSpec::geometric(), 0.0).ess, 1.0);
}

TEST(LocalEvidence, SingleSampleIsDegenerate) {
  const auto batch = draw_batch(*make_sin_toy(), 1, 1);
  const auto est = local_evidence(batch, PathSpec::holder(0.5), 0.5);
  EXPECT_TRUE(est.degenerate);
  EXPECT_EQ(est.std_err, 0.0);
  EXPECT_EQ(est.ess, 1.0);
  EXPECT_NEAR(est.value, path_integrand(PathSpec::holder(0.5), 0.5, 0.0, batch.log_ratio[0]), 1e-12);
}

TEST(LocalEvidence, FarTailSamplesStayFinite) {
  // Ring proposal samples far from the ring give f ~ -1000; the Wasserstein
  // integrand there overflows but its weight underflows.
  ImportanceBatch batch;
  batch.log_ratio = {-0.2, 0.1, -1000.0};
  batch.log_proposal = {0.0, 0.0, 0.0};
  batch.log_target = batch.log_ratio;
  batch.samples.assign(3, Vector::Zero(1));
  const auto est = local_evidence(batch, PathSpec::wasserstein(), 1.0);
  EXPECT_TRUE(std::isfinite(est.value));
  EXPECT_TRUE(std::isfinite(est.std_err));
}

TEST(Thermodynamic, LeftBelowRightOnMonotoneCurve) {
  auto m = make_sin_toy(0.0);
  const auto batch = draw_batch(*m, 1000, 21);
  const auto sched = PartitionSchedule::uniform(20);
  const auto left = tvo(batch, sched, IntegrationRule::Left);
  const auto right = tvo(batch, sched, IntegrationRule::Right);
  double se2 = 0.0;
  for (const auto& l : left.local) se2 += l.std_err * l.std_err;
  EXPECT_LE(left.value, right.value + 3 * std::sqrt(se2) / 20.0);
  EXPECT_EQ(left.local.size(), 21u);
}

TEST(Thermodynamic, HboTrapezoidOnScaledFactor) {
  const auto batch = draw_batch(*make_scaled_factor(2.0), 10, 1);
  EXPECT_NEAR(hbo(batch, 1.0, PartitionSchedule::uniform(2000), IntegrationRule::Trapezoid).value, std::log(2.0), 1e-4);
}

TEST(Thermodynamic, PerturbedZeroEqualsTvo) {
  const auto batch = draw_batch(*make_sin_toy(), 200, 4);
  const auto s = PartitionSchedule::uniform(10);
  EXPECT_NEAR(perturbed_hbo(batch, 0.0, s, IntegrationRule::Left).value, tvo(batch, s, IntegrationRule::Left).value,
              1e-12);
}

TEST(BoundReport, ComputesRequestedBoundsInOrder) {
  const auto batch = draw_batch(*make_scaled_factor(2.0), 20, 3);
  const std::vector<BoundSpec> specs{BoundSpec::elbo(),  BoundSpec::iw_elbo(), BoundSpec::rvi(0.5),
                                     BoundSpec::eubo(),  BoundSpec::wlbo(),    BoundSpec::wubo(),
                                     BoundSpec::tvo(),   BoundSpec::hbo(0.8),  BoundSpec::perturbed_hbo(0.05)};
  const auto report = compute_bounds(batch, specs, "scaled_factor");
  ASSERT_EQ(report.values.size(), specs.size());
  EXPECT_EQ(report.values[2].first, "rvi[0.5]");
  EXPECT_EQ(report.values[7].first, "hbo[0.8]");
  EXPECT_NEAR(report.at("wubo"), 1.0, 1e-14);
  EXPECT_NEAR(report.at("tvo"), std::log(2.0), 1e-14);
  EXPECT_THROW(report.at("missing"), std::out_of_range);
  EXPECT_EQ(report.samples, 20u);
}

TEST(BoundReport, BatchReuseIsDeterministic) {
  auto m = make_sin_toy();
  const std::vector<BoundSpec> specs{BoundSpec::elbo(), BoundSpec::tvo(), BoundSpec::hbo(0.8)};
  const auto a = compute_bounds(draw_batch(*m, 100, 5), specs);
  const auto b = compute_bounds(draw_batch(*m, 100, 5), specs);
  EXPECT_EQ(a.values, b.values);
}

TEST(BoundSpec, DefaultsAndIds) {
  EXPECT_EQ(BoundSpec::tvo().effective_schedule().kind(), PartitionKind::Log);
  EXPECT_EQ(BoundSpec::tvo().effective_schedule().intervals(), 50u);
  EXPECT_EQ(BoundSpec::hbo(0.5).effective_schedule().kind(), PartitionKind::Uniform);
  EXPECT_EQ(BoundSpec::hbo(0.5).effective_schedule().intervals(), 100u);
  EXPECT_EQ(BoundSpec::hbo(0.5).id(), "hbo[0.5]");
  EXPECT_EQ(parse_bound_kind("perturbed_hbo"), BoundKind::PerturbedHbo);
  EXPECT_THROW(parse_bound_kind("vimco"), std::invalid_argument);
}
