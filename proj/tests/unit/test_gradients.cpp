#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "hvi/bounds.hpp"
#include "hvi/gradients.hpp"
#include "hvi/quadrature.hpp"

using namespace hvi;

namespace {

// Sin toy with a trainable proposal N(0.3, 1.2^2) and its fixed quadrature grid.
SinToyModel trainable_sin() { return SinToyModel(0.0, 0.3, 1.2); }

GridSpec sin_grid(const LatentModel&) { return GridSpec::uniform({{-12.0, 12.0}}, 20001); }

std::vector<PathSpec> gradient_specs() {
  return {PathSpec::geometric(), PathSpec::holder(0.5), PathSpec::holder(-0.5), PathSpec::perturbed(0.1)};
}

}  // namespace

TEST(LocalEvidenceGrad, TermsSumToTotal) {
  const auto m = trainable_sin();
  const Vector lambda = m.parameters().values();
  const auto batch = draw_batch(m, 500, 4);
  for (const auto& spec : gradient_specs()) {
    for (double beta : {0.0, 0.3, 1.0}) {
      const auto g = local_evidence_grad(m, lambda, spec, beta, batch);
      ASSERT_EQ(g.total.size(), lambda.size());
      ASSERT_EQ(g.std_err.size(), lambda.size());
      EXPECT_LE((g.term_i + g.term_ii - g.total).cwiseAbs().maxCoeff(), 1e-12) << spec.label();
      EXPECT_TRUE((g.std_err.array() >= 0.0).all());
    }
  }
}

TEST(LocalEvidenceGrad, BetaZeroPathwiseTermIsElboTerm) {
  const auto m = trainable_sin();
  const Vector lambda = m.parameters().values();
  const auto batch = draw_batch(m, 300, 8);
  Vector expected = Vector::Zero(lambda.size());
  for (std::size_t s = 0; s < batch.size(); ++s)
    expected += m.grad_log_target(batch.samples[s], lambda) - m.grad_log_proposal(batch.samples[s], lambda);
  expected /= static_cast<double>(batch.size());
  // Only the geometric integrand reduces to f at beta = 0.
  const auto g = local_evidence_grad(m, lambda, PathSpec::geometric(), 0.0, batch);
  EXPECT_LE((g.term_ii - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(LocalEvidenceGrad, StationaryAtExactPosterior) {
  const ConjugateGaussianModel m(0.5, 1.0);
  const Vector lambda = m.parameters().values();
  const auto batch = draw_batch(m, 100000, 21);
  for (const auto& spec : {PathSpec::geometric(), PathSpec::holder(0.5)}) {
    for (double beta : {0.0, 0.5, 1.0}) {
      const auto g = local_evidence_grad(m, lambda, spec, beta, batch);
      for (std::size_t i = m.parameters().phi_offset(); i < m.parameters().size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        EXPECT_LT(std::abs(g.total[k]), 3.0 * g.std_err[k]) << spec.label() << " beta=" << beta << " i=" << i;
      }
    }
  }
}

TEST(LocalEvidenceGrad, MatchesQuadratureFiniteDifferences) {
  const auto m = trainable_sin();
  const Vector lambda = m.parameters().values();
  const auto batch = draw_batch(m, 100000, 33);
  for (const auto& spec : gradient_specs()) {
    const auto est = local_evidence_grad(m, lambda, spec, 0.5, batch);
    const Vector fd = finite_difference_grad(m, lambda, quadrature_local_evidence_objective(spec, 0.5, sin_grid(m)), 1e-4);
    for (std::size_t i = m.parameters().phi_offset(); i < m.parameters().size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      EXPECT_LT(std::abs(est.total[k] - fd[k]), 3.0 * est.std_err[k])
          << spec.label() << " " << m.parameters().names()[i] << " est=" << est.total[k] << " fd=" << fd[k];
    }
  }
}

TEST(LocalEvidenceGrad, RejectsBadInput) {
  const auto m = trainable_sin();
  const auto batch = draw_batch(m, 10, 1);
  EXPECT_THROW(local_evidence_grad(m, m.parameters().values(), PathSpec::geometric(), 1.5, batch),
               std::invalid_argument);
  EXPECT_THROW(local_evidence_grad(m, m.parameters().values(), PathSpec::geometric(), 0.5, ImportanceBatch{}),
               std::invalid_argument);
}

TEST(LocalEvidenceGrad, FiniteInFarTails) {
  // log q - log pi1 reaches several thousand on these draws; the weighted
  // terms must stay finite at beta = 1.
  const SinToyModel m(0.0, 0.0, 20.0);
  const auto batch = draw_batch(m, 200, 5);
  for (const auto& spec : {PathSpec::holder(0.5), PathSpec::wasserstein(), PathSpec::geometric()}) {
    for (double beta : {0.0, 0.9, 1.0}) {
      const auto g = local_evidence_grad(m, m.parameters().values(), spec, beta, batch);
      EXPECT_TRUE(g.total.allFinite()) << spec.label() << " beta=" << beta;
      EXPECT_TRUE(g.std_err.allFinite()) << spec.label() << " beta=" << beta;
    }
  }
}

TEST(BoundGrad, SingleIntervalTrapezoidAveragesEndpoints) {
  const auto m = trainable_sin();
  const Vector lambda = m.parameters().values();
  const auto batch = draw_batch(m, 400, 12);
  const auto bound = BoundSpec::hbo(0.5, PartitionSchedule::uniform(1), IntegrationRule::Trapezoid);
  const auto g = bound_grad(m, lambda, bound, batch);
  const auto g0 = local_evidence_grad(m, lambda, PathSpec::holder(0.5), 0.0, batch);
  const auto g1 = local_evidence_grad(m, lambda, PathSpec::holder(0.5), 1.0, batch);
  EXPECT_LE((g.total - 0.5 * (g0.total + g1.total)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((g.term_i + g.term_ii - g.total).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BoundGrad, ScaledFactorScaleGradient) {
  const ScaledFactorModel m(2.0);
  const Vector lambda = m.parameters().values();
  const auto batch = draw_batch(m, 200, 3);
  for (const auto& spec : gradient_specs()) {
    for (double beta : {0.0, 0.5, 1.0}) {
      const auto g = local_evidence_grad(m, lambda, spec, beta, batch);
      const auto k = static_cast<Eigen::Index>(m.parameters().index_of("log_c"));
      if (spec.kind() == PathKind::Holder) {
        // f is constant, so term_i vanishes; the Holder integrand itself
        // depends on log c with slope e^{a f} / (beta e^{a f} + 1 - beta)^2.
        const double a = spec.alpha(), f = std::log(2.0);
        const double mix = beta * std::exp(a * f) + 1.0 - beta;
        EXPECT_NEAR(g.total[k], std::exp(a * f) / (mix * mix), 1e-12) << spec.label() << " beta=" << beta;
      } else if (spec.kind() == PathKind::Perturbed) {
        EXPECT_NEAR(g.total[k], 1.0 + (1.0 - 2.0 * beta) * spec.delta() * std::log(2.0), 1e-12);
      } else {
        EXPECT_NEAR(g.total[k], 1.0, 1e-12) << spec.label() << " beta=" << beta;
      }
      EXPECT_NEAR(g.term_i[k], 0.0, 1e-12);
    }
  }
  const auto tvo = bound_grad(m, lambda, BoundSpec::tvo(PartitionSchedule::uniform(5)), batch);
  EXPECT_NEAR(tvo.total[0], 1.0, 1e-12);
}

TEST(BoundGrad, IntegratedTvoMatchesQuadratureFiniteDifferences) {
  const auto m = trainable_sin();
  const Vector lambda = m.parameters().values();
  const auto bound = BoundSpec::tvo(PartitionSchedule::uniform(4), IntegrationRule::Left);
  const auto est = bound_grad(m, lambda, bound, draw_batch(m, 100000, 40));
  const Vector fd = finite_difference_grad(m, lambda, quadrature_bound_objective(bound, sin_grid(m)), 1e-4);
  for (Eigen::Index k = 0; k < lambda.size(); ++k)
    EXPECT_LT(std::abs(est.total[k] - fd[k]), 3.0 * est.std_err[k]) << "est=" << est.total[k] << " fd=" << fd[k];
}

TEST(BoundGrad, UnsupportedBoundsRejected) {
  const auto m = trainable_sin();
  const auto batch = draw_batch(m, 10, 1);
  EXPECT_THROW(bound_grad(m, m.parameters().values(), BoundSpec::rvi(0.5), batch), std::invalid_argument);
  EXPECT_THROW(bound_grad(m, m.parameters().values(), BoundSpec::iw_elbo(), batch), std::invalid_argument);
}

TEST(FiniteDifferenceGrad, LinearFunctionalIsExact) {
  const auto m = trainable_sin();
  const Vector lambda = m.parameters().values();
  const QuadratureObjective linear = [](const LatentModel&, const Vector& l) { return 3.0 * l[0] - 2.0 * l[1]; };
  const Vector g = finite_difference_grad(m, lambda, linear, 1e-3);
  EXPECT_NEAR(g[0], 3.0, 1e-10);
  EXPECT_NEAR(g[1], -2.0, 1e-10);
}

TEST(FiniteDifferenceGrad, QuadraticErrorIsSecondOrder) {
  const auto m = trainable_sin();
  const Vector lambda = m.parameters().values();
  // Central differences are exact on quadratics; the cubic term gives h^2 error.
  const QuadratureObjective quad = [](const LatentModel&, const Vector& l) { return l[0] * l[0] + l[1]; };
  const Vector g = finite_difference_grad(m, lambda, quad, 1e-2);
  EXPECT_NEAR(g[0], 2.0 * lambda[0], 1e-12);
  const QuadratureObjective cubic = [](const LatentModel&, const Vector& l) { return l[0] * l[0] * l[0]; };
  for (double h : {1e-1, 5e-2}) {
    const double err = finite_difference_grad(m, lambda, cubic, h)[0] - 3.0 * lambda[0] * lambda[0];
    EXPECT_NEAR(err, h * h, 1e-12);
  }
}

TEST(FiniteDifferenceGrad, StepHalvingRatioOnSinElbo) {
  const auto m = trainable_sin();
  const Vector lambda = m.parameters().values();
  const auto objective = quadrature_bound_objective(BoundSpec::elbo(), sin_grid(m));
  const Vector reference = finite_difference_grad(m, lambda, objective, 1e-3);
  const Vector e1 = finite_difference_grad(m, lambda, objective, 0.2) - reference;
  const Vector e2 = finite_difference_grad(m, lambda, objective, 0.1) - reference;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    const double ratio = e1[k] / e2[k];
    EXPECT_GT(ratio, 3.8) << k;
    EXPECT_LT(ratio, 4.2) << k;
  }
}

TEST(FiniteDifferenceGrad, NonFiniteObjectiveRejected) {
  const auto m = trainable_sin();
  const QuadratureObjective bad = [](const LatentModel&, const Vector&) { return std::nan(""); };
  EXPECT_THROW(finite_difference_grad(m, m.parameters().values(), bad, 1e-3), NumericalError);
  EXPECT_THROW(finite_difference_grad(m, m.parameters().values(), bad, 0.0), std::invalid_argument);
}

TEST(Train, ZeroLearningRateKeepsLambda) {
  const ConjugateGaussianModel m(1.0, 0.5, 0.0, 0.0);
  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  cfg.steps = 20;
  cfg.samples = 10;
  cfg.seed = 2;
  const auto trace = train(m, m.parameters().values(), cfg);
  ASSERT_EQ(trace.rows.size(), 21u);
  for (const auto& row : trace.rows) EXPECT_EQ(row.lambda, m.parameters().values());
  EXPECT_FALSE(trace.diverged);
}

TEST(Train, ElboConvergesToConjugatePosterior) {
  const ConjugateGaussianModel exact(1.0, 1.0);
  const ConjugateGaussianModel m(1.0, 1.0, -0.5, 0.3);
  TrainConfig cfg;
  cfg.bound = BoundSpec::elbo();
  cfg.samples = 100;
  cfg.steps = 2000;
  cfg.learning_rate = 0.02;
  cfg.seed = 11;
  const auto trace = train(m, m.parameters().values(), cfg);
  ASSERT_FALSE(trace.diverged);
  ASSERT_EQ(trace.rows.size(), 2001u);
  // Average the last 200 iterates to remove step noise.
  Vector avg = Vector::Zero(m.parameters().size());
  for (std::size_t i = trace.rows.size() - 200; i < trace.rows.size(); ++i) avg += trace.rows[i].lambda;
  avg /= 200.0;
  const auto off = static_cast<Eigen::Index>(m.parameters().phi_offset());
  EXPECT_NEAR(avg[off], exact.posterior_mean(), 1e-2);
  EXPECT_NEAR(avg[off + 1], exact.posterior_log_std(), 1e-2);
}

TEST(Train, TraceIsDeterministic) {
  const auto m = trainable_sin();
  TrainConfig cfg;
  cfg.bound = BoundSpec::hbo(0.5, PartitionSchedule::uniform(3), IntegrationRule::Left);
  cfg.steps = 15;
  cfg.samples = 50;
  cfg.seed = 77;
  const auto a = train(m, m.parameters().values(), cfg);
  const auto b = train(m, m.parameters().values(), cfg);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].objective, b.rows[i].objective);
    EXPECT_EQ(a.rows[i].lambda, b.rows[i].lambda);
  }
  EXPECT_EQ(a.parameter_names, m.parameters().names());
}

TEST(Train, OnlyPhiMovesByDefault) {
  const ScaledFactorModel m(2.0);
  TrainConfig cfg;
  cfg.steps = 5;
  cfg.samples = 10;
  const auto frozen = train(m, m.parameters().values(), cfg);
  EXPECT_EQ(frozen.rows.back().lambda, m.parameters().values());
  cfg.update_theta = true;
  cfg.learning_rate = 0.1;
  const auto moved = train(m, m.parameters().values(), cfg);
  EXPECT_NEAR(moved.rows.back().lambda[0], std::log(2.0) + 0.5, 1e-12);
}

TEST(Train, DivergenceReturnsPartialTrace) {
  const auto m = trainable_sin();
  TrainConfig cfg;
  cfg.bound = BoundSpec::eubo();
  cfg.learning_rate = 1e6;
  cfg.steps = 50;
  cfg.samples = 20;
  const auto trace = train(m, m.parameters().values(), cfg);
  EXPECT_TRUE(trace.diverged);
  EXPECT_LT(trace.rows.size(), 51u);
  EXPECT_GE(trace.rows.size(), 1u);
}
