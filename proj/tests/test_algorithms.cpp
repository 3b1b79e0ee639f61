#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mptd/algorithms.hpp"
#include "mptd/benchmarks.hpp"
#include "mptd/error.hpp"

namespace {

using fixture::scalar_state;
using fixture::scalar_transition;
using mptd::Algorithm;
using mptd::StepSizes;
using mptd::Vector;

constexpr double kGamma = 0.5;

// The shared d=1 example: phi = phi' = 1, gamma = 0.5, r = 1.
mptd::Transition unit_transition(double rho = 1.0) {
  return scalar_transition(1.0, 1.0, rho, 1.0);
}

TEST(TdStep, HandExample) {
  const auto out = mptd::td_step(scalar_state(0, 0), unit_transition(), kGamma, {0.1, 0.1});
  EXPECT_DOUBLE_EQ(out.theta[0], 0.1);
}

TEST(TdStep, ZeroErrorOrZeroRatioLeavesTheta) {
  // delta = 0: r + 0.5*2 - 2 = 0 with r = 1, theta = 2.
  auto out = mptd::td_step(scalar_state(2, 0), unit_transition(), kGamma, {0.1, 0.1});
  EXPECT_EQ(out.theta[0], 2.0);
  out = mptd::td_step(scalar_state(0, 0), unit_transition(0.0), kGamma, {0.1, 0.1});
  EXPECT_EQ(out.theta[0], 0.0);
}

TEST(Gtd2Step, HandExample) {
  const auto out = mptd::gtd2_step(scalar_state(0, 1), unit_transition(), kGamma, {0.1, 0.1});
  EXPECT_DOUBLE_EQ(out.theta[0], 0.05);
  EXPECT_DOUBLE_EQ(out.aux[0], 1.0);
}

TEST(Gtd2Step, ZeroAuxiliary) {
  const auto out = mptd::gtd2_step(scalar_state(0.3, 0), unit_transition(), kGamma, {0.1, 0.2});
  EXPECT_EQ(out.theta[0], 0.3);
  const double delta = 1.0 + kGamma * 0.3 - 0.3;
  EXPECT_DOUBLE_EQ(out.aux[0], 0.2 * delta);
  const auto still = mptd::gtd2_step(scalar_state(0.3, 0), unit_transition(0.0), kGamma, {0.1, 0.2});
  EXPECT_EQ(still.theta[0], 0.3);
  EXPECT_EQ(still.aux[0], 0.0);
}

TEST(TdcStep, HandExample) {
  const auto out = mptd::tdc_step(scalar_state(0, 1), unit_transition(), kGamma, {0.1, 0.1});
  EXPECT_DOUBLE_EQ(out.theta[0], 0.05);
  EXPECT_DOUBLE_EQ(out.aux[0], 1.0);
}

TEST(TdcStep, ReducesToTd) {
  const auto env = mptd::make_benchmark(mptd::BenchmarkId::random_walk);
  mptd::Rng rng(4);
  mptd::AgentState st = mptd::AgentState::initial(Vector::LinSpaced(5, -1, 1));
  for (int i = 0; i < 200; ++i) {
    const auto t = mptd::sample_transition(env, 1 + i % 5, rng);
    const StepSizes ss{0.07, 0.03};
    EXPECT_EQ(mptd::tdc_step(st, t, env.mdp.gamma, ss).theta,
              mptd::td_step(st, t, env.mdp.gamma, ss).theta);
    mptd::AgentState with_aux = st;
    with_aux.aux = Vector::Constant(5, 0.4);
    EXPECT_EQ(mptd::tdc_step(with_aux, t, 0.0, ss).theta,
              mptd::td_step(with_aux, t, 0.0, ss).theta);
  }
}

TEST(TdrcStep, HandExample) {
  const auto out = mptd::tdrc_step(scalar_state(0, 1), unit_transition(), kGamma, {0.1, 0.1, 1.0});
  EXPECT_DOUBLE_EQ(out.theta[0], 0.05);
  EXPECT_DOUBLE_EQ(out.aux[0], 0.9);
}

TEST(TdrcStep, NoRegulariserIsTdc) {
  const auto env = mptd::make_benchmark(mptd::BenchmarkId::boyan_chain);
  mptd::Rng rng(8);
  mptd::AgentState st = mptd::AgentState::initial(Vector::LinSpaced(4, -2, 3));
  st.aux = Vector::LinSpaced(4, 0.5, -0.5);
  for (int i = 0; i < 200; ++i) {
    const auto t = mptd::sample_transition(env, i % 13, rng);
    const auto a = mptd::tdrc_step(st, t, env.mdp.gamma, {0.05, 0.05, 0.0});
    const auto b = mptd::tdc_step(st, t, env.mdp.gamma, {0.05, 0.05});
    EXPECT_EQ(a.theta, b.theta);
    EXPECT_EQ(a.aux, b.aux);
  }
}

TEST(TdrcStep, ZeroAuxiliary) {
  const auto out = mptd::tdrc_step(scalar_state(0, 0), unit_transition(), kGamma, {0.1, 0.7, 1.0});
  EXPECT_DOUBLE_EQ(out.aux[0], 0.1);
}

TEST(Gtd2MpStep, ZeroAuxiliarySubstitution) {
  // y^m = alpha rho delta phi = 0.1, theta^m = 0, delta^m = 1.
  const auto out = mptd::gtd2_mp_step(scalar_state(0, 0), unit_transition(), kGamma, {0.1, 0.1});
  EXPECT_DOUBLE_EQ(out.theta[0], 0.1 * 0.5 * 0.1);
  EXPECT_DOUBLE_EQ(out.aux[0], 0.1 * (1.0 - 0.1));
}

TEST(Gtd2MpStep, ZeroStepAndZeroRatio) {
  const auto st = scalar_state(0.4, -0.2);
  auto out = mptd::gtd2_mp_step(st, unit_transition(), kGamma, {0.0, 0.0});
  EXPECT_EQ(out.theta, st.theta);
  EXPECT_EQ(out.aux, st.aux);
  out = mptd::gtd2_mp_step(scalar_state(0.4, 0), unit_transition(0.0), kGamma, {0.1, 0.1});
  EXPECT_EQ(out.theta[0], 0.4);
  EXPECT_EQ(out.aux[0], 0.0);
}

TEST(HtdStep, HandExample) {
  const auto out = mptd::htd_step(scalar_state(0, 1), unit_transition(0.0), kGamma, {0.1, 0.1});
  EXPECT_DOUBLE_EQ(out.theta[0], 0.05);
  EXPECT_DOUBLE_EQ(out.aux[0], 0.95);
}

TEST(HtdStep, ZeroCorrectionOnPolicy) {
  const auto out = mptd::htd_step(scalar_state(0, 0), unit_transition(), kGamma, {0.1, 0.3});
  EXPECT_DOUBLE_EQ(out.aux[0], 0.3);
}

TEST(EtdStep, FollowOnRecursion) {
  mptd::AgentState st = scalar_state(0, 0);
  auto out = mptd::etd_step(st, unit_transition(), kGamma, {0.1, 0.1});
  EXPECT_EQ(out.followon, 1.0);
  EXPECT_EQ(out.theta, mptd::td_step(st, unit_transition(), kGamma, {0.1, 0.1}).theta);
  EXPECT_EQ(out.prev_rho, 1.0);

  st.prev_rho = 2.0;
  st.followon = 1.0;
  out = mptd::etd_step(st, unit_transition(), kGamma, {0.1, 0.1});
  EXPECT_DOUBLE_EQ(out.followon, 2.0);
  EXPECT_DOUBLE_EQ(out.theta[0], 0.1 * 2.0 * 1.0);

  st.prev_rho = 0.0;
  st.followon = 37.0;
  out = mptd::etd_step(st, unit_transition(), kGamma, {0.1, 0.1});
  EXPECT_EQ(out.followon, 1.0);
}

TEST(EtdStep, TerminalTransitionResetsTrace) {
  auto t = unit_transition(2.0);
  t.terminal = true;
  t.phi_next.setZero();
  const auto out = mptd::etd_step(scalar_state(0, 0), t, kGamma, {0.1, 0.1});
  EXPECT_EQ(out.prev_rho, 0.0);
  const auto next = mptd::etd_step(out, unit_transition(), kGamma, {0.1, 0.1});
  EXPECT_EQ(next.followon, 1.0);
}

TEST(SthtdStep, HandExample) {
  const auto out = mptd::sthtd_step(scalar_state(0, 1), unit_transition(), kGamma, {0.1, 0.1});
  EXPECT_DOUBLE_EQ(out.theta[0], 0.05);
  EXPECT_DOUBLE_EQ(out.aux[0], 1.05);
}

TEST(SthtdStep, ZeroAuxiliaryAndNoDiscount) {
  const auto out = mptd::sthtd_step(scalar_state(0.2, 0), unit_transition(), kGamma, {0.1, 0.1});
  EXPECT_EQ(out.theta[0], 0.2);
  EXPECT_DOUBLE_EQ(out.aux[0], 0.1 * (1.0 + kGamma * 0.2 - 0.2));

  const auto env = mptd::make_benchmark(mptd::BenchmarkId::boyan_chain);
  mptd::Rng rng(6);
  mptd::AgentState st = mptd::AgentState::initial(Vector::LinSpaced(4, -1, 2));
  st.aux = Vector::LinSpaced(4, 0.3, -0.1);
  for (int i = 0; i < 100; ++i) {
    const auto t = mptd::sample_transition(env, i % 13, rng);
    EXPECT_EQ(mptd::sthtd_step(st, t, 0.0, {0.05, 0.05}).aux,
              mptd::gtd2_step(st, t, 0.0, {0.05, 0.05}).aux);
  }
}

TEST(SthtdMpStep, ZeroAuxiliarySubstitution) {
  // y^m = 0.1, theta^m = 0, delta^m = 1.
  const auto out = mptd::sthtd_mp_step(scalar_state(0, 0), unit_transition(), kGamma, {0.1, 0.1});
  EXPECT_DOUBLE_EQ(out.theta[0], 0.1 * 0.1 * 1.0 * (1.0 - kGamma));
  const double bracket = (1.0 - 0.1 + 0.5 * kGamma * 0.1) + 0.5 * kGamma * 0.1;
  EXPECT_DOUBLE_EQ(out.aux[0], 0.1 * bracket);
}

TEST(SthtdMpStep, GeneralSymbolicThetaAtZeroAuxiliary) {
  // theta' = theta + alpha^2 rho^2 delta (phi - gamma phi') (phi^T phi).
  const auto env = mptd::make_benchmark(mptd::BenchmarkId::boyan_chain);
  mptd::Rng rng(10);
  const Vector theta = Vector::LinSpaced(4, -3, 1);
  const double alpha = 0.07;
  for (int i = 0; i < 50; ++i) {
    const auto t = mptd::sample_transition(env, i % 13, rng);
    const double delta = t.r + env.mdp.gamma * theta.dot(t.phi_next) - theta.dot(t.phi);
    const Vector expected = theta + alpha * alpha * t.rho * t.rho * delta *
                                        t.phi.squaredNorm() *
                                        (t.phi - env.mdp.gamma * t.phi_next);
    const auto out = mptd::sthtd_mp_step(mptd::AgentState::initial(theta), t,
                                         env.mdp.gamma, {alpha, alpha});
    EXPECT_LT((out.theta - expected).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(SthtdMpStep, ZeroStepZeroRatio) {
  const auto st = scalar_state(0.4, -0.2);
  auto out = mptd::sthtd_mp_step(st, unit_transition(), kGamma, {0.0, 0.0});
  EXPECT_EQ(out.theta, st.theta);
  EXPECT_EQ(out.aux, st.aux);
  out = mptd::sthtd_mp_step(scalar_state(0.4, 0), unit_transition(0.0), kGamma, {0.1, 0.1});
  EXPECT_EQ(out.theta[0], 0.4);
  EXPECT_EQ(out.aux[0], 0.0);
}

TEST(SthtdMpStep, PredictionIsOneSthtdStep) {
  const auto env = mptd::make_benchmark(mptd::BenchmarkId::random_walk);
  mptd::Rng rng(12);
  mptd::AgentState st = mptd::AgentState::initial(Vector::LinSpaced(5, 0.1, 0.9));
  st.aux = Vector::LinSpaced(5, -0.2, 0.2);
  const double alpha = 0.2;
  for (int i = 0; i < 100; ++i) {
    const auto t = mptd::sample_transition(env, 1 + i % 5, rng);
    const auto pred = mptd::sthtd_step(st, t, env.mdp.gamma, {alpha, alpha});
    const auto unit = mptd::sthtd_step(pred, t, env.mdp.gamma, {1.0, 1.0});
    const Vector theta = st.theta + alpha * (unit.theta - pred.theta);
    const Vector aux = st.aux + alpha * (unit.aux - pred.aux);
    const auto out = mptd::sthtd_mp_step(st, t, env.mdp.gamma, {alpha, alpha});
    EXPECT_LT((out.theta - theta).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((out.aux - aux).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(AllSteps, NonFiniteValuesPropagate) {
  auto st = scalar_state(std::numeric_limits<double>::infinity(), 1.0);
  for (Algorithm alg : mptd::all_algorithms()) {
    const auto out = mptd::step(alg, st, unit_transition(), kGamma, {0.1, 0.1, 1.0});
    EXPECT_FALSE(out.theta.allFinite() && out.aux.allFinite()) << mptd::to_string(alg);
  }
}

TEST(AllSteps, DispatchMatchesDirectCall) {
  const auto st = scalar_state(0.3, 0.7);
  const auto t = unit_transition(1.5);
  const StepSizes ss{0.1, 0.2, 1.0};
  EXPECT_EQ(mptd::step(Algorithm::td, st, t, kGamma, ss).theta, mptd::td_step(st, t, kGamma, ss).theta);
  EXPECT_EQ(mptd::step(Algorithm::htd, st, t, kGamma, ss).aux, mptd::htd_step(st, t, kGamma, ss).aux);
  EXPECT_EQ(mptd::step(Algorithm::sthtd_mp, st, t, kGamma, ss).aux,
            mptd::sthtd_mp_step(st, t, kGamma, ss).aux);
}

TEST(AllSteps, NamesRoundTrip) {
  for (Algorithm alg : mptd::all_algorithms()) {
    EXPECT_EQ(mptd::parse_algorithm(mptd::to_string(alg)), alg);
  }
  EXPECT_EQ(mptd::all_algorithms().size(), 9u);
  EXPECT_THROW(mptd::parse_algorithm("q_learning"), mptd::UsageError);
  EXPECT_TRUE(mptd::uses_beta(Algorithm::gtd2));
  EXPECT_FALSE(mptd::uses_beta(Algorithm::tdrc));
  EXPECT_FALSE(mptd::uses_beta(Algorithm::sthtd_mp));
}

TEST(ProjectBall, Examples) {
  Vector v(2);
  v << 3, 4;
  const Vector p = mptd::project_ball(v, 1.0);
  EXPECT_DOUBLE_EQ(p[0], 0.6);
  EXPECT_DOUBLE_EQ(p[1], 0.8);
  EXPECT_EQ(mptd::project_ball(v, 5.0), v);
  EXPECT_EQ(mptd::project_ball(v, 10.0), v);
}

TEST(ProjectedSteps, HugeRadiiMatchUnprojected) {
  const auto env = mptd::make_benchmark(mptd::BenchmarkId::random_walk);
  mptd::Rng rng(13);
  mptd::AgentState st = mptd::AgentState::initial(Vector::LinSpaced(5, 0.1, 0.9));
  st.aux = Vector::LinSpaced(5, -0.2, 0.2);
  const mptd::ProjectionSpec big{1e12, 1e12};
  for (int i = 0; i < 100; ++i) {
    const auto t = mptd::sample_transition(env, 1 + i % 5, rng);
    EXPECT_EQ(mptd::projected_sthtd_step(st, t, env.mdp.gamma, {0.1, 0.1}, big).theta,
              mptd::sthtd_step(st, t, env.mdp.gamma, {0.1, 0.1}).theta);
    EXPECT_EQ(mptd::projected_sthtd_mp_step(st, t, env.mdp.gamma, {0.1, 0.1}, big).aux,
              mptd::sthtd_mp_step(st, t, env.mdp.gamma, {0.1, 0.1}).aux);
  }
}

TEST(ProjectedSteps, OutwardUpdateStaysOnBoundary) {
  // y = 1 on the unit boundary; the sthtd y-update pushes it to 1.05.
  const mptd::ProjectionSpec unit{1.0, 1.0};
  const auto out = mptd::projected_sthtd_step(scalar_state(0, 1), unit_transition(), kGamma,
                                              {0.1, 0.1}, unit);
  EXPECT_DOUBLE_EQ(out.aux[0], 1.0);
  const auto mp = mptd::projected_sthtd_mp_step(scalar_state(1, 1), unit_transition(), kGamma,
                                                {0.5, 0.5}, {1.0, 1.0});
  EXPECT_LE(std::abs(mp.theta[0]), 1.0);
  EXPECT_LE(std::abs(mp.aux[0]), 1.0);
}

}  // namespace
