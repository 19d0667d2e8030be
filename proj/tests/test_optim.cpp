#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "mopnet/mo_optim.hpp"
#include "mopnet/optim.hpp"

using namespace mopnet;

namespace {

double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = scale * (2.0 * next_uniform(rng) - 1.0);
  return v;
}

double sq_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

// brute-force min-norm weight over a lambda grid
double grid_lambda(const std::vector<double>& g1, const std::vector<double>& g2, double step) {
  double best_l = 0.0, best = std::numeric_limits<double>::infinity();
  for (double l = 0.0; l <= 1.0 + 1e-12; l += step) {
    double s = 0.0;
    for (std::size_t i = 0; i < g1.size(); ++i) {
      const double c = (1.0 - l) * g1[i] + l * g2[i];
      s += c * c;
    }
    if (s < best) {
      best = s;
      best_l = l;
    }
  }
  return best_l;
}

}  // namespace

TEST_CASE("time-decay learning rate") {
  CHECK(lr_time_decay(0.1, 0.01, 100) == 0.05);  // exact in floating point
  CHECK(lr_time_decay(0.1, 0.0, 12345) == 0.1);
  CHECK(lr_time_decay(0.1, 0.01, 0) == 0.1);
}

TEST_CASE("sigmoid-drop learning rate") {
  const double ts = 0.001, te = 0.0001;
  const int kmax = 20;  // 0.75 * kappa_max lands on an integer epoch
  // at the drop center (0.75 * kappa_max) the rate is the midpoint
  const double mid = lr_sigmoid_drop(15, kmax, ts, te);
  CHECK(std::fabs(mid - 0.5 * (ts + te)) <= 1e-15 * 0.5 * (ts + te));
  // monotone nonincreasing over the whole training
  double prev = lr_sigmoid_drop(1, kmax, ts, te);
  for (int k = 2; k <= kmax; ++k) {
    const double cur = lr_sigmoid_drop(k, kmax, ts, te);
    CHECK(cur <= prev);
    prev = cur;
  }
  // approaches the plateaus away from the center
  CHECK(lr_sigmoid_drop(1, kmax, ts, te) == doctest::Approx(ts).epsilon(1e-3));
  CHECK(lr_sigmoid_drop(3 * kmax, kmax, ts, te) == doctest::Approx(te).epsilon(1e-3));
}

TEST_CASE("schedule validation") {
  LearningRateSchedule s;
  s.kind = ScheduleKind::Constant;
  s.t0 = 0.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.kind = ScheduleKind::SigmoidDrop;
  s.t_start = 1e-4;
  s.t_end = 1e-3;  // end above start
  s.kappa_max = 10;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("plain SGD is w -= t*g") {
  OptimizerState s = OptimizerState::make(OptimizerKind::Sgd, 2);
  WeightVector w = {1.0, -2.0};
  sgd_step(s, w, {0.5, -1.0}, 0.1);
  CHECK(w[0] == doctest::Approx(0.95).epsilon(1e-15));
  CHECK(w[1] == doctest::Approx(-1.9).epsilon(1e-15));
  CHECK(s.k == 1);
}

TEST_CASE("SGD momentum: two-step hand computation") {
  OptimizerState s = OptimizerState::make(OptimizerKind::Sgd, 1);
  s.momentum = 0.9;
  WeightVector w = {0.0};
  // v1 = -t*g = -0.1; w = -0.1
  sgd_step(s, w, {1.0}, 0.1);
  CHECK(w[0] == doctest::Approx(-0.1).epsilon(1e-15));
  // v2 = 0.9*(-0.1) - 0.1 = -0.19; w = -0.29
  sgd_step(s, w, {1.0}, 0.1);
  CHECK(w[0] == doctest::Approx(-0.29).epsilon(1e-14));
}

TEST_CASE("RMSProp first step uses (1-beta)*g^2 and the 1e-7 default epsilon") {
  OptimizerState s = OptimizerState::make(OptimizerKind::RmsProp, 1);
  CHECK(s.epsilon == 1e-7);
  WeightVector w = {1.0};
  const double g = 2.0, t = 0.01;
  rmsprop_step(s, w, {g}, t);
  const double mov = (1.0 - 0.9) * g * g;
  CHECK(s.mov[0] == doctest::Approx(mov).epsilon(1e-15));
  CHECK(w[0] == doctest::Approx(1.0 - t * g / (std::sqrt(mov) + 1e-7)).epsilon(1e-14));
}

TEST_CASE("Adam first step: bias-corrected update approaches sign step") {
  OptimizerState s = OptimizerState::make(OptimizerKind::Adam, 1);
  CHECK(s.epsilon == 1e-8);
  WeightVector w = {0.0};
  const double g = 3.0, t = 0.001;
  adam_step(s, w, {g}, t);
  // after bias correction: mhat = g, vhat = g^2
  CHECK(w[0] == doctest::Approx(-t * g / (std::fabs(g) + 1e-8)).epsilon(1e-12));

  // second step with the same gradient keeps the same direction
  adam_step(s, w, {g}, t);
  CHECK(w[0] < -t * 0.9);
}

TEST_CASE("non-finite gradients are rejected before any mutation") {
  OptimizerState s = OptimizerState::make(OptimizerKind::Adam, 2);
  WeightVector w = {1.0, 2.0};
  const WeightVector before = w;
  std::vector<double> g = {1.0, std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_AS(adam_step(s, w, g, 0.1), NumericError);
  CHECK(w == before);
  CHECK(s.k == 0);
  g[1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(sgd_step(s, w, g, 0.1), NumericError);
  CHECK_THROWS_AS(optimizer_step(s, w, {1.0}, 0.1), DimensionError);
}

TEST_CASE("subproblem closed form matches grid brute force") {
  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng() % 20;
    const auto g1 = random_vec(n, rng);
    const auto g2 = random_vec(n, rng, trial % 3 == 0 ? 10.0 : 1.0);
    const SubproblemResult res = solve_subproblem(g1, g2);
    const double lg = grid_lambda(g1, g2, 1e-4);
    CHECK(std::fabs(res.lambda - lg) < 2e-4);

    // min-norm certificate: <g_j, g> >= ||g||^2 - tol for both objectives
    const double gg = sq_norm(res.combined);
    for (const auto* gj : {&g1, &g2}) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += (*gj)[i] * res.combined[i];
      CHECK(dot >= gg - 1e-9);
    }
  }
}

TEST_CASE("subproblem: coinciding gradients give lambda 0.5 and reduce exactly") {
  const std::vector<double> g = {0.3, -0.7, 1.1};
  const SubproblemResult res = solve_subproblem(g, g);
  CHECK(res.lambda == 0.5);
  CHECK(res.combined == g);  // 0.5x + 0.5x == x bit for bit
  CHECK_THROWS_AS(solve_subproblem(g, {1.0}), DimensionError);
}

TEST_CASE("subproblem: opposing gradients can be Pareto stationary") {
  const std::vector<double> g1 = {1.0, 0.0};
  const std::vector<double> g2 = {-1.0, 0.0};
  const SubproblemResult res = solve_subproblem(g1, g2);
  CHECK(res.lambda == doctest::Approx(0.5));
  CHECK(sq_norm(res.combined) == doctest::Approx(0.0));
}

TEST_CASE("multiobjective steppers reduce bit-for-bit when objectives agree") {
  std::mt19937_64 rng(7);
  const std::size_t n = 12;
  const WeightVector w0 = random_vec(n, rng);
  const double t = 0.01;

  for (int step_kind = 0; step_kind < 3; ++step_kind) {
    const auto so_kind = static_cast<OptimizerKind>(step_kind);
    const auto mo_kind = static_cast<MoOptimizerKind>(step_kind);
    WeightVector w_so = w0, w_mo = w0;
    OptimizerState so = OptimizerState::make(so_kind, n);
    MoOptimizerState mo = MoOptimizerState::make(mo_kind, n);
    for (int it = 0; it < 5; ++it) {
      const auto g = random_vec(n, rng);
      optimizer_step(so, w_so, g, t);
      mo_optimizer_step(mo, w_mo, {g, g}, t);
    }
    CHECK(w_so == w_mo);  // exact: lambda = 0.5 and both banks stay identical
    for (double l : mo.lambda_history) CHECK(l == 0.5);
  }
}

TEST_CASE("null steps are counted when the combined gradient vanishes") {
  MoOptimizerState s = MoOptimizerState::make(MoOptimizerKind::Smgd, 2);
  WeightVector w = {1.0, 1.0};
  smgd_step(s, w, {{1.0, 0.0}, {-1.0, 0.0}}, 0.1);
  CHECK(s.null_steps == 1);
  CHECK(w == WeightVector{1.0, 1.0});
  smgd_step(s, w, {{1.0, 0.0}, {1.0, 0.0}}, 0.1);
  CHECK(s.null_steps == 1);
  CHECK(s.lambda_history.size() == 2);
}

TEST_CASE("MAdam keeps separate moment banks per objective") {
  MoOptimizerState s = MoOptimizerState::make(MoOptimizerKind::MAdam, 1);
  WeightVector w = {0.0};
  madam_step(s, w, {{1.0}, {-3.0}}, 0.001);
  CHECK(s.m[0][0] == doctest::Approx((1.0 - 0.9) * 1.0));
  CHECK(s.m[1][0] == doctest::Approx((1.0 - 0.9) * -3.0));
  CHECK(s.v[0][0] == doctest::Approx((1.0 - 0.999) * 1.0));
  CHECK(s.v[1][0] == doctest::Approx((1.0 - 0.999) * 9.0));
  CHECK(s.k == 1);
}
