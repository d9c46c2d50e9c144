#include <doctest.h>

#include <random>

#include "support.hpp"
#include "zcnet/drivers.hpp"
#include "zcnet/numeric.hpp"
#include "zcnet/structural.hpp"

using namespace zcnet;
using namespace zcnet::test;

namespace {

Realization numeric(Eigen::MatrixXd a, Eigen::MatrixXd b) {
  Realization r;
  r.a = std::move(a);
  r.b = std::move(b);
  return r;
}

Eigen::MatrixXd mat(Index rows, Index cols, std::initializer_list<double> values) {
  Eigen::MatrixXd m(rows, cols);
  auto it = values.begin();
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = *it++;
  }
  return m;
}

}  // namespace

TEST_CASE("sample_realization honours the pattern and the seed") {
  const Realization r = sample_realization(example1_a(), example1_b(), 42);
  CHECK((r.a.array() != 0.0).count() == 8);
  CHECK((r.b.array() != 0.0).count() == 1);
  const PatternMatrix ex1 = example1_a();
  for (const Entry& e : ex1.entries()) {
    CHECK(std::abs(r.a(e.row, e.col)) >= 0.1);
    CHECK(std::abs(r.a(e.row, e.col)) <= 2.0);
  }
  const Realization again = sample_realization(example1_a(), example1_b(), 42);
  CHECK(r.a == again.a);
  CHECK(r.b == again.b);
  CHECK(sample_realization(example1_a(), example1_b(), 43).a != r.a);

  const Realization zero = sample_realization(PatternMatrix::zero(3, 3), PatternMatrix::zero(3, 2), 5);
  CHECK(zero.a.isZero(0.0));
  CHECK(zero.b.isZero(0.0));
  CHECK(zero.b.cols() == 2);

  const Realization no_b = sample_realization(example1_a(), std::nullopt, 5);
  CHECK(no_b.m() == 0);
}

TEST_CASE("zero positions are exactly zero and nonzeros bounded away from zero") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 1 + rng() % 8;
    const PatternMatrix a = random_pattern(rng, n, n, 0.3);
    const Realization r = sample_realization(a, std::nullopt, rng());
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (a.contains(i, j)) CHECK(std::abs(r.a(i, j)) >= 0.1);
        else CHECK(r.a(i, j) == 0.0);
      }
    }
  }
}

TEST_CASE("controllability_matrix") {
  const Eigen::MatrixXd b = mat(3, 1, {1, 2, 3});
  const Eigen::MatrixXd c0 = controllability_matrix(Eigen::MatrixXd::Zero(3, 3), b);
  CHECK(c0.col(0) == b);
  CHECK(c0.rightCols(2).isZero(0.0));

  CHECK(controllability_matrix(mat(1, 1, {0.7}), mat(1, 1, {2.0})) == mat(1, 1, {2.0}));
  CHECK(controllability_matrix(mat(2, 2, {0, 1, 0, 0}), mat(2, 1, {0, 1})) ==
        mat(2, 2, {0, 1, 1, 0}));
  CHECK(controllability_matrix(Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Zero(3, 0)).cols() ==
        0);
}

TEST_CASE("numerical rank") {
  CHECK(numerical_rank(Eigen::MatrixXd::Zero(3, 0)) == 0);
  CHECK(numerical_rank(Eigen::MatrixXd::Zero(3, 3)) == 0);
  CHECK(numerical_rank(Eigen::MatrixXd::Identity(4, 4)) == 4);
  CHECK(numerical_rank(mat(2, 2, {1, 2, 2, 4})) == 1);
}

TEST_CASE("eigenvalues isolate exact zero structure") {
  // Jordan block of size 3 at zero feeding a nonzero cycle.
  const Eigen::MatrixXd a = mat(4, 4, {0, 0, 0, 0,  //
                                       1, 0, 0, 0,  //
                                       0, 1, 0, 0,  //
                                       0, 0, 1, 0.5});
  const Eigen::VectorXcd l = eigenvalues(a);
  CHECK((l.cwiseAbs().array() == 0.0).count() == 3);
  CHECK(spectral_radius(l) == doctest::Approx(0.5));

  const Eigen::MatrixXd rot = mat(2, 2, {0, -1, 1, 0});
  const Eigen::VectorXcd lr = eigenvalues(rot);
  CHECK(spectral_radius(lr) == doctest::Approx(1.0));
}

TEST_CASE("is_controllable_numeric") {
  const auto chain = is_controllable_numeric(numeric(mat(2, 2, {0, 0, 1, 0}), mat(2, 1, {1, 0})));
  CHECK(chain.verdict);
  CHECK_FALSE(chain.disagreement);

  const auto no_input =
      is_controllable_numeric(numeric(mat(2, 2, {1, 0, 1, 1}), Eigen::MatrixXd::Zero(2, 1)));
  CHECK_FALSE(no_input.verdict);
  CHECK_FALSE(no_input.disagreement);

  CHECK_THROWS_AS(is_controllable_numeric(numeric(mat(1, 1, {1}), mat(1, 1, {1})), 0.0),
                  std::invalid_argument);

  const PatternMatrix b51 = pattern1(5, 1, {{4, 1}, {5, 1}});
  int controllable = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    if (is_controllable_numeric(sample_realization(example1_a(), b51, seed)).verdict) {
      ++controllable;
    }
  }
  CHECK(controllable >= 95);
}

TEST_CASE("is_zero_controllable_numeric") {
  const Eigen::MatrixXd lower = mat(3, 3, {0, 0, 0, 1, 0, 0, 2, 3, 0});
  CHECK(is_zero_controllable_numeric(numeric(lower, Eigen::MatrixXd::Zero(3, 0))).verdict);
  CHECK(is_zero_controllable_numeric(numeric(lower, Eigen::MatrixXd::Zero(3, 1))).verdict);
  CHECK_FALSE(
      is_zero_controllable_numeric(numeric(mat(1, 1, {0.5}), Eigen::MatrixXd::Zero(1, 0))).verdict);

  int with_loop = 0;
  int without_loop = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto c1 = is_zero_controllable_numeric(sample_realization(example1_a(), example1_b(), seed));
    const auto c2 = is_zero_controllable_numeric(
        sample_realization(example1_a_without_a55(), example1_b(), seed));
    if (!c1.verdict) ++with_loop;
    if (c2.verdict) ++without_loop;
    CHECK_FALSE(c1.disagreement);
    CHECK_FALSE(c2.disagreement);
  }
  CHECK(with_loop >= 95);
  CHECK(without_loop >= 95);
}

TEST_CASE("count_nonzero_eigenvalues tracks nu") {
  CHECK(count_nonzero_eigenvalues(
            numeric(mat(3, 3, {0, 1, 1, 0, 0, 1, 0, 0, 0}), Eigen::MatrixXd::Zero(3, 0))) == 0);
  for (const auto& [a, nu] : {std::pair{example1_a(), Index{3}}, std::pair{example2_a(), Index{7}}}) {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      if (count_nonzero_eigenvalues(sample_realization(a, std::nullopt, seed)) == nu) ++hits;
    }
    CHECK(hits >= 95);
  }
}

TEST_CASE("count_nonzero_eigenvalues against compute_nu on random patterns") {
  std::mt19937_64 rng(12);
  int hits = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    const Index n = 1 + rng() % 8;
    const PatternMatrix a = random_pattern(rng, n, n, 0.25);
    if (count_nonzero_eigenvalues(sample_realization(a, std::nullopt, rng())) == compute_nu(a)) {
      ++hits;
    }
  }
  CHECK(hits >= 0.95 * trials);
}

TEST_CASE("deadbeat_steer") {
  const Realization r = sample_realization(example2_a(), build_b_pattern(11, xs({4, 8}), BMode::PerDriver).pattern, 3);
  const SteeringResult zero = deadbeat_steer(r, Eigen::VectorXd::Zero(11), 11);
  CHECK(zero.final_norm == 0.0);
  for (const auto& u : zero.controls) CHECK(u.isZero(0.0));

  // Nilpotent A, no inputs: free motion dies out by the horizon.
  Realization nil = numeric(mat(3, 3, {0, 0, 0, 1, 0, 0, 2, 3, 0}), Eigen::MatrixXd::Zero(3, 0));
  const SteeringResult free = deadbeat_steer(nil, Eigen::VectorXd::Ones(3), 3);
  CHECK(free.final_norm == 0.0);
  CHECK(free.trajectory.size() == 4);

  CHECK_THROWS_AS(deadbeat_steer(nil, Eigen::VectorXd::Ones(3), 0), std::invalid_argument);
  CHECK_THROWS_AS(deadbeat_steer(nil, Eigen::VectorXd::Ones(2), 3), std::invalid_argument);
}

TEST_CASE("deadbeat steering reaches zero and satisfies the solution formula") {
  const PatternMatrix b = build_b_pattern(11, xs({4, 8}), BMode::PerDriver).pattern;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  int reached = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Realization r = sample_realization(example2_a(), b, seed);
    Eigen::VectorXd x0(11);
    for (auto& v : x0) v = normal(rng);
    x0.normalize();
    const SteeringResult s = deadbeat_steer(r, x0, 11);
    if (s.final_norm <= 1e-6) ++reached;
    CHECK(step_residual(r, s) <= 1e-10);
    CHECK(trajectory_identity_residual(r, s) <= 1e-9);
  }
  CHECK(reached >= 95);
}

TEST_CASE("solution formula holds for arbitrary controls up to 2n") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 1 + rng() % 6;
    const Index m = 1 + rng() % 2;
    const Realization r = sample_realization(random_pattern(rng, n, n, 0.4),
                                             random_pattern(rng, n, m, 0.5), rng());
    SteeringResult s;
    s.horizon = 2 * n;
    s.trajectory.push_back(Eigen::VectorXd::NullaryExpr(n, [&] { return normal(rng); }));
    for (Index k = 0; k < s.horizon; ++k) {
      s.controls.push_back(Eigen::VectorXd::NullaryExpr(m, [&] { return normal(rng); }));
      s.trajectory.push_back(r.a * s.trajectory.back() + r.b * s.controls.back());
    }
    CHECK(trajectory_identity_residual(r, s) <= 1e-9);
  }
}

TEST_CASE("deadbeat optimality of horizon n when zero controllable") {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + rng() % 6;
    const Index m = 1 + rng() % 2;
    const Realization r = sample_realization(random_pattern(rng, n, n, 0.35),
                                             random_pattern(rng, n, m, 0.3), rng());
    if (!is_zero_controllable_numeric(r).verdict) continue;
    const Eigen::VectorXd x0 = Eigen::VectorXd::NullaryExpr(n, [&] { return normal(rng); });
    const SteeringResult s = deadbeat_steer(r, x0, n);
    CHECK(s.final_norm <= 1e-6 * std::max(1.0, x0.norm()));
  }
}

TEST_CASE("Hautus and image tests agree on dense random systems") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> normal;
  int agree_ctrl = 0;
  int agree_zc = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    const Index n = 1 + rng() % 6;
    const Index m = 1 + rng() % 2;
    Realization r = numeric(Eigen::MatrixXd::NullaryExpr(n, n, [&] { return normal(rng); }),
                            Eigen::MatrixXd::NullaryExpr(n, m, [&] { return normal(rng); }));
    if (!is_controllable_numeric(r).disagreement) ++agree_ctrl;
    if (!is_zero_controllable_numeric(r).disagreement) ++agree_zc;
  }
  CHECK(agree_ctrl >= 0.99 * trials);
  CHECK(agree_zc >= 0.99 * trials);
}

TEST_CASE("monte_carlo_verify") {
  MonteCarloOptions opt;
  opt.trials = 50;
  const MonteCarloStats nil = monte_carlo_verify(pattern1(3, 3, {{2, 1}, {3, 2}}), std::nullopt, opt);
  CHECK(nil.structural_zc);
  CHECK(nil.zc_agree == 50);

  opt.trials = 100;
  const MonteCarloStats ex1 = monte_carlo_verify(example1_a(), example1_b(), opt);
  CHECK_FALSE(ex1.structural_zc);
  CHECK(ex1.zc_agree >= 95);

  const PatternMatrix b = build_b_pattern(11, xs({4, 8}), BMode::PerDriver).pattern;
  const MonteCarloStats ex2 = monte_carlo_verify(example2_a(), b, opt);
  CHECK(ex2.structural_zc);
  CHECK(ex2.zc_agree >= 95);

  CHECK_THROWS_AS(monte_carlo_verify(example1_a(), example1_b(), MonteCarloOptions{.trials = 0}),
                  std::invalid_argument);
}

TEST_CASE("monte_carlo_verify is independent of the thread count") {
  MonteCarloOptions opt;
  opt.trials = 40;
  opt.check_controllability = true;
  const PatternMatrix b = pattern1(5, 1, {{4, 1}, {5, 1}});
  const MonteCarloStats serial = monte_carlo_verify(example1_a(), b, opt);
  opt.threads = 3;
  const MonteCarloStats parallel = monte_carlo_verify(example1_a(), b, opt);
  CHECK(serial.zc_agree == parallel.zc_agree);
  CHECK(serial.controllable_agree == parallel.controllable_agree);
  REQUIRE(serial.outcomes.size() == parallel.outcomes.size());
  for (Index i = 0; i < serial.outcomes.size(); ++i) {
    CHECK(serial.outcomes[i].seed == opt.base_seed + i);
    CHECK(serial.outcomes[i].seed == parallel.outcomes[i].seed);
    CHECK(serial.outcomes[i].zero_controllable.verdict ==
          parallel.outcomes[i].zero_controllable.verdict);
  }
  CHECK(serial.structural_controllable == std::optional<bool>(true));
  CHECK(serial.controllable_agree >= 38);
}
