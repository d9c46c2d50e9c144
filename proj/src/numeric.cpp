#include "zcnet/numeric.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <thread>

#include "zcnet/structural.hpp"

namespace zcnet {

Eigen::MatrixXd realize(const PatternMatrix& p, const std::vector<double>& values) {
  if (values.size() != p.nnz()) {
    throw std::invalid_argument("realize: expected " + std::to_string(p.nnz()) + " values, got " +
                                std::to_string(values.size()));
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(p.rows(), p.cols());
  Index k = 0;
  for (const Entry& e : p.entries()) out(e.row, e.col) = values[k++];
  return out;
}

Realization sample_realization(const PatternMatrix& a, const std::optional<PatternMatrix>& b,
                               std::uint64_t seed, ValueSpec values) {
  if (!(values.lower > 0.0) || values.upper < values.lower) {
    throw std::invalid_argument("value range must satisfy 0 < lower <= upper");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> magnitude(values.lower, values.upper);
  std::bernoulli_distribution negative(0.5);
  auto draw = [&](const PatternMatrix& p) {
    std::vector<double> v;
    v.reserve(p.nnz());
    for (Index k = 0; k < p.nnz(); ++k) {
      const double mag = magnitude(rng);
      v.push_back(negative(rng) ? -mag : mag);
    }
    return realize(p, v);
  };

  Realization r;
  r.seed = seed;
  r.values = values;
  r.a = draw(a);
  r.b = b ? draw(*b) : Eigen::MatrixXd::Zero(a.rows(), 0);
  if (r.b.rows() != r.a.rows()) throw std::invalid_argument("B must have as many rows as A");
  return r;
}

Eigen::VectorXcd eigenvalues(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigenvalues: matrix must be square");
  const Eigen::Index n = a.rows();
  std::vector<Eigen::Index> active(n);
  for (Eigen::Index i = 0; i < n; ++i) active[i] = i;
  std::vector<std::complex<double>> isolated;

  auto isolated_at = [&](Eigen::Index i) {
    bool row_clear = true;
    bool col_clear = true;
    for (Eigen::Index j : active) {
      if (j == i) continue;
      row_clear = row_clear && a(i, j) == 0.0;
      col_clear = col_clear && a(j, i) == 0.0;
    }
    return row_clear || col_clear;
  };

  for (bool progress = true; progress;) {
    progress = false;
    for (auto it = active.begin(); it != active.end(); ++it) {
      if (isolated_at(*it)) {
        isolated.emplace_back(a(*it, *it), 0.0);
        active.erase(it);
        progress = true;
        break;
      }
    }
  }

  Eigen::VectorXcd out(n);
  Eigen::Index k = 0;
  for (const auto& lambda : isolated) out(k++) = lambda;
  if (!active.empty()) {
    const auto idx = Eigen::Map<const Eigen::Array<Eigen::Index, Eigen::Dynamic, 1>>(
        active.data(), static_cast<Eigen::Index>(active.size()));
    const Eigen::MatrixXd core = a(idx, idx);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(core, false);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("eigenvalue iteration did not converge");
    }
    out.segment(k, core.rows()) = solver.eigenvalues();
  }
  return out;
}

double spectral_radius(const Eigen::VectorXcd& eigenvalues) {
  return eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
}

bool hautus_full_rank(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                      std::complex<double> lambda, double rel_tol) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXcd pencil(n, n + b.cols());
  pencil.leftCols(n) = a.cast<std::complex<double>>();
  pencil.leftCols(n).diagonal().array() -= lambda;
  pencil.rightCols(b.cols()) = b.cast<std::complex<double>>();
  return numerical_rank(pencil, rel_tol) == static_cast<Index>(n);
}

namespace {

bool hautus_all(const Realization& r, const Eigen::VectorXcd& lambdas, double threshold) {
  for (Eigen::Index k = 0; k < lambdas.size(); ++k) {
    if (std::abs(lambdas(k)) > threshold && !hautus_full_rank(r.a, r.b, lambdas(k))) return false;
  }
  return true;
}

ControllabilityCheck combine(bool rank_test, bool hautus_test) {
  ControllabilityCheck out;
  out.rank_test = rank_test;
  out.hautus_test = hautus_test;
  out.disagreement = rank_test != hautus_test;
  out.verdict = rank_test && hautus_test;
  return out;
}

}  // namespace

ControllabilityCheck is_controllable_numeric(const Realization& r, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  const Index n = r.n();
  const Eigen::MatrixXd ctrb = normalize_columns(controllability_matrix(r.a, r.b));
  const bool rank_test = numerical_rank(ctrb) == n;
  // Every eigenvalue, zero included.
  const bool hautus_test = hautus_all(r, eigenvalues(r.a), -1.0);
  return combine(rank_test, hautus_test);
}

ControllabilityCheck is_zero_controllable_numeric(const Realization& r, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  const Index n = r.n();
  const Eigen::MatrixXd ctrb = normalize_columns(controllability_matrix(r.a, r.b));
  const Eigen::MatrixXd an = normalize_columns(matrix_power(r.a, n));
  Eigen::MatrixXd joined(n, ctrb.cols() + an.cols());
  joined << ctrb, an;
  const bool rank_test = numerical_rank(joined) == numerical_rank(ctrb);

  const Eigen::VectorXcd lambdas = eigenvalues(r.a);
  const bool hautus_test = hautus_all(r, lambdas, tol * (1.0 + spectral_radius(lambdas)));
  return combine(rank_test, hautus_test);
}

Index count_nonzero_eigenvalues(const Realization& r, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  const Eigen::VectorXcd lambdas = eigenvalues(r.a);
  const double threshold = tol * (1.0 + spectral_radius(lambdas));
  return static_cast<Index>((lambdas.cwiseAbs().array() > threshold).count());
}

SteeringResult deadbeat_steer(const Realization& r, const Eigen::VectorXd& x0, Index horizon) {
  if (horizon == 0) throw std::invalid_argument("deadbeat_steer: horizon must be at least 1");
  const Eigen::Index n = r.a.rows();
  const Eigen::Index m = r.b.cols();
  if (x0.size() != n) {
    throw std::invalid_argument("deadbeat_steer: x0 has " + std::to_string(x0.size()) +
                                " entries, expected " + std::to_string(n));
  }

  SteeringResult out;
  out.horizon = horizon;
  out.controls.assign(horizon, Eigen::VectorXd::Zero(m));

  if (m > 0) {
    // Column block k multiplies u(k): A^{horizon-1-k} B.
    const Eigen::Index tau = static_cast<Eigen::Index>(horizon);
    Eigen::MatrixXd gain(n, tau * m);
    Eigen::MatrixXd block = r.b;
    for (Eigen::Index k = tau - 1; k >= 0; --k) {
      gain.middleCols(k * m, m) = block;
      block = r.a * block;
    }
    const Eigen::VectorXd rhs = -(matrix_power(r.a, horizon) * x0);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(gain);
    const Eigen::VectorXd u = cod.solve(rhs);
    for (Eigen::Index k = 0; k < tau; ++k) out.controls[k] = u.segment(k * m, m);
  }

  out.trajectory.reserve(horizon + 1);
  out.trajectory.push_back(x0);
  for (Index k = 0; k < horizon; ++k) {
    out.trajectory.push_back(r.a * out.trajectory.back() + r.b * out.controls[k]);
  }
  out.final_norm = out.trajectory.back().norm();
  return out;
}

double step_residual(const Realization& r, const SteeringResult& s) {
  double worst = 0.0;
  for (Index k = 0; k < s.horizon; ++k) {
    const Eigen::VectorXd predicted = r.a * s.trajectory[k] + r.b * s.controls[k];
    const double scale = std::max(1.0, predicted.norm());
    worst = std::max(worst, (s.trajectory[k + 1] - predicted).norm() / scale);
  }
  return worst;
}

double trajectory_identity_residual(const Realization& r, const SteeringResult& s) {
  double worst = 0.0;
  const Eigen::Index n = r.a.rows();
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);  // A^l
  for (Index l = 0; l <= s.horizon; ++l) {
    Eigen::VectorXd forced = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);  // A^{l-1-k}, k descending
    double scale = 1.0;
    for (Index k = l; k-- > 0;) {
      const Eigen::VectorXd term = p * (r.b * s.controls[k]);
      forced += term;
      scale = std::max(scale, term.norm());
      p = r.a * p;
    }
    const Eigen::VectorXd free = power * s.trajectory[0];
    scale = std::max({scale, free.norm(), s.trajectory[l].norm()});
    worst = std::max(worst, (s.trajectory[l] - free - forced).norm() / scale);
    power = r.a * power;
  }
  return worst;
}

MonteCarloStats monte_carlo_verify(const PatternMatrix& a, const std::optional<PatternMatrix>& b,
                                   const MonteCarloOptions& options) {
  if (options.trials == 0) throw std::invalid_argument("trials must be at least 1");
  MonteCarloStats stats;
  stats.trials = options.trials;
  stats.structural_zc = is_generically_zero_controllable(a, b).verdict;
  if (options.check_controllability) {
    stats.structural_controllable =
        b ? is_generically_controllable(a, *b).controllable : a.rows() == 0;
  }

  stats.outcomes.resize(options.trials);
  auto run_trial = [&](Index i) {
    TrialOutcome& t = stats.outcomes[i];
    t.seed = options.base_seed + i;
    const Realization r = sample_realization(a, b, t.seed, options.values);
    t.zero_controllable = is_zero_controllable_numeric(r, options.tol);
    if (options.check_controllability) t.controllable = is_controllable_numeric(r, options.tol);
  };

  const unsigned workers = std::max(1u, options.threads);
  if (workers == 1) {
    for (Index i = 0; i < options.trials; ++i) run_trial(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (Index i = w; i < options.trials; i += workers) run_trial(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  for (const TrialOutcome& t : stats.outcomes) {
    if (t.zero_controllable.verdict == stats.structural_zc) ++stats.zc_agree;
    bool flagged = t.zero_controllable.disagreement;
    if (t.controllable) {
      if (t.controllable->verdict == *stats.structural_controllable) ++stats.controllable_agree;
      flagged = flagged || t.controllable->disagreement;
    }
    if (flagged) ++stats.flagged;
  }
  return stats;
}

}  // namespace zcnet
