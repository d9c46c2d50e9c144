#ifndef ZCNET_NUMERIC_HPP
#define ZCNET_NUMERIC_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "zcnet/pattern.hpp"

namespace zcnet {

/// Nonzeros are drawn as sign * magnitude, magnitude uniform in [lower, upper].
struct ValueSpec {
  double lower = 0.1;
  double upper = 2.0;
};

/// Relative singular-value cutoff used by every numerical rank decision.
inline constexpr double kRankRelTol = 1e-10;
/// Default eigenvalue threshold: |lambda| > tol * (1 + spectral radius) is nonzero.
inline constexpr double kEigenTol = 1e-8;

/// Admissible numeric pair (A, B) for a structured pair.
struct Realization {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;  ///< n x m, m may be 0
  std::uint64_t seed = 0;
  ValueSpec values;

  Index n() const { return static_cast<Index>(a.rows()); }
  Index m() const { return static_cast<Index>(b.cols()); }
};

/// Deterministic in `seed`: entries are drawn in sorted order of A, then B.
Realization sample_realization(const PatternMatrix& a, const std::optional<PatternMatrix>& b,
                               std::uint64_t seed, ValueSpec values = {});

/// Dense matrix with the given pattern filled in from `values` (row-major
/// order of the pattern entries).
Eigen::MatrixXd realize(const PatternMatrix& p, const std::vector<double>& values);

// ---------------------------------------------------------------------------
// Dense kernels, templated on the Eigen expression type.

/// Numerical rank: singular values <= max(rows, cols) * sigma_max * rel_tol
/// count as zero. Empty matrices have rank 0.
template <typename Derived>
Index numerical_rank(const Eigen::MatrixBase<Derived>& m, double rel_tol = kRankRelTol) {
  using Scalar = typename Derived::Scalar;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Dense> svd(m.eval());
  const auto& sigma = svd.singularValues();
  const double cutoff =
      static_cast<double>(std::max(m.rows(), m.cols())) * sigma(0) * rel_tol;
  Index rank = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) > cutoff) ++rank;
  }
  return rank;
}

/// Rescales every nonzero column to unit norm; the column span is unchanged.
template <typename Derived>
auto normalize_columns(const Eigen::MatrixBase<Derived>& m) {
  using Dense = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Dense out = m;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    const auto norm = out.col(c).norm();
    if (norm > 0) out.col(c) /= norm;
  }
  return out;
}

/// [B, AB, ..., A^{n-1} B].
template <typename DerivedA, typename DerivedB>
auto controllability_matrix(const Eigen::MatrixBase<DerivedA>& a,
                            const Eigen::MatrixBase<DerivedB>& b) {
  using Dense = Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.cols();
  Dense out(n, n * m);
  if (m == 0) return out;
  Dense block = b;
  for (Eigen::Index k = 0; k < n; ++k) {
    out.middleCols(k * m, m) = block;
    if (k + 1 < n) block = a * block;
  }
  return out;
}

/// A^k by repeated multiplication.
template <typename Derived>
auto matrix_power(const Eigen::MatrixBase<Derived>& a, Index k) {
  using Dense = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Dense out = Dense::Identity(a.rows(), a.cols());
  for (Index i = 0; i < k; ++i) out = a * out;
  return out;
}

/// Eigenvalues of a real square matrix. Rows or columns whose off-diagonal
/// part is exactly zero are split off first (as in LAPACK's permutation
/// balancing), which yields their diagonal entry as an exact eigenvalue and
/// keeps defective zero blocks from being smeared by the QR iteration.
Eigen::VectorXcd eigenvalues(const Eigen::MatrixXd& a);

double spectral_radius(const Eigen::VectorXcd& eigenvalues);

/// rank [A - lambda I, B] == n.
bool hautus_full_rank(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                      std::complex<double> lambda, double rel_tol = kRankRelTol);

struct ControllabilityCheck {
  bool verdict = false;       ///< conservative: both tests must agree on true
  bool rank_test = false;     ///< image / Krylov formulation
  bool hautus_test = false;   ///< eigenvalue formulation
  bool disagreement = false;  ///< the two formulations disagree
};

/// Controllability: rank of [B, AB, ..., A^{n-1}B] is n, cross-checked by the
/// Hautus test at every eigenvalue.
ControllabilityCheck is_controllable_numeric(const Realization& r, double tol = kEigenTol);

/// Zero controllability: im A^n lies in the reachable subspace, cross-checked
/// by the Hautus test at every eigenvalue with |lambda| > tol * (1 + rho).
ControllabilityCheck is_zero_controllable_numeric(const Realization& r, double tol = kEigenTol);

/// Eigenvalues with modulus above tol * (1 + spectral radius).
Index count_nonzero_eigenvalues(const Realization& r, double tol = kEigenTol);

struct SteeringResult {
  std::vector<Eigen::VectorXd> controls;    ///< u(0) .. u(horizon-1)
  std::vector<Eigen::VectorXd> trajectory;  ///< x(0) .. x(horizon)
  double final_norm = 0.0;
  Index horizon = 0;
};

/// Minimum-norm least-squares controls for
///   sum_k A^{horizon-1-k} B u(k) = -A^horizon x0,
/// followed by forward simulation. With m = 0 the system is simulated free.
SteeringResult deadbeat_steer(const Realization& r, const Eigen::VectorXd& x0, Index horizon);

/// Largest relative residual of x(k+1) = A x(k) + B u(k) along the run.
double step_residual(const Realization& r, const SteeringResult& s);

/// Largest relative residual of
///   x(l) - A^l x(0) = sum_{k<l} A^{l-1-k} B u(k)
/// over l = 0 .. horizon, evaluated independently of the stepwise recursion.
double trajectory_identity_residual(const Realization& r, const SteeringResult& s);

struct MonteCarloOptions {
  Index trials = 100;
  std::uint64_t base_seed = 20240001;
  double tol = kEigenTol;
  bool check_controllability = false;
  ValueSpec values;
  unsigned threads = 1;
};

struct TrialOutcome {
  std::uint64_t seed = 0;
  ControllabilityCheck zero_controllable;
  std::optional<ControllabilityCheck> controllable;
};

struct MonteCarloStats {
  bool structural_zc = false;
  std::optional<bool> structural_controllable;
  Index trials = 0;
  Index zc_agree = 0;
  Index controllable_agree = 0;
  Index flagged = 0;  ///< trials where the two numeric formulations disagreed
  std::vector<TrialOutcome> outcomes;

  double zc_agreement() const { return trials ? double(zc_agree) / double(trials) : 0.0; }
  double controllable_agreement() const {
    return trials ? double(controllable_agree) / double(trials) : 0.0;
  }
};

/// Trial i uses seed base_seed + i; results do not depend on `threads`.
MonteCarloStats monte_carlo_verify(const PatternMatrix& a, const std::optional<PatternMatrix>& b,
                                   const MonteCarloOptions& options = {});

}  // namespace zcnet

#endif  // ZCNET_NUMERIC_HPP
