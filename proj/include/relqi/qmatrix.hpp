#pragma once

// Finite-dimensional density-matrix algebra: partial trace, von Neumann
// entropy, minimum-error (Helstrom) discrimination, qubit channels in Kraus and
// superoperator form, Choi matrices and complete-positivity certificates.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "relqi/geometry.hpp"

namespace relqi {

using MatXc = Eigen::MatrixXcd;
using VecXc = Eigen::VectorXcd;
using Mat4c = Eigen::Matrix4cd;

/// Kronecker product a (x) b; row index of the result is i_a * rows(b) + i_b.
MatXc kron(const MatXc& a, const MatXc& b);

/// Hermitian, positive semidefinite, unit-trace matrix of dimension 2, 3 or 4.
///
/// Eigenvalues down to -1e-10 are tolerated (quadrature noise floor); the
/// stored matrix is the Hermitian part of the input. A subnormalized density
/// matrix only requires 0 <= trace <= 1.
class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit DensityMatrix(const MatXc& m, bool subnormalized = false);

  static DensityMatrix pure(const VecXc& psi);
  static DensityMatrix maximally_mixed(int dim);

  [[nodiscard]] int dim() const { return static_cast<int>(m_.rows()); }
  [[nodiscard]] const MatXc& matrix() const { return m_; }
  [[nodiscard]] bool subnormalized() const { return subnormalized_; }
  [[nodiscard]] double trace() const { return m_.trace().real(); }
  [[nodiscard]] Complex operator()(int i, int j) const { return m_(i, j); }

  /// Ascending eigenvalues.
  [[nodiscard]] Eigen::VectorXd eigenvalues() const;

 private:
  MatXc m_;
  bool subnormalized_ = false;
};

enum class Subsystem { A, B };

/// Traces out `traced` from a state on H_A (x) H_B (A is the slow index).
DensityMatrix partial_trace(const DensityMatrix& rho, int dim_a, int dim_b, Subsystem traced);

/// Von Neumann entropy in bits. Eigenvalues below 1e-14 contribute nothing.
double entropy(const DensityMatrix& rho);

/// P_E = 1/2 - 1/4 tr|rho1 - rho2|, from the eigenvalues of the difference.
double helstrom_error(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// 1/2 tr|rho1 - rho2|
double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// Linear map on 2x2 matrices. Always carries the 4x4 superoperator (column
/// stacking: vec(rho)[i + 2j] = rho(i, j)); carries Kraus operators when it
/// was built from them.
class QubitChannel {
 public:
  static QubitChannel from_kraus(std::vector<Mat2c> kraus);
  static QubitChannel from_superoperator(const Mat4c& superop);

  static QubitChannel identity();
  /// rho -> rho^T. Positive but not completely positive.
  static QubitChannel transpose();

  [[nodiscard]] const Mat4c& superoperator() const { return superop_; }
  [[nodiscard]] const std::optional<std::vector<Mat2c>>& kraus() const { return kraus_; }

  [[nodiscard]] bool is_trace_preserving(double tol = 1e-10) const;

  /// Applies the map to an arbitrary 2x2 operator.
  [[nodiscard]] Mat2c apply(const Mat2c& x) const;

 private:
  QubitChannel() = default;
  Mat4c superop_ = Mat4c::Identity();
  std::optional<std::vector<Mat2c>> kraus_;
};

DensityMatrix apply_channel(const QubitChannel& channel, const DensityMatrix& rho);

/// sum_ij |i><j| (x) ch(|i><j|). Unnormalized: trace 2 for a trace-preserving
/// qubit channel, and the identity channel gives 2 |Phi+><Phi+|.
class ChoiMatrix {
 public:
  explicit ChoiMatrix(const Mat4c& m);
  [[nodiscard]] const Mat4c& matrix() const { return m_; }
  [[nodiscard]] Eigen::Vector4d eigenvalues() const;

 private:
  Mat4c m_;
};

ChoiMatrix choi_matrix(const QubitChannel& channel);

struct CpCertificate {
  bool completely_positive = false;
  double min_choi_eigenvalue = 0.0;
};

CpCertificate is_completely_positive(const QubitChannel& channel, double tol = 1e-12);

/// Kraus operators sqrt(lambda_k) * unvec(v_k) of a positive Choi matrix.
/// Throws DomainError when an eigenvalue is below -tol.
std::vector<Mat2c> kraus_from_choi(const ChoiMatrix& choi, double tol = 1e-10);

/// rho -> sum_k K rho K^dagger for Kraus operators of any dimension.
DensityMatrix apply_kraus(std::span<const MatXc> kraus, const DensityMatrix& rho);

// Random test objects. All draws go through the caller's engine.

DensityMatrix random_density_matrix(int dim, std::mt19937_64& rng);
MatXc random_unitary(int dim, std::mt19937_64& rng);
/// Kraus operators of a random trace-preserving CP map (Stinespring isometry).
std::vector<MatXc> random_cptp_kraus(int dim, int rank, std::mt19937_64& rng);

struct MonotonicityAudit {
  int trials = 0;
  /// min over trials of P_E(ch(rho1), ch(rho2)) - P_E(rho1, rho2).
  double worst_margin = 0.0;
  int violations = 0;
};

/// Tests that no random CPTP map lowers the Helstrom error of random state
/// pairs. A violation is a margin below -tol.
MonotonicityAudit audit_cp_monotonicity(int dim, int trials, std::uint64_t seed, double tol = 1e-9);

}  // namespace relqi
