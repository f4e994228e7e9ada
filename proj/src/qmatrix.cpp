#include "relqi/qmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace relqi {

namespace {

Eigen::VectorXd hermitian_eigenvalues(const MatXc& m) {
  Eigen::SelfAdjointEigenSolver<MatXc> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double abs_eigen_sum(const MatXc& m) { return hermitian_eigenvalues(m).cwiseAbs().sum(); }

MatXc ginibre(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatXc g(rows, cols);
  // Column-major fill keeps the draw order fixed.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

Eigen::Vector4cd vec(const Mat2c& x) { return Eigen::Map<const Eigen::Vector4cd>(x.data()); }

Mat2c unvec(const Eigen::Vector4cd& v) { return Eigen::Map<const Mat2c>(v.data()); }

}  // namespace

MatXc kron(const MatXc& a, const MatXc& b) {
  MatXc out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DensityMatrix::DensityMatrix(const MatXc& m, bool subnormalized) : subnormalized_(subnormalized) {
  if (m.rows() != m.cols()) throw DomainError("density matrix must be square");
  if (m.rows() < 2 || m.rows() > 4) throw DomainError("density matrix dimension must be 2, 3 or 4");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kTolerance) throw DomainError("density matrix is not Hermitian");
  m_ = 0.5 * (m + m.adjoint());
  const double tr = m_.trace().real();
  if (subnormalized_) {
    if (tr > 1.0 + kTolerance || tr < -kTolerance)
      throw DomainError("subnormalized density matrix trace outside [0, 1]");
  } else if (std::abs(tr - 1.0) > kTolerance) {
    throw DomainError("density matrix trace is " + std::to_string(tr) + ", expected 1");
  }
  if (hermitian_eigenvalues(m_).minCoeff() < -kTolerance)
    throw DomainError("density matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::pure(const VecXc& psi) {
  const double n = psi.norm();
  if (!(n > 0.0)) throw DomainError("zero state vector");
  const VecXc u = psi / n;
  return DensityMatrix(u * u.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(MatXc::Identity(dim, dim) / static_cast<double>(dim));
}

Eigen::VectorXd DensityMatrix::eigenvalues() const { return hermitian_eigenvalues(m_); }

DensityMatrix partial_trace(const DensityMatrix& rho, int dim_a, int dim_b, Subsystem traced) {
  if (dim_a < 1 || dim_b < 1 || dim_a * dim_b != rho.dim())
    throw DomainError("partial trace: dimensions do not factor the state");
  const MatXc& m = rho.matrix();
  const int keep = traced == Subsystem::A ? dim_b : dim_a;
  const int sum = traced == Subsystem::A ? dim_a : dim_b;
  MatXc out = MatXc::Zero(keep, keep);
  for (int mu = 0; mu < keep; ++mu)
    for (int nu = 0; nu < keep; ++nu)
      for (int k = 0; k < sum; ++k) {
        if (traced == Subsystem::A)
          out(mu, nu) += m(k * dim_b + mu, k * dim_b + nu);
        else
          out(mu, nu) += m(mu * dim_b + k, nu * dim_b + k);
      }
  return DensityMatrix(out, rho.subnormalized());
}

double entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (double lambda : rho.eigenvalues())
    if (lambda > 1e-14) s -= lambda * std::log2(lambda);
  return std::max(0.0, s);
}

double helstrom_error(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) throw DomainError("helstrom error: dimension mismatch");
  const double pe = 0.5 - 0.25 * abs_eigen_sum(rho1.matrix() - rho2.matrix());
  return std::clamp(pe, 0.0, 0.5);
}

double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) throw DomainError("trace distance: dimension mismatch");
  return 0.5 * abs_eigen_sum(rho1.matrix() - rho2.matrix());
}

QubitChannel QubitChannel::from_kraus(std::vector<Mat2c> kraus) {
  if (kraus.empty()) throw DomainError("channel needs at least one Kraus operator");
  QubitChannel ch;
  ch.superop_.setZero();
  for (const Mat2c& k : kraus) ch.superop_ += kron(k.conjugate(), k);
  ch.kraus_ = std::move(kraus);
  return ch;
}

QubitChannel QubitChannel::from_superoperator(const Mat4c& superop) {
  QubitChannel ch;
  ch.superop_ = superop;
  return ch;
}

QubitChannel QubitChannel::identity() { return from_kraus({Mat2c::Identity()}); }

QubitChannel QubitChannel::transpose() {
  Mat4c s = Mat4c::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s(j + 2 * i, i + 2 * j) = 1.0;
  return from_superoperator(s);
}

bool QubitChannel::is_trace_preserving(double tol) const {
  // tr(ch(X)) = tr(X) for all X  <=>  rows 0 and 3 of S sum to vec(I)^T.
  Eigen::RowVector4cd tr_row = superop_.row(0) + superop_.row(3);
  Eigen::RowVector4cd expected(1.0, 0.0, 0.0, 1.0);
  return (tr_row - expected).cwiseAbs().maxCoeff() <= tol;
}

Mat2c QubitChannel::apply(const Mat2c& x) const {
  if (kraus_) {
    Mat2c out = Mat2c::Zero();
    for (const Mat2c& k : *kraus_) out += k * x * k.adjoint();
    return out;
  }
  return unvec(superop_ * vec(x));
}

DensityMatrix apply_channel(const QubitChannel& channel, const DensityMatrix& rho) {
  if (rho.dim() != 2) throw DomainError("qubit channel applied to a non-qubit state");
  const Mat2c out = channel.apply(Mat2c(rho.matrix()));
  return DensityMatrix(out, rho.subnormalized() || !channel.is_trace_preserving());
}

ChoiMatrix::ChoiMatrix(const Mat4c& m) : m_(m) {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw DomainError("Choi matrix is not Hermitian");
  m_ = 0.5 * (m + m.adjoint());
}

Eigen::Vector4d ChoiMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Mat4c> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

ChoiMatrix choi_matrix(const QubitChannel& channel) {
  Mat4c c = Mat4c::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Mat2c e = Mat2c::Zero();
      e(i, j) = 1.0;
      c.block<2, 2>(2 * i, 2 * j) = channel.apply(e);
    }
  return ChoiMatrix(c);
}

CpCertificate is_completely_positive(const QubitChannel& channel, double tol) {
  const double min_eig = choi_matrix(channel).eigenvalues().minCoeff();
  return {min_eig >= -tol, min_eig};
}

std::vector<Mat2c> kraus_from_choi(const ChoiMatrix& choi, double tol) {
  Eigen::SelfAdjointEigenSolver<Mat4c> es(choi.matrix());
  std::vector<Mat2c> out;
  for (int k = 0; k < 4; ++k) {
    const double lambda = es.eigenvalues()(k);
    if (lambda < -tol) throw DomainError("Choi matrix is not positive: map is not completely positive");
    if (lambda <= tol) continue;
    const Eigen::Vector4cd v = es.eigenvectors().col(k);
    Mat2c kop;
    for (int i = 0; i < 2; ++i)
      for (int a = 0; a < 2; ++a) kop(a, i) = std::sqrt(lambda) * v(2 * i + a);
    out.push_back(kop);
  }
  return out;
}

DensityMatrix apply_kraus(std::span<const MatXc> kraus, const DensityMatrix& rho) {
  MatXc out = MatXc::Zero(rho.dim(), rho.dim());
  for (const MatXc& k : kraus) {
    if (k.rows() != rho.dim() || k.cols() != rho.dim()) throw DomainError("Kraus operator dimension mismatch");
    out += k * rho.matrix() * k.adjoint();
  }
  return DensityMatrix(out, rho.subnormalized());
}

DensityMatrix random_density_matrix(int dim, std::mt19937_64& rng) {
  const MatXc g = ginibre(dim, dim, rng);
  MatXc rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

MatXc random_unitary(int dim, std::mt19937_64& rng) {
  const MatXc g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<MatXc> qr(g);
  MatXc q = qr.householderQ() * MatXc::Identity(dim, dim);
  const MatXc r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

std::vector<MatXc> random_cptp_kraus(int dim, int rank, std::mt19937_64& rng) {
  if (rank < 1) throw DomainError("Kraus rank must be positive");
  const MatXc g = ginibre(static_cast<Eigen::Index>(rank) * dim, dim, rng);
  Eigen::HouseholderQR<MatXc> qr(g);
  const MatXc v = qr.householderQ() * MatXc::Identity(g.rows(), dim);
  std::vector<MatXc> out;
  for (int k = 0; k < rank; ++k) out.push_back(v.block(k * dim, 0, dim, dim));
  return out;
}

MonotonicityAudit audit_cp_monotonicity(int dim, int trials, std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  MonotonicityAudit audit;
  audit.worst_margin = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const DensityMatrix rho1 = random_density_matrix(dim, rng);
    const DensityMatrix rho2 = random_density_matrix(dim, rng);
    const int rank = 1 + t % (dim * dim);
    const auto kraus = random_cptp_kraus(dim, rank, rng);
    const double before = helstrom_error(rho1, rho2);
    const double after = helstrom_error(apply_kraus(kraus, rho1), apply_kraus(kraus, rho2));
    const double margin = after - before;
    audit.worst_margin = std::min(audit.worst_margin, margin);
    if (margin < -tol) ++audit.violations;
    ++audit.trials;
  }
  return audit;
}

}  // namespace relqi
