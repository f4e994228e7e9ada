#include "relqi/photon.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "relqi/parallel.hpp"
#include "relqi/summation.hpp"

namespace relqi {

namespace {

const Complex kI(0.0, 1.0);

Vec3 unit_direction(const Vec3& k) {
  const double n = k.norm();
  if (!(n > 0.0)) throw DomainError("photon momentum is zero: direction undefined");
  return k / n;
}

// Unnormalized sum_i w_i |f_i|^2 v_i v_i^dagger for per-node column vectors v_i.
template <class Column>
Mat3c weighted_outer(const PhotonPacket& psi, const Column& column) {
  return pairwise_sum<Mat3c>(
      0, psi.grid()->size(),
      [&](std::size_t i) -> Mat3c {
        const Vec3c v = column(i);
        return psi.probability_weight(i) * (v * v.adjoint());
      },
      Mat3c::Zero());
}

void require_grid(const PolarizationPOVM& povm, const PhotonPacket& psi) {
  require_same_grid(*povm.grid(), *psi.grid());
}

}  // namespace

std::pair<Vec3c, Vec3c> helicity_vectors(const Vec3& khat) {
  const Mat3& r = standard_rotation(khat).matrix();
  const double s = 1.0 / std::numbers::sqrt2;
  const Vec3c plus = r.cast<Complex>() * Vec3c(s, kI * s, 0.0);
  const Vec3c minus = r.cast<Complex>() * Vec3c(s, -kI * s, 0.0);
  return {plus, minus};
}

TransversalDecomposition transversal_b(const Vec3& direction, const Vec3& khat) {
  if (std::abs(direction.norm() - 1.0) > 1e-10) throw DomainError("direction is not a unit vector");
  const auto [plus, minus] = helicity_vectors(khat);
  const Vec3c d = direction.cast<Complex>();
  TransversalDecomposition out;
  out.x_plus = plus.dot(d);
  out.x_minus = minus.dot(d);
  out.b = out.x_plus * plus + out.x_minus * minus;
  out.x_long = direction.dot(khat.normalized());
  return out;
}

PhotonPacket::PhotonPacket(GridPtr grid, VecXc profile, VecXc alpha_plus, VecXc alpha_minus)
    : grid_(std::move(grid)), f_(std::move(profile)), alpha_plus_(std::move(alpha_plus)), alpha_minus_(std::move(alpha_minus)) {
  if (!grid_) throw DomainError("photon packet without a grid");
  if (grid_->convention() != MeasureConvention::Invariant)
    throw DomainError("photon packets use the invariant momentum measure");
  if (grid_->mass() != 0.0) throw DomainError("photon grid must be massless");
  const auto n = static_cast<Eigen::Index>(grid_->size());
  if (f_.size() != n || alpha_plus_.size() != n || alpha_minus_.size() != n)
    throw DomainError("amplitude count does not match grid size");
  pol_.resize(grid_->size());
  for (std::size_t i = 0; i < grid_->size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    if (std::abs(std::norm(alpha_plus_(k)) + std::norm(alpha_minus_(k)) - 1.0) > 1e-10)
      throw DomainError("helicity amplitudes are not normalized at a node");
    const auto [plus, minus] = helicity_vectors(unit_direction(grid_->node(i)));
    pol_[i] = alpha_plus_(k) * plus + alpha_minus_(k) * minus;
  }
  if (std::abs(norm_squared() - 1.0) > 1e-8) throw DomainError("photon packet is not normalized");
}

PhotonPacket PhotonPacket::from_polarization(GridPtr grid, VecXc profile, const std::vector<Vec3c>& polarization) {
  if (!grid) throw DomainError("photon packet without a grid");
  if (polarization.size() != grid->size()) throw DomainError("polarization count does not match grid size");
  const auto n = static_cast<Eigen::Index>(grid->size());
  VecXc ap(n);
  VecXc am(n);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const Vec3 khat = unit_direction(grid->node(i));
    const Vec3c& a = polarization[i];
    if (std::abs(a.norm() - 1.0) > 1e-10) throw DomainError("polarization vector is not normalized");
    if (std::abs(a.dot(khat.cast<Complex>())) > 1e-10) throw DomainError("polarization vector is not transverse");
    const auto [plus, minus] = helicity_vectors(khat);
    const auto k = static_cast<Eigen::Index>(i);
    ap(k) = plus.dot(a);
    am(k) = minus.dot(a);
  }
  return {std::move(grid), std::move(profile), std::move(ap), std::move(am)};
}

double PhotonPacket::probability_weight(std::size_t i) const {
  return grid_->weight(i) * std::norm(f_(static_cast<Eigen::Index>(i)));
}

double PhotonPacket::norm_squared() const {
  return pairwise_sum<double>(0, grid_->size(), [&](std::size_t i) { return probability_weight(i); }, 0.0);
}

PolarizationPOVM::PolarizationPOVM(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw DomainError("POVM without a grid");
  if (grid_->convention() != MeasureConvention::Invariant)
    throw DomainError("polarization POVM requires the invariant momentum measure");
  for (int m = 0; m < 3; ++m) {
    auto& bm = b_[static_cast<std::size_t>(m)];
    bm.reserve(grid_->size());
    for (std::size_t i = 0; i < grid_->size(); ++i)
      bm.push_back(transversal_b(Vec3::Unit(m), unit_direction(grid_->node(i))).b);
  }
}

Eigen::Vector3d PolarizationPOVM::probabilities(const PhotonPacket& psi) const {
  require_grid(*this, psi);
  Eigen::Vector3d p;
  for (int m = 0; m < 3; ++m)
    p(m) = pairwise_sum<double>(
        0, grid_->size(),
        [&](std::size_t i) { return psi.probability_weight(i) * std::norm(b(m, i).dot(psi.polarization(i))); }, 0.0);
  return p;
}

double PolarizationPOVM::combination_probability(const PhotonPacket& psi, const Vec3c& u) const {
  require_grid(*this, psi);
  return pairwise_sum<double>(
      0, grid_->size(),
      [&](std::size_t i) {
        const Vec3c bu = u(0) * b(0, i) + u(1) * b(1, i) + u(2) * b(2, i);
        return psi.probability_weight(i) * std::norm(bu.dot(psi.polarization(i)));
      },
      0.0);
}

double PolarizationPOVM::completeness_residual(const PhotonPacket& psi) const {
  return std::abs(1.0 - probabilities(psi).sum());
}

PolarizationPOVM build_povm(const GridPtr& grid) { return PolarizationPOVM(grid); }

Mat3c povm_route_density(const PolarizationPOVM& povm, const PhotonPacket& psi) {
  require_grid(povm, psi);
  const Mat3c rho = weighted_outer(psi, [&](std::size_t i) {
    const Vec3c& a = psi.polarization(i);
    return Vec3c(povm.b(0, i).dot(a), povm.b(1, i).dot(a), povm.b(2, i).dot(a));
  });
  return rho / rho.trace().real();
}

Mat3c naive_density(const PhotonPacket& psi) {
  const Mat3c rho = weighted_outer(psi, [&](std::size_t i) { return psi.polarization(i); });
  return rho / rho.trace().real();
}

Mat3c tomographic_density(const PolarizationPOVM& povm, const PhotonPacket& psi) {
  const Eigen::Vector3d diag = povm.probabilities(psi);
  const double s = 1.0 / std::numbers::sqrt2;
  Mat3c rho = Mat3c::Zero();
  for (int m = 0; m < 3; ++m) rho(m, m) = diag(m);
  for (int m = 0; m < 3; ++m)
    for (int n = m + 1; n < 3; ++n) {
      Vec3c re_dir = Vec3c::Zero();
      re_dir(m) = s;
      re_dir(n) = s;
      Vec3c im_dir = Vec3c::Zero();
      im_dir(m) = s;
      im_dir(n) = -kI * s;
      const double mean = 0.5 * (diag(m) + diag(n));
      const double re = povm.combination_probability(psi, re_dir) - mean;
      const double im = povm.combination_probability(psi, im_dir) - mean;
      rho(m, n) = Complex(re, im);
      rho(n, m) = Complex(re, -im);
    }
  return rho / rho.trace().real();
}

DensityMatrix effective_density(const PhotonPacket& psi) {
  const Mat3c naive = naive_density(psi);
  const Mat3c povm = povm_route_density(build_povm(psi.grid()), psi);
  if ((naive - povm).cwiseAbs().maxCoeff() > 1e-10)
    throw std::logic_error("effective density: POVM and naive routes disagree");
  return DensityMatrix(povm);
}

PhotonPacket gaussian_beam(double kA, double delta_z, double delta_r, int helicity, int nodes_per_axis) {
  if (!(kA > 0.0)) throw DomainError("beam momentum kA must be positive");
  if (!(delta_z > 0.0) || !(delta_r > 0.0)) throw DomainError("beam widths must be positive");
  if (!(kA > 5.0 * delta_z)) throw DomainError("beam requires kA > 5 delta_z");
  if (helicity != 1 && helicity != -1) throw DomainError("helicity must be +1 or -1");
  const GaussianSpec spec = GaussianSpec::beam(kA, delta_z, delta_r);
  const GridPtr grid = gauss_grid(spec, nodes_per_axis, MeasureConvention::Invariant, 0.0);
  for (const Vec3& k : grid->nodes())
    if (k.norm() < 1e-12 * kA) throw DomainError("grid node at k = 0: direction undefined");
  const GridFunction profile = normalize(sample_gaussian(grid, spec));
  const auto n = static_cast<Eigen::Index>(grid->size());
  const VecXc one = VecXc::Ones(n);
  const VecXc zero = VecXc::Zero(n);
  return helicity == 1 ? PhotonPacket(grid, profile.values, one, zero) : PhotonPacket(grid, profile.values, zero, one);
}

std::vector<std::string> beam_warnings(double kA, double delta_z, double delta_r) {
  std::vector<std::string> out;
  if (delta_r > 0.1 * kA) out.emplace_back("delta_r is not small compared with kA; leading-order formulas lose accuracy");
  if (delta_z > delta_r) out.emplace_back("delta_z exceeds delta_r; beam is not transversally dominated");
  return out;
}

PhotonPacket boost_photon_packet(const LorentzTransform& lambda, const PhotonPacket& psi) {
  const MomentumGrid& grid = *psi.grid();
  std::vector<Vec3> nodes(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec3& k = grid.node(i);
    nodes[i] = lambda.apply(FourVector(k.norm(), k)).spatial;
  }
  auto moved = std::make_shared<const MomentumGrid>(std::move(nodes), grid.weights(), MeasureConvention::Invariant, 0.0);
  return {std::move(moved), psi.profile(), psi.alpha_plus(), psi.alpha_minus()};
}

PhotonPacket rotate_photon_packet(const Rotation& r, const PhotonPacket& psi) {
  const MomentumGrid& grid = *psi.grid();
  std::vector<Vec3> nodes(grid.size());
  std::vector<Vec3c> pol(grid.size());
  const Eigen::Matrix3cd rc = r.matrix().cast<Complex>();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    nodes[i] = r.apply(grid.node(i));
    pol[i] = rc * psi.polarization(i);
  }
  auto moved = std::make_shared<const MomentumGrid>(std::move(nodes), grid.weights(), MeasureConvention::Invariant, 0.0);
  return PhotonPacket::from_polarization(std::move(moved), psi.profile(), pol);
}

double orthogonality_audit(const PhotonPacket& psi1, const PhotonPacket& psi2) {
  require_same_grid(*psi1.grid(), *psi2.grid());
  return helstrom_error(effective_density(psi1), effective_density(psi2));
}

double circular_pair_error(double kA, double delta_z, double delta_r, int nodes_per_axis) {
  return orthogonality_audit(gaussian_beam(kA, delta_z, delta_r, 1, nodes_per_axis),
                             gaussian_beam(kA, delta_z, delta_r, -1, nodes_per_axis));
}

double circular_pair_error_closed_form(double kA, double delta_r) { return delta_r * delta_r / (4.0 * kA * kA); }

double doppler_factor(double v) {
  if (!(std::abs(v) < 1.0)) throw DomainError("superluminal velocity");
  return (1.0 + v) / (1.0 - v);
}

double doppler_error(double kA, double delta_z, double delta_r, double v, int nodes_per_axis) {
  if (!(std::abs(v) < 1.0)) throw DomainError("superluminal velocity");
  const LorentzTransform lambda = observer_boost(v, 0.0);
  return orthogonality_audit(boost_photon_packet(lambda, gaussian_beam(kA, delta_z, delta_r, 1, nodes_per_axis)),
                             boost_photon_packet(lambda, gaussian_beam(kA, delta_z, delta_r, -1, nodes_per_axis)));
}

std::vector<PhotonSweepRow> photon_sweep(double kA, double delta_z, std::span<const double> delta_rs,
                                         std::span<const double> vs, const PhotonSweepOptions& options) {
  if (options.nodes_per_axis < 1) throw DomainError("nodes_per_axis must be >= 1");
  std::vector<PhotonSweepRow> rows(delta_rs.size() * vs.size());
  const int n = options.nodes_per_axis;
  parallel_for(rows.size(), options.workers, [&](std::size_t r) {
    PhotonSweepRow& row = rows[r];
    row.kA = kA;
    row.delta_z = delta_z;
    row.delta_r = delta_rs[r / vs.size()];
    row.v = vs[r % vs.size()];
    row.grid_nodes = static_cast<std::size_t>(n) * n * n;
    try {
      row.p_error_closed_form = doppler_factor(row.v) * circular_pair_error_closed_form(kA, row.delta_r);
      const double coarse = doppler_error(kA, delta_z, row.delta_r, row.v, n);
      const double fine = doppler_error(kA, delta_z, row.delta_r, row.v, 2 * n);
      row.p_error = coarse;
      row.converged = std::abs(coarse - fine) <= options.tolerance * std::abs(fine);
    } catch (const DomainError& e) {
      row.error = e.what();
    }
  });
  return rows;
}

}  // namespace relqi
