#include "relqi/spin_half.hpp"

#include <cmath>

#include "relqi/parallel.hpp"
#include "relqi/summation.hpp"

namespace relqi {

SpinorPacket::SpinorPacket(GridPtr grid, VecXc up, VecXc down, double mass)
    : grid_(std::move(grid)), up_(std::move(up)), down_(std::move(down)), mass_(mass) {
  if (!grid_) throw DomainError("spinor packet without a grid");
  if (!(mass_ > 0.0)) throw DomainError("spinor packet requires positive mass");
  if (grid_->convention() != MeasureConvention::Plain)
    throw DomainError("spinor packets use the plain momentum measure");
  if (grid_->mass() != mass_) throw DomainError("grid is off shell for the packet mass");
  const auto n = static_cast<Eigen::Index>(grid_->size());
  if (up_.size() != n || down_.size() != n) throw DomainError("amplitude count does not match grid size");
  if (std::abs(norm_squared() - 1.0) > 1e-8) throw DomainError("spinor packet is not normalized");
}

Eigen::Vector2cd SpinorPacket::spinor(std::size_t i) const {
  const auto k = static_cast<Eigen::Index>(i);
  return {up_(k), down_(k)};
}

double SpinorPacket::norm_squared() const {
  return pairwise_sum<double>(
      0, grid_->size(),
      [&](std::size_t i) {
        const auto k = static_cast<Eigen::Index>(i);
        return grid_->weight(i) * (std::norm(up_(k)) + std::norm(down_(k)));
      },
      0.0);
}

SpinorPacket gaussian_spinor(double delta, double mass, const Eigen::Vector2cd& spin, int nodes_per_axis) {
  if (!(delta > 0.0) || !(mass > 0.0)) throw DomainError("packet width and mass must be positive");
  if (!(spin.norm() > 0.0)) throw DomainError("zero spinor");
  const GaussianSpec spec = GaussianSpec::isotropic(delta);
  const GridPtr grid = gauss_grid(spec, nodes_per_axis, MeasureConvention::Plain, mass);
  const GridFunction profile = normalize(sample_gaussian(grid, spec));
  const Eigen::Vector2cd s = spin.normalized();
  return SpinorPacket(grid, s(0) * profile.values, s(1) * profile.values, mass);
}

SpinorPacket gaussian_spin_up(double delta, double mass, int nodes_per_axis) {
  return gaussian_spinor(delta, mass, Eigen::Vector2cd(1.0, 0.0), nodes_per_axis);
}

SpinorPacket gaussian_spin_down(double delta, double mass, int nodes_per_axis) {
  return gaussian_spinor(delta, mass, Eigen::Vector2cd(0.0, 1.0), nodes_per_axis);
}

SpinorPacket boost_packet(const LorentzTransform& lambda, const SpinorPacket& psi) {
  const MomentumGrid& grid = *psi.grid();
  const double m = psi.mass();
  const std::size_t n = grid.size();
  std::vector<Vec3> nodes(n);
  std::vector<double> weights(n);
  VecXc up(static_cast<Eigen::Index>(n));
  VecXc down(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const FourVector p = grid.momentum(i);
    const FourVector q = lambda.apply(p);
    const double q0 = std::sqrt(m * m + q.spatial.squaredNorm());
    const Mat2c d = rotation_to_su2(wigner_rotation(lambda, p, m)).matrix();
    const Eigen::Vector2cd a = std::sqrt(p.t / q0) * (d * psi.spinor(i));
    const auto k = static_cast<Eigen::Index>(i);
    up(k) = a(0);
    down(k) = a(1);
    nodes[i] = q.spatial;
    weights[i] = grid.weight(i) * q0 / p.t;
  }
  auto boosted = std::make_shared<const MomentumGrid>(std::move(nodes), std::move(weights), MeasureConvention::Plain, m);
  return SpinorPacket(std::move(boosted), std::move(up), std::move(down), m);
}

DensityMatrix reduced_spin_density(const SpinorPacket& psi) {
  const MomentumGrid& grid = *psi.grid();
  const Mat2c tau = pairwise_sum<Mat2c>(
      0, grid.size(),
      [&](std::size_t i) -> Mat2c {
        const Eigen::Vector2cd s = psi.spinor(i);
        return grid.weight(i) * (s * s.adjoint());
      },
      Mat2c::Zero());
  return DensityMatrix(tau);
}

double gamma_parameter(double delta, double mass, double beta) {
  if (!(delta > 0.0) || !(mass > 0.0)) throw DomainError("width and mass must be positive");
  if (!(beta >= 0.0)) throw DomainError("boost speed must be non-negative");
  if (!(beta < 1.0)) throw DomainError("superluminal velocity");
  // (1 - sqrt(1 - b^2)) / b == b / (1 + sqrt(1 - b^2)), finite at b = 0.
  return (delta / mass) * beta / (1.0 + std::sqrt(1.0 - beta * beta));
}

double beta_for_gamma(double gamma, double delta_over_m) {
  if (!(delta_over_m > 0.0)) throw DomainError("delta/m must be positive");
  if (!(gamma >= 0.0)) throw DomainError("gamma must be non-negative");
  if (gamma == 0.0) return 0.0;
  if (gamma >= delta_over_m) throw DomainError("gamma unreachable: requires gamma < delta/m");
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (gamma_parameter(delta_over_m, 1.0, mid) < gamma)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

BoostedSpinPair boosted_spin_pair(double delta, double mass, double beta, double theta, int nodes_per_axis) {
  const LorentzTransform lambda = observer_boost(beta, theta);
  const SpinorPacket up = boost_packet(lambda, gaussian_spin_up(delta, mass, nodes_per_axis));
  const SpinorPacket down = boost_packet(lambda, gaussian_spin_down(delta, mass, nodes_per_axis));
  return {reduced_spin_density(up), reduced_spin_density(down)};
}

double boosted_spin_entropy(double delta, double mass, double beta, double theta, int nodes_per_axis) {
  const LorentzTransform lambda = observer_boost(beta, theta);
  return entropy(reduced_spin_density(boost_packet(lambda, gaussian_spin_up(delta, mass, nodes_per_axis))));
}

double boosted_pair_error(double delta, double mass, double beta, double theta, int nodes_per_axis) {
  const BoostedSpinPair pair = boosted_spin_pair(delta, mass, beta, theta, nodes_per_axis);
  return helstrom_error(pair.up, pair.down);
}

std::vector<SpinSweepRow> entropy_sweep(std::span<const double> thetas, std::span<const double> gammas,
                                        const SpinSweepOptions& options) {
  if (options.nodes_per_axis < 1) throw DomainError("nodes_per_axis must be >= 1");
  std::vector<SpinSweepRow> rows(thetas.size() * gammas.size());
  const double mass = 1.0;
  const double delta = options.delta_over_m * mass;
  const int n = options.nodes_per_axis;
  parallel_for(rows.size(), options.workers, [&](std::size_t r) {
    SpinSweepRow& row = rows[r];
    row.theta = thetas[r / gammas.size()];
    row.gamma = gammas[r % gammas.size()];
    row.delta_over_m = options.delta_over_m;
    row.grid_nodes = static_cast<std::size_t>(n) * n * n;
    try {
      const double beta = beta_for_gamma(row.gamma, options.delta_over_m);
      row.beta = beta;
      const BoostedSpinPair coarse = boosted_spin_pair(delta, mass, beta, row.theta, n);
      const BoostedSpinPair fine = boosted_spin_pair(delta, mass, beta, row.theta, 2 * n);
      row.entropy_bits = entropy(coarse.up);
      row.p_error = helstrom_error(coarse.up, coarse.down);
      const double ds = std::abs(*row.entropy_bits - entropy(fine.up));
      const double dp = std::abs(*row.p_error - helstrom_error(fine.up, fine.down));
      row.converged = ds < options.tolerance && dp < options.tolerance;
    } catch (const DomainError& e) {
      row.error = e.what();
    }
  });
  return rows;
}

}  // namespace relqi
