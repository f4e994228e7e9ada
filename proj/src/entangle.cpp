#include "relqi/entangle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "relqi/parallel.hpp"
#include "relqi/summation.hpp"

namespace relqi {

namespace {

void require_pair_grid(const GridPtr& g) {
  if (!g) throw DomainError("two-particle state without a grid");
  if (g->convention() != MeasureConvention::Invariant)
    throw DomainError("two-particle states use the invariant momentum measure");
  if (!(g->mass() > 0.0)) throw DomainError("two-particle states require positive mass");
}

GridFunction gaussian_profile(double delta, double mass, int nodes_per_axis) {
  if (!(delta > 0.0) || !(mass > 0.0)) throw DomainError("packet width and mass must be positive");
  const GaussianSpec spec = GaussianSpec::isotropic(delta);
  return normalize(sample_gaussian(gauss_grid(spec, nodes_per_axis, MeasureConvention::Invariant, mass), spec));
}

TwoParticleAmplitude product_profile(const GridFunction& f, const Eigen::Vector4cd& spin) {
  const auto n = static_cast<Eigen::Index>(f.grid->size());
  PairAmplitudes g(4, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g.col(i * n + j) = (f.values(i) * f.values(j)) * spin;
  return {f.grid, f.grid, std::move(g)};
}

std::pair<GridPtr, std::vector<Mat2c>> transport(const LorentzTransform& lambda, const MomentumGrid& grid) {
  std::vector<Vec3> nodes(grid.size());
  std::vector<Mat2c> spin(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const FourVector p = grid.momentum(i);
    nodes[i] = lambda.apply(p).spatial;
    spin[i] = rotation_to_su2(wigner_rotation(lambda, p, grid.mass())).matrix();
  }
  auto moved =
      std::make_shared<const MomentumGrid>(std::move(nodes), grid.weights(), MeasureConvention::Invariant, grid.mass());
  return {std::move(moved), std::move(spin)};
}

Eigen::Matrix4cd kron2(const Mat2c& a, const Mat2c& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Eigen::Matrix4cd psd_sqrt(const Eigen::Matrix4cd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
  const Eigen::Vector4d s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

TwoParticleAmplitude::TwoParticleAmplitude(GridPtr grid1, GridPtr grid2, PairAmplitudes g)
    : grid1_(std::move(grid1)), grid2_(std::move(grid2)), g_(std::move(g)) {
  require_pair_grid(grid1_);
  require_pair_grid(grid2_);
  if (grid1_->mass() != grid2_->mass()) throw DomainError("two-particle grids must share the mass");
  if (g_.cols() != static_cast<Eigen::Index>(pair_count())) throw DomainError("amplitude count does not match grid size");
  if (std::abs(norm_squared() - 1.0) > 1e-8) throw DomainError("two-particle state is not normalized");
}

double TwoParticleAmplitude::pair_weight(std::size_t column) const {
  const std::size_t n2 = grid2_->size();
  return grid1_->weight(column / n2) * grid2_->weight(column % n2);
}

double TwoParticleAmplitude::norm_squared() const {
  return pairwise_sum<double>(
      0, pair_count(),
      [&](std::size_t c) { return pair_weight(c) * g_.col(static_cast<Eigen::Index>(c)).squaredNorm(); }, 0.0);
}

TwoParticleAmplitude bell_gaussian(double delta, double mass, int nodes_per_axis) {
  const double s = 1.0 / std::numbers::sqrt2;
  return product_profile(gaussian_profile(delta, mass, nodes_per_axis), Eigen::Vector4cd(0.0, s, -s, 0.0));
}

TwoParticleAmplitude product_gaussian(double delta, double mass, const Eigen::Vector2cd& spin1,
                                      const Eigen::Vector2cd& spin2, int nodes_per_axis) {
  if (!(spin1.norm() > 0.0) || !(spin2.norm() > 0.0)) throw DomainError("zero spinor");
  const Eigen::Vector2cd a = spin1.normalized();
  const Eigen::Vector2cd b = spin2.normalized();
  return product_profile(gaussian_profile(delta, mass, nodes_per_axis),
                         Eigen::Vector4cd(a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1)));
}

TwoParticleAmplitude boost_pair(const LorentzTransform& lambda, const TwoParticleAmplitude& state) {
  const auto [grid1, spin1] = transport(lambda, *state.grid1());
  const auto [grid2, spin2] = transport(lambda, *state.grid2());
  const std::size_t n1 = grid1->size();
  const std::size_t n2 = grid2->size();
  PairAmplitudes g(4, state.amplitudes().cols());
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      const auto c = static_cast<Eigen::Index>(i * n2 + j);
      g.col(c) = kron2(spin1[i], spin2[j]) * state.amplitudes().col(c);
    }
  return {grid1, grid2, std::move(g)};
}

TwoParticleAmplitude apply_local_unitaries(const Mat2c& u1, const Mat2c& u2, const TwoParticleAmplitude& state) {
  const SpinHalfUnitary a(u1);
  const SpinHalfUnitary b(u2);
  return {state.grid1(), state.grid2(), kron2(a.matrix(), b.matrix()) * state.amplitudes()};
}

DensityMatrix spin_spin_density(const TwoParticleAmplitude& state) {
  const auto& g = state.amplitudes();
  const Eigen::Matrix4cd rho = pairwise_sum<Eigen::Matrix4cd>(
      0, state.pair_count(),
      [&](std::size_t c) -> Eigen::Matrix4cd {
        const auto col = g.col(static_cast<Eigen::Index>(c));
        return state.pair_weight(c) * (col * col.adjoint());
      },
      Eigen::Matrix4cd::Zero());
  return DensityMatrix(rho);
}

DensityMatrix single_particle_density(const TwoParticleAmplitude& state, Subsystem keep) {
  return partial_trace(spin_spin_density(state), 2, 2, keep == Subsystem::A ? Subsystem::B : Subsystem::A);
}

double concurrence(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw DomainError("concurrence requires a two-qubit state");
  const Eigen::Matrix4cd r = rho.matrix();
  const Eigen::Matrix4cd yy = kron2(pauli(1), pauli(1));
  const Eigen::Matrix4cd tilde = yy * r.conjugate() * yy;
  const Eigen::Matrix4cd sq = psd_sqrt(r);
  Eigen::Matrix4cd m = sq * tilde * sq;
  m = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m, Eigen::EigenvaluesOnly);
  Eigen::Vector4d l = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(l.data(), l.data() + 4, std::greater<>());
  return std::clamp(l(0) - l(1) - l(2) - l(3), 0.0, 1.0);
}

std::vector<EntangleSweepRow> entanglement_sweep(std::span<const double> delta_over_ms, std::span<const double> betas,
                                                 const EntangleSweepOptions& options) {
  if (options.nodes_per_axis < 1) throw DomainError("nodes_per_axis must be >= 1");
  std::vector<EntangleSweepRow> rows(delta_over_ms.size() * betas.size());
  const int n = options.nodes_per_axis;
  const double mass = 1.0;
  parallel_for(rows.size(), options.workers, [&](std::size_t r) {
    EntangleSweepRow& row = rows[r];
    row.delta_over_m = delta_over_ms[r / betas.size()];
    row.beta = betas[r % betas.size()];
    const std::size_t per_particle = static_cast<std::size_t>(n) * n * n;
    row.grid_nodes = per_particle * per_particle;
    try {
      const LorentzTransform lambda = observer_boost(row.beta, 0.0);
      const TwoParticleAmplitude coarse = boost_pair(lambda, bell_gaussian(row.delta_over_m * mass, mass, n));
      const double c_fine = concurrence(spin_spin_density(boost_pair(lambda, bell_gaussian(row.delta_over_m * mass, mass, n + 2))));
      row.concurrence = concurrence(spin_spin_density(coarse));
      row.entropy_of_marginal_bits = entropy(single_particle_density(coarse, Subsystem::A));
      row.converged = std::abs(*row.concurrence - c_fine) < options.tolerance;
    } catch (const DomainError& e) {
      row.error = e.what();
    }
  });
  return rows;
}

}  // namespace relqi
