#pragma once

// Two massive spin-1/2 particles. The amplitude g(s1, s2, k1, k2) lives on the
// product of two invariant-measure grids; spin index s1 * 2 + s2.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relqi/geometry.hpp"
#include "relqi/qmatrix.hpp"
#include "relqi/wavepacket.hpp"

namespace relqi {

/// Default nodes per axis per particle for two-particle grids.
inline constexpr int kDefaultPairNodesPerAxis = 8;

using PairAmplitudes = Eigen::Matrix<Complex, 4, Eigen::Dynamic>;

class TwoParticleAmplitude {
 public:
  /// Column i * n2 + j holds the spin amplitudes at (k1_i, k2_j).
  /// Both grids: invariant measure, common mass > 0. Norm 1 to 1e-8.
  TwoParticleAmplitude(GridPtr grid1, GridPtr grid2, PairAmplitudes g);

  [[nodiscard]] const GridPtr& grid1() const { return grid1_; }
  [[nodiscard]] const GridPtr& grid2() const { return grid2_; }
  [[nodiscard]] const PairAmplitudes& amplitudes() const { return g_; }
  [[nodiscard]] double mass() const { return grid1_->mass(); }
  [[nodiscard]] std::size_t pair_count() const { return grid1_->size() * grid2_->size(); }
  /// w1_i w2_j for column i * n2 + j.
  [[nodiscard]] double pair_weight(std::size_t column) const;

  [[nodiscard]] double norm_squared() const;

 private:
  GridPtr grid1_;
  GridPtr grid2_;
  PairAmplitudes g_;
};

/// f(k1) f(k2) (|01> - |10>)/sqrt(2) with f a zero-centered Gaussian of width delta.
TwoParticleAmplitude bell_gaussian(double delta, double mass, int nodes_per_axis = kDefaultPairNodesPerAxis);

/// f(k1) f(k2) spin1 (x) spin2, spinors normalized internally.
TwoParticleAmplitude product_gaussian(double delta, double mass, const Eigen::Vector2cd& spin1,
                                      const Eigen::Vector2cd& spin2, int nodes_per_axis = kDefaultPairNodesPerAxis);

/// Each particle transforms separately: nodes k -> Lk, spins by D(W(L, k)).
/// Invariant-measure weights and the norm are unchanged.
TwoParticleAmplitude boost_pair(const LorentzTransform& lambda, const TwoParticleAmplitude& state);

/// Momentum-independent spin rotation u1 (x) u2.
TwoParticleAmplitude apply_local_unitaries(const Mat2c& u1, const Mat2c& u2, const TwoParticleAmplitude& state);

/// sum_ij w_i w_j g(k1_i, k2_j) g(k1_i, k2_j)^dagger
DensityMatrix spin_spin_density(const TwoParticleAmplitude& state);

/// Reduced spin state of particle A or B.
DensityMatrix single_particle_density(const TwoParticleAmplitude& state, Subsystem keep);

/// Wootters concurrence of a two-qubit state.
double concurrence(const DensityMatrix& rho);

struct EntangleSweepOptions {
  int nodes_per_axis = kDefaultPairNodesPerAxis;
  /// Threshold on |C(n) - C(n + 2)|.
  double tolerance = 1e-6;
  int workers = 1;
};

struct EntangleSweepRow {
  double delta_over_m = 0.0;
  double beta = 0.0;
  std::optional<double> concurrence;
  std::optional<double> entropy_of_marginal_bits;
  std::size_t grid_nodes = 0;
  bool converged = false;
  std::string error;
};

/// Concurrence of the boosted Gaussian singlet (mass 1, boost along z).
/// One row per (delta_over_m, beta), delta-major, in input order.
std::vector<EntangleSweepRow> entanglement_sweep(std::span<const double> delta_over_ms, std::span<const double> betas,
                                                 const EntangleSweepOptions& options = {});

}  // namespace relqi
