#pragma once

// Massive spin-1/2 wave packets in the momentum representation, their
// transformation to a boosted observer's frame, and the frame dependence of
// the reduced spin state.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relqi/geometry.hpp"
#include "relqi/qmatrix.hpp"
#include "relqi/wavepacket.hpp"

namespace relqi {

/// psi(p) = (a1(p), a2(p)) on a Plain-measure grid with the particle's mass.
/// Normalized: sum_r sum_i w_i |a_r(p_i)|^2 = 1 to 1e-8.
class SpinorPacket {
 public:
  SpinorPacket(GridPtr grid, VecXc up, VecXc down, double mass);

  [[nodiscard]] const GridPtr& grid() const { return grid_; }
  [[nodiscard]] const VecXc& up() const { return up_; }
  [[nodiscard]] const VecXc& down() const { return down_; }
  [[nodiscard]] double mass() const { return mass_; }
  [[nodiscard]] Eigen::Vector2cd spinor(std::size_t i) const;

  [[nodiscard]] double norm_squared() const;

 private:
  GridPtr grid_;
  VecXc up_;
  VecXc down_;
  double mass_;
};

/// a(p) = N exp(-p^2 / 2 delta^2) * spin, spin normalized internally.
SpinorPacket gaussian_spinor(double delta, double mass, const Eigen::Vector2cd& spin,
                             int nodes_per_axis = kDefaultNodesPerAxis);

/// a2 = 0, a1 = N exp(-p^2 / 2 delta^2).
SpinorPacket gaussian_spin_up(double delta, double mass, int nodes_per_axis = kDefaultNodesPerAxis);
SpinorPacket gaussian_spin_down(double delta, double mass, int nodes_per_axis = kDefaultNodesPerAxis);

/// Packet as seen after the Lorentz transformation `lambda`.
///
/// Every node p is carried to Lp. The amplitude there is
/// sqrt(p0 / (Lp)0) D(W(L, p)) a(p), and the node weight is scaled by (Lp)0 / p0
/// (the Jacobian of d^3p), so the Plain norm is conserved exactly.
SpinorPacket boost_packet(const LorentzTransform& lambda, const SpinorPacket& psi);

/// tau = int d^3p psi(p) psi(p)^dagger
DensityMatrix reduced_spin_density(const SpinorPacket& psi);

/// (delta / m) (1 - sqrt(1 - beta^2)) / beta, with the beta -> 0 limit 0.
double gamma_parameter(double delta, double mass, double beta);

/// Inverts gamma_parameter for beta at fixed delta/m by bisection (1e-12).
/// Throws DomainError when gamma >= delta/m (the supremum, reached as beta -> 1).
double beta_for_gamma(double gamma, double delta_over_m);

/// Reduced spin states of the spin-up and spin-down Gaussians seen by an
/// observer moving with speed beta at polar angle theta in the x-z plane.
struct BoostedSpinPair {
  DensityMatrix up;
  DensityMatrix down;
};

BoostedSpinPair boosted_spin_pair(double delta, double mass, double beta, double theta,
                                  int nodes_per_axis = kDefaultNodesPerAxis);

/// Spin entropy (bits) of the boosted spin-up Gaussian.
double boosted_spin_entropy(double delta, double mass, double beta, double theta,
                            int nodes_per_axis = kDefaultNodesPerAxis);

/// Helstrom error between the boosted spin-up and spin-down Gaussians.
double boosted_pair_error(double delta, double mass, double beta, double theta,
                          int nodes_per_axis = kDefaultNodesPerAxis);

struct SpinSweepOptions {
  double delta_over_m = 1.0;
  int nodes_per_axis = kDefaultNodesPerAxis;
  /// Convergence threshold on |S(n) - S(2n)| and |P(n) - P(2n)|.
  double tolerance = 1e-6;
  int workers = 1;
};

struct SpinSweepRow {
  double theta = 0.0;
  double gamma = 0.0;
  std::optional<double> beta;
  double delta_over_m = 0.0;
  std::optional<double> entropy_bits;
  std::optional<double> p_error;
  std::size_t grid_nodes = 0;
  bool converged = false;
  /// Set when the row could not be computed (e.g. unreachable gamma).
  std::string error;
};

/// One row per (theta, gamma) pair, theta-major, in input order.
std::vector<SpinSweepRow> entropy_sweep(std::span<const double> thetas, std::span<const double> gammas,
                                        const SpinSweepOptions& options = {});

}  // namespace relqi
