#pragma once

// Photon polarization in the helicity basis. A photon state is a scalar
// profile f(k) on an invariant-measure grid together with helicity amplitudes
// alpha_+-(k); the polarization 3-vector at k is
//   alpha(k) = alpha_+(k) eps+(k) + alpha_-(k) eps-(k),
// transverse to k by construction.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relqi/geometry.hpp"
#include "relqi/qmatrix.hpp"
#include "relqi/wavepacket.hpp"

namespace relqi {

using Vec3c = Eigen::Vector3cd;
using Mat3c = Eigen::Matrix3cd;

/// eps+-(k) = R(khat) (1, +-i, 0) / sqrt(2) with R = standard_rotation.
/// Throws DomainError for a non-unit input.
std::pair<Vec3c, Vec3c> helicity_vectors(const Vec3& khat);

/// Split of a real unit direction d into its transverse part
/// b = x+ eps+ + x- eps- and longitudinal coefficient x_l = d . khat.
/// x+- = <eps+-|d>, so b is the orthogonal projection of d onto the plane
/// transverse to khat and |b|^2 + x_l^2 = 1.
struct TransversalDecomposition {
  Vec3c b;
  Complex x_plus;
  Complex x_minus;
  double x_long = 0.0;
};

TransversalDecomposition transversal_b(const Vec3& direction, const Vec3& khat);

class PhotonPacket {
 public:
  /// Grid must use the invariant measure with mass 0 and no node at k = 0.
  /// Requires sum_i w_i |f_i|^2 = 1 (1e-8) and |alpha+|^2 + |alpha-|^2 = 1 per node (1e-10).
  PhotonPacket(GridPtr grid, VecXc profile, VecXc alpha_plus, VecXc alpha_minus);

  /// Builds the helicity amplitudes from unit transverse polarization vectors.
  static PhotonPacket from_polarization(GridPtr grid, VecXc profile, const std::vector<Vec3c>& polarization);

  [[nodiscard]] const GridPtr& grid() const { return grid_; }
  [[nodiscard]] const VecXc& profile() const { return f_; }
  [[nodiscard]] const VecXc& alpha_plus() const { return alpha_plus_; }
  [[nodiscard]] const VecXc& alpha_minus() const { return alpha_minus_; }
  [[nodiscard]] const Vec3c& polarization(std::size_t i) const { return pol_[i]; }
  [[nodiscard]] const std::vector<Vec3c>& polarizations() const { return pol_; }

  /// w_i |f_i|^2
  [[nodiscard]] double probability_weight(std::size_t i) const;
  [[nodiscard]] double norm_squared() const;

 private:
  GridPtr grid_;
  VecXc f_;
  VecXc alpha_plus_;
  VecXc alpha_minus_;
  std::vector<Vec3c> pol_;
};

/// E_x, E_y, E_z, each stored per node as b_m(k) = transverse projection of e_m.
class PolarizationPOVM {
 public:
  explicit PolarizationPOVM(GridPtr grid);

  [[nodiscard]] const GridPtr& grid() const { return grid_; }
  [[nodiscard]] const Vec3c& b(int m, std::size_t i) const { return b_[static_cast<std::size_t>(m)][i]; }

  /// (<E_x>, <E_y>, <E_z>) for a packet on the same grid.
  [[nodiscard]] Eigen::Vector3d probabilities(const PhotonPacket& psi) const;

  /// <E_u> for E_u = int dmu |k, b_u(k)><k, b_u(k)| with b_u = sum_m u_m b_m.
  /// u = (e_m + e_n)/sqrt(2) and (e_m - i e_n)/sqrt(2) give the tomography operators.
  [[nodiscard]] double combination_probability(const PhotonPacket& psi, const Vec3c& u) const;

  /// |1 - sum_m <E_m>| for a packet.
  [[nodiscard]] double completeness_residual(const PhotonPacket& psi) const;

 private:
  GridPtr grid_;
  std::array<std::vector<Vec3c>, 3> b_;
};

PolarizationPOVM build_povm(const GridPtr& grid);

/// rho_mn = int dmu |f|^2 <b_m|alpha><alpha|b_n>, normalized to unit trace.
Mat3c povm_route_density(const PolarizationPOVM& povm, const PhotonPacket& psi);

/// rho_mn = int dmu |f|^2 alpha_m conj(alpha_n), normalized to unit trace.
Mat3c naive_density(const PhotonPacket& psi);

/// Off-diagonals rebuilt from E_{m+n} and E_{m-in} probabilities.
Mat3c tomographic_density(const PolarizationPOVM& povm, const PhotonPacket& psi);

/// Effective polarization density matrix. Both routes are evaluated and must
/// agree to 1e-10; a disagreement throws std::logic_error.
DensityMatrix effective_density(const PhotonPacket& psi);

/// f = N exp(-(kz - kA)^2 / 2 dz^2) exp(-kr^2 / 2 dr^2), alpha = eps^helicity.
/// helicity is +1 or -1. Requires kA > 5 dz.
PhotonPacket gaussian_beam(double kA, double delta_z, double delta_r, int helicity,
                           int nodes_per_axis = kDefaultNodesPerAxis);

/// Advisory messages for beams outside the kA >> delta_r regime.
std::vector<std::string> beam_warnings(double kA, double delta_z, double delta_r);

/// Transports nodes k -> Lk keeping weights, profile and helicity amplitudes.
PhotonPacket boost_photon_packet(const LorentzTransform& lambda, const PhotonPacket& psi);

/// Rotates nodes and polarization vectors rigidly.
PhotonPacket rotate_photon_packet(const Rotation& r, const PhotonPacket& psi);

/// Helstrom error between the two effective density matrices. Packets must share a grid.
double orthogonality_audit(const PhotonPacket& psi1, const PhotonPacket& psi2);

/// Helstrom error of the opposite-helicity Gaussian beams.
double circular_pair_error(double kA, double delta_z, double delta_r, int nodes_per_axis = kDefaultNodesPerAxis);

/// Leading-order value delta_r^2 / (4 kA^2).
double circular_pair_error_closed_form(double kA, double delta_r);

/// Helstrom error of the same pair seen by an observer moving with speed v along +z.
double doppler_error(double kA, double delta_z, double delta_r, double v, int nodes_per_axis = kDefaultNodesPerAxis);

/// (1 + v) / (1 - v)
double doppler_factor(double v);

struct PhotonSweepOptions {
  int nodes_per_axis = kDefaultNodesPerAxis;
  /// Threshold on the relative change of p_error between n and 2n nodes per axis.
  double tolerance = 1e-6;
  int workers = 1;
};

struct PhotonSweepRow {
  double kA = 0.0;
  double delta_r = 0.0;
  double delta_z = 0.0;
  double v = 0.0;
  std::optional<double> p_error;
  double p_error_closed_form = 0.0;
  std::size_t grid_nodes = 0;
  bool converged = false;
  std::string error;
};

/// One row per (delta_r, v), delta_r-major, in input order.
std::vector<PhotonSweepRow> photon_sweep(double kA, double delta_z, std::span<const double> delta_rs,
                                         std::span<const double> vs, const PhotonSweepOptions& options = {});

}  // namespace relqi
