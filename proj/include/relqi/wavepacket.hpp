#pragma once

// Momentum-space quadrature. Grids are tensor-product Gauss-Hermite rules
// mapped onto a Gaussian's center and widths, with the momentum measure folded
// into the weights:
//
//   Plain:      sum_i w_i g(k_i) ~ int d^3k g(k)
//   Invariant:  sum_i w_i g(k_i) ~ int d^3k / ((2 pi)^3 2 k0) g(k),  k0 = sqrt(m^2 + k^2)
//
// A rule with n nodes per axis integrates exp(-sum_a (k_a - c_a)^2 / w_a^2)
// times any polynomial of degree <= 2n - 1 per axis exactly (Plain measure).

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relqi/geometry.hpp"
#include "relqi/qmatrix.hpp"

namespace relqi {

enum class MeasureConvention { Plain, Invariant };

std::string_view to_string(MeasureConvention c);
MeasureConvention parse_measure_convention(std::string_view name);

/// Gaussian amplitude profile exp(-sum_a (k_a - center_a)^2 / (2 widths_a^2)).
/// The probability density |f|^2 therefore has standard deviation widths_a / sqrt(2).
struct GaussianSpec {
  Vec3 center = Vec3::Zero();
  Vec3 widths = Vec3::Ones();

  static GaussianSpec isotropic(double width, const Vec3& center = Vec3::Zero());
  /// Beam along +z: center (0, 0, k_mean), widths (delta_r, delta_r, delta_z).
  static GaussianSpec beam(double k_mean, double delta_z, double delta_r);

  /// Throws DomainError for non-positive or non-finite widths.
  void validate() const;

  /// delta_z / delta_r for beams (recorded, never enforced).
  [[nodiscard]] double aspect_ratio() const { return widths.z() / widths.x(); }

  [[nodiscard]] double amplitude(const Vec3& k) const;
};

/// One-dimensional Gauss-Hermite rule for the weight exp(-x^2). Nodes ascending
/// and exactly antisymmetric; weights symmetric.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussHermiteRule gauss_hermite(int n);

class MomentumGrid {
 public:
  /// Validates sizes and weight positivity. `mass` is 0 for photons.
  MomentumGrid(std::vector<Vec3> nodes, std::vector<double> weights, MeasureConvention convention,
               double mass, std::optional<GaussianSpec> target = std::nullopt);

  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] const std::vector<Vec3>& nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
  [[nodiscard]] const Vec3& node(std::size_t i) const { return nodes_[i]; }
  [[nodiscard]] double weight(std::size_t i) const { return weights_[i]; }
  [[nodiscard]] MeasureConvention convention() const { return convention_; }
  [[nodiscard]] double mass() const { return mass_; }
  [[nodiscard]] const std::optional<GaussianSpec>& target() const { return target_; }

  /// sqrt(m^2 + |k_i|^2)
  [[nodiscard]] double energy(std::size_t i) const;
  [[nodiscard]] FourVector momentum(std::size_t i) const { return {energy(i), nodes_[i]}; }

  /// Same convention, mass and node/weight values.
  [[nodiscard]] bool same_as(const MomentumGrid& other) const;

 private:
  std::vector<Vec3> nodes_;
  std::vector<double> weights_;
  MeasureConvention convention_;
  double mass_;
  std::optional<GaussianSpec> target_;
};

using GridPtr = std::shared_ptr<const MomentumGrid>;

/// Tensor Gauss-Hermite grid targeted at `spec`. Node order: x slowest, z fastest.
GridPtr gauss_grid(const GaussianSpec& spec, int nodes_per_axis, MeasureConvention convention,
                   double mass = 0.0);

/// Complex amplitudes sampled on a grid.
struct GridFunction {
  GridPtr grid;
  VecXc values;
};

/// The raw (unnormalized) Gaussian sampled at every node.
GridFunction sample_gaussian(const GridPtr& grid, const GaussianSpec& spec);

/// sum_i w_i conj(f_i) g_i. Throws DomainError when grids differ, with a
/// dedicated message when only the measure conventions disagree.
Complex inner_product(const GridFunction& f, const GridFunction& g);

double norm(const GridFunction& f);

/// f / norm(f); throws DomainError for a zero function.
GridFunction normalize(const GridFunction& f);

/// Closed-form N making N * exp(-sum (k-c)^2 / 2 w^2) unit-normalized under the
/// Plain measure: N = (pi^{3/2} w_x w_y w_z)^{-1/2}.
double plain_gaussian_normalization(const GaussianSpec& spec);

/// Throws DomainError unless both grids describe the same nodes and measure.
void require_same_grid(const MomentumGrid& a, const MomentumGrid& b);

/// Default nodes per axis for single-particle grids.
inline constexpr int kDefaultNodesPerAxis = 24;

/// Serializable grid description.
struct GridConfig {
  GaussianSpec spec;
  int nodes_per_axis = kDefaultNodesPerAxis;
  MeasureConvention convention = MeasureConvention::Plain;
  double mass = 0.0;
};

/// {"center": [..], "widths": [..], "nodes_per_axis": n, "convention": "plain"|"invariant", "mass": m}
std::string grid_config_to_json(const GridConfig& config);
GridConfig grid_config_from_json(std::string_view text);

inline GridPtr build_grid(const GridConfig& c) {
  return gauss_grid(c.spec, c.nodes_per_axis, c.convention, c.mass);
}

}  // namespace relqi
