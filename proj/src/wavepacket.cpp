#include "relqi/wavepacket.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "relqi/summation.hpp"

namespace relqi {

std::string_view to_string(MeasureConvention c) {
  return c == MeasureConvention::Plain ? "plain" : "invariant";
}

MeasureConvention parse_measure_convention(std::string_view name) {
  if (name == "plain") return MeasureConvention::Plain;
  if (name == "invariant") return MeasureConvention::Invariant;
  throw DomainError("unknown measure convention '" + std::string(name) + "'");
}

GaussianSpec GaussianSpec::isotropic(double width, const Vec3& center) {
  GaussianSpec s{center, Vec3::Constant(width)};
  s.validate();
  return s;
}

GaussianSpec GaussianSpec::beam(double k_mean, double delta_z, double delta_r) {
  GaussianSpec s{Vec3(0.0, 0.0, k_mean), Vec3(delta_r, delta_r, delta_z)};
  s.validate();
  return s;
}

void GaussianSpec::validate() const {
  for (int a = 0; a < 3; ++a)
    if (!(widths(a) > 0.0) || !std::isfinite(widths(a))) throw DomainError("Gaussian widths must be positive");
  if (!center.allFinite()) throw DomainError("Gaussian center must be finite");
}

double GaussianSpec::amplitude(const Vec3& k) const {
  const Vec3 u = (k - center).cwiseQuotient(widths);
  return std::exp(-0.5 * u.squaredNorm());
}

GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) throw DomainError("Gauss-Hermite rule needs at least one node");
  GaussHermiteRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  if (n == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = std::sqrt(std::numbers::pi);
    return rule;
  }

  // Golub-Welsch for starting values, then Newton on the orthonormal recurrence.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi, Eigen::EigenvaluesOnly);

  // Orthonormal Hermite polynomials w.r.t. exp(-x^2): returns (p_n, p_{n-1}).
  auto eval = [n](double x) {
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25);
    for (int k = 0; k < n; ++k) {
      const double next = x * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
      prev = cur;
      cur = next;
    }
    return std::pair{cur, prev};
  };

  for (int i = 0; i < n; ++i) {
    double x = es.eigenvalues()(i);
    for (int it = 0; it < 10; ++it) {
      const auto [pn, pn1] = eval(x);
      const double dx = pn / (std::sqrt(2.0 * n) * pn1);
      x -= dx;
      if (std::abs(dx) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    const auto [pn, pn1] = eval(x);
    (void)pn;
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 1.0 / (n * pn1 * pn1);
  }

  // Exact reflection symmetry.
  for (int i = 0; i < n / 2; ++i) {
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    const double x = 0.5 * (rule.nodes[hi] - rule.nodes[lo]);
    const double w = 0.5 * (rule.weights[hi] + rule.weights[lo]);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = rule.weights[hi] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

MomentumGrid::MomentumGrid(std::vector<Vec3> nodes, std::vector<double> weights, MeasureConvention convention,
                           double mass, std::optional<GaussianSpec> target)
    : nodes_(std::move(nodes)),
      weights_(std::move(weights)),
      convention_(convention),
      mass_(mass),
      target_(std::move(target)) {
  if (nodes_.size() != weights_.size()) throw DomainError("grid node and weight counts differ");
  if (nodes_.empty()) throw DomainError("grid has no nodes");
  if (!(mass_ >= 0.0) || !std::isfinite(mass_)) throw DomainError("grid mass must be finite and non-negative");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) throw DomainError("grid weights must be positive and finite");
    if (!nodes_[i].allFinite()) throw DomainError("grid node is not finite");
  }
}

double MomentumGrid::energy(std::size_t i) const { return std::sqrt(mass_ * mass_ + nodes_[i].squaredNorm()); }

bool MomentumGrid::same_as(const MomentumGrid& other) const {
  if (this == &other) return true;
  if (convention_ != other.convention_ || mass_ != other.mass_ || size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i)
    if (weights_[i] != other.weights_[i] || nodes_[i] != other.nodes_[i]) return false;
  return true;
}

GridPtr gauss_grid(const GaussianSpec& spec, int nodes_per_axis, MeasureConvention convention, double mass) {
  spec.validate();
  const GaussHermiteRule rule = gauss_hermite(nodes_per_axis);
  const auto n = static_cast<std::size_t>(nodes_per_axis);

  // Per-axis plain-measure weights: width * w_i * exp(x_i^2).
  std::array<std::vector<double>, 3> axis_weights;
  std::array<std::vector<double>, 3> axis_nodes;
  for (int a = 0; a < 3; ++a) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = rule.nodes[i];
      axis_nodes[a].push_back(spec.center(a) + spec.widths(a) * x);
      axis_weights[a].push_back(spec.widths(a) * std::exp(std::log(rule.weights[i]) + x * x));
    }
  }

  const double invariant_factor = 1.0 / (std::pow(2.0 * std::numbers::pi, 3) * 2.0);
  std::vector<Vec3> nodes;
  std::vector<double> weights;
  nodes.reserve(n * n * n);
  weights.reserve(n * n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) {
        const Vec3 k(axis_nodes[0][i], axis_nodes[1][j], axis_nodes[2][l]);
        double w = axis_weights[0][i] * axis_weights[1][j] * axis_weights[2][l];
        if (convention == MeasureConvention::Invariant) {
          const double k0 = std::sqrt(mass * mass + k.squaredNorm());
          if (!(k0 > 0.0)) throw DomainError("invariant measure is singular at a grid node (k0 = 0)");
          w *= invariant_factor / k0;
        }
        nodes.push_back(k);
        weights.push_back(w);
      }
  return std::make_shared<const MomentumGrid>(std::move(nodes), std::move(weights), convention, mass, spec);
}

GridFunction sample_gaussian(const GridPtr& grid, const GaussianSpec& spec) {
  VecXc v(static_cast<Eigen::Index>(grid->size()));
  for (std::size_t i = 0; i < grid->size(); ++i) v(static_cast<Eigen::Index>(i)) = spec.amplitude(grid->node(i));
  return {grid, v};
}

void require_same_grid(const MomentumGrid& a, const MomentumGrid& b) {
  if (a.convention() != b.convention()) throw DomainError("measure convention mismatch between grids");
  if (!a.same_as(b)) throw DomainError("grid mismatch");
}

Complex inner_product(const GridFunction& f, const GridFunction& g) {
  if (!f.grid || !g.grid) throw DomainError("grid function without a grid");
  require_same_grid(*f.grid, *g.grid);
  const auto& grid = *f.grid;
  if (f.values.size() != static_cast<Eigen::Index>(grid.size()) || g.values.size() != f.values.size())
    throw DomainError("amplitude count does not match grid size");
  return pairwise_sum<Complex>(
      0, grid.size(),
      [&](std::size_t i) {
        const auto k = static_cast<Eigen::Index>(i);
        return grid.weight(i) * std::conj(f.values(k)) * g.values(k);
      },
      Complex(0.0));
}

double norm(const GridFunction& f) { return std::sqrt(std::max(0.0, inner_product(f, f).real())); }

GridFunction normalize(const GridFunction& f) {
  const double n = norm(f);
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("cannot normalize a function with zero norm");
  return {f.grid, f.values / n};
}

double plain_gaussian_normalization(const GaussianSpec& spec) {
  spec.validate();
  return 1.0 / std::sqrt(std::pow(std::numbers::pi, 1.5) * spec.widths.prod());
}

std::string grid_config_to_json(const GridConfig& config) {
  const auto& s = config.spec;
  nlohmann::json j = {
      {"center", {s.center.x(), s.center.y(), s.center.z()}},
      {"widths", {s.widths.x(), s.widths.y(), s.widths.z()}},
      {"nodes_per_axis", config.nodes_per_axis},
      {"convention", std::string(to_string(config.convention))},
      {"mass", config.mass},
  };
  return j.dump();
}

GridConfig grid_config_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("grid config: ") + e.what());
  }
  auto vec3 = [&](const char* key, const Vec3& fallback) {
    if (!j.contains(key)) return fallback;
    const auto& a = j.at(key);
    if (!a.is_array() || a.size() != 3) throw DomainError(std::string("grid config: '") + key + "' must be a 3-array");
    return Vec3(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
  };
  GridConfig c;
  c.spec.center = vec3("center", Vec3::Zero());
  c.spec.widths = vec3("widths", Vec3::Ones());
  c.nodes_per_axis = j.value("nodes_per_axis", kDefaultNodesPerAxis);
  c.convention = parse_measure_convention(j.value("convention", std::string("plain")));
  c.mass = j.value("mass", 0.0);
  c.spec.validate();
  if (c.nodes_per_axis < 1) throw DomainError("grid config: 'nodes_per_axis' must be >= 1");
  return c;
}

}  // namespace relqi
