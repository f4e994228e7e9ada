#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "relqi/spin_half.hpp"

using namespace relqi;

namespace {

constexpr double kPi = std::numbers::pi;

// tau by a plain loop over the packet's own arrays.
Mat2c direct_sum_tau(const SpinorPacket& psi) {
  Mat2c tau = Mat2c::Zero();
  for (std::size_t i = 0; i < psi.grid()->size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const Complex a = psi.up()(k);
    const Complex b = psi.down()(k);
    const double w = psi.grid()->weight(i);
    tau(0, 0) += w * a * std::conj(a);
    tau(0, 1) += w * a * std::conj(b);
    tau(1, 0) += w * b * std::conj(a);
    tau(1, 1) += w * b * std::conj(b);
  }
  return tau;
}

// (delta/m) (1 - sqrt(1 - b^2)) / b evaluated directly.
double gamma_oracle(double dm, double b) { return dm * (1.0 - std::sqrt(1.0 - b * b)) / b; }

}  // namespace

TEST_CASE("Gaussian spin-up packet") {
  const SpinorPacket psi = gaussian_spin_up(0.3, 1.0, 10);
  CHECK(psi.norm_squared() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(psi.down().cwiseAbs().maxCoeff() == 0.0);
  const DensityMatrix tau = reduced_spin_density(psi);
  CHECK(std::abs(tau(0, 0) - 1.0) < 1e-10);
  CHECK(std::abs(tau(1, 1)) < 1e-10);
  CHECK(entropy(tau) < 1e-9);
}

TEST_CASE("product packets reduce to the spinor projector") {
  const Eigen::Vector2cd s = Eigen::Vector2cd(0.6, Complex(0.0, 0.8));
  const DensityMatrix tau = reduced_spin_density(gaussian_spinor(0.5, 2.0, s, 8));
  CHECK((tau.matrix() - s * s.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("equal mixture of disjoint packets with orthogonal spins") {
  // Two well separated Gaussians, one spin up and one spin down.
  const GaussianSpec a{Vec3(-20.0, 0.0, 0.0), Vec3::Constant(0.5)};
  const GaussianSpec b{Vec3(20.0, 0.0, 0.0), Vec3::Constant(0.5)};
  const GridPtr ga = gauss_grid(a, 8, MeasureConvention::Plain, 1.0);
  const GridPtr gb = gauss_grid(b, 8, MeasureConvention::Plain, 1.0);
  std::vector<Vec3> nodes = ga->nodes();
  nodes.insert(nodes.end(), gb->nodes().begin(), gb->nodes().end());
  std::vector<double> weights = ga->weights();
  weights.insert(weights.end(), gb->weights().begin(), gb->weights().end());
  auto grid = std::make_shared<const MomentumGrid>(nodes, weights, MeasureConvention::Plain, 1.0);
  const double na = plain_gaussian_normalization(a) / std::sqrt(2.0);
  VecXc up = VecXc::Zero(1024);
  VecXc down = VecXc::Zero(1024);
  for (std::size_t i = 0; i < 512; ++i) {
    up(static_cast<Eigen::Index>(i)) = na * a.amplitude(nodes[i]);
    down(static_cast<Eigen::Index>(512 + i)) = na * b.amplitude(nodes[512 + i]);
  }
  const SpinorPacket psi(grid, up, down, 1.0);
  CHECK((reduced_spin_density(psi).matrix() - 0.5 * Mat2c::Identity()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("identity boost leaves the packet unchanged") {
  const SpinorPacket psi = gaussian_spin_up(0.7, 1.0, 6);
  const SpinorPacket out = boost_packet(LorentzTransform::identity(), psi);
  CHECK((out.up() - psi.up()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((out.down() - psi.down()).cwiseAbs().maxCoeff() < 1e-10);
  for (std::size_t i = 0; i < psi.grid()->size(); ++i) {
    CHECK((out.grid()->node(i) - psi.grid()->node(i)).norm() < 1e-10);
    CHECK(std::abs(out.grid()->weight(i) - psi.grid()->weight(i)) < 1e-10 * psi.grid()->weight(i));
  }
}

TEST_CASE("boost conserves the norm") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(0.0, 0.99);
  const SpinorPacket psi = gaussian_spinor(0.8, 1.0, Eigen::Vector2cd(1.0, Complex(0.5, -0.2)), 8);
  for (int t = 0; t < 10; ++t) {
    const Vec3 b = Vec3(n(rng), n(rng), n(rng)).normalized() * u(rng);
    CHECK(std::abs(boost_packet(boost_from_velocity(b), psi).norm_squared() - 1.0) < 1e-8);
  }
}

TEST_CASE("sharp packet from rest keeps its spin") {
  const SpinorPacket psi = gaussian_spin_up(1e-4, 1.0, 8);
  const DensityMatrix tau = reduced_spin_density(boost_packet(observer_boost(0.9, kPi / 2), psi));
  CHECK(std::abs(tau(0, 0) - 1.0) < 1e-6);
}

TEST_CASE("reduced density of a boosted packet matches the direct-sum oracle") {
  const double beta = beta_for_gamma(0.5, 1.0);
  const SpinorPacket out = boost_packet(observer_boost(beta, kPi / 2), gaussian_spin_up(1.0, 1.0, 16));
  CHECK((reduced_spin_density(out).matrix() - direct_sum_tau(out)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("composition of boosts is consistent") {
  const LorentzTransform l1 = boost_from_velocity(Vec3(0.3, 0.0, 0.4));
  const LorentzTransform l2 = boost_from_velocity(Vec3(-0.2, 0.5, 0.1));
  const SpinorPacket psi = gaussian_spin_up(0.8, 1.0, 12);
  const double two_step = entropy(reduced_spin_density(boost_packet(l2, boost_packet(l1, psi))));
  const double one_step = entropy(reduced_spin_density(boost_packet(l2 * l1, psi)));
  CHECK(two_step > 1e-3);
  CHECK(std::abs(two_step - one_step) < 1e-8);
}

TEST_CASE("gamma parameter") {
  CHECK(gamma_parameter(0.2, 1.0, 0.0) == 0.0);
  CHECK(gamma_parameter(0.2, 1.0, 0.01) == doctest::Approx(0.001).epsilon(0.01));
  CHECK(gamma_parameter(1.0, 1.0, 0.6) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  for (double b : {0.1, 0.5, 0.9, 0.999})
    CHECK(gamma_parameter(0.7, 1.0, b) == doctest::Approx(gamma_oracle(0.7, b)).epsilon(1e-12));
  CHECK(gamma_parameter(0.5, 1.0, 0.5) < gamma_parameter(0.5, 1.0, 0.6));
  CHECK(gamma_parameter(0.5, 1.0, 0.5) < gamma_parameter(0.6, 1.0, 0.5));
  CHECK_THROWS_AS(gamma_parameter(1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("beta_for_gamma inverts the gamma parameter") {
  // With x = gamma m / delta: beta = 2x / (1 + x^2).
  for (double g : {0.001, 0.1, 0.25, 0.5, 0.9}) {
    const double x = g;
    CHECK(std::abs(beta_for_gamma(g, 1.0) - 2.0 * x / (1.0 + x * x)) < 1e-11);
  }
  CHECK(beta_for_gamma(0.5, 1.0) == doctest::Approx(0.8).epsilon(1e-11));
  CHECK(beta_for_gamma(0.0, 1.0) == 0.0);
  CHECK_THROWS_AS(beta_for_gamma(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(beta_for_gamma(0.5, 0.3), DomainError);
}

TEST_CASE("boosted pair error") {
  CHECK(boosted_pair_error(1.0, 1.0, 0.0, 0.3, 8) < 1e-9);
  const double beta = beta_for_gamma(0.25, 1.0);
  const double p = boosted_pair_error(1.0, 1.0, beta, kPi / 2, 12);
  CHECK(p > 0.0);
  CHECK(p < 0.5);
  // Exchanging the roles of the two packets changes nothing.
  const BoostedSpinPair pair = boosted_spin_pair(1.0, 1.0, beta, kPi / 2, 12);
  CHECK(std::abs(helstrom_error(pair.up, pair.down) - helstrom_error(pair.down, pair.up)) < 1e-10);
}

TEST_CASE("entropy vanishes in the sharp-momentum limit") {
  const double s1 = boosted_spin_entropy(0.3, 1.0, 0.8, kPi / 2, 16);
  const double s2 = boosted_spin_entropy(0.1, 1.0, 0.8, kPi / 2, 16);
  const double s3 = boosted_spin_entropy(0.03, 1.0, 0.8, kPi / 2, 16);
  CHECK(s1 > s2);
  CHECK(s2 > s3);
  CHECK(s3 > 0.0);
}

TEST_CASE("entropy sweep rows") {
  const std::vector<double> thetas{0.4, kPi - 0.4};
  const std::vector<double> gammas{0.0, 0.5, 1.5};
  SpinSweepOptions o;
  o.nodes_per_axis = 12;
  o.tolerance = 1e-3;
  const auto rows = entropy_sweep(thetas, gammas, o);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].theta == 0.4);
  CHECK(rows[1].gamma == 0.5);
  CHECK(*rows[0].entropy_bits < 1e-9);
  CHECK(rows[0].grid_nodes == 1728);
  CHECK(rows[1].converged);
  CHECK(std::abs(*rows[1].entropy_bits - *rows[4].entropy_bits) < 1e-8);
  // Gamma above delta/m is unreachable: per-row marker, no exception.
  CHECK_FALSE(rows[2].error.empty());
  CHECK_FALSE(rows[2].entropy_bits.has_value());
  o.workers = 3;
  const auto again = entropy_sweep(thetas, gammas, o);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(again[i].entropy_bits == rows[i].entropy_bits);
}
