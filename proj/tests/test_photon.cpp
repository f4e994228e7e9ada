#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "relqi/photon.hpp"

using namespace relqi;

namespace {

const Complex kI(0.0, 1.0);
const double kS = 1.0 / std::numbers::sqrt2;

// Skew matrix [a]x with [a]x v = a x v.
Mat3c cross_matrix(const Vec3& a) {
  Mat3c m;
  m << 0.0, -a.z(), a.y(), a.z(), 0.0, -a.x(), -a.y(), a.x(), 0.0;
  return m;
}

// k x a without the conjugation Eigen applies to complex cross products.
Vec3c cross(const Vec3& k, const Vec3c& a) {
  return {k.y() * a.z() - k.z() * a.y(), k.z() * a.x() - k.x() * a.z(), k.x() * a.y() - k.y() * a.x()};
}

// Single-node packet at momentum k with polarization vector a.
PhotonPacket monochromatic(const Vec3& k, const Vec3c& a) {
  auto grid = std::make_shared<const MomentumGrid>(std::vector<Vec3>{k}, std::vector<double>{1.0},
                                                   MeasureConvention::Invariant, 0.0);
  return PhotonPacket::from_polarization(grid, VecXc::Ones(1), {a});
}

// Random transverse unit polarizations and a random normalized profile on a beam grid.
PhotonPacket random_packet(const GridPtr& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  std::vector<Vec3c> pol(grid->size());
  VecXc f(static_cast<Eigen::Index>(grid->size()));
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const Vec3 khat = grid->node(i).normalized();
    Vec3c v(Complex(n(rng), n(rng)), Complex(n(rng), n(rng)), Complex(n(rng), n(rng)));
    v -= khat.cast<Complex>() * khat.cast<Complex>().dot(v);
    pol[i] = v.normalized();
    f(static_cast<Eigen::Index>(i)) = Complex(n(rng), n(rng));
  }
  double nn = 0.0;
  for (std::size_t i = 0; i < grid->size(); ++i) nn += grid->weight(i) * std::norm(f(static_cast<Eigen::Index>(i)));
  return PhotonPacket::from_polarization(grid, f / std::sqrt(nn), pol);
}

GridPtr beam_grid(double kA, double dz, double dr, int n) {
  return gauss_grid(GaussianSpec::beam(kA, dz, dr), n, MeasureConvention::Invariant, 0.0);
}

}  // namespace

TEST_CASE("helicity vectors") {
  const auto [p, m] = helicity_vectors(Vec3::UnitZ());
  CHECK((p - Vec3c(kS, kI * kS, 0.0)).norm() < 1e-15);
  CHECK((m - Vec3c(kS, -kI * kS, 0.0)).norm() < 1e-15);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  for (int t = 0; t < 50; ++t) {
    const Vec3 k = Vec3(n(rng), n(rng), n(rng)).normalized();
    const auto [a, b] = helicity_vectors(k);
    CHECK(std::abs(a.dot(b)) < 1e-12);
    CHECK(std::abs(a.norm() - 1.0) < 1e-12);
    CHECK(std::abs(a.dot(k.cast<Complex>())) < 1e-12);
    CHECK(std::abs(b.dot(k.cast<Complex>())) < 1e-12);
    // Positive helicity: i k x eps+ = eps+.
    CHECK((kI * cross(k, a) - a).norm() < 1e-12);
  }
  // khat = x: standard rotation by pi/2 about y carries (1, i, 0) to (0, i, -1).
  const auto [px, mx] = helicity_vectors(Vec3::UnitX());
  CHECK((px - Vec3c(0.0, kI * kS, -kS)).norm() < 1e-12);
  CHECK((mx - Vec3c(0.0, -kI * kS, -kS)).norm() < 1e-12);
  CHECK_THROWS_AS(helicity_vectors(Vec3(0.0, 0.0, 0.5)), DomainError);
}

TEST_CASE("transversal decomposition") {
  const auto t1 = transversal_b(Vec3::UnitX(), Vec3::UnitZ());
  CHECK((t1.b - Vec3c(1.0, 0.0, 0.0)).norm() < 1e-15);
  CHECK(t1.x_long == 0.0);
  const Vec3 k = Vec3(1.0, 2.0, -0.5).normalized();
  const auto t2 = transversal_b(k, k);
  CHECK(t2.b.norm() < 1e-12);
  CHECK(std::abs(std::abs(t2.x_long) - 1.0) < 1e-12);
  const double th = std::numbers::pi / 4;
  const Vec3 k3(std::sin(th), 0.0, std::cos(th));
  const auto t3 = transversal_b(Vec3::UnitX(), k3);
  CHECK(t3.x_long == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
  CHECK(t3.b.norm() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));
  CHECK(std::sqrt(std::norm(t3.x_plus) + std::norm(t3.x_minus)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  for (int t = 0; t < 30; ++t) {
    const Vec3 d = Vec3(n(rng), n(rng), n(rng)).normalized();
    const Vec3 kk = Vec3(n(rng), n(rng), n(rng)).normalized();
    const auto r = transversal_b(d, kk);
    CHECK(std::abs(r.b.squaredNorm() + r.x_long * r.x_long - 1.0) < 1e-12);
    CHECK(std::abs(r.b.dot(kk.cast<Complex>())) < 1e-12);
  }
}

TEST_CASE("POVM on monochromatic states") {
  const PhotonPacket x = monochromatic(Vec3(0.0, 0.0, 5.0), Vec3c(1.0, 0.0, 0.0));
  const PolarizationPOVM povm = build_povm(x.grid());
  const Eigen::Vector3d px = povm.probabilities(x);
  CHECK((px - Eigen::Vector3d(1.0, 0.0, 0.0)).norm() < 1e-14);
  const PhotonPacket d = monochromatic(Vec3(0.0, 0.0, 5.0), Vec3c(kS, kS, 0.0));
  CHECK((build_povm(d.grid()).probabilities(d) - Eigen::Vector3d(0.5, 0.5, 0.0)).norm() < 1e-14);
  const DensityMatrix rho = effective_density(x);
  Mat3c expected = Mat3c::Zero();
  expected(0, 0) = 1.0;
  CHECK((rho.matrix() - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("POVM completeness and dual routes on random physical states") {
  std::mt19937_64 rng(3);
  const GridPtr grid = beam_grid(10.0, 0.5, 2.0, 4);
  const PolarizationPOVM povm = build_povm(grid);
  for (int t = 0; t < 50; ++t) {
    const PhotonPacket psi = random_packet(grid, rng);
    CHECK(povm.completeness_residual(psi) < 1e-10);
    const Mat3c a = povm_route_density(povm, psi);
    const Mat3c b = naive_density(psi);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((tomographic_density(povm, psi) - b).cwiseAbs().maxCoeff() < 1e-10);
    for (int m = 0; m < 3; ++m) CHECK(povm.probabilities(psi)(m) >= 0.0);
  }
  CHECK_THROWS_AS(build_povm(gauss_grid(GaussianSpec::beam(10.0, 0.5, 2.0), 3, MeasureConvention::Plain)), DomainError);
}

TEST_CASE("probabilities are invariant under global rotations") {
  std::mt19937_64 rng(4);
  const GridPtr grid = beam_grid(10.0, 0.5, 2.0, 4);
  const PhotonPacket psi = random_packet(grid, rng);
  const Rotation r = Rotation::axis_angle(Vec3(0.3, -1.0, 0.2), 0.8);
  const PhotonPacket rotated = rotate_photon_packet(r, psi);
  const PolarizationPOVM p0 = build_povm(grid);
  const PolarizationPOVM p1 = build_povm(rotated.grid());
  for (int m = 0; m < 3; ++m) {
    const Vec3c u = Vec3::Unit(m).cast<Complex>();
    const Vec3c ru = r.matrix().cast<Complex>() * u;
    CHECK(std::abs(p0.combination_probability(psi, u) - p1.combination_probability(rotated, ru)) < 1e-12);
  }
}

TEST_CASE("Gaussian beam") {
  const PhotonPacket psi = gaussian_beam(100.0, 0.1, 3.0, 1, 12);
  CHECK(psi.norm_squared() == doctest::Approx(1.0).epsilon(1e-8));
  Vec3 mean = Vec3::Zero();
  double theta2 = 0.0;
  for (std::size_t i = 0; i < psi.grid()->size(); ++i) {
    const Vec3 khat = psi.grid()->node(i).normalized();
    mean += psi.probability_weight(i) * khat;
    theta2 += psi.probability_weight(i) * std::pow(std::acos(khat.z()), 2);
    CHECK((psi.polarization(i) - helicity_vectors(khat).first).norm() < 1e-14);
  }
  CHECK((mean.normalized() - Vec3::UnitZ()).norm() < 1e-8);
  // <theta^2> ~ <kr^2>/kA^2 = dr^2/kA^2 for |f|^2 ~ exp(-kr^2/dr^2).
  CHECK(theta2 == doctest::Approx(9e-4).epsilon(0.02));
  CHECK_THROWS_AS(gaussian_beam(1.0, 0.5, 0.1, 1), DomainError);
  CHECK_THROWS_AS(gaussian_beam(10.0, 0.5, 0.1, 0), DomainError);
  CHECK(beam_warnings(10.0, 0.1, 5.0).size() == 1);
  CHECK(beam_warnings(100.0, 0.1, 1.0).empty());
}

TEST_CASE("effective density of circular beams") {
  const PhotonPacket plus = gaussian_beam(100.0, 0.1, 1.0, 1, 12);
  const PhotonPacket minus = gaussian_beam(100.0, 0.1, 1.0, -1, 12);
  const DensityMatrix rp = effective_density(plus);
  const DensityMatrix rm = effective_density(minus);
  // rho+ - rho- = i [<khat>]x with <khat> the |f|^2-weighted mean direction.
  Vec3 mean = Vec3::Zero();
  for (std::size_t i = 0; i < plus.grid()->size(); ++i)
    mean += plus.probability_weight(i) * plus.grid()->node(i).normalized();
  CHECK((rp.matrix() - rm.matrix() - kI * cross_matrix(mean)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(rp.eigenvalues().maxCoeff() < 1.0);
  // Narrow-beam limit: z row and column vanish.
  const DensityMatrix narrow = effective_density(gaussian_beam(1e4, 0.1, 1.0, 1, 8));
  for (int m = 0; m < 3; ++m) CHECK(std::abs(narrow(m, 2)) < 1e-4);
  CHECK(std::abs(narrow(0, 1) - Complex(0.0, -0.5)) < 1e-6);
}

TEST_CASE("circular pair error follows the leading-order law") {
  const double kA = 100.0;
  const double pe = circular_pair_error(kA, 0.1, 1.0, 16);
  CHECK(pe == doctest::Approx(2.5e-5).epsilon(0.1));
  // Closed-form oracle: P = (1 - |<khat>|) / 2.
  const PhotonPacket plus = gaussian_beam(kA, 0.1, 1.0, 1, 16);
  Vec3 mean = Vec3::Zero();
  for (std::size_t i = 0; i < plus.grid()->size(); ++i)
    mean += plus.probability_weight(i) * plus.grid()->node(i).normalized();
  CHECK(std::abs(pe - 0.5 * (1.0 - mean.norm())) < 1e-12);
  const double p1 = circular_pair_error(kA, 0.1, 3.0, 16);
  const double p2 = circular_pair_error(kA, 0.1, 1.0, 16);
  const double p3 = circular_pair_error(kA, 0.1, 0.3, 16);
  CHECK(p1 > p2);
  CHECK(p2 > p3);
  CHECK(p3 > 0.0);
}

TEST_CASE("orthogonality audit") {
  const PhotonPacket a = gaussian_beam(100.0, 0.1, 5.0, 1, 12);
  const PhotonPacket b = gaussian_beam(100.0, 0.1, 5.0, -1, 12);
  const double pe = orthogonality_audit(a, b);
  CHECK(pe > 0.0);
  CHECK(pe == doctest::Approx(circular_pair_error(100.0, 0.1, 5.0, 12)).epsilon(1e-12));
  CHECK(orthogonality_audit(a, a) == doctest::Approx(0.5));
  CHECK(circular_pair_error(100.0, 0.1, 0.01, 8) < 1e-6);
  CHECK_THROWS_AS(orthogonality_audit(a, gaussian_beam(100.0, 0.1, 4.0, -1, 12)), DomainError);
}

TEST_CASE("boosts keep polarizations transverse and reproduce the Doppler factor") {
  const PhotonPacket psi = gaussian_beam(100.0, 0.1, 2.0, 1, 8);
  const PhotonPacket moved = boost_photon_packet(boost_from_velocity(Vec3(0.3, -0.2, 0.5)), psi);
  for (std::size_t i = 0; i < moved.grid()->size(); ++i)
    CHECK(std::abs(moved.polarization(i).dot(moved.grid()->node(i).normalized().cast<Complex>())) < 1e-10);
  CHECK(moved.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(doppler_error(100.0, 0.1, 1.0, 0.0, 12) == doctest::Approx(circular_pair_error(100.0, 0.1, 1.0, 12)).epsilon(1e-12));
  const double base = circular_pair_error(100.0, 0.1, 1.0, 12);
  CHECK(doppler_error(100.0, 0.1, 1.0, 0.5, 12) / base == doctest::Approx(3.0).epsilon(0.05));
  CHECK(doppler_error(100.0, 0.1, 1.0, -0.5, 12) / base == doctest::Approx(1.0 / 3.0).epsilon(0.05));
  CHECK_THROWS_AS(doppler_error(100.0, 0.1, 1.0, 1.0, 8), DomainError);
}

TEST_CASE("photon sweep") {
  const std::vector<double> drs{1.0};
  const std::vector<double> vs{0.0, 0.5};
  PhotonSweepOptions o;
  o.nodes_per_axis = 8;
  o.tolerance = 1e-3;
  const auto rows = photon_sweep(100.0, 0.1, drs, vs, o);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].v == 0.5);
  CHECK(rows[1].p_error_closed_form == doctest::Approx(7.5e-5));
  CHECK(*rows[1].p_error == doctest::Approx(7.5e-5).epsilon(0.05));
  CHECK(rows[0].converged);
}
