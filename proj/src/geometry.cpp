#include "relqi/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace relqi {

namespace {

const Mat4& minkowski() {
  static const Mat4 eta = Eigen::Vector4d(1.0, -1.0, -1.0, -1.0).asDiagonal();
  return eta;
}

// Matrices built from products of many boosts accumulate error proportional to
// their entries, so tolerances scale with the largest element squared.
double scale_of(const Mat4& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

}  // namespace

FourVector FourVector::on_shell(const Vec3& p, double mass) {
  if (!(mass >= 0.0)) throw DomainError("negative mass");
  return {std::sqrt(mass * mass + p.squaredNorm()), p};
}

Eigen::Vector4d FourVector::to_vector() const {
  Eigen::Vector4d v;
  v << t, spatial;
  return v;
}

bool FourVector::is_on_shell(double mass, double rel_tol) const {
  if (!(t > 0.0)) return false;
  const double m2 = mass * mass;
  return std::abs(invariant_mass_squared() - m2) <= rel_tol * std::max(t * t, 1e-300);
}

LorentzTransform::LorentzTransform(const Mat4& m) : m_(m) {
  const double s = scale_of(m);
  if (metric_defect() > 1e-10 * s * s) throw DomainError("matrix does not preserve the Minkowski metric");
  if (m(0, 0) < 1.0 - 1e-10 * s) throw DomainError("transformation is not orthochronous");
  if (m.determinant() < 0.0) throw DomainError("transformation is not proper");
}

LorentzTransform LorentzTransform::inverse() const {
  return {minkowski() * m_.transpose() * minkowski(), Unchecked{}};
}

FourVector LorentzTransform::apply(const FourVector& p) const {
  return FourVector::from_vector(m_ * p.to_vector());
}

double LorentzTransform::metric_defect() const {
  return (m_.transpose() * minkowski() * m_ - minkowski()).cwiseAbs().maxCoeff();
}

LorentzTransform operator*(const LorentzTransform& a, const LorentzTransform& b) {
  return {a.m_ * b.m_, LorentzTransform::Unchecked{}};
}

Rotation::Rotation(const Mat3& m) : m_(m) {
  if ((m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw DomainError("matrix is not orthogonal");
  if (m.determinant() < 0.0) throw DomainError("matrix is an improper rotation");
}

Rotation Rotation::axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0)) throw DomainError("rotation axis has zero length");
  return {Eigen::AngleAxisd(angle, axis / n).toRotationMatrix(), Unchecked{}};
}

Rotation Rotation::inverse() const { return {m_.transpose(), Unchecked{}}; }

LorentzTransform Rotation::embed() const {
  Mat4 m = Mat4::Identity();
  m.bottomRightCorner<3, 3>() = m_;
  return {m, LorentzTransform::Unchecked{}};
}

Rotation operator*(const Rotation& a, const Rotation& b) { return {a.m_ * b.m_, Rotation::Unchecked{}}; }

SpinHalfUnitary::SpinHalfUnitary(const Mat2c& m) : m_(m) {
  if ((m.adjoint() * m - Mat2c::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw DomainError("matrix is not unitary");
}

LorentzTransform boost_from_velocity(const Vec3& beta) {
  const double b2 = beta.squaredNorm();
  if (!(b2 < (1.0 - 1e-12) * (1.0 - 1e-12))) throw DomainError("superluminal velocity");
  const double gamma = 1.0 / std::sqrt(1.0 - b2);
  Mat4 m = Mat4::Identity();
  m(0, 0) = gamma;
  m.block<1, 3>(0, 1) = gamma * beta.transpose();
  m.block<3, 1>(1, 0) = gamma * beta;
  if (b2 > 0.0) {
    // gamma - 1 = gamma^2 b^2 / (gamma + 1) avoids cancellation for small b.
    const double k = gamma * gamma / (gamma + 1.0);
    m.bottomRightCorner<3, 3>() += k * beta * beta.transpose();
  }
  return {m, LorentzTransform::Unchecked{}};
}

LorentzTransform observer_boost(double beta, double theta) {
  const Vec3 n(std::sin(theta), 0.0, std::cos(theta));
  return boost_from_velocity(-beta * n);
}

LorentzTransform standard_boost(const FourVector& p, double mass) {
  if (!(mass > 0.0)) throw DomainError("standard boost requires positive mass");
  if (!p.is_on_shell(mass)) throw DomainError("momentum is off shell");
  return boost_from_velocity(p.spatial / p.t);
}

Rotation wigner_rotation(const LorentzTransform& lambda, const FourVector& p, double mass) {
  const FourVector q = lambda.apply(p);
  // Transport can leave |t^2 - p^2 - m^2| at the 1e-16 * t^2 level; rebuild q
  // on shell from its spatial part before forming L(q).
  const FourVector q_shell = FourVector::on_shell(q.spatial, mass);
  const Mat4 w = standard_boost(q_shell, mass).inverse().matrix() * lambda.matrix() *
                 standard_boost(p, mass).matrix();
  const double s = scale_of(lambda.matrix()) * std::max(1.0, p.t / mass) * std::max(1.0, q.t / mass);
  if (std::abs(w(0, 0) - 1.0) > 1e-10 * s || w.block<3, 1>(1, 0).cwiseAbs().maxCoeff() > 1e-10 * s)
    throw DomainError("little-group element does not fix the time axis");
  Eigen::JacobiSVD<Mat3> svd(w.bottomRightCorner<3, 3>(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.matrixU() * svd.matrixV().transpose(), Rotation::Unchecked{}};
}

SpinHalfUnitary rotation_to_su2(const Rotation& rotation) {
  const Mat3& r = rotation.matrix();
  const double tr = r.trace();
  double w, x, y, z;
  if (tr > 0.0) {
    const double s = 2.0 * std::sqrt(1.0 + tr);
    w = 0.25 * s;
    x = (r(2, 1) - r(1, 2)) / s;
    y = (r(0, 2) - r(2, 0)) / s;
    z = (r(1, 0) - r(0, 1)) / s;
  } else if (r(0, 0) >= r(1, 1) && r(0, 0) >= r(2, 2)) {
    const double s = 2.0 * std::sqrt(std::max(0.0, 1.0 + r(0, 0) - r(1, 1) - r(2, 2)));
    w = (r(2, 1) - r(1, 2)) / s;
    x = 0.25 * s;
    y = (r(0, 1) + r(1, 0)) / s;
    z = (r(0, 2) + r(2, 0)) / s;
  } else if (r(1, 1) >= r(2, 2)) {
    const double s = 2.0 * std::sqrt(std::max(0.0, 1.0 + r(1, 1) - r(0, 0) - r(2, 2)));
    w = (r(0, 2) - r(2, 0)) / s;
    x = (r(0, 1) + r(1, 0)) / s;
    y = 0.25 * s;
    z = (r(1, 2) + r(2, 1)) / s;
  } else {
    const double s = 2.0 * std::sqrt(std::max(0.0, 1.0 + r(2, 2) - r(0, 0) - r(1, 1)));
    w = (r(1, 0) - r(0, 1)) / s;
    x = (r(0, 2) + r(2, 0)) / s;
    y = (r(1, 2) + r(2, 1)) / s;
    z = 0.25 * s;
  }
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  w /= n, x /= n, y /= n, z /= n;

  if (std::abs(w) < 1e-14) {
    w = 0.0;
    const std::array<double, 3> v{x, y, z};
    const auto big = std::max_element(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (*big < 0.0) x = -x, y = -y, z = -z;
  } else if (w < 0.0) {
    w = -w, x = -x, y = -y, z = -z;
  }

  const Complex i(0.0, 1.0);
  Mat2c u = w * Mat2c::Identity() - i * (x * pauli(0) + y * pauli(1) + z * pauli(2));
  return SpinHalfUnitary(u);
}

Rotation standard_rotation(const Vec3& khat) {
  if (std::abs(khat.norm() - 1.0) > 1e-10) throw DomainError("direction is not a unit vector");
  const Vec3 k = khat.normalized();
  const double c = k.z();
  const Vec3 v = Vec3::UnitZ().cross(k);  // |v| = sin(theta)
  const double s = v.norm();
  if (s < 1e-12) {
    if (c > 0.0) return Rotation::identity();
    Mat3 m = Mat3::Zero();
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    m(2, 2) = -1.0;
    return {m, Rotation::Unchecked{}};
  }
  if (c < 0.0) return Rotation::axis_angle(v, std::atan2(s, c));
  // Rodrigues: R = I + [v]x + [v]x^2 / (1 + c).
  Mat3 vx;
  vx << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return {Mat3::Identity() + vx + vx * vx / (1.0 + c), Rotation::Unchecked{}};
}

const Mat2c& pauli(int i) {
  static const std::array<Mat2c, 3> sigma = [] {
    std::array<Mat2c, 3> s;
    const Complex I(0.0, 1.0);
    s[0] << 0.0, 1.0, 1.0, 0.0;
    s[1] << 0.0, -I, I, 0.0;
    s[2] << 1.0, 0.0, 0.0, -1.0;
    return s;
  }();
  return sigma.at(static_cast<std::size_t>(i));
}

}  // namespace relqi
