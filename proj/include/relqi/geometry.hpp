#pragma once

// Special-relativistic kinematics: four-vectors, proper orthochronous Lorentz
// transformations, rotations, and the Wigner (little-group) rotation that a
// spin-1/2 particle picks up under a boost.
//
// Units: c = hbar = 1. Metric signature (+,-,-,-).

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace relqi {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Complex = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;

/// Raised whenever an argument lies outside the mathematical domain of an
/// operation (superluminal speed, off-shell momentum, non-unit direction, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct FourVector {
  double t = 0.0;
  Vec3 spatial = Vec3::Zero();

  FourVector() = default;
  FourVector(double t_, const Vec3& s) : t(t_), spatial(s) {}

  /// (sqrt(m^2 + |p|^2), p).
  static FourVector on_shell(const Vec3& p, double mass);

  static FourVector from_vector(const Eigen::Vector4d& v) { return {v(0), v.tail<3>()}; }
  [[nodiscard]] Eigen::Vector4d to_vector() const;

  /// t^2 - |spatial|^2
  [[nodiscard]] double invariant_mass_squared() const { return t * t - spatial.squaredNorm(); }

  /// True when t > 0 and t^2 - |p|^2 = m^2 to relative `rel_tol`.
  [[nodiscard]] bool is_on_shell(double mass, double rel_tol = 1e-10) const;
};

class Rotation;

/// A proper orthochronous Lorentz transformation stored as a 4x4 matrix acting
/// on column four-vectors (t, x, y, z).
class LorentzTransform {
 public:
  LorentzTransform() : m_(Mat4::Identity()) {}

  /// Validates metric preservation, det = +1 and m(0,0) >= 1.
  explicit LorentzTransform(const Mat4& m);

  static LorentzTransform identity() { return {}; }

  [[nodiscard]] const Mat4& matrix() const { return m_; }
  [[nodiscard]] double operator()(int row, int col) const { return m_(row, col); }

  /// eta * L^T * eta
  [[nodiscard]] LorentzTransform inverse() const;

  [[nodiscard]] FourVector apply(const FourVector& p) const;

  /// max |L^T eta L - eta|
  [[nodiscard]] double metric_defect() const;

  friend LorentzTransform operator*(const LorentzTransform& a, const LorentzTransform& b);

 private:
  struct Unchecked {};
  LorentzTransform(const Mat4& m, Unchecked) : m_(m) {}
  friend class Rotation;
  friend LorentzTransform boost_from_velocity(const Vec3& beta);

  Mat4 m_;
};

/// Proper rotation of 3-space.
class Rotation {
 public:
  Rotation() : m_(Mat3::Identity()) {}

  /// Validates R^T R = I and det R = +1 to 1e-10.
  explicit Rotation(const Mat3& m);

  static Rotation identity() { return {}; }

  /// Right-handed rotation by `angle` about `axis` (normalized internally).
  static Rotation axis_angle(const Vec3& axis, double angle);

  [[nodiscard]] const Mat3& matrix() const { return m_; }
  [[nodiscard]] Rotation inverse() const;
  [[nodiscard]] Vec3 apply(const Vec3& v) const { return m_ * v; }

  /// The rotation as a Lorentz transformation that fixes the time axis.
  [[nodiscard]] LorentzTransform embed() const;

  friend Rotation operator*(const Rotation& a, const Rotation& b);

 private:
  struct Unchecked {};
  Rotation(const Mat3& m, Unchecked) : m_(m) {}
  friend Rotation wigner_rotation(const LorentzTransform&, const FourVector&, double);
  friend Rotation standard_rotation(const Vec3&);

  Mat3 m_;
};

/// 2x2 unitary in the spin-1/2 representation.
class SpinHalfUnitary {
 public:
  SpinHalfUnitary() : m_(Mat2c::Identity()) {}
  explicit SpinHalfUnitary(const Mat2c& m);

  [[nodiscard]] const Mat2c& matrix() const { return m_; }

 private:
  Mat2c m_;
};

/// Pure boost that gives a body at rest the velocity `beta`.
LorentzTransform boost_from_velocity(const Vec3& beta);

/// Coordinate change to the frame of an observer moving with speed `beta` in the
/// x-z plane at polar angle `theta` from the z axis. Equivalent to
/// boost_from_velocity(-beta * (sin theta, 0, cos theta)).
LorentzTransform observer_boost(double beta, double theta);

/// Pure boost L(p) with L(p) (m,0,0,0) = p.
LorentzTransform standard_boost(const FourVector& p, double mass);

/// Little-group element W(L, p) = L(Lp)^-1 * L * L(p), returned as its spatial
/// block. The block is re-orthonormalized to remove round-off.
Rotation wigner_rotation(const LorentzTransform& lambda, const FourVector& p, double mass);

/// exp(-i theta n.sigma / 2) with theta in [0, pi]. At theta = pi the axis sign
/// is fixed so that its largest-magnitude component is positive.
SpinHalfUnitary rotation_to_su2(const Rotation& r);

/// R(khat): rotation about zhat x khat by arccos(khat_z), so that R zhat = khat.
/// Identity at +z; rotation by pi about x at -z.
Rotation standard_rotation(const Vec3& khat);

/// Pauli matrices sigma_x, sigma_y, sigma_z for index 0, 1, 2.
const Mat2c& pauli(int i);

}  // namespace relqi
