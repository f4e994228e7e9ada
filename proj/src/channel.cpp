#include "relqi/channel.hpp"

#include <cmath>

#include <json.hpp>

#include "relqi/photon.hpp"
#include "relqi/spin_half.hpp"

namespace relqi {

namespace {

constexpr double kConsistencyBeta = 0.6;
// (1 - sqrt(1 - 0.36)) / 0.6
constexpr double kConsistencyFactor = 1.0 / 3.0;

}  // namespace

QubitChannel decoherence_channel(const BoostChannelSpec& spec) {
  const double g = spec.gamma;
  if (!(g >= 0.0)) throw DomainError("gamma must be non-negative");
  if (g > 2.0) throw DomainError("gamma > 2: coefficient 1 - gamma^2/4 is negative");
  const double a = std::sqrt(1.0 - g * g / 4.0);
  const double b = g / std::sqrt(8.0);
  return QubitChannel::from_kraus({a * Mat2c::Identity(), b * pauli(0), b * pauli(1)});
}

ChannelCertificate certify(const QubitChannel& channel) {
  const CpCertificate cp = is_completely_positive(channel);
  return {cp.completely_positive, channel.is_trace_preserving(1e-12), cp.min_choi_eigenvalue};
}

ChannelCertificate certify(const BoostChannelSpec& spec) { return certify(decoherence_channel(spec)); }

ConsistencyReport consistency_check(const BoostChannelSpec& spec, int nodes_per_axis) {
  ConsistencyReport r;
  r.gamma = spec.gamma;
  r.theta = spec.theta;
  Mat2c up = Mat2c::Zero();
  up(0, 0) = 1.0;
  r.channel_state = decoherence_channel(spec).apply(up);
  if (spec.gamma == 0.0) {
    r.boosted_state = up;
    return r;
  }
  r.beta = kConsistencyBeta;
  r.delta_over_m = spec.gamma / kConsistencyFactor;
  const double mass = 1.0;
  const LorentzTransform lambda = observer_boost(r.beta, spec.theta);
  const DensityMatrix boosted =
      reduced_spin_density(boost_packet(lambda, gaussian_spin_up(r.delta_over_m * mass, mass, nodes_per_axis)));
  r.boosted_state = boosted.matrix();
  r.trace_distance = trace_distance(DensityMatrix(r.channel_state), boosted);
  return r;
}

WitnessReport non_cp_witness(double v, const GaussianSpec& beam, int nodes_per_axis, std::uint64_t audit_seed) {
  beam.validate();
  if (beam.center.head<2>().norm() != 0.0 || beam.widths.x() != beam.widths.y())
    throw DomainError("witness beam must be centered on the z axis with equal transverse widths");
  const double kA = beam.center.z();
  const double dz = beam.widths.z();
  const double dr = beam.widths.x();
  WitnessReport r;
  r.v = v;
  r.pe_before = circular_pair_error(kA, dz, dr, nodes_per_axis);
  r.pe_after = doppler_error(kA, dz, dr, v, nodes_per_axis);
  r.ratio = r.pe_after / r.pe_before;
  r.closed_form_ratio = doppler_factor(v);
  r.audit = audit_cp_monotonicity(3, 200, audit_seed);
  if (r.pe_after > r.pe_before + kWitnessTolerance && r.audit.violations == 0) r.verdict = kNonCpVerdict;
  return r;
}

std::string channel_report_json(const BoostChannelSpec& spec, int nodes_per_axis) {
  const QubitChannel ch = decoherence_channel(spec);
  const ChannelCertificate cert = certify(ch);
  const ConsistencyReport cons = consistency_check(spec, nodes_per_axis);
  const DensityMatrix up = DensityMatrix::pure(Eigen::Vector2cd(1.0, 0.0));
  const DensityMatrix down = DensityMatrix::pure(Eigen::Vector2cd(0.0, 1.0));
  const double before = helstrom_error(up, down);
  const double after = helstrom_error(apply_channel(ch, up), apply_channel(ch, down));
  nlohmann::json j = {
      {"gamma", spec.gamma},
      {"theta", spec.theta},
      {"is_cp", cert.is_cp},
      {"is_tp", cert.is_tp},
      {"min_choi_eig", cert.min_choi_eigenvalue},
      {"trace_distance", cons.trace_distance},
      {"pe_before", before},
      {"pe_after", after},
      {"verdict", nullptr},
  };
  return j.dump(2);
}

std::string witness_report_json(const WitnessReport& r) {
  nlohmann::json j = {
      {"v", r.v},
      {"pe_before", r.pe_before},
      {"pe_after", r.pe_after},
      {"ratio", r.ratio},
      {"closed_form_ratio", r.closed_form_ratio},
      {"cp_audit_trials", r.audit.trials},
      {"cp_audit_violations", r.audit.violations},
      {"cp_audit_worst_margin", r.audit.worst_margin},
  };
  j["verdict"] = r.verdict.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.verdict);
  return j.dump(2);
}

}  // namespace relqi
