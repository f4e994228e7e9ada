#pragma once

// Effective qubit maps induced by boosts: the decoherence channel
//   rho' = rho (1 - G^2/4) + (sx rho sx + sy rho sy) G^2/8,
// its certification, its comparison with the boosted packet, and a witness
// that the photon Doppler pair map lies outside the completely positive maps.

#include <cstdint>
#include <string>

#include "relqi/qmatrix.hpp"
#include "relqi/wavepacket.hpp"

namespace relqi {

struct BoostChannelSpec {
  double gamma = 0.0;
  /// Boost angle; carried into reports.
  double theta = 0.0;
};

/// Kraus form {sqrt(1 - G^2/4) I, G/sqrt(8) sx, G/sqrt(8) sy}.
/// Throws DomainError for gamma < 0 or gamma > 2.
QubitChannel decoherence_channel(const BoostChannelSpec& spec);

struct ChannelCertificate {
  bool is_cp = false;
  bool is_tp = false;
  double min_choi_eigenvalue = 0.0;
};

ChannelCertificate certify(const QubitChannel& channel);
ChannelCertificate certify(const BoostChannelSpec& spec);

/// The boosted packet used for the comparison: beta = 0.6 and delta/m = 3 gamma,
/// which realizes the requested gamma.
struct ConsistencyReport {
  double gamma = 0.0;
  double theta = 0.0;
  double beta = 0.0;
  double delta_over_m = 0.0;
  Mat2c channel_state;
  Mat2c boosted_state;
  double trace_distance = 0.0;
};

/// Channel applied to the spin-up state vs the reduced state of the boosted
/// spin-up Gaussian at the same gamma and theta.
ConsistencyReport consistency_check(const BoostChannelSpec& spec, int nodes_per_axis = kDefaultNodesPerAxis);

inline constexpr double kWitnessTolerance = 1e-9;

struct WitnessReport {
  double v = 0.0;
  /// Alice's error for the opposite-helicity pair.
  double pe_before = 0.0;
  /// Error for the same pair seen by Bob.
  double pe_after = 0.0;
  double ratio = 0.0;
  double closed_form_ratio = 0.0;
  MonotonicityAudit audit;
  /// Non-empty when the witness fires.
  std::string verdict;
};

inline constexpr const char* kNonCpVerdict =
    "no CP map on the 3x3 polarization state space can realize this pair transformation";

/// For v > 0 the error grows from Alice to Bob, so the map carrying Bob's pair
/// back to Alice's pair lowers the Helstrom error. The verdict fires when
/// pe_after > pe_before + kWitnessTolerance and the random CP audit (200 qutrit
/// channels) finds no counterexample to monotonicity.
WitnessReport non_cp_witness(double v, const GaussianSpec& beam, int nodes_per_axis = kDefaultNodesPerAxis,
                             std::uint64_t audit_seed = 20030101);

/// {gamma, theta, is_cp, is_tp, min_choi_eig, trace_distance, pe_before, pe_after, verdict}
/// pe_before / pe_after: Helstrom error of the spin-up/spin-down pair before and after the channel.
std::string channel_report_json(const BoostChannelSpec& spec, int nodes_per_axis = kDefaultNodesPerAxis);

std::string witness_report_json(const WitnessReport& report);

}  // namespace relqi
