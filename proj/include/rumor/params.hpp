#pragma once

namespace rumor {

/// Spreading probabilities, all expressed as fractions in [0,1].
struct SpreadParams {
  double p_ii = 0.0;   // probability of belonging to the initial seed
  double p_ip = 0.0;   // per-iteration, per-channel forwarding probability
  double p_usg = 0.0;  // probability of belonging to the always-forward group
};

}  // namespace rumor
