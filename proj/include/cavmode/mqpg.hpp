#ifndef CAVMODE_MQPG_HPP
#define CAVMODE_MQPG_HPP

#include "cavmode/csfg.hpp"
#include "cavmode/pump.hpp"

namespace cavmode {

// Multi-output QPG: one cavity resonance per pump tone, spaced by the FSR.
// Valid in the single-resonance-per-tone regime (gamma << FSR, tone
// bandwidth < FSR); each resonance then acts as an independent gate.
struct MqpgConfig {
  FrequencyGrid grid;
  double gamma = 0;
  double eta = 0;
  double fsr = 0;
  PumpSet pumps;
};

void validate(const MqpgConfig& c);

struct MultiportUnitary {
  Eigen::MatrixXcd matrix; // M x N, U_ml = -beta_m(omega_{-l})
  std::vector<int> resonance_labels;
  bool complete = false; // M == N: a square unitary rather than a row isometry
  double row_orthonormality_residual = 0; // ||U U^+ - I_M||_F
};

// Frequency-bin multiport in the full-conversion limit eta = sqrt(gamma T) -> 0.
MultiportUnitary build_multiport(const MqpgConfig& config);

struct CrossTermReport {
  double max_residual = 0;    // worst |<beta_m, beta_k>| over m != k
  Eigen::MatrixXd overlaps;   // all pairwise |<beta_m, beta_k>|
  bool valid = false;         // max_residual < 1e-8
};

// Residual pump overlaps that would couple distinct resonances; the
// decoupled (mode-by-mode) treatment needs them to vanish.
CrossTermReport cross_term_check(const MqpgConfig& config);

// Metrics of resonance m treated as a single-resonance gate with pump beta_m.
QpgMetrics per_resonance_metrics(const MqpgConfig& config, int m,
                                 const KernelOptions& opts = {});

} // namespace cavmode

#endif // CAVMODE_MQPG_HPP
