#include "cavmode/mqpg.hpp"
#include "cavmode/errors.hpp"

#include <cmath>

namespace cavmode {

void validate(const MqpgConfig& c) {
  if (!(c.gamma > 0)) throw ParameterError("MqpgConfig: gamma must be positive");
  if (c.eta < 0) throw ParameterError("MqpgConfig: eta must be >= 0");
  if (c.pumps.members.empty()) throw ParameterError("MqpgConfig: empty pump set");
  for (const auto& m : c.pumps.members) {
    if (!m.is_grid_based() || !(*m.grid == c.grid))
      throw ParameterError("MqpgConfig: every pump must live on the config grid");
    if (c.fsr > 0 && !(effective_bandwidth(m) < c.fsr))
      throw ParameterError("MqpgConfig: pump bandwidth exceeds the FSR");
  }
  if (c.fsr > 0 && !(c.gamma < 1e-2 * c.fsr))
    throw ParameterError(
        "MqpgConfig: gamma/FSR too large for the single-resonance-per-tone "
        "treatment (recommended gamma < 1e-2 FSR)");
}

MultiportUnitary build_multiport(const MqpgConfig& config) {
  validate(config);
  const double worst = config.pumps.max_cross_overlap();
  if (!(worst < 1e-8))
    throw ParameterError("build_multiport: pump envelopes not mutually orthogonal");

  const int n = config.grid.n_modes;
  const int m_count = static_cast<int>(config.pumps.members.size());

  MultiportUnitary u;
  u.matrix.resize(m_count, n);
  for (int m = 0; m < m_count; ++m) {
    const auto& pump = config.pumps.members[m];
    u.resonance_labels.push_back(m);
    for (int jl = 0; jl < n; ++jl) {
      const int l = config.grid.index_of(jl);
      // cyclic negation: the unpaired -N/2 bin is its own mirror mod N
      const int mirror = l == config.grid.index_min() ? l : -l;
      u.matrix(m, jl) = -pump.spectral_bin(mirror);
    }
  }
  u.complete = (m_count == n);
  u.row_orthonormality_residual =
      (u.matrix * u.matrix.adjoint() -
       Eigen::MatrixXcd::Identity(m_count, m_count))
          .norm();
  if (!(u.row_orthonormality_residual < 1e-8))
    throw NumericalError("build_multiport: row orthonormality residual " +
                         std::to_string(u.row_orthonormality_residual) +
                         " exceeds 1e-8");
  return u;
}

CrossTermReport cross_term_check(const MqpgConfig& config) {
  if (config.pumps.members.empty())
    throw ParameterError("cross_term_check: empty pump set");
  const int m_count = static_cast<int>(config.pumps.members.size());
  CrossTermReport r;
  r.overlaps = Eigen::MatrixXd::Zero(m_count, m_count);
  for (int a = 0; a < m_count; ++a)
    for (int b = 0; b < m_count; ++b) {
      if (a == b) continue;
      r.overlaps(a, b) = std::abs(
          temporal_overlap(config.pumps.members[a], config.pumps.members[b]));
      r.max_residual = std::max(r.max_residual, r.overlaps(a, b));
    }
  r.valid = r.max_residual < 1e-8;
  return r;
}

QpgMetrics per_resonance_metrics(const MqpgConfig& config, int m,
                                 const KernelOptions& opts) {
  validate(config);
  if (m < 0 || m >= static_cast<int>(config.pumps.members.size()))
    throw ParameterError("per_resonance_metrics: resonance index out of range");

  QpgParams params;
  params.grid = config.grid;
  params.gamma = config.gamma;
  params.eta = config.eta;
  params.pump = config.pumps.members[m];
  const TransferPair tp = kernel_transfer(params, opts);
  return qpg_metrics(tp, params.pump);
}

} // namespace cavmode
