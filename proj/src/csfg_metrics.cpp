#include "cavmode/csfg.hpp"
#include "cavmode/errors.hpp"

#include <cmath>

namespace cavmode {

QpgMetrics qpg_metrics(const TransferPair& tp, const PumpProfile& pump) {
  if (!pump.is_grid_based() || !(*pump.grid == tp.params.grid))
    throw ParameterError("qpg_metrics: pump must live on the transfer grid");
  if (pump.norm_mode != NormMode::TemporalUnit)
    throw ParameterError("qpg_metrics: pump must be TemporalUnit-normalized");
  if (tp.g_signal.norm() == 0)
    throw DataError("qpg_metrics: zero signal transfer, metrics undefined");

  QpgMetrics m;
  m.schmidt = schmidt(tp.g_signal);

  double sum2 = 0;
  for (int k = 0; k < m.schmidt.singular_values.size(); ++k)
    sum2 += m.schmidt.singular_values[k] * m.schmidt.singular_values[k];
  const double lead = m.schmidt.singular_values[0];
  m.conversion_efficiency = lead * lead;
  m.separability = lead * lead / sum2;

  // dominant input Schmidt mode mapped to the time domain, overlapped with
  // the pump; the SVD's arbitrary global phase drops out of |.|^2
  const Eigen::VectorXcd phi0 =
      to_time_domain(tp.params.grid, m.schmidt.modes_col.col(0));
  const std::complex<double> ov =
      tp.params.grid.time_step() * phi0.dot(pump.temporal);
  m.fidelity_to_pump = std::norm(ov);

  m.unitarity_residual = unitarity_residual(tp);
  return m;
}

} // namespace cavmode
