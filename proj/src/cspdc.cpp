#include "cavmode/cspdc.hpp"
#include "cavmode/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace cavmode {

using std::numbers::pi;
using cd = std::complex<double>;

void validate(const CavityParams& c) {
  if (!(c.gamma > 0)) throw ParameterError("CavityParams: gamma must be positive");
  // boundary iota == gamma included so loss curves can be evaluated there
  if (c.internal_loss < 0 || c.internal_loss > c.gamma)
    throw ParameterError("CavityParams: need 0 <= internal_loss <= gamma");
}

std::complex<double> lineshape(double omega, const CavityParams& cavity,
                               int sign) {
  validate(cavity);
  if (sign != -1 && sign != 1)
    throw ParameterError("lineshape: sign must be -1 or +1");
  if (cavity.internal_loss > 0 && sign == 1)
    throw ParameterError("lineshape: the '+' form is undefined with internal loss");
  const double amp = std::sqrt(cavity.gamma / (2 * pi));
  const double re = sign == -1 ? -(cavity.gamma + cavity.internal_loss) / 2
                               : cavity.gamma / 2;
  return amp / cd(re, omega);
}

static void check_rectangular(const PumpProfile& pump) {
  if (pump.kind != PumpKind::Rectangular)
    throw ParameterError("build_jsf_dual: pump must be rectangular");
  if (std::isfinite(pump.rect_width) && pump.axis &&
      pump.rect_width > 2 * pump.axis->half_span)
    throw ParameterError("build_jsf_dual: pump support exceeds its axis coverage");
}

JointSpectralFunction build_jsf_dual(const ContinuousAxis& axis_s,
                                     const ContinuousAxis& axis_i,
                                     const CavityParams& cavity_s,
                                     const CavityParams& cavity_i,
                                     const PumpProfile& pump, double eta) {
  validate(cavity_s);
  validate(cavity_i);
  if (eta < 0) throw ParameterError("build_jsf_dual: eta must be >= 0");
  check_rectangular(pump);

  JointSpectralFunction jsf;
  jsf.axis_s = axis_s;
  jsf.axis_i = axis_i;
  jsf.coupling = eta;
  jsf.provenance = JsfProvenance::DualCavity;
  jsf.cavity_s = cavity_s;
  jsf.cavity_i = cavity_i;
  jsf.pump = pump;

  const double scale = -std::sqrt(2 * pi) * eta;
  Eigen::VectorXcd xi_s(axis_s.n_points), xi_i(axis_i.n_points);
  for (int a = 0; a < axis_s.n_points; ++a)
    xi_s[a] = lineshape(axis_s.point(a), cavity_s, -1);
  for (int b = 0; b < axis_i.n_points; ++b)
    xi_i[b] = lineshape(axis_i.point(b), cavity_i, -1);

  jsf.values.resize(axis_s.n_points, axis_i.n_points);
  for (int b = 0; b < axis_i.n_points; ++b) {
    const double wi = axis_i.point(b);
    for (int a = 0; a < axis_s.n_points; ++a)
      jsf.values(a, b) =
          scale * xi_s[a] * xi_i[b] * pump.spectral_at(axis_s.point(a) + wi);
  }
  return jsf;
}

JointSpectralFunction build_jsf_single(const ContinuousAxis& axis_s,
                                       const ContinuousAxis& axis_i,
                                       const CavityParams& cavity_s,
                                       const PumpProfile& pump, double eta,
                                       SingleCavityApproximation approximation) {
  validate(cavity_s);
  if (eta < 0) throw ParameterError("build_jsf_single: eta must be >= 0");
  if (pump.is_grid_based())
    throw ParameterError("build_jsf_single: pump must be a continuum profile");

  JointSpectralFunction jsf;
  jsf.axis_s = axis_s;
  jsf.axis_i = axis_i;
  jsf.coupling = eta;
  jsf.provenance = JsfProvenance::SingleCavity;
  jsf.cavity_s = cavity_s;
  jsf.pump = pump;
  jsf.approximation = approximation;

  Eigen::VectorXcd xi_s(axis_s.n_points);
  for (int a = 0; a < axis_s.n_points; ++a)
    xi_s[a] = lineshape(axis_s.point(a), cavity_s, -1);

  jsf.values.resize(axis_s.n_points, axis_i.n_points);
  for (int b = 0; b < axis_i.n_points; ++b) {
    const double wi = axis_i.point(b);
    if (approximation == SingleCavityApproximation::BetaOfIdler) {
      const cd beta = pump.spectral_at(wi);
      for (int a = 0; a < axis_s.n_points; ++a)
        jsf.values(a, b) = -eta * xi_s[a] * beta;
    } else {
      for (int a = 0; a < axis_s.n_points; ++a)
        jsf.values(a, b) =
            -eta * xi_s[a] * pump.spectral_at(axis_s.point(a) + wi);
    }
  }
  return jsf;
}

namespace {

// |J|^2 integrated over the full plane by a midpoint rule in tan-substituted
// coordinates omega = s*tan(theta); the scale s = gamma + iota keeps the
// transformed integrand smooth without collapsing it to a constant.
double quadrature_p_si(const JointSpectralFunction& jsf, int n_per_axis) {
  const double gs = jsf.cavity_s.gamma, is = jsf.cavity_s.internal_loss;
  const double gi = jsf.cavity_i.gamma, ii = jsf.cavity_i.internal_loss;
  const double ss = gs + is, si = gi + ii;
  const double cs = ss / 2, ci = si / 2;
  const double h = pi / n_per_axis;
  const double eta = jsf.coupling;

  std::vector<double> ws(n_per_axis), wi(n_per_axis);
  std::vector<double> fs(n_per_axis), fi(n_per_axis);
  for (int a = 0; a < n_per_axis; ++a) {
    const double th = -pi / 2 + (a + 0.5) * h;
    const double tn = std::tan(th), sec2 = 1.0 / (std::cos(th) * std::cos(th));
    ws[a] = ss * tn;
    fs[a] = (gs / (2 * pi)) / (ws[a] * ws[a] + cs * cs) * ss * sec2;
    wi[a] = si * tn;
    fi[a] = (gi / (2 * pi)) / (wi[a] * wi[a] + ci * ci) * si * sec2;
  }

  double total = 0;
  for (int b = 0; b < n_per_axis; ++b) {
    double row = 0;
    for (int a = 0; a < n_per_axis; ++a) {
      const double beta2 = std::norm(jsf.pump.spectral_at(ws[a] + wi[b]));
      row += fs[a] * beta2;
    }
    total += row * fi[b];
  }
  return 2 * pi * eta * eta * total * h * h;
}

} // namespace

PairMetrics pair_metrics(const JointSpectralFunction& jsf) {
  if (jsf.provenance != JsfProvenance::DualCavity)
    throw ParameterError("pair_metrics: closed forms exist for dual-cavity JSFs only");

  const double gs = jsf.cavity_s.gamma, is = jsf.cavity_s.internal_loss;
  const double gi = jsf.cavity_i.gamma, ii = jsf.cavity_i.internal_loss;
  const double eta = jsf.coupling;

  PairMetrics m;
  m.linewidth_s = gs + is;
  m.linewidth_i = gi + ii;

  if (eta == 0) {
    m.degenerate = true;
    m.purity = std::numeric_limits<double>::quiet_NaN();
    m.heralding_s = m.heralding_i = std::numeric_limits<double>::quiet_NaN();
    return m;
  }
  m.purity = purity_gram(jsf.values);

  m.p_si = 2 * pi * eta * eta * (gs / (gs + is)) * (gi / (gi + ii));
  m.heralding_s = gi / (gi + ii); // set by the opposite arm
  m.heralding_i = gs / (gs + is);
  m.p_s = m.p_si / m.heralding_s;
  m.p_i = m.p_si / m.heralding_i;

  const double full = quadrature_p_si(jsf, 2048);
  const double half = quadrature_p_si(jsf, 1024);
  m.p_si_quadrature = full;
  m.quadrature_self_check = std::abs(full - half) / std::max(full, 1e-300);
  if (m.quadrature_self_check > 1e-4)
    throw NumericalError(
        "pair_metrics: quadrature not converged (pump edge too sharp for the rule)");
  return m;
}

SqueezerCoefficients squeezer_outputs(double eta) {
  if (eta < 0) throw ParameterError("squeezer_outputs: eta must be >= 0");
  SqueezerCoefficients s;
  const double g = std::sqrt(2 * pi) * eta;
  s.cosh_gain = std::cosh(g);
  s.sinh_gain = std::sinh(g);
  s.biphoton_amplitude = -g;
  const double rest = 1 - 2 * pi * eta * eta;
  if (rest > 0) {
    s.vacuum_amplitude = std::sqrt(rest);
    s.truncation_valid = true;
  } else {
    s.vacuum_amplitude = std::numeric_limits<double>::quiet_NaN();
    s.truncation_valid = false;
  }
  return s;
}

FeasibilityReport feasibility_window(const CavityParams& cavity,
                                     double omega_spdc, double omega_pm) {
  validate(cavity);
  if (!(omega_spdc > 0) || !(omega_pm > 0))
    throw ParameterError("feasibility_window: rates must be positive");
  if (!(cavity.fsr > 0))
    throw ParameterError("feasibility_window: cavity FSR must be set");

  FeasibilityReport r;
  r.finesse = cavity.fsr / cavity.gamma;
  const double floor = omega_spdc / r.finesse;
  r.linewidth_above_floor = floor < cavity.gamma;
  r.linewidth_below_pm = cavity.gamma < omega_pm;
  r.fsr_covers_spdc = cavity.fsr > omega_spdc;
  r.floor_margin = cavity.gamma / floor;
  r.pm_margin = omega_pm / cavity.gamma;
  r.fsr_margin = cavity.fsr / omega_spdc;
  r.satisfied = r.linewidth_above_floor && r.linewidth_below_pm && r.fsr_covers_spdc;
  return r;
}

} // namespace cavmode
