#ifndef CAVMODE_CSPDC_HPP
#define CAVMODE_CSPDC_HPP

#include "cavmode/grid.hpp"
#include "cavmode/pump.hpp"
#include "cavmode/schmidt.hpp"

#include <complex>

namespace cavmode {

enum class CavityLabel { Signal, Idler };

struct CavityParams {
  double gamma = 0;         // decay rate (angular frequency)
  double internal_loss = 0; // iota, 0 <= iota < gamma
  double fsr = 0;           // free spectral range; 0 = unset
  CavityLabel label = CavityLabel::Signal;
};

void validate(const CavityParams& c);

// xi^-/xi^+ cavity lineshapes, sqrt(gamma/2pi) / (i omega -+ gamma/2).
// With internal loss only the '-' form exists:
// sqrt(gamma/2pi) / (i omega - gamma/2 - iota/2).
std::complex<double> lineshape(double omega, const CavityParams& cavity, int sign);

enum class JsfProvenance { DualCavity, SingleCavity };
enum class SingleCavityApproximation { BetaOfSum, BetaOfIdler };

struct JointSpectralFunction {
  ContinuousAxis axis_s, axis_i;
  Eigen::MatrixXcd values; // rows: omega_s, cols: omega_i
  double coupling = 0;     // eta
  JsfProvenance provenance = JsfProvenance::DualCavity;
  CavityParams cavity_s, cavity_i;
  PumpProfile pump;
  SingleCavityApproximation approximation = SingleCavityApproximation::BetaOfSum;
};

// J(ws, wi) = -sqrt(2*pi) * eta * xi_s(ws) * xi_i(wi) * beta(ws + wi).
// The pump factor is kept so finite-bandwidth decorrelation is quantifiable;
// the pump must be rectangular (possibly with infinite width, beta == 1).
JointSpectralFunction build_jsf_dual(const ContinuousAxis& axis_s,
                                     const ContinuousAxis& axis_i,
                                     const CavityParams& cavity_s,
                                     const CavityParams& cavity_i,
                                     const PumpProfile& pump, double eta);

// Single-resonator variant: only the signal is cavity-enhanced.
// BetaOfIdler uses beta(wi) (exactly separable); BetaOfSum keeps beta(ws+wi).
JointSpectralFunction build_jsf_single(const ContinuousAxis& axis_s,
                                       const ContinuousAxis& axis_i,
                                       const CavityParams& cavity_s,
                                       const PumpProfile& pump, double eta,
                                       SingleCavityApproximation approximation);

struct PairMetrics {
  double purity = 0;
  double p_si = 0;            // closed form
  double p_si_quadrature = 0; // full-line numerical integration of |J|^2
  double p_s = 0, p_i = 0;
  double heralding_s = 0, heralding_i = 0;
  double linewidth_s = 0, linewidth_i = 0; // gamma_j + iota_j
  double quadrature_self_check = 0;        // relative drift on halving the rule
  bool degenerate = false;                 // eta == 0: probabilities undefined
};

// Closed-form and quadrature biphoton probabilities, heralding efficiencies
// and broadened linewidths for a dual-cavity JSF.
PairMetrics pair_metrics(const JointSpectralFunction& jsf);

struct SqueezerCoefficients {
  double cosh_gain = 1; // cosh(sqrt(2 pi) eta)
  double sinh_gain = 0; // sinh(sqrt(2 pi) eta)
  double vacuum_amplitude = 1;  // sqrt(1 - 2 pi eta^2), weak-conversion state
  double biphoton_amplitude = 0; // -sqrt(2 pi) eta
  bool truncation_valid = true;  // false when 2 pi eta^2 >= 1
};

SqueezerCoefficients squeezer_outputs(double eta);

struct FeasibilityReport {
  bool satisfied = false;
  bool linewidth_above_floor = false; // Omega_SPDC / F < gamma
  bool linewidth_below_pm = false;    // gamma < Omega_PM
  bool fsr_covers_spdc = false;       // Omega_FSR > Omega_SPDC
  double finesse = 0;
  double floor_margin = 0; // gamma / (Omega_SPDC / F)
  double pm_margin = 0;    // Omega_PM / gamma
  double fsr_margin = 0;   // Omega_FSR / Omega_SPDC
};

FeasibilityReport feasibility_window(const CavityParams& cavity,
                                     double omega_spdc, double omega_pm);

} // namespace cavmode

#endif // CAVMODE_CSPDC_HPP
