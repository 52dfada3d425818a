#ifndef CAVMODE_TOOLS_COMMANDS_HPP
#define CAVMODE_TOOLS_COMMANDS_HPP

#include "report.hpp"

#include <cstdint>
#include <string>

namespace cavmode::cli {

// All CLI rates are ordinary frequencies in THz and are converted to angular
// frequencies (rad/ps) exactly once, at parse time; time windows are in ps.

struct CommonOptions {
  std::string out_dir = ".";
  bool plot = false;
  bool timings = false;
};

struct JsfOptions {
  std::string mode = "dual"; // dual | single
  double gamma_s_thz = 0.1;
  double gamma_i_thz = 0.1;
  double loss_s = 0; // iota_s / gamma_s
  double loss_i = 0;
  double eta = 0.01;
  std::string pump = "rect:inf"; // rect:<THz|inf> or hg:<order>:<THz>
  double span_linewidths = 50;   // axis half-span in units of gamma + iota
  int points = 512;
  std::string approx = "sum"; // sum | idler (single-cavity only)
};

struct QpgOptions {
  int modes = 100;
  double window = 1.0; // ps
  double gamma_over_dw = 0.01;
  double eta = -1; // < 0: eta = sqrt(gamma T)
  double loss = 0; // iota / gamma
  std::string pump = "hg:2"; // hg:<k>[:<THz>] | flat | random:<M>[:<seed>]
  std::string method = "kernel"; // kernel | flat | perturbative | oracle
  int oversample = 16;
  std::uint64_t seed = 1; // used when the pump spec omits one
};

struct MqpgOptions {
  int modes = 100;
  double window = 1.0;
  double gamma_over_dw = 0.05;
  double eta = -1;
  std::string pump = "hgset:0,1,2"; // hgset:<k1,k2,...>[:<THz>]
  double fsr_bins = 0; // resonance spacing in bin units; 0 = n_modes
};

struct SweepOptions {
  // loss_ratio | pump_bw_over_gamma (JSF base); gamma_over_dw | eta_ratio (QPG base)
  std::string key = "gamma_over_dw";
  double from = 1e-3;
  double to = 1.0;
  int points = 11;
  bool log_spacing = true;
  JsfOptions jsf;
  QpgOptions qpg;
};

Json run_jsf(const JsfOptions& opts, const CommonOptions& common);
Json run_qpg(const QpgOptions& opts, const CommonOptions& common);
Json run_mqpg(const MqpgOptions& opts, const CommonOptions& common);
Json run_sweep(const SweepOptions& opts, const CommonOptions& common);

// canned figure reproductions: fig2a fig2b fig2c fig4a fig4b fig4c
Json run_repro(const std::string& figure, const CommonOptions& common);

} // namespace cavmode::cli

#endif // CAVMODE_TOOLS_COMMANDS_HPP
