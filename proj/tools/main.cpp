#include <CLI11.hpp>

#include "commands.hpp"
#include "cavmode/errors.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace cavmode;
using namespace cavmode::cli;

namespace {

void error_json(const std::string& kind, const std::string& message) {
  Json e;
  e["error"] = kind;
  e["message"] = message;
  std::cerr << e.dump() << '\n';
}

template <typename T>
void maybe(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void load_config(const std::string& path, CommonOptions& common,
                 JsfOptions& jsf, QpgOptions& qpg, MqpgOptions& mqpg,
                 SweepOptions& sweep) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  Json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw ParameterError(std::string("config parse failure: ") + e.what());
  }
  if (doc.contains("common")) {
    const auto& c = doc["common"];
    maybe(c, "out_dir", common.out_dir);
    maybe(c, "plot", common.plot);
    maybe(c, "timings", common.timings);
  }
  if (doc.contains("jsf")) {
    const auto& c = doc["jsf"];
    maybe(c, "mode", jsf.mode);
    maybe(c, "gamma_s_thz", jsf.gamma_s_thz);
    maybe(c, "gamma_i_thz", jsf.gamma_i_thz);
    maybe(c, "loss_s", jsf.loss_s);
    maybe(c, "loss_i", jsf.loss_i);
    maybe(c, "eta", jsf.eta);
    maybe(c, "pump", jsf.pump);
    maybe(c, "span_linewidths", jsf.span_linewidths);
    maybe(c, "points", jsf.points);
    maybe(c, "approx", jsf.approx);
  }
  if (doc.contains("qpg")) {
    const auto& c = doc["qpg"];
    maybe(c, "modes", qpg.modes);
    maybe(c, "window", qpg.window);
    maybe(c, "gamma_over_dw", qpg.gamma_over_dw);
    maybe(c, "eta", qpg.eta);
    maybe(c, "loss", qpg.loss);
    maybe(c, "pump", qpg.pump);
    maybe(c, "method", qpg.method);
    maybe(c, "oversample", qpg.oversample);
    maybe(c, "seed", qpg.seed);
  }
  if (doc.contains("mqpg")) {
    const auto& c = doc["mqpg"];
    maybe(c, "modes", mqpg.modes);
    maybe(c, "window", mqpg.window);
    maybe(c, "gamma_over_dw", mqpg.gamma_over_dw);
    maybe(c, "eta", mqpg.eta);
    maybe(c, "pump", mqpg.pump);
    maybe(c, "fsr_bins", mqpg.fsr_bins);
  }
  if (doc.contains("sweep")) {
    const auto& c = doc["sweep"];
    maybe(c, "key", sweep.key);
    maybe(c, "from", sweep.from);
    maybe(c, "to", sweep.to);
    maybe(c, "points", sweep.points);
    maybe(c, "log_spacing", sweep.log_spacing);
  }
}

int report_checks(const Json& doc) {
  bool ok = true;
  if (doc.contains("checks")) {
    for (const auto& c : doc["checks"]) {
      const bool pass = c["pass"].get<bool>();
      std::cout << (pass ? "PASS " : "FAIL ") << c["name"].get<std::string>()
                << "  value=" << format_double(c["value"].get<double>())
                << "  " << c["relation"].get<std::string>() << " "
                << format_double(c["tolerance"].get<double>()) << '\n';
      ok = ok && pass;
    }
  }
  if (!ok) {
    error_json("numerical", "one or more declared tolerance checks failed");
    return 2;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CommonOptions common;
  JsfOptions jsf;
  QpgOptions qpg;
  MqpgOptions mqpg;
  SweepOptions sweep;
  std::string repro_figure;

  // config file first, flags override
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        load_config(argv[i + 1], common, jsf, qpg, mqpg, sweep);
      } catch (const ParameterError& e) {
        error_json("parameter", e.what());
        return 1;
      } catch (const IoError& e) {
        error_json("io", e.what());
        return 3;
      }
    }
  }

  CLI::App app{"cavity-enhanced photon-pair and pulse-gate simulator"};
  app.require_subcommand(1);
  std::string config_dummy;
  app.add_option("--config", config_dummy, "JSON config file (applied before flags)");
  app.add_option("--out", common.out_dir, "output directory");
  app.add_flag("--plot", common.plot, "also render PNG heatmaps");
  app.add_flag("--timings", common.timings,
               "include wall-clock timings in metrics.json (breaks byte determinism)");
  app.fallthrough();

  auto* jsf_cmd = app.add_subcommand("jsf", "joint spectral function of CSPDC");
  jsf_cmd->add_option("--mode", jsf.mode, "dual | single");
  jsf_cmd->add_option("--gamma-s", jsf.gamma_s_thz, "signal cavity decay rate (THz)");
  jsf_cmd->add_option("--gamma-i", jsf.gamma_i_thz, "idler cavity decay rate (THz)");
  jsf_cmd->add_option("--loss-s", jsf.loss_s, "signal internal loss ratio iota/gamma");
  jsf_cmd->add_option("--loss-i", jsf.loss_i, "idler internal loss ratio iota/gamma");
  jsf_cmd->add_option("--eta", jsf.eta, "effective nonlinear coupling");
  jsf_cmd->add_option("--pump", jsf.pump, "rect:<THz|inf> or hg:<order>:<THz>");
  jsf_cmd->add_option("--span", jsf.span_linewidths, "axis half-span in linewidths");
  jsf_cmd->add_option("--points", jsf.points, "points per axis");
  jsf_cmd->add_option("--approx", jsf.approx, "single-cavity pump argument: sum | idler");

  auto* qpg_cmd = app.add_subcommand("qpg", "cavity-assisted pulse gate transfer");
  qpg_cmd->add_option("--modes", qpg.modes, "frequency bins N");
  qpg_cmd->add_option("--window", qpg.window, "observation window T (ps)");
  qpg_cmd->add_option("--gamma-over-dw", qpg.gamma_over_dw, "gamma / bin spacing");
  qpg_cmd->add_option("--eta", qpg.eta, "coupling; negative selects sqrt(gamma T)");
  qpg_cmd->add_option("--loss", qpg.loss, "internal loss ratio iota/gamma");
  qpg_cmd->add_option("--pump", qpg.pump, "hg:<k>[:<THz>] | flat | random:<M>[:<seed>]");
  qpg_cmd->add_option("--method", qpg.method, "kernel | flat | perturbative | oracle");
  qpg_cmd->add_option("--oversample", qpg.oversample, "kernel quadrature oversampling");
  qpg_cmd->add_option("--seed", qpg.seed, "seed when the pump spec omits one");

  auto* mqpg_cmd = app.add_subcommand("mqpg", "multi-output pulse gate multiport");
  mqpg_cmd->add_option("--modes", mqpg.modes, "frequency bins N");
  mqpg_cmd->add_option("--window", mqpg.window, "observation window T (ps)");
  mqpg_cmd->add_option("--gamma-over-dw", mqpg.gamma_over_dw, "gamma / bin spacing");
  mqpg_cmd->add_option("--eta", mqpg.eta, "coupling; negative selects sqrt(gamma T)");
  mqpg_cmd->add_option("--pump", mqpg.pump, "hgset:<k1,k2,...>[:<THz>]");
  mqpg_cmd->add_option("--fsr-bins", mqpg.fsr_bins, "resonance spacing in bins");

  auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep with metrics table");
  sweep_cmd->add_option("--key", sweep.key,
                        "loss_ratio | pump_bw_over_gamma | gamma_over_dw | eta_ratio");
  sweep_cmd->add_option("--from", sweep.from, "sweep start");
  sweep_cmd->add_option("--to", sweep.to, "sweep end");
  sweep_cmd->add_option("--points", sweep.points, "number of points");
  bool linear = false;
  sweep_cmd->add_flag("--linear", linear, "linear spacing (default log)");
  sweep_cmd->add_option("--modes", sweep.qpg.modes, "QPG base: frequency bins");
  sweep_cmd->add_option("--window", sweep.qpg.window, "QPG base: window (ps)");
  sweep_cmd->add_option("--pump", sweep.qpg.pump, "QPG base: pump spec");
  sweep_cmd->add_option("--oversample", sweep.qpg.oversample, "QPG base: oversampling");
  sweep_cmd->add_option("--loss", sweep.qpg.loss, "QPG base: loss ratio");
  sweep_cmd->add_option("--gamma-over-dw", sweep.qpg.gamma_over_dw,
                        "QPG base: gamma/dw (eta_ratio sweeps)");
  sweep_cmd->add_option("--gamma-s", sweep.jsf.gamma_s_thz, "JSF base: signal gamma (THz)");
  sweep_cmd->add_option("--gamma-i", sweep.jsf.gamma_i_thz, "JSF base: idler gamma (THz)");
  sweep_cmd->add_option("--eta", sweep.jsf.eta, "JSF base: coupling");
  sweep_cmd->add_option("--jsf-points", sweep.jsf.points, "JSF base: points per axis");

  auto* repro_cmd = app.add_subcommand("repro", "reproduce a canned figure");
  repro_cmd->add_option("figure", repro_figure,
                        "fig2a | fig2b | fig2c | fig4a | fig4b | fig4c")
      ->required();

  try {
    app.parse(argc, argv);
    if (*sweep_cmd && linear) sweep.log_spacing = false;

    Json doc;
    if (*jsf_cmd) doc = run_jsf(jsf, common);
    else if (*qpg_cmd) doc = run_qpg(qpg, common);
    else if (*mqpg_cmd) doc = run_mqpg(mqpg, common);
    else if (*sweep_cmd) doc = run_sweep(sweep, common);
    else if (*repro_cmd) doc = run_repro(repro_figure, common);
    std::cout << "wrote " << common.out_dir << "/metrics.json\n";
    return report_checks(doc);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help
    error_json("parameter", e.what());
    return 1;
  } catch (const ParameterError& e) {
    error_json("parameter", e.what());
    return 1;
  } catch (const DataError& e) {
    error_json("parameter", e.what());
    return 1;
  } catch (const NumericalError& e) {
    error_json("numerical", e.what());
    return 2;
  } catch (const IoError& e) {
    error_json("io", e.what());
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    error_json("io", e.what());
    return 3;
  } catch (const std::exception& e) {
    error_json("internal", e.what());
    return 1;
  }
}
