#include "commands.hpp"
#include "png_writer.hpp"

#include "cavmode/cspdc.hpp"
#include "cavmode/csfg.hpp"
#include "cavmode/errors.hpp"
#include "cavmode/mqpg.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <atomic>
#include <thread>

namespace cavmode::cli {

namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

constexpr double kTwoPi = 2 * pi;

double angular(double thz) { return kTwoPi * thz; }

class Stopwatch {
public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

Json units_block() {
  Json u;
  u["input_rates"] = "THz (ordinary frequency)";
  u["internal_rates"] = "rad/ps (angular: omega = 2*pi*f)";
  u["time"] = "ps";
  return u;
}

fs::path prepare_out_dir(const CommonOptions& common) {
  fs::path dir(common.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("output directory not writable: " + dir.string());
  return dir;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto next = s.find(sep, pos);
    if (next == std::string::npos) {
      parts.push_back(s.substr(pos));
      break;
    }
    parts.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
  return parts;
}

double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParameterError("cannot parse " + what + ": '" + s + "'");
  }
}

// continuum pump specs for the jsf command: rect:<THz|inf>, hg:<k>:<THz>
PumpProfile parse_continuum_pump(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts[0] == "rect") {
    if (parts.size() != 2) throw ParameterError("pump spec: rect:<THz|inf>");
    const double width = parts[1] == "inf"
                             ? std::numeric_limits<double>::infinity()
                             : angular(parse_number(parts[1], "pump width"));
    const double span = std::isfinite(width) ? width : 1.0;
    return rectangular_pump(make_axis(0.0, 0.75 * span, 8), width);
  }
  if (parts[0] == "hg") {
    if (parts.size() != 3)
      throw ParameterError("pump spec: hg:<order>:<sigma THz>");
    const int order = static_cast<int>(parse_number(parts[1], "pump order"));
    return hermite_gauss_pump_continuum(
        order, angular(parse_number(parts[2], "pump sigma")));
  }
  throw ParameterError("unknown continuum pump spec '" + spec + "'");
}

// grid pump specs for the qpg command: hg:<k>[:<THz>], flat, random:<M>[:<seed>]
PumpProfile parse_grid_pump(const std::string& spec, const FrequencyGrid& grid,
                            std::uint64_t default_seed) {
  const auto parts = split(spec, ':');
  if (parts[0] == "hg") {
    if (parts.size() < 2 || parts.size() > 3)
      throw ParameterError("pump spec: hg:<order>[:<sigma THz>]");
    const int order = static_cast<int>(parse_number(parts[1], "pump order"));
    const double sigma = parts.size() == 3
                             ? angular(parse_number(parts[2], "pump sigma"))
                             : grid.n_modes / 16.0 * grid.bin_spacing;
    return hermite_gauss_pump(grid, order, sigma);
  }
  if (parts[0] == "flat") {
    if (parts.size() != 1) throw ParameterError("pump spec: flat");
    return constant_pump(grid);
  }
  if (parts[0] == "random") {
    if (parts.size() < 2 || parts.size() > 3)
      throw ParameterError("pump spec: random:<M>[:<seed>]");
    const int m = static_cast<int>(parse_number(parts[1], "pump bins"));
    const std::uint64_t seed =
        parts.size() == 3
            ? static_cast<std::uint64_t>(parse_number(parts[2], "pump seed"))
            : default_seed;
    return random_flat_pump(grid, m, seed);
  }
  throw ParameterError("unknown grid pump spec '" + spec + "'");
}

// hgset:<k1,k2,...>[:<sigma THz>]
PumpSet parse_pump_set(const std::string& spec, const FrequencyGrid& grid,
                       double fsr) {
  const auto parts = split(spec, ':');
  if (parts[0] != "hgset" || parts.size() < 2 || parts.size() > 3)
    throw ParameterError("pump set spec: hgset:<k1,k2,...>[:<sigma THz>]");
  std::vector<int> orders;
  for (const auto& tok : split(parts[1], ','))
    orders.push_back(static_cast<int>(parse_number(tok, "pump order")));
  const double sigma = parts.size() == 3
                           ? angular(parse_number(parts[2], "pump sigma"))
                           : grid.n_modes / 16.0 * grid.bin_spacing;
  return mqpg_pump_set(grid, orders, sigma, fsr);
}

void maybe_add_timings(Json& doc, const CommonOptions& common,
                       const Stopwatch& watch) {
  if (common.timings) {
    Json t;
    t["total"] = watch.ms();
    doc["timings_ms"] = t;
  }
}

// simple index-parallel loop used for sweep points (pure per-point work)
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
  const int workers = std::max(
      1, std::min<int>(n, static_cast<int>(std::thread::hardware_concurrency())));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

std::vector<double> sweep_grid(double from, double to, int points, bool log) {
  if (points < 2) throw ParameterError("sweep needs at least 2 points");
  std::vector<double> xs(points);
  if (log) {
    if (!(from > 0) || !(to > 0))
      throw ParameterError("log sweep requires positive bounds");
    const double l0 = std::log(from), l1 = std::log(to);
    for (int i = 0; i < points; ++i)
      xs[i] = std::exp(l0 + (l1 - l0) * i / (points - 1));
  } else {
    for (int i = 0; i < points; ++i)
      xs[i] = from + (to - from) * i / (points - 1);
  }
  return xs;
}

struct QpgSetup {
  QpgParams params;
  double rho0_abs = 0;
};

QpgSetup make_qpg_params(const QpgOptions& opts) {
  QpgSetup s;
  s.params.grid = make_grid(opts.window, opts.modes);
  s.params.gamma = opts.gamma_over_dw * s.params.grid.bin_spacing;
  s.params.eta = opts.eta < 0
                     ? std::sqrt(s.params.gamma * s.params.grid.window_T)
                     : opts.eta;
  s.params.internal_loss = opts.loss * s.params.gamma;
  s.params.pump = parse_grid_pump(opts.pump, s.params.grid, opts.seed);
  s.rho0_abs = std::abs(perturbative_rho(0, s.params));
  return s;
}

} // namespace

Json run_jsf(const JsfOptions& opts, const CommonOptions& common) {
  Stopwatch watch;
  const fs::path dir = prepare_out_dir(common);

  CavityParams cav_s{angular(opts.gamma_s_thz),
                     opts.loss_s * angular(opts.gamma_s_thz), 0,
                     CavityLabel::Signal};
  PumpProfile pump = parse_continuum_pump(opts.pump);

  JointSpectralFunction jsf;
  if (opts.mode == "dual") {
    CavityParams cav_i{angular(opts.gamma_i_thz),
                       opts.loss_i * angular(opts.gamma_i_thz), 0,
                       CavityLabel::Idler};
    const double span_s =
        opts.span_linewidths * (cav_s.gamma + cav_s.internal_loss);
    const double span_i =
        opts.span_linewidths * (cav_i.gamma + cav_i.internal_loss);
    jsf = build_jsf_dual(make_axis(0, span_s, opts.points),
                         make_axis(0, span_i, opts.points), cav_s, cav_i, pump,
                         opts.eta);
  } else if (opts.mode == "single") {
    if (pump.kind != PumpKind::HermiteGauss && pump.kind != PumpKind::Rectangular)
      throw ParameterError("run_jsf: single mode needs an analytic pump");
    const double span_s =
        opts.span_linewidths * (cav_s.gamma + cav_s.internal_loss);
    const double idler_span = pump.kind == PumpKind::HermiteGauss
                                  ? 8 * pump.hg_sigma
                                  : 0.75 * pump.rect_width;
    const auto approx = opts.approx == "idler"
                            ? SingleCavityApproximation::BetaOfIdler
                            : SingleCavityApproximation::BetaOfSum;
    jsf = build_jsf_single(make_axis(0, span_s, opts.points),
                           make_axis(0, idler_span, opts.points), cav_s, pump,
                           opts.eta, approx);
  } else {
    throw ParameterError("run_jsf: mode must be dual or single");
  }

  write_matrix_csv_axes(dir / "jsf.csv", jsf.axis_s.points(),
                        jsf.axis_i.points(), jsf.values, "omega_s", "omega_i");
  if (common.plot)
    write_heatmap_png(dir / "jsf.png", jsf.values.cwiseAbs(), 1);

  Json doc;
  doc["schema_version"] = 1;
  doc["command"] = "jsf";
  doc["units"] = units_block();
  Json in;
  in["mode"] = opts.mode;
  in["gamma_s_thz"] = opts.gamma_s_thz;
  in["gamma_i_thz"] = opts.gamma_i_thz;
  in["loss_s"] = opts.loss_s;
  in["loss_i"] = opts.loss_i;
  in["eta"] = opts.eta;
  in["pump"] = opts.pump;
  in["span_linewidths"] = opts.span_linewidths;
  in["points"] = opts.points;
  if (opts.mode == "single") in["approx"] = opts.approx;
  doc["inputs"] = in;

  Json metrics;
  std::vector<Check> checks;
  if (opts.mode == "dual") {
    const PairMetrics m = pair_metrics(jsf);
    metrics["degenerate"] = m.degenerate;
    metrics["purity"] = m.purity;
    metrics["p_si_closed"] = m.p_si;
    metrics["p_si_quadrature"] = m.p_si_quadrature;
    metrics["p_s"] = m.p_s;
    metrics["p_i"] = m.p_i;
    metrics["heralding_s"] = m.heralding_s;
    metrics["heralding_i"] = m.heralding_i;
    metrics["linewidth_s"] = m.linewidth_s;
    metrics["linewidth_i"] = m.linewidth_i;
    metrics["quadrature_self_check"] = m.quadrature_self_check;
    if (m.degenerate) {
      std::cerr << "warning: eta = 0, probabilities degenerate\n";
    } else {
      checks.push_back(check_le(
          "p_si_quadrature_relative_error",
          std::abs(m.p_si_quadrature - m.p_si) / m.p_si, 1e-4));
    }
  } else {
    if (jsf.values.norm() == 0) {
      metrics["degenerate"] = true;
      std::cerr << "warning: eta = 0, JSF is zero\n";
    } else {
      metrics["degenerate"] = false;
      metrics["purity"] = purity_gram(jsf.values);
    }
  }
  doc["metrics"] = metrics;
  doc["checks"] = checks_to_json(checks);
  maybe_add_timings(doc, common, watch);
  write_json(dir / "metrics.json", doc);
  return doc;
}

Json run_qpg(const QpgOptions& opts, const CommonOptions& common) {
  Stopwatch watch;
  const fs::path dir = prepare_out_dir(common);
  const QpgSetup setup = make_qpg_params(opts);
  const QpgParams& p = setup.params;

  TransferPair tp;
  double kernel_deviation = -1;
  if (opts.method == "kernel") {
    KernelOptions ko;
    ko.oversample = opts.oversample;
    tp = kernel_transfer(p, ko);
  } else if (opts.method == "flat") {
    tp = flat_analytic_transfer(p);
  } else if (opts.method == "perturbative") {
    if (!perturbative_regime(p))
      std::cerr << "warning: |rho_0| = " << setup.rho0_abs
                << " > 0.3, outside the weak-interaction regime\n";
    tp = perturbative_transfer(p);
  } else if (opts.method == "oracle") {
    tp = oracle_transfer(p);
    KernelOptions ko;
    ko.oversample = opts.oversample;
    const TransferPair kern = kernel_transfer(p, ko);
    const double num = std::sqrt((tp.g_signal - kern.g_signal).squaredNorm() +
                                 (tp.g_idler - kern.g_idler).squaredNorm());
    const double den = std::sqrt(kern.g_signal.squaredNorm() +
                                 kern.g_idler.squaredNorm());
    kernel_deviation = num / den;
  } else {
    throw ParameterError("run_qpg: method must be kernel|flat|perturbative|oracle");
  }

  std::vector<int> bins(p.grid.n_modes);
  for (int j = 0; j < p.grid.n_modes; ++j) bins[j] = p.grid.index_of(j);
  write_matrix_csv_bins(dir / "transfer_s.csv", bins, bins, tp.g_signal,
                        "n_out", "n_in");
  write_matrix_csv_bins(dir / "transfer_i.csv", bins, bins, tp.g_idler,
                        "n_out", "n_in");
  if (common.plot) {
    write_heatmap_png(dir / "transfer_s.png", tp.g_signal.cwiseAbs());
    write_heatmap_png(dir / "transfer_i.png", tp.g_idler.cwiseAbs());
  }

  Json doc;
  doc["schema_version"] = 1;
  doc["command"] = "qpg";
  doc["units"] = units_block();
  Json in;
  in["modes"] = opts.modes;
  in["window"] = opts.window;
  in["gamma_over_dw"] = opts.gamma_over_dw;
  in["eta"] = p.eta;
  in["loss"] = opts.loss;
  in["pump"] = opts.pump;
  in["method"] = opts.method;
  in["oversample"] = opts.oversample;
  doc["inputs"] = in;

  Json metrics;
  std::vector<Check> checks;
  metrics["rho0_abs"] = setup.rho0_abs;
  metrics["perturbative_regime"] = perturbative_regime(p);
  const double resid = unitarity_residual(tp);
  metrics["unitarity_residual"] = resid;
  if (p.eta == 0) {
    metrics["degenerate"] = true;
    std::cerr << "warning: eta = 0, no conversion\n";
  } else {
    metrics["degenerate"] = false;
    const QpgMetrics qm = qpg_metrics(tp, p.pump);
    metrics["separability"] = qm.separability;
    metrics["conversion_efficiency"] = qm.conversion_efficiency;
    metrics["fidelity_to_pump"] = qm.fidelity_to_pump;
  }
  if (p.internal_loss > 0) {
    const double lam = deficit_min_eigenvalue(tp);
    metrics["deficit_min_eigenvalue"] = lam;
    checks.push_back(check_ge("deficit_psd_min_eigenvalue", lam, -1e-9));
  } else {
    const double tol =
        1e-6 * (100.0 / p.grid.n_modes) * (100.0 / p.grid.n_modes);
    checks.push_back(check_le("unitarity_residual", resid, tol));
  }
  if (kernel_deviation >= 0) {
    metrics["kernel_vs_oracle_frobenius"] = kernel_deviation;
    checks.push_back(check_le("kernel_vs_oracle_frobenius", kernel_deviation,
                              p.internal_loss > 0 ? 1e-5 : 1e-6));
  }
  doc["metrics"] = metrics;
  doc["checks"] = checks_to_json(checks);
  maybe_add_timings(doc, common, watch);
  write_json(dir / "metrics.json", doc);
  return doc;
}

Json run_mqpg(const MqpgOptions& opts, const CommonOptions& common) {
  Stopwatch watch;
  const fs::path dir = prepare_out_dir(common);

  MqpgConfig config;
  config.grid = make_grid(opts.window, opts.modes);
  config.gamma = opts.gamma_over_dw * config.grid.bin_spacing;
  config.eta = opts.eta < 0 ? std::sqrt(config.gamma * config.grid.window_T)
                            : opts.eta;
  config.fsr = (opts.fsr_bins > 0 ? opts.fsr_bins : opts.modes) *
               config.grid.bin_spacing;
  config.pumps = parse_pump_set(opts.pump, config.grid, config.fsr);

  const MultiportUnitary u = build_multiport(config);
  const CrossTermReport cross = cross_term_check(config);

  std::vector<int> rows(u.matrix.rows()), cols(config.grid.n_modes);
  for (int m = 0; m < u.matrix.rows(); ++m) rows[m] = m;
  for (int j = 0; j < config.grid.n_modes; ++j)
    cols[j] = config.grid.index_of(j);
  write_matrix_csv_bins(dir / "unitary.csv", rows, cols, u.matrix, "m", "l");
  if (common.plot) write_heatmap_png(dir / "unitary.png", u.matrix.cwiseAbs());

  Json doc;
  doc["schema_version"] = 1;
  doc["command"] = "mqpg";
  doc["units"] = units_block();
  Json in;
  in["modes"] = opts.modes;
  in["window"] = opts.window;
  in["gamma_over_dw"] = opts.gamma_over_dw;
  in["eta"] = config.eta;
  in["pump"] = opts.pump;
  in["fsr_bins"] = opts.fsr_bins > 0 ? opts.fsr_bins
                                     : static_cast<double>(opts.modes);
  doc["inputs"] = in;

  Json metrics;
  std::vector<Check> checks;
  metrics["row_orthonormality_residual"] = u.row_orthonormality_residual;
  metrics["cross_term_max_residual"] = cross.max_residual;
  metrics["complete"] = u.complete;
  checks.push_back(
      check_le("row_orthonormality_residual", u.row_orthonormality_residual, 1e-8));
  checks.push_back(check_le("cross_term_max_residual", cross.max_residual, 1e-8));

  Json per_res = Json::array();
  for (std::size_t m = 0; m < config.pumps.members.size(); ++m) {
    const QpgMetrics qm = per_resonance_metrics(config, static_cast<int>(m));
    Json j;
    j["resonance"] = m;
    j["separability"] = qm.separability;
    j["conversion_efficiency"] = qm.conversion_efficiency;
    j["fidelity_to_pump"] = qm.fidelity_to_pump;
    per_res.push_back(j);
    checks.push_back(check_ge("separability_resonance_" + std::to_string(m),
                              qm.separability, 0.995));
  }
  metrics["per_resonance"] = per_res;
  doc["metrics"] = metrics;
  doc["checks"] = checks_to_json(checks);
  maybe_add_timings(doc, common, watch);
  write_json(dir / "metrics.json", doc);
  return doc;
}

namespace {

Json sweep_loss_ratio(const SweepOptions& opts, const fs::path& dir,
                      std::vector<Check>& checks) {
  const auto xs = sweep_grid(opts.from, opts.to, opts.points, opts.log_spacing);
  const JsfOptions& base = opts.jsf;
  const double gamma_s = angular(base.gamma_s_thz);
  const double gamma_i = angular(base.gamma_i_thz);

  struct Row {
    double r, lw, rate, herald, p_si, p_quad, purity;
  };
  std::vector<Row> rowsv(xs.size());
  double p_si_lossless = 2 * pi * base.eta * base.eta;

  parallel_for(static_cast<int>(xs.size()), [&](int i) {
    const double r = xs[i];
    CavityParams cs{gamma_s, r * gamma_s, 0, CavityLabel::Signal};
    CavityParams ci{gamma_i, r * gamma_i, 0, CavityLabel::Idler};
    const double span_s = base.span_linewidths * (cs.gamma + cs.internal_loss);
    const double span_i = base.span_linewidths * (ci.gamma + ci.internal_loss);
    PumpProfile pump = parse_continuum_pump(base.pump);
    auto jsf = build_jsf_dual(make_axis(0, span_s, base.points),
                              make_axis(0, span_i, base.points), cs, ci, pump,
                              base.eta);
    const PairMetrics m = pair_metrics(jsf);
    rowsv[i] = {r,
                m.linewidth_s / gamma_s,
                m.p_si / p_si_lossless,
                m.heralding_s,
                m.p_si,
                m.p_si_quadrature,
                m.purity};
  });

  CsvWriter csv(dir / "sweep.csv",
                {"loss_ratio", "linewidth_norm", "pair_rate_norm", "heralding",
                 "p_si_closed", "p_si_quadrature", "purity"});
  double worst_lw = 0, worst_rate = 0, worst_herald = 0, worst_quad = 0;
  for (const auto& row : rowsv) {
    csv.row({row.r, row.lw, row.rate, row.herald, row.p_si, row.p_quad,
             row.purity});
    worst_lw = std::max(worst_lw, std::abs(row.lw - (1 + row.r)));
    worst_rate = std::max(
        worst_rate, std::abs(row.rate - 1 / ((1 + row.r) * (1 + row.r))));
    worst_herald = std::max(worst_herald, std::abs(row.herald - 1 / (1 + row.r)));
    worst_quad =
        std::max(worst_quad, std::abs(row.p_quad - row.p_si) / row.p_si);
  }
  checks.push_back(check_le("linewidth_norm_deviation", worst_lw, 1e-12));
  checks.push_back(check_le("pair_rate_norm_deviation", worst_rate, 1e-12));
  checks.push_back(check_le("heralding_deviation", worst_herald, 1e-12));
  checks.push_back(check_le("p_si_quadrature_relative_error", worst_quad, 1e-4));

  Json metrics;
  metrics["worst_linewidth_norm_deviation"] = worst_lw;
  metrics["worst_pair_rate_norm_deviation"] = worst_rate;
  metrics["worst_heralding_deviation"] = worst_herald;
  metrics["worst_p_si_quadrature_relative_error"] = worst_quad;
  return metrics;
}

Json sweep_pump_bw(const SweepOptions& opts, const fs::path& dir,
                   std::vector<Check>& checks) {
  const auto xs = sweep_grid(opts.from, opts.to, opts.points, opts.log_spacing);
  const JsfOptions& base = opts.jsf;
  const double gamma_s = angular(base.gamma_s_thz);
  const double gamma_i = angular(base.gamma_i_thz);
  CavityParams cs{gamma_s, base.loss_s * gamma_s, 0, CavityLabel::Signal};
  CavityParams ci{gamma_i, base.loss_i * gamma_i, 0, CavityLabel::Idler};
  const double gmax = std::max(gamma_s, gamma_i);

  std::vector<double> purities(xs.size());
  parallel_for(static_cast<int>(xs.size()), [&](int i) {
    const double width = xs[i] * gmax;
    auto pump = rectangular_pump(make_axis(0, 0.75 * width, 8), width);
    const double span_s = base.span_linewidths * (cs.gamma + cs.internal_loss);
    const double span_i = base.span_linewidths * (ci.gamma + ci.internal_loss);
    auto jsf = build_jsf_dual(make_axis(0, span_s, base.points),
                              make_axis(0, span_i, base.points), cs, ci, pump,
                              base.eta);
    purities[i] = purity_gram(jsf.values);
  });

  CsvWriter csv(dir / "sweep.csv", {"omega_p_over_gamma", "purity"});
  bool monotone = true;
  double first_crossing = -1;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    csv.row({xs[i], purities[i]});
    if (i > 0 && purities[i] < purities[i - 1] - 1e-12) monotone = false;
    if (first_crossing < 0 && purities[i] >= 0.9996) first_crossing = xs[i];
  }
  const double purity_max = *std::max_element(purities.begin(), purities.end());
  checks.push_back(check_ge("purity_monotone", monotone ? 1.0 : 0.0, 1.0));
  checks.push_back(check_ge("purity_max", purity_max, 0.9996));

  Json metrics;
  metrics["purity_max"] = purity_max;
  metrics["monotone"] = monotone;
  if (first_crossing > 0)
    metrics["omega_p_over_gamma_at_crossing"] = first_crossing;
  return metrics;
}

Json sweep_gamma_over_dw(const SweepOptions& opts, const fs::path& dir,
                         std::vector<Check>& checks) {
  const auto xs = sweep_grid(opts.from, opts.to, opts.points, opts.log_spacing);
  const QpgOptions& base = opts.qpg;

  struct Row {
    double sep, fid, ce, resid;
  };
  std::vector<Row> rowsv(xs.size());
  parallel_for(static_cast<int>(xs.size()), [&](int i) {
    QpgOptions point = base;
    point.gamma_over_dw = xs[i];
    point.eta = -1; // eta = sqrt(gamma T) along the sweep
    const QpgSetup s = make_qpg_params(point);
    KernelOptions ko;
    ko.oversample = base.oversample;
    ko.check_unitarity = false; // residual reported per point instead
    const TransferPair tp = kernel_transfer(s.params, ko);
    const QpgMetrics qm = qpg_metrics(tp, s.params.pump);
    rowsv[i] = {qm.separability, qm.fidelity_to_pump, qm.conversion_efficiency,
                qm.unitarity_residual};
  });

  CsvWriter csv(dir / "sweep.csv",
                {"gamma_over_dw", "separability", "fidelity",
                 "conversion_efficiency", "unitarity_residual"});
  double worst_sep = 1, worst_fid = 1, worst_resid = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto& row = rowsv[i];
    csv.row({xs[i], row.sep, row.fid, row.ce, row.resid});
    if (xs[i] <= 0.1 + 1e-12) {
      worst_sep = std::min(worst_sep, row.sep);
      worst_fid = std::min(worst_fid, row.fid);
      worst_resid = std::max(worst_resid, row.resid);
    }
  }
  checks.push_back(check_ge("separability_validity_region", worst_sep, 0.995));
  checks.push_back(check_ge("fidelity_validity_region", worst_fid, 0.995));
  checks.push_back(check_le("unitarity_residual_validity_region", worst_resid,
                            1e-6));

  Json metrics;
  metrics["worst_separability_at_or_below_0.1"] = worst_sep;
  metrics["worst_fidelity_at_or_below_0.1"] = worst_fid;
  metrics["worst_unitarity_residual_at_or_below_0.1"] = worst_resid;
  return metrics;
}

Json sweep_eta_ratio(const SweepOptions& opts, const fs::path& dir,
                     std::vector<Check>& checks) {
  const auto xs = sweep_grid(opts.from, opts.to, opts.points, opts.log_spacing);
  const QpgOptions& base = opts.qpg;
  QpgOptions probe = base;
  probe.eta = 0; // filled per point
  QpgSetup s0 = make_qpg_params(probe);
  const double T = s0.params.grid.window_T;
  const double gamma = s0.params.gamma;
  const double iota = s0.params.internal_loss;
  const double eta_star = std::sqrt((gamma + iota) * T);

  auto ce_of = [&](double eta) {
    QpgParams p = s0.params;
    p.eta = eta;
    const auto c = lossy_coefficients(p);
    return c.mu * c.mu;
  };

  CsvWriter csv(dir / "sweep.csv", {"eta_over_eta_star", "eta", "ce"});
  for (double x : xs) csv.row({x, x * eta_star, ce_of(x * eta_star)});

  // golden-section refinement of the CE maximum over log(eta)
  double a = std::log(eta_star / 100), b = std::log(eta_star * 100);
  const double gr = (std::sqrt(5.0) - 1) / 2;
  double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
  double f1 = ce_of(std::exp(c1)), f2 = ce_of(std::exp(c2));
  while (b - a > 1e-12) {
    if (f1 < f2) {
      a = c1; c1 = c2; f1 = f2;
      c2 = a + gr * (b - a); f2 = ce_of(std::exp(c2));
    } else {
      b = c2; c2 = c1; f2 = f1;
      c1 = b - gr * (b - a); f1 = ce_of(std::exp(c1));
    }
  }
  const double eta_max = std::exp((a + b) / 2);
  const double ce_max = ce_of(eta_max);
  const double ce_theory = 1.0 / (1.0 + iota / gamma);

  checks.push_back(check_le("ce_max_vs_theory", std::abs(ce_max - ce_theory), 1e-6));
  checks.push_back(check_le("eta_at_max_relative_error",
                            std::abs(eta_max - eta_star) / eta_star, 1e-6));

  Json metrics;
  metrics["ce_max"] = ce_max;
  metrics["ce_theory"] = ce_theory;
  metrics["eta_at_max"] = eta_max;
  metrics["eta_star"] = eta_star;
  return metrics;
}

} // namespace

Json run_sweep(const SweepOptions& opts, const CommonOptions& common) {
  Stopwatch watch;
  const fs::path dir = prepare_out_dir(common);

  Json doc;
  doc["schema_version"] = 1;
  doc["command"] = "sweep";
  doc["units"] = units_block();
  Json in;
  in["key"] = opts.key;
  in["from"] = opts.from;
  in["to"] = opts.to;
  in["points"] = opts.points;
  in["log_spacing"] = opts.log_spacing;
  doc["inputs"] = in;

  std::vector<Check> checks;
  Json metrics;
  if (opts.key == "loss_ratio")
    metrics = sweep_loss_ratio(opts, dir, checks);
  else if (opts.key == "pump_bw_over_gamma")
    metrics = sweep_pump_bw(opts, dir, checks);
  else if (opts.key == "gamma_over_dw")
    metrics = sweep_gamma_over_dw(opts, dir, checks);
  else if (opts.key == "eta_ratio")
    metrics = sweep_eta_ratio(opts, dir, checks);
  else
    throw ParameterError(
        "run_sweep: key must be loss_ratio|pump_bw_over_gamma|gamma_over_dw|eta_ratio");

  doc["metrics"] = metrics;
  doc["checks"] = checks_to_json(checks);
  maybe_add_timings(doc, common, watch);
  write_json(dir / "metrics.json", doc);
  return doc;
}

Json run_repro(const std::string& figure, const CommonOptions& common) {
  if (figure == "fig2a") {
    SweepOptions s;
    s.key = "pump_bw_over_gamma";
    s.from = 2;
    s.to = 1000;
    s.points = 13;
    s.log_spacing = true;
    s.jsf.gamma_s_thz = s.jsf.gamma_i_thz = 0.1;
    s.jsf.eta = 0.01;
    s.jsf.points = 512;
    return run_sweep(s, common);
  }
  if (figure == "fig2b") {
    SweepOptions s;
    s.key = "loss_ratio";
    s.from = 0;
    s.to = 1;
    s.points = 11;
    s.log_spacing = false;
    s.jsf.gamma_s_thz = s.jsf.gamma_i_thz = 0.1;
    s.jsf.eta = 0.01;
    s.jsf.points = 256;
    return run_sweep(s, common);
  }
  if (figure == "fig2c") {
    JsfOptions j;
    j.mode = "single";
    j.gamma_s_thz = 0.004;
    j.eta = 0.01;
    j.pump = "hg:2:0.1"; // sigma = 25 gamma_s, a documented choice
    j.approx = "idler";
    j.points = 512;
    return run_jsf(j, common);
  }
  if (figure == "fig4a") {
    QpgOptions q;
    q.modes = 100;
    q.window = 1.0;
    q.gamma_over_dw = 1e-2; // eta(auto) = sqrt(gamma T): eta^2/2pi = 1e-2
    q.pump = "hg:2:6.25";
    q.method = "kernel";
    return run_qpg(q, common);
  }
  if (figure == "fig4b") {
    SweepOptions s;
    s.key = "gamma_over_dw";
    s.from = 1e-3;
    s.to = 1.0;
    s.points = 11;
    s.log_spacing = true;
    s.qpg.modes = 100;
    s.qpg.window = 1.0;
    s.qpg.pump = "hg:2:5";
    Json doc = run_sweep(s, common);

    // companion curve: peak CE of the target mode versus internal loss
    const fs::path dir = prepare_out_dir(common);
    CsvWriter csv(dir / "ce_vs_loss.csv", {"loss_ratio", "ce_max"});
    for (int i = 0; i <= 10; ++i) {
      const double r = i / 10.0;
      csv.row({r, 1.0 / (1.0 + r)});
    }
    doc["metrics"]["ce_vs_loss_written"] = true;
    write_json(dir / "metrics.json", doc);
    return doc;
  }
  if (figure == "fig4c") {
    MqpgOptions m;
    m.modes = 100;
    m.window = 1.0;
    m.gamma_over_dw = 0.05;
    m.pump = "hgset:0,1,2:5";
    return run_mqpg(m, common);
  }
  throw ParameterError("run_repro: unknown figure '" + figure +
                       "' (fig2a|fig2b|fig2c|fig4a|fig4b|fig4c)");
}

} // namespace cavmode::cli
