#include "fdsi/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "fdsi/canceller.hpp"
#include "fdsi/errors.hpp"
#include "fdsi/units.hpp"

namespace fdsi {
namespace {

constexpr std::uint64_t kChannelStream = 1;
constexpr std::uint64_t kTrainStream = 2;
constexpr std::uint64_t kEvalStream = 3;
constexpr std::uint64_t kSoiStream = 4;
constexpr std::uint64_t kTrainNoiseStream = 5;
constexpr std::uint64_t kEvalNoiseStream = 6;
constexpr std::uint64_t kCalibrationStream = 7;

// Bursts are cut from a longer stretch of transmission so that neither the
// estimator nor the metrics see the switch-on transient at the buffer edges.
constexpr std::size_t kBurstMargin = 128;

struct MeanAccumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  int n = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return n > 0 ? sum / n : std::nan(""); }
  double standard_error() const {
    if (n < 2) return 0.0;
    const double m = mean();
    return std::sqrt(std::max(0.0, (sum_sq - n * m * m) / (n - 1)) / n);
  }
};

double transmit_data_power(const FrontEnd& fe, double tx_dbm) {
  return dbm_to_watts(tx_dbm) / (std::norm(fe.pa.alpha0) * fe.tx_iq.power_gain());
}

ComplexBasebandSignal shifted(const ComplexBasebandSignal& x, int lag) {
  return lag == 0 ? x : fractional_delay(x, static_cast<double>(lag));
}

const CancellerOutcome& pick(const RealizationOutcome& o, CancellerKind kind) {
  return kind == CancellerKind::kLinear ? o.linear : o.widely_linear;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

std::string to_string(CancellerKind kind) {
  return kind == CancellerKind::kLinear ? "linear" : "widely-linear";
}

void ExperimentConfig::validate() const {
  system.validate();
  ofdm.validate();
  if (n_realizations < 1) throw ConfigurationError("realizations must be >= 1");
  if (cancellers.empty()) throw ConfigurationError("at least one canceller is required");
  if (tx_powers.empty()) throw ConfigurationError("transmit power sweep is empty");
  for (double tx : tx_powers) {
    if (!std::isfinite(tx)) throw ConfigurationError("transmit powers must be finite");
  }
  const WaveformOptions& w = waveform;
  if (w.taps < 1 || w.precursor_taps < 0 || w.precursor_taps >= w.taps) {
    throw ConfigurationError("canceller needs 0 <= K < M");
  }
  if (w.training_samples < 1 || w.evaluation_samples < 1) {
    throw ConfigurationError("training and evaluation bursts must be non-empty");
  }
  if (w.max_lag < 0) throw ConfigurationError("max_lag must be >= 0");
  if (!(w.los_to_multipath_db > 0.0)) throw ConfigurationError("LOS-to-multipath ratio must be > 0 dB");
  if (!std::isfinite(w.rf_delay_error)) throw ConfigurationError("RF delay error must be finite");
  if (grid.taps.empty() || grid.samples.empty()) throw ConfigurationError("M/N grid is empty");
  for (int m : grid.taps) {
    if (m < 1 || grid.precursor_taps >= m) throw ConfigurationError("grid needs 0 <= K < M");
  }
  if (grid.precursor_taps < 0) throw ConfigurationError("grid K must be >= 0");
  if (bias.trials < 100) throw ConfigurationError("bias analysis needs at least 100 trials");
  if (bias.samples < 3) throw ConfigurationError("bias analysis needs at least 3 samples");
  if (!(sixth_moment > 0.0)) throw ConfigurationError("sixth moment must be positive");
}

std::vector<std::size_t> log_spaced(std::size_t lo, std::size_t hi, int n) {
  if (lo < 1 || hi < lo || n < 1) throw DomainError("invalid log-spaced range");
  if (n == 1) return {lo};
  std::vector<std::size_t> out;
  const double a = std::log10(static_cast<double>(lo));
  const double b = std::log10(static_cast<double>(hi));
  for (int i = 0; i < n; ++i) {
    const double v = std::pow(10.0, a + (b - a) * i / (n - 1));
    out.push_back(static_cast<std::size_t>(std::llround(v)));
  }
  return out;
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig cfg;
  cfg.scenario = name;
  for (double tx = -5.0; tx <= 25.0 + 1e-9; tx += 2.0) cfg.tx_powers.push_back(tx);
  cfg.grid.samples = log_spaced(50, 20000, 10);
  if (name == "table1-baseline") return cfg;
  if (name == "low-isolation" || name == "altered-budget") {
    cfg.system.antenna_attenuation_db = 30.0;
    cfg.system.rf_cancellation_db = 20.0;
    if (name == "altered-budget") {
      cfg.system.irr_tx_db = 35.0;
      cfg.system.irr_rx_db = 35.0;
    }
    return cfg;
  }
  throw ConfigurationError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  return {"table1-baseline", "low-isolation", "altered-budget"};
}

FrontEnd build_front_end(const ExperimentConfig& cfg) {
  const SystemParameters& p = cfg.system;
  const IqErrorSplit split{cfg.waveform.iq_amplitude_share};
  FrontEnd fe;
  fe.tx_iq = derive_iq_from_irr(p.irr_tx_db, p.mixer_gain_db, split);
  fe.rx_iq = derive_iq_from_irr(p.irr_rx_db, p.mixer_gain_db, split);
  fe.pa = calibrate_pa(p.pa_gain_db, p.pa_iip3_dbm,
                       cfg.waveform.pa_memory ? PaModel::lowpass_memory() : Samples{Complex{1.0, 0.0}});
  fe.thermal_noise_power = dbm_to_watts(p.thermal_floor_dbm);
  fe.lna = {p.lna_gain_db, p.noise_figure_db, fe.thermal_noise_power};
  fe.adc.bits = p.adc_bits;
  fe.adc.peak_to_peak_voltage = p.adc_vpp;
  fe.adc.papr_db = p.papr_db;
  fe.adc.agc_peak_percentile = cfg.waveform.agc_peak_percentile;
  return fe;
}

RealizationOutcome simulate_realization(const ExperimentConfig& cfg, const FrontEnd& fe,
                                        double tx_dbm, std::size_t n_train, int m, int k,
                                        RngSeed seed) {
  const SystemParameters& p = cfg.system;
  const WaveformOptions& w = cfg.waveform;
  const double p_x = transmit_data_power(fe, tx_dbm);

  TransceiverModel model{fe.tx_iq,
                         fe.pa,
                         draw_coupling_channel(p.antenna_attenuation_db, w.los_to_multipath_db,
                                               seed.derive({kChannelStream})),
                         {},
                         fe.thermal_noise_power,
                         fe.lna,
                         fe.rx_iq,
                         fe.adc};
  const ComplexBasebandSignal x_cal =
      generate_ofdm_samples(cfg.ofdm, w.evaluation_samples, p_x, seed.derive({kCalibrationStream}));
  model.rf = calibrate_rf_canceller(model.channel, p.rf_cancellation_db, w.rf_delay_error,
                                    transmit(model, x_cal));

  const std::size_t n_eval = w.evaluation_samples;
  const ComplexBasebandSignal x_train_full = generate_ofdm_samples(
      cfg.ofdm, n_train + 2 * kBurstMargin, p_x, seed.derive({kTrainStream}));
  const ChainComponents train =
      run_chain(model, x_train_full, std::nullopt, seed.derive({kTrainNoiseStream}));

  const ComplexBasebandSignal x_eval_full = generate_ofdm_samples(
      cfg.ofdm, n_eval + 2 * kBurstMargin, p_x, seed.derive({kEvalStream}));
  const ComplexBasebandSignal soi_full =
      generate_ofdm_samples(cfg.ofdm, n_eval + 2 * kBurstMargin,
                            dbm_to_watts(p.soi_power_dbm), seed.derive({kSoiStream}));
  const ChainComponents eval =
      run_chain(model, x_eval_full, soi_full, seed.derive({kEvalNoiseStream}));
  auto window = [&](const ComplexBasebandSignal& sig) { return sig.slice(kBurstMargin, n_eval); };

  RealizationOutcome out;
  ComponentPowers& c = out.components;
  const double g = eval.input_referred_gain;
  c.si_linear = measure_power(window(eval.si_linear)) / g;
  c.si_conjugate = measure_power(window(eval.si_conjugate)) / g;
  c.imd = measure_power(window(eval.imd)) / g;
  c.imd_image = measure_power(window(eval.imd_image)) / g;
  c.noise = measure_power(window(eval.noise)) / g;
  c.noise_image = measure_power(window(eval.noise_image)) / g;
  c.quantization = measure_power(window(eval.quantization)) / g;
  c.soi = measure_power(window(eval.soi)) / g;
  c.adc_input = measure_power(window(eval.adc_input)) / g;
  const double rail_power = c.adc_input * g * eval.vga_gain * eval.vga_gain / 2.0;
  c.adc_headroom_db = to_db(fe.adc.full_scale() * fe.adc.full_scale() / rail_power);
  c.rf_attenuation_db = model.rf.achieved_attenuation_db;

  // Re-align only when the dominant lag falls outside the modelled window
  // [-K, M-1-K]; the pre-cursor taps absorb the rest.
  const ComplexBasebandSignal y_train = train.digital.slice(kBurstMargin, n_train);
  int lag = 0;
  if (w.max_lag > 0 && n_train > static_cast<std::size_t>(2 * w.max_lag)) {
    lag = estimate_lag(x_train_full.slice(kBurstMargin, n_train), y_train, w.max_lag);
    if (lag >= -k && lag <= m - 1 - k) lag = 0;
  }
  const ComplexBasebandSignal x_train_a = shifted(x_train_full, lag).slice(kBurstMargin, n_train);
  const ComplexBasebandSignal x_eval_a = shifted(x_eval_full, lag);

  std::optional<AugmentedDataMatrix> design;
  try {
    design = build_augmented_matrix(x_train_a, y_train, m, k);
  } catch (const InsufficientDataError&) {
    return out;
  }
  const ComplexBasebandSignal si_before = window(eval.si_total());
  const ComplexBasebandSignal digital = window(eval.digital);
  const ComplexBasebandSignal soi = window(eval.soi);
  for (CancellerKind kind : cfg.cancellers) {
    CancellerOutcome& res = kind == CancellerKind::kLinear ? out.linear : out.widely_linear;
    ChannelEstimate est;
    try {
      est = kind == CancellerKind::kLinear ? estimate_linear_ls(*design) : estimate_wl_ls(*design);
    } catch (const SingularMatrixError&) {
      continue;
    }
    const ComplexBasebandSignal si_hat = window(synthesize_si(est, x_eval_a));
    res.ok = true;
    res.sinr_db = measure_sinr(digital - si_hat, soi);
    res.attenuation_db = -measure_digital_attenuation(si_before, si_before - si_hat);
  }
  return out;
}

double ideal_reference_sinr(const ExperimentConfig& cfg, const FrontEnd& fe, RngSeed seed) {
  const WaveformOptions& w = cfg.waveform;
  TransceiverModel model{fe.tx_iq, fe.pa, {}, {}, fe.thermal_noise_power, fe.lna, fe.rx_iq, fe.adc};
  model.channel.taps.assign(3, Complex{});
  const ComplexBasebandSignal x = ComplexBasebandSignal::zeros(w.evaluation_samples,
                                                               cfg.ofdm.sample_rate());
  const ComplexBasebandSignal soi =
      generate_ofdm_samples(cfg.ofdm, w.evaluation_samples, dbm_to_watts(cfg.system.soi_power_dbm),
                            seed.derive({kSoiStream}));
  const ChainComponents c = run_chain(model, x, soi, seed.derive({kEvalNoiseStream}));
  return measure_sinr(c.digital, c.soi);
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

template <typename Fn>
auto with_scenario(const ExperimentConfig& cfg, Fn&& fn) {
  try {
    return fn();
  } catch (const InfeasibleTargetError& e) {
    throw InfeasibleTargetError("scenario '" + cfg.scenario + "': " + e.what(),
                                e.best_achievable_db());
  }
}

SweepPoint summarize(const std::vector<RealizationOutcome>& outcomes, std::size_t first,
                     std::size_t count, CancellerKind kind) {
  MeanAccumulator sinr, att;
  for (std::size_t r = 0; r < count; ++r) {
    const CancellerOutcome& o = pick(outcomes[first + r], kind);
    if (!o.ok) continue;
    sinr.add(o.sinr_db);
    att.add(o.attenuation_db);
  }
  SweepPoint pt;
  pt.canceller = kind;
  pt.realizations = sinr.n;
  pt.feasible = sinr.n > 0;
  pt.sinr_db = sinr.mean();
  pt.sinr_se_db = sinr.standard_error();
  pt.attenuation_db = att.mean();
  pt.attenuation_se_db = att.standard_error();
  return pt;
}

}  // namespace

SweepResult run_tx_power_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  return with_scenario(cfg, [&] {
    const FrontEnd fe = build_front_end(cfg);
    const auto reps = static_cast<std::size_t>(cfg.n_realizations);
    const std::size_t points = cfg.tx_powers.size();
    const RngSeed base{cfg.seed};
    std::vector<RealizationOutcome> outcomes(points * reps);
    // Seeds depend on the realisation index only, so every transmit power
    // sees the same channels and data.
    parallel_for(points * reps, cfg.threads, [&](std::size_t i) {
      const std::size_t pt = i / reps, r = i % reps;
      outcomes[i] = simulate_realization(cfg, fe, cfg.tx_powers[pt], cfg.waveform.training_samples,
                                         cfg.waveform.taps, cfg.waveform.precursor_taps,
                                         base.derive({r}));
    });
    std::vector<double> ideal(reps);
    parallel_for(reps, cfg.threads,
                 [&](std::size_t r) { ideal[r] = ideal_reference_sinr(cfg, fe, base.derive({r})); });

    SweepResult res;
    res.axis = "tx_dbm";
    MeanAccumulator ideal_mean;
    for (double v : ideal) ideal_mean.add(v);
    res.ideal_sinr_db = ideal_mean.mean();
    for (std::size_t pt = 0; pt < points; ++pt) {
      for (CancellerKind kind : cfg.cancellers) {
        SweepPoint s = summarize(outcomes, pt * reps, reps, kind);
        s.tx_dbm = cfg.tx_powers[pt];
        s.m = cfg.waveform.taps;
        s.n = cfg.waveform.training_samples;
        res.points.push_back(s);
      }
      ComponentPowers mean;
      MeanAccumulator headroom, rf;
      for (std::size_t r = 0; r < reps; ++r) {
        const ComponentPowers& c = outcomes[pt * reps + r].components;
        mean.si_linear += c.si_linear / reps;
        mean.si_conjugate += c.si_conjugate / reps;
        mean.imd += c.imd / reps;
        mean.imd_image += c.imd_image / reps;
        mean.noise += c.noise / reps;
        mean.noise_image += c.noise_image / reps;
        mean.quantization += c.quantization / reps;
        mean.soi += c.soi / reps;
        mean.adc_input += c.adc_input / reps;
        headroom.add(c.adc_headroom_db);
        rf.add(c.rf_attenuation_db);
      }
      mean.adc_headroom_db = headroom.mean();
      mean.rf_attenuation_db = rf.mean();
      res.tx_dbm.push_back(cfg.tx_powers[pt]);
      res.components.push_back(mean);
    }
    return res;
  });
}

SweepResult run_mn_grid(const ExperimentConfig& cfg) {
  cfg.validate();
  return with_scenario(cfg, [&] {
    const FrontEnd fe = build_front_end(cfg);
    const auto reps = static_cast<std::size_t>(cfg.n_realizations);
    const RngSeed base{cfg.seed};
    const int k = cfg.grid.precursor_taps;

    struct Cell {
      int m;
      std::size_t n;
    };
    std::vector<Cell> cells;
    for (int m : cfg.grid.taps) {
      for (std::size_t n : cfg.grid.samples) cells.push_back({m, n});
    }
    std::vector<RealizationOutcome> outcomes(cells.size() * reps);
    parallel_for(cells.size() * reps, cfg.threads, [&](std::size_t i) {
      const Cell& cell = cells[i / reps];
      if (cell.n <= static_cast<std::size_t>(2 * cell.m + k)) return;
      outcomes[i] = simulate_realization(cfg, fe, cfg.grid.tx_power_dbm, cell.n, cell.m, k,
                                         base.derive({i % reps}));
    });

    SweepResult res;
    res.axis = "m_n";
    for (std::size_t c = 0; c < cells.size(); ++c) {
      for (CancellerKind kind : cfg.cancellers) {
        SweepPoint s = summarize(outcomes, c * reps, reps, kind);
        s.tx_dbm = cfg.grid.tx_power_dbm;
        s.m = cells[c].m;
        s.n = cells[c].n;
        res.points.push_back(s);
      }
    }
    return res;
  });
}

std::vector<PowerBudget> run_budget(const ExperimentConfig& cfg) {
  cfg.validate();
  return sweep_tx_power(cfg.system, cfg.tx_powers, cfg.ldc, cfg.sixth_moment);
}

BiasReport run_bias(const ExperimentConfig& cfg) {
  cfg.validate();
  SystemParameters p = cfg.system;
  p.tx_power_dbm = cfg.bias.tx_power_dbm;
  return monte_carlo_bias(p, cfg.bias.samples, cfg.bias.trials, RngSeed{cfg.seed},
                          cfg.bias.waveform);
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result) {
  std::ofstream out = open_output(path);
  out << "tx_dbm,canceller,sinr_db,sinr_se_db,attenuation_db,attenuation_se_db,realizations,"
         "p_si,p_si_im,p_imd,p_imd_im,p_noise,p_noise_im,p_q,p_soi,p_ad\n";
  for (const SweepPoint& s : result.points) {
    const auto idx = static_cast<std::size_t>(
        std::find(result.tx_dbm.begin(), result.tx_dbm.end(), s.tx_dbm) - result.tx_dbm.begin());
    const ComponentPowers& c = result.components.at(idx);
    out << fmt::format("{:.6g},{},{:.6f},{:.6f},{:.6f},{:.6f},{},", s.tx_dbm, to_string(s.canceller),
                       s.sinr_db, s.sinr_se_db, s.attenuation_db, s.attenuation_se_db,
                       s.realizations);
    out << fmt::format("{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n",
                       watts_to_dbm(c.si_linear), watts_to_dbm(c.si_conjugate),
                       watts_to_dbm(c.imd), watts_to_dbm(c.imd_image), watts_to_dbm(c.noise),
                       watts_to_dbm(c.noise_image), watts_to_dbm(c.quantization),
                       watts_to_dbm(c.soi), watts_to_dbm(c.adc_input));
  }
  if (!out) throw IoError("failed writing " + path.string());
}

void write_grid_csv(const std::filesystem::path& path, const SweepResult& result) {
  std::ofstream out = open_output(path);
  out << "m,n,canceller,sinr_db,sinr_se_db,attenuation_db,attenuation_se_db,realizations,status\n";
  for (const SweepPoint& s : result.points) {
    out << fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{},{}\n", s.m, s.n,
                       to_string(s.canceller), s.sinr_db, s.sinr_se_db, s.attenuation_db,
                       s.attenuation_se_db, s.realizations,
                       s.feasible ? "ok" : "insufficient-data");
  }
  if (!out) throw IoError("failed writing " + path.string());
}

void emit_plot_script(const std::filesystem::path& path, const std::string& csv_name,
                      PlotStyle style) {
  std::ofstream out = open_output(path);
  out << "import os\n"
         "import matplotlib\n"
         "matplotlib.use(\"Agg\")\n"
         "import matplotlib.pyplot as plt\n"
         "import pandas as pd\n\n"
         "here = os.path.dirname(os.path.abspath(__file__))\n"
      << "df = pd.read_csv(os.path.join(here, \"" << csv_name << "\"))\n"
      << "fig, ax = plt.subplots(figsize=(7, 4.5))\n";
  switch (style) {
    case PlotStyle::kBudget:
      out << "labels = {\"p_si\": \"linear SI\", \"p_si_im\": \"conjugate SI\", \"p_imd\": \"IMD\",\n"
             "          \"p_imd_im\": \"IMD image\", \"p_noise\": \"thermal noise\",\n"
             "          \"p_noise_im\": \"noise image\", \"p_q\": \"quantization noise\",\n"
             "          \"p_soi\": \"signal of interest\"}\n"
             "for col, label in labels.items():\n"
             "    ax.plot(df[\"tx_dbm\"], df[col], marker=\"o\", ms=3, label=label)\n"
             "ax.set_ylabel(\"power at receiver input [dBm]\")\n"
             "out = \"budget.png\"\n";
      break;
    case PlotStyle::kTxSweep:
      out << "fig2, ax2 = plt.subplots(figsize=(7, 4.5))\n"
             "for name, g in df.groupby(\"canceller\"):\n"
             "    ax.errorbar(g[\"tx_dbm\"], g[\"sinr_db\"], yerr=g[\"sinr_se_db\"], marker=\"o\", ms=3,\n"
             "                label=name)\n"
             "    ax2.plot(g[\"tx_dbm\"], g[\"attenuation_db\"], marker=\"o\", ms=3, label=name)\n"
             "ax.set_ylabel(\"SINR [dB]\")\n"
             "ax2.set_xlabel(\"transmit power [dBm]\")\n"
             "ax2.set_ylabel(\"digital SI attenuation [dB]\")\n"
             "ax2.grid(True, alpha=0.3)\n"
             "ax2.legend()\n"
             "fig2.tight_layout()\n"
             "fig2.savefig(os.path.join(here, \"sweep_tx_attenuation.png\"), dpi=150)\n"
             "out = \"sweep_tx_sinr.png\"\n";
      break;
    case PlotStyle::kGrid:
      out << "fig2, ax2 = plt.subplots(figsize=(7, 4.5))\n"
             "ok = df[df[\"status\"] == \"ok\"]\n"
             "for (m, name), g in ok.groupby([\"m\", \"canceller\"]):\n"
             "    ax.semilogx(g[\"n\"], g[\"sinr_db\"], marker=\"o\", ms=3, label=f\"M={m} {name}\")\n"
             "    ax2.semilogx(g[\"n\"], g[\"attenuation_db\"], marker=\"o\", ms=3,\n"
             "                 label=f\"M={m} {name}\")\n"
             "ax.set_ylabel(\"SINR [dB]\")\n"
             "ax2.set_xlabel(\"training samples N\")\n"
             "ax2.set_ylabel(\"digital SI attenuation [dB]\")\n"
             "ax2.grid(True, which=\"both\", alpha=0.3)\n"
             "ax2.legend(fontsize=7)\n"
             "fig2.tight_layout()\n"
             "fig2.savefig(os.path.join(here, \"sweep_mn_attenuation.png\"), dpi=150)\n"
             "out = \"sweep_mn_sinr.png\"\n";
      break;
  }
  out << "ax.set_xlabel(\"" << (style == PlotStyle::kGrid ? "training samples N" : "transmit power [dBm]")
      << "\")\n"
         "ax.grid(True, alpha=0.3)\n"
         "ax.legend(fontsize=8)\n"
         "fig.tight_layout()\n"
         "fig.savefig(os.path.join(here, out), dpi=150)\n";
  if (!out) throw IoError("failed writing " + path.string());
}

void write_manifest(const std::filesystem::path& path, const std::string& command,
                    const ExperimentConfig& cfg) {
  std::ofstream out = open_output(path);
  out << "command: " << command << "\n"
      << "scenario: " << cfg.scenario << "\n"
      << "seed: " << cfg.seed << "\n"
      << "realizations: " << cfg.n_realizations << "\n"
      << "--- resolved configuration\n"
      << to_yaml(cfg);
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace fdsi
