#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fdsi/bias.hpp"
#include "fdsi/budget.hpp"
#include "fdsi/chain.hpp"
#include "fdsi/ofdm.hpp"

namespace fdsi {

enum class CancellerKind { kLinear, kWidelyLinear };

std::string to_string(CancellerKind kind);

/// Simulator settings that the closed-form budget does not need.
struct WaveformOptions {
  double los_to_multipath_db = 35.8;
  double rf_delay_error = 0.07;  ///< samples
  double iq_amplitude_share = 0.1;
  bool pa_memory = false;  ///< use PaModel::lowpass_memory() instead of a single tap
  double agc_peak_percentile = 100.0;
  std::size_t training_samples = 5000;
  std::size_t evaluation_samples = 5000;
  int taps = 5;            ///< M
  int precursor_taps = 1;  ///< K
  int max_lag = 0;         ///< cross-correlation search range for alignment; 0 disables
};

struct GridSpec {
  std::vector<int> taps{2, 3, 4, 5};
  int precursor_taps = 1;
  std::vector<std::size_t> samples;  ///< training lengths N
  double tx_power_dbm = 15.0;
};

struct BiasSpec {
  int trials = 500;
  std::size_t samples = 5000;
  double tx_power_dbm = 15.0;
  BiasWaveform waveform = BiasWaveform::kCircularGaussian;
};

struct ExperimentConfig {
  std::string scenario = "table1-baseline";
  SystemParameters system;
  OfdmConfig ofdm;
  WaveformOptions waveform;
  std::vector<double> tx_powers;
  GridSpec grid;
  BiasSpec bias;
  LdcPolicy ldc = LdcPolicy::noise_floor();
  double sixth_moment = kGaussianSixthMoment;
  std::vector<CancellerKind> cancellers{CancellerKind::kLinear, CancellerKind::kWidelyLinear};
  int n_realizations = 100;
  std::uint64_t seed = 1;
  unsigned threads = 0;  ///< 0 = hardware concurrency
  std::filesystem::path output_dir = "out";

  /// Throws ConfigurationError on an invalid combination.
  void validate() const;
};

/// Named presets: "table1-baseline" (40 dB antenna, 30 dB RF, IRR 25),
/// "low-isolation" (30 dB antenna, 20 dB RF, IRR 25) and "altered-budget"
/// (30 dB antenna, 20 dB RF, IRR 35).
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// YAML file; an optional top-level `preset` key selects the base that the
/// remaining keys override. Throws ConfigurationError or IoError.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& yaml_text);
std::string to_yaml(const ExperimentConfig& cfg);

/// `n` log-spaced integers from `lo` to `hi` inclusive.
std::vector<std::size_t> log_spaced(std::size_t lo, std::size_t hi, int n);

/// Deterministic front-end blocks shared by every realisation.
struct FrontEnd {
  IqImbalance tx_iq;
  IqImbalance rx_iq;
  PaModel pa;
  LnaModel lna;
  AdcModel adc;
  double thermal_noise_power = 0.0;
};

FrontEnd build_front_end(const ExperimentConfig& cfg);

/// Mean component powers in watts referred to the receiver input.
struct ComponentPowers {
  double si_linear = 0.0;
  double si_conjugate = 0.0;
  double imd = 0.0;
  double imd_image = 0.0;
  double noise = 0.0;
  double noise_image = 0.0;
  double quantization = 0.0;
  double soi = 0.0;
  double adc_input = 0.0;
  /// Rail full scale over the per-rail ADC input power, dB.
  double adc_headroom_db = 0.0;
  double rf_attenuation_db = 0.0;
};

struct CancellerOutcome {
  bool ok = false;
  double sinr_db = 0.0;
  double attenuation_db = 0.0;  ///< positive: decrease of linear + conjugate SI power
};

struct RealizationOutcome {
  CancellerOutcome linear;
  CancellerOutcome widely_linear;
  ComponentPowers components;
};

/// One realisation: draw the coupling channel, calibrate the RF canceller on
/// the training burst, train on an SOI-free burst of `n_train` samples and
/// evaluate on a fresh burst carrying the SOI.
RealizationOutcome simulate_realization(const ExperimentConfig& cfg, const FrontEnd& fe,
                                        double tx_dbm, std::size_t n_train, int m, int k,
                                        RngSeed seed);

/// SINR with the SI path removed entirely (noise, SOI and quantisation only).
double ideal_reference_sinr(const ExperimentConfig& cfg, const FrontEnd& fe, RngSeed seed);

struct SweepPoint {
  double tx_dbm = 0.0;
  int m = 0;
  std::size_t n = 0;
  CancellerKind canceller = CancellerKind::kWidelyLinear;
  double sinr_db = 0.0;
  double sinr_se_db = 0.0;
  double attenuation_db = 0.0;
  double attenuation_se_db = 0.0;
  int realizations = 0;  ///< completed estimations averaged
  bool feasible = true;
};

struct SweepResult {
  std::string axis;  ///< "tx_dbm" or "m_n"
  std::vector<SweepPoint> points;
  /// Tx sweep only: mean component powers per transmit power.
  std::vector<double> tx_dbm;
  std::vector<ComponentPowers> components;
  /// Mean SINR with the SI path removed, over the same realisation seeds.
  double ideal_sinr_db = 0.0;
};

SweepResult run_tx_power_sweep(const ExperimentConfig& cfg);
SweepResult run_mn_grid(const ExperimentConfig& cfg);
std::vector<PowerBudget> run_budget(const ExperimentConfig& cfg);
BiasReport run_bias(const ExperimentConfig& cfg);

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result);
void write_grid_csv(const std::filesystem::path& path, const SweepResult& result);

enum class PlotStyle { kBudget, kTxSweep, kGrid };

/// Self-contained matplotlib script that reads `csv_name` from its own
/// directory.
void emit_plot_script(const std::filesystem::path& path, const std::string& csv_name,
                      PlotStyle style);

/// Text manifest: command, timestamp-free header and the resolved YAML.
void write_manifest(const std::filesystem::path& path, const std::string& command,
                    const ExperimentConfig& cfg);

/// Runs `fn(i)` for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace fdsi
