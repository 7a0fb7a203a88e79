#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "fdsi/errors.hpp"
#include "fdsi/harness.hpp"

namespace fdsi {
namespace {

void reject_unknown(const YAML::Node& node, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) throw ConfigurationError("'" + where + "' must be a mapping");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!keys.count(key)) throw ConfigurationError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& target, const std::string& where) {
  const YAML::Node v = node[key];
  if (!v) return;
  try {
    target = v.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigurationError("'" + where + "." + key + "' has the wrong type");
  }
}

std::vector<double> read_range(const YAML::Node& node, const std::string& where) {
  if (node.IsSequence()) return node.as<std::vector<double>>();
  reject_unknown(node, where, {"start", "stop", "step"});
  const double start = node["start"].as<double>();
  const double stop = node["stop"].as<double>();
  const double step = node["step"].as<double>();
  return power_range(start, stop, step);
}

CancellerKind parse_canceller(const std::string& s) {
  if (s == "linear") return CancellerKind::kLinear;
  if (s == "widely-linear" || s == "wl") return CancellerKind::kWidelyLinear;
  throw ConfigurationError("unknown canceller '" + s + "'");
}

void apply_system(const YAML::Node& n, SystemParameters& p) {
  const std::string w = "system";
  reject_unknown(n, w,
                 {"bandwidth_hz", "thermal_floor_dbm", "noise_figure_db", "snr_requirement_db",
                  "sensitivity_dbm", "soi_power_dbm", "tx_power_dbm", "pa_gain_db", "pa_iip3_dbm",
                  "antenna_attenuation_db", "rf_cancellation_db", "lna_gain_db", "mixer_gain_db",
                  "irr_tx_db", "irr_rx_db", "adc_bits", "adc_vpp", "papr_db"});
  read(n, "bandwidth_hz", p.bandwidth_hz, w);
  read(n, "thermal_floor_dbm", p.thermal_floor_dbm, w);
  read(n, "noise_figure_db", p.noise_figure_db, w);
  read(n, "snr_requirement_db", p.snr_requirement_db, w);
  read(n, "sensitivity_dbm", p.sensitivity_dbm, w);
  read(n, "soi_power_dbm", p.soi_power_dbm, w);
  read(n, "tx_power_dbm", p.tx_power_dbm, w);
  read(n, "pa_gain_db", p.pa_gain_db, w);
  read(n, "pa_iip3_dbm", p.pa_iip3_dbm, w);
  read(n, "antenna_attenuation_db", p.antenna_attenuation_db, w);
  read(n, "rf_cancellation_db", p.rf_cancellation_db, w);
  read(n, "lna_gain_db", p.lna_gain_db, w);
  read(n, "mixer_gain_db", p.mixer_gain_db, w);
  read(n, "irr_tx_db", p.irr_tx_db, w);
  read(n, "irr_rx_db", p.irr_rx_db, w);
  read(n, "adc_bits", p.adc_bits, w);
  read(n, "adc_vpp", p.adc_vpp, w);
  read(n, "papr_db", p.papr_db, w);
}

void apply_ofdm(const YAML::Node& n, OfdmConfig& o) {
  const std::string w = "ofdm";
  reject_unknown(n, w,
                 {"constellation", "n_subcarriers", "n_data_subcarriers", "guard_fraction",
                  "sample_interval_s", "symbol_length_s", "oversampling",
                  "shaping_cutoff_hz", "shaping_half_length"});
  read(n, "constellation", o.constellation, w);
  read(n, "n_subcarriers", o.n_subcarriers, w);
  read(n, "n_data_subcarriers", o.n_data_subcarriers, w);
  read(n, "guard_fraction", o.guard_fraction, w);
  read(n, "sample_interval_s", o.sample_interval_s, w);
  read(n, "symbol_length_s", o.symbol_length_s, w);
  read(n, "oversampling", o.oversampling, w);
  read(n, "shaping_cutoff_hz", o.shaping_cutoff_hz, w);
  read(n, "shaping_half_length", o.shaping_half_length, w);
}

void apply_waveform(const YAML::Node& n, WaveformOptions& o) {
  const std::string w = "waveform";
  reject_unknown(n, w,
                 {"los_to_multipath_db", "rf_delay_error", "iq_amplitude_share", "pa_memory",
                  "agc_peak_percentile", "training_samples", "evaluation_samples", "taps",
                  "precursor_taps", "max_lag"});
  read(n, "los_to_multipath_db", o.los_to_multipath_db, w);
  read(n, "rf_delay_error", o.rf_delay_error, w);
  read(n, "iq_amplitude_share", o.iq_amplitude_share, w);
  read(n, "pa_memory", o.pa_memory, w);
  read(n, "agc_peak_percentile", o.agc_peak_percentile, w);
  read(n, "training_samples", o.training_samples, w);
  read(n, "evaluation_samples", o.evaluation_samples, w);
  read(n, "taps", o.taps, w);
  read(n, "precursor_taps", o.precursor_taps, w);
  read(n, "max_lag", o.max_lag, w);
}

void apply(const YAML::Node& root, ExperimentConfig& cfg) {
  reject_unknown(root, "configuration",
                 {"preset", "scenario", "seed", "realizations", "threads", "output_dir", "system",
                  "ofdm", "waveform", "sweep", "grid", "bias", "budget"});
  read(root, "scenario", cfg.scenario, "configuration");
  read(root, "seed", cfg.seed, "configuration");
  read(root, "realizations", cfg.n_realizations, "configuration");
  read(root, "threads", cfg.threads, "configuration");
  if (root["output_dir"]) cfg.output_dir = root["output_dir"].as<std::string>();
  if (root["system"]) apply_system(root["system"], cfg.system);
  if (root["ofdm"]) apply_ofdm(root["ofdm"], cfg.ofdm);
  if (root["waveform"]) apply_waveform(root["waveform"], cfg.waveform);
  if (const YAML::Node s = root["sweep"]) {
    reject_unknown(s, "sweep", {"tx_power_dbm", "cancellers"});
    if (s["tx_power_dbm"]) cfg.tx_powers = read_range(s["tx_power_dbm"], "sweep.tx_power_dbm");
    if (s["cancellers"]) {
      cfg.cancellers.clear();
      for (const auto& c : s["cancellers"]) cfg.cancellers.push_back(parse_canceller(c.as<std::string>()));
    }
  }
  if (const YAML::Node g = root["grid"]) {
    reject_unknown(g, "grid", {"taps", "precursor_taps", "samples", "tx_power_dbm"});
    read(g, "taps", cfg.grid.taps, "grid");
    read(g, "precursor_taps", cfg.grid.precursor_taps, "grid");
    read(g, "tx_power_dbm", cfg.grid.tx_power_dbm, "grid");
    if (const YAML::Node n = g["samples"]) {
      if (n.IsSequence()) {
        cfg.grid.samples = n.as<std::vector<std::size_t>>();
      } else {
        reject_unknown(n, "grid.samples", {"start", "stop", "points"});
        cfg.grid.samples = log_spaced(n["start"].as<std::size_t>(), n["stop"].as<std::size_t>(),
                                      n["points"].as<int>());
      }
    }
  }
  if (const YAML::Node b = root["bias"]) {
    reject_unknown(b, "bias", {"trials", "samples", "tx_power_dbm", "waveform"});
    read(b, "trials", cfg.bias.trials, "bias");
    read(b, "samples", cfg.bias.samples, "bias");
    read(b, "tx_power_dbm", cfg.bias.tx_power_dbm, "bias");
    if (b["waveform"]) {
      const auto wf = b["waveform"].as<std::string>();
      if (wf == "gaussian") {
        cfg.bias.waveform = BiasWaveform::kCircularGaussian;
      } else if (wf == "ofdm") {
        cfg.bias.waveform = BiasWaveform::kOfdm;
      } else {
        throw ConfigurationError("bias.waveform must be 'gaussian' or 'ofdm'");
      }
    }
  }
  if (const YAML::Node b = root["budget"]) {
    reject_unknown(b, "budget", {"ldc", "sixth_moment"});
    read(b, "sixth_moment", cfg.sixth_moment, "budget");
    if (const YAML::Node l = b["ldc"]) {
      if (l.IsScalar() && l.as<std::string>() == "noise-floor") {
        cfg.ldc = LdcPolicy::noise_floor();
      } else {
        double db = 0.0;
        read(b, "ldc", db, "budget");
        cfg.ldc = LdcPolicy::fixed(db);
      }
    }
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigurationError(std::string("malformed configuration: ") + e.what());
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  ExperimentConfig cfg = preset(root["preset"] ? root["preset"].as<std::string>() : "table1-baseline");
  try {
    apply(root, cfg);
  } catch (const YAML::Exception& e) {
    throw ConfigurationError(std::string("invalid configuration value: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read configuration " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_yaml(const ExperimentConfig& cfg) {
  YAML::Emitter e;
  e.SetDoublePrecision(10);
  e << YAML::BeginMap;
  e << YAML::Key << "scenario" << YAML::Value << cfg.scenario;
  e << YAML::Key << "seed" << YAML::Value << cfg.seed;
  e << YAML::Key << "realizations" << YAML::Value << cfg.n_realizations;
  e << YAML::Key << "threads" << YAML::Value << cfg.threads;
  e << YAML::Key << "output_dir" << YAML::Value << cfg.output_dir.string();

  const SystemParameters& p = cfg.system;
  e << YAML::Key << "system" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "bandwidth_hz" << YAML::Value << p.bandwidth_hz;
  e << YAML::Key << "thermal_floor_dbm" << YAML::Value << p.thermal_floor_dbm;
  e << YAML::Key << "noise_figure_db" << YAML::Value << p.noise_figure_db;
  e << YAML::Key << "snr_requirement_db" << YAML::Value << p.snr_requirement_db;
  e << YAML::Key << "sensitivity_dbm" << YAML::Value << p.sensitivity_dbm;
  e << YAML::Key << "soi_power_dbm" << YAML::Value << p.soi_power_dbm;
  e << YAML::Key << "tx_power_dbm" << YAML::Value << p.tx_power_dbm;
  e << YAML::Key << "pa_gain_db" << YAML::Value << p.pa_gain_db;
  e << YAML::Key << "pa_iip3_dbm" << YAML::Value << p.pa_iip3_dbm;
  e << YAML::Key << "antenna_attenuation_db" << YAML::Value << p.antenna_attenuation_db;
  e << YAML::Key << "rf_cancellation_db" << YAML::Value << p.rf_cancellation_db;
  e << YAML::Key << "lna_gain_db" << YAML::Value << p.lna_gain_db;
  e << YAML::Key << "mixer_gain_db" << YAML::Value << p.mixer_gain_db;
  e << YAML::Key << "irr_tx_db" << YAML::Value << p.irr_tx_db;
  e << YAML::Key << "irr_rx_db" << YAML::Value << p.irr_rx_db;
  e << YAML::Key << "adc_bits" << YAML::Value << p.adc_bits;
  e << YAML::Key << "adc_vpp" << YAML::Value << p.adc_vpp;
  e << YAML::Key << "papr_db" << YAML::Value << p.papr_db;
  e << YAML::EndMap;

  const OfdmConfig& o = cfg.ofdm;
  e << YAML::Key << "ofdm" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "constellation" << YAML::Value << o.constellation;
  e << YAML::Key << "n_subcarriers" << YAML::Value << o.n_subcarriers;
  e << YAML::Key << "n_data_subcarriers" << YAML::Value << o.n_data_subcarriers;
  e << YAML::Key << "guard_fraction" << YAML::Value << o.guard_fraction;
  e << YAML::Key << "sample_interval_s" << YAML::Value << o.sample_interval_s;
  e << YAML::Key << "symbol_length_s" << YAML::Value << o.symbol_length_s;
  e << YAML::Key << "oversampling" << YAML::Value << o.oversampling;
  e << YAML::Key << "shaping_cutoff_hz" << YAML::Value << o.shaping_cutoff_hz;
  e << YAML::Key << "shaping_half_length" << YAML::Value << o.shaping_half_length;
  e << YAML::EndMap;

  const WaveformOptions& w = cfg.waveform;
  e << YAML::Key << "waveform" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "los_to_multipath_db" << YAML::Value << w.los_to_multipath_db;
  e << YAML::Key << "rf_delay_error" << YAML::Value << w.rf_delay_error;
  e << YAML::Key << "iq_amplitude_share" << YAML::Value << w.iq_amplitude_share;
  e << YAML::Key << "pa_memory" << YAML::Value << w.pa_memory;
  e << YAML::Key << "agc_peak_percentile" << YAML::Value << w.agc_peak_percentile;
  e << YAML::Key << "training_samples" << YAML::Value << w.training_samples;
  e << YAML::Key << "evaluation_samples" << YAML::Value << w.evaluation_samples;
  e << YAML::Key << "taps" << YAML::Value << w.taps;
  e << YAML::Key << "precursor_taps" << YAML::Value << w.precursor_taps;
  e << YAML::Key << "max_lag" << YAML::Value << w.max_lag;
  e << YAML::EndMap;

  e << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "tx_power_dbm" << YAML::Value << YAML::Flow << cfg.tx_powers;
  e << YAML::Key << "cancellers" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (CancellerKind k : cfg.cancellers) e << to_string(k);
  e << YAML::EndSeq << YAML::EndMap;

  e << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "taps" << YAML::Value << YAML::Flow << cfg.grid.taps;
  e << YAML::Key << "precursor_taps" << YAML::Value << cfg.grid.precursor_taps;
  e << YAML::Key << "samples" << YAML::Value << YAML::Flow << cfg.grid.samples;
  e << YAML::Key << "tx_power_dbm" << YAML::Value << cfg.grid.tx_power_dbm;
  e << YAML::EndMap;

  e << YAML::Key << "bias" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "trials" << YAML::Value << cfg.bias.trials;
  e << YAML::Key << "samples" << YAML::Value << cfg.bias.samples;
  e << YAML::Key << "tx_power_dbm" << YAML::Value << cfg.bias.tx_power_dbm;
  e << YAML::Key << "waveform" << YAML::Value
    << (cfg.bias.waveform == BiasWaveform::kOfdm ? "ofdm" : "gaussian");
  e << YAML::EndMap;

  e << YAML::Key << "budget" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "ldc" << YAML::Value;
  if (cfg.ldc.kind == LdcPolicy::Kind::kFixed) {
    e << cfg.ldc.fixed_db;
  } else {
    e << "noise-floor";
  }
  e << YAML::Key << "sixth_moment" << YAML::Value << cfg.sixth_moment;
  e << YAML::EndMap;

  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

}  // namespace fdsi
