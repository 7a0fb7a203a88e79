#include "fdsi/fdsi.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "fdsi/canceller.hpp"
#include "fdsi/errors.hpp"
#include "fdsi/harness.hpp"
#include "fdsi/units.hpp"

struct fdsi_experiment {
  fdsi::ExperimentConfig cfg;
  bool write_outputs = false;
};

struct fdsi_table {
  struct Cell {
    double value;
    std::string text;
  };
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

namespace {

thread_local std::string g_last_error;

fdsi_status fail(fdsi_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

fdsi_status map_code(fdsi::ErrorCode code) {
  switch (code) {
    case fdsi::ErrorCode::kConfiguration: return FDSI_ERR_CONFIG;
    case fdsi::ErrorCode::kDomain: return FDSI_ERR_DOMAIN;
    case fdsi::ErrorCode::kInsufficientData: return FDSI_ERR_INSUFFICIENT_DATA;
    case fdsi::ErrorCode::kSingular: return FDSI_ERR_SINGULAR;
    case fdsi::ErrorCode::kInfeasibleTarget: return FDSI_ERR_INFEASIBLE;
    case fdsi::ErrorCode::kAlignment: return FDSI_ERR_ALIGNMENT;
    case fdsi::ErrorCode::kIo: return FDSI_ERR_IO;
  }
  return FDSI_ERR_INTERNAL;
}

template <typename Fn>
fdsi_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return FDSI_OK;
  } catch (const fdsi::InfeasibleTargetError& e) {
    return fail(FDSI_ERR_INFEASIBLE,
                fmt::format("{} (best achievable {:.2f} dB)", e.what(), e.best_achievable_db()));
  } catch (const fdsi::Error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(FDSI_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FDSI_ERR_INTERNAL, "unknown failure");
  }
}

class TableBuilder {
 public:
  explicit TableBuilder(std::vector<std::string> columns) { table_.columns = std::move(columns); }

  TableBuilder& row() {
    table_.rows.emplace_back();
    return *this;
  }
  TableBuilder& num(double v, const char* format = "{:.6f}") {
    table_.rows.back().push_back({v, fmt::format(fmt::runtime(format), v)});
    return *this;
  }
  TableBuilder& integer(long long v) {
    table_.rows.back().push_back({static_cast<double>(v), std::to_string(v)});
    return *this;
  }
  TableBuilder& text(std::string s) {
    table_.rows.back().push_back({std::numeric_limits<double>::quiet_NaN(), std::move(s)});
    return *this;
  }
  fdsi_table* release() { return new fdsi_table(std::move(table_)); }

 private:
  fdsi_table table_;
};

fdsi_table* budget_table(const std::vector<fdsi::PowerBudget>& rows) {
  TableBuilder t({"tx_dbm", "p_si", "p_si_im", "p_imd", "p_imd_im", "p_noise", "p_noise_im", "p_q",
                  "p_soi", "sinr", "p_si_before", "p_ad", "required_ldc_db"});
  for (const fdsi::PowerBudget& b : rows) {
    t.row().num(b.tx_dbm, "{:.6g}").num(b.p_si).num(b.p_si_im).num(b.p_imd).num(b.p_imd_im);
    t.num(b.p_noise).num(b.p_noise_im).num(b.p_q).num(b.p_soi).num(b.sinr);
    t.num(b.p_si_before).num(b.p_ad).num(b.required_ldc);
  }
  return t.release();
}

fdsi_table* sweep_table(const fdsi::SweepResult& res) {
  TableBuilder t({"tx_dbm", "canceller", "sinr_db", "sinr_se_db", "attenuation_db",
                  "attenuation_se_db", "realizations", "p_si", "p_si_im", "p_imd", "p_imd_im",
                  "p_noise", "p_noise_im", "p_q", "p_soi", "p_ad", "rf_attenuation_db",
                  "adc_headroom_db"});
  for (std::size_t i = 0; i < res.points.size(); ++i) {
    const fdsi::SweepPoint& s = res.points[i];
    std::size_t idx = 0;
    while (idx + 1 < res.tx_dbm.size() && res.tx_dbm[idx] != s.tx_dbm) ++idx;
    const fdsi::ComponentPowers& c = res.components.at(idx);
    t.row().num(s.tx_dbm, "{:.6g}").text(fdsi::to_string(s.canceller));
    t.num(s.sinr_db).num(s.sinr_se_db).num(s.attenuation_db).num(s.attenuation_se_db);
    t.integer(s.realizations);
    for (double w : {c.si_linear, c.si_conjugate, c.imd, c.imd_image, c.noise, c.noise_image,
                     c.quantization, c.soi, c.adc_input}) {
      t.num(fdsi::watts_to_dbm(w));
    }
    t.num(c.rf_attenuation_db).num(c.adc_headroom_db);
  }
  return t.release();
}

fdsi_table* grid_table(const fdsi::SweepResult& res) {
  TableBuilder t({"m", "n", "canceller", "sinr_db", "sinr_se_db", "attenuation_db",
                  "attenuation_se_db", "realizations", "status"});
  for (const fdsi::SweepPoint& s : res.points) {
    t.row().integer(s.m).integer(static_cast<long long>(s.n)).text(fdsi::to_string(s.canceller));
    t.num(s.sinr_db).num(s.sinr_se_db).num(s.attenuation_db).num(s.attenuation_se_db);
    t.integer(s.realizations).text(s.feasible ? "ok" : "insufficient-data");
  }
  return t.release();
}

fdsi_table* bias_table(const fdsi::BiasReport& rep) {
  TableBuilder t({"coefficient", "analytic_re", "analytic_im", "exact_re", "exact_im",
                  "empirical_re", "empirical_im", "standard_error", "agreement", "trials",
                  "samples"});
  for (int i = 0; i < 2; ++i) {
    t.row().text(i == 0 ? "h1" : "h2");
    t.num(rep.analytic_bias[i].real(), "{:.6e}").num(rep.analytic_bias[i].imag(), "{:.6e}");
    t.num(rep.analytic_bias_exact[i].real(), "{:.6e}");
    t.num(rep.analytic_bias_exact[i].imag(), "{:.6e}");
    t.num(rep.empirical_mean_error[i].real(), "{:.6e}");
    t.num(rep.empirical_mean_error[i].imag(), "{:.6e}");
    t.num(rep.standard_error[i], "{:.6e}").num(rep.agreement);
    t.integer(rep.n_trials).integer(static_cast<long long>(rep.n_samples));
  }
  return t.release();
}

fdsi_table* run_command(fdsi_experiment& exp, const std::string& command) {
  namespace fs = std::filesystem;
  const fdsi::ExperimentConfig& cfg = exp.cfg;
  const fs::path dir = cfg.output_dir;
  if (exp.write_outputs) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw fdsi::IoError("cannot create " + dir.string() + ": " + ec.message());
  }
  auto manifest = [&] {
    if (exp.write_outputs) fdsi::write_manifest(dir / ("manifest_" + command + ".txt"), command, cfg);
  };

  if (command == "budget") {
    const auto rows = fdsi::run_budget(cfg);
    if (exp.write_outputs) {
      fdsi::write_budget_csv(dir / "budget.csv", rows);
      fdsi::emit_plot_script(dir / "plot_budget.py", "budget.csv", fdsi::PlotStyle::kBudget);
    }
    manifest();
    return budget_table(rows);
  }
  if (command == "sweep-tx") {
    const fdsi::SweepResult res = fdsi::run_tx_power_sweep(cfg);
    if (exp.write_outputs) {
      fdsi::write_sweep_csv(dir / "sweep_tx.csv", res);
      fdsi::emit_plot_script(dir / "plot_sweep_tx.py", "sweep_tx.csv", fdsi::PlotStyle::kTxSweep);
    }
    manifest();
    return sweep_table(res);
  }
  if (command == "sweep-mn") {
    const fdsi::SweepResult res = fdsi::run_mn_grid(cfg);
    if (exp.write_outputs) {
      fdsi::write_grid_csv(dir / "sweep_mn.csv", res);
      fdsi::emit_plot_script(dir / "plot_sweep_mn.py", "sweep_mn.csv", fdsi::PlotStyle::kGrid);
    }
    manifest();
    return grid_table(res);
  }
  if (command == "bias") {
    const fdsi::BiasReport rep = fdsi::run_bias(cfg);
    if (exp.write_outputs) {
      const fs::path path = dir / "bias.jsonl";
      std::error_code ec;
      fs::remove(path, ec);
      fdsi::write_bias_jsonl(path, rep, cfg.scenario);
    }
    manifest();
    return bias_table(rep);
  }
  throw std::invalid_argument("unknown command '" + command +
                              "' (expected budget, sweep-tx, sweep-mn or bias)");
}

}  // namespace

extern "C" {

const char* fdsi_version(void) { return "1.0.0"; }

const char* fdsi_status_string(fdsi_status status) {
  switch (status) {
    case FDSI_OK: return "ok";
    case FDSI_ERR_CONFIG: return "configuration error";
    case FDSI_ERR_DOMAIN: return "domain error";
    case FDSI_ERR_INSUFFICIENT_DATA: return "insufficient data";
    case FDSI_ERR_SINGULAR: return "singular matrix";
    case FDSI_ERR_INFEASIBLE: return "infeasible target";
    case FDSI_ERR_ALIGNMENT: return "alignment error";
    case FDSI_ERR_IO: return "i/o error";
    case FDSI_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FDSI_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* fdsi_last_error(void) { return g_last_error.c_str(); }

size_t fdsi_preset_count(void) { return fdsi::preset_names().size(); }

const char* fdsi_preset_name(size_t index) {
  static const std::vector<std::string> names = fdsi::preset_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

fdsi_status fdsi_experiment_from_preset(const char* name, fdsi_experiment** out) {
  if (!name || !out) return fail(FDSI_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new fdsi_experiment{fdsi::preset(name)}; });
}

fdsi_status fdsi_experiment_from_file(const char* path, fdsi_experiment** out) {
  if (!path || !out) return fail(FDSI_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new fdsi_experiment{fdsi::load_config(path)}; });
}

fdsi_status fdsi_experiment_from_yaml(const char* text, fdsi_experiment** out) {
  if (!text || !out) return fail(FDSI_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new fdsi_experiment{fdsi::parse_config(text)}; });
}

void fdsi_experiment_free(fdsi_experiment* exp) { delete exp; }

fdsi_status fdsi_experiment_set_seed(fdsi_experiment* exp, uint64_t seed) {
  if (!exp) return fail(FDSI_ERR_INVALID_ARGUMENT, "null experiment");
  exp->cfg.seed = seed;
  return FDSI_OK;
}

fdsi_status fdsi_experiment_set_realizations(fdsi_experiment* exp, int realizations) {
  if (!exp) return fail(FDSI_ERR_INVALID_ARGUMENT, "null experiment");
  if (realizations < 1) return fail(FDSI_ERR_CONFIG, "realizations must be >= 1");
  exp->cfg.n_realizations = realizations;
  return FDSI_OK;
}

fdsi_status fdsi_experiment_set_threads(fdsi_experiment* exp, unsigned threads) {
  if (!exp) return fail(FDSI_ERR_INVALID_ARGUMENT, "null experiment");
  exp->cfg.threads = threads;
  return FDSI_OK;
}

fdsi_status fdsi_experiment_set_output_dir(fdsi_experiment* exp, const char* dir) {
  if (!exp) return fail(FDSI_ERR_INVALID_ARGUMENT, "null experiment");
  exp->write_outputs = dir && *dir;
  if (exp->write_outputs) exp->cfg.output_dir = dir;
  return FDSI_OK;
}

fdsi_status fdsi_experiment_to_yaml(const fdsi_experiment* exp, char** out) {
  if (!exp || !out) return fail(FDSI_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const std::string yaml = fdsi::to_yaml(exp->cfg);
    char* buf = new char[yaml.size() + 1];
    std::memcpy(buf, yaml.c_str(), yaml.size() + 1);
    *out = buf;
  });
}

void fdsi_string_free(char* s) { delete[] s; }

fdsi_status fdsi_run(fdsi_experiment* exp, const char* command, fdsi_table** out) {
  if (!exp || !command || !out) return fail(FDSI_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  const std::string cmd = command;
  if (cmd != "budget" && cmd != "sweep-tx" && cmd != "sweep-mn" && cmd != "bias") {
    return fail(FDSI_ERR_INVALID_ARGUMENT,
                "unknown command '" + cmd + "' (expected budget, sweep-tx, sweep-mn or bias)");
  }
  return guarded([&] { *out = run_command(*exp, cmd); });
}

size_t fdsi_table_rows(const fdsi_table* table) { return table ? table->rows.size() : 0; }

size_t fdsi_table_columns(const fdsi_table* table) { return table ? table->columns.size() : 0; }

const char* fdsi_table_column_name(const fdsi_table* table, size_t column) {
  if (!table || column >= table->columns.size()) return nullptr;
  return table->columns[column].c_str();
}

double fdsi_table_value(const fdsi_table* table, size_t row, size_t column) {
  if (!table || row >= table->rows.size() || column >= table->rows[row].size()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return table->rows[row][column].value;
}

const char* fdsi_table_text(const fdsi_table* table, size_t row, size_t column) {
  if (!table || row >= table->rows.size() || column >= table->rows[row].size()) return nullptr;
  return table->rows[row][column].text.c_str();
}

void fdsi_table_free(fdsi_table* table) { delete table; }

fdsi_status fdsi_wl_estimate(const double* x, const double* y, size_t n, int m, int k, double* h1,
                             double* h2) {
  if (!x || !y || !h1 || !h2) return fail(FDSI_ERR_INVALID_ARGUMENT, "null argument");
  if (n == 0) return fail(FDSI_ERR_INSUFFICIENT_DATA, "no samples");
  return guarded([&] {
    fdsi::Samples xs(n), ys(n);
    for (size_t i = 0; i < n; ++i) {
      xs[i] = {x[2 * i], x[2 * i + 1]};
      ys[i] = {y[2 * i], y[2 * i + 1]};
    }
    const fdsi::ComplexBasebandSignal xsig(std::move(xs), 1.0), ysig(std::move(ys), 1.0);
    const fdsi::ChannelEstimate est =
        fdsi::estimate_wl_ls(fdsi::build_augmented_matrix(xsig, ysig, m, k));
    for (int j = 0; j < m; ++j) {
      h1[2 * j] = est.h1[static_cast<std::size_t>(j)].real();
      h1[2 * j + 1] = est.h1[static_cast<std::size_t>(j)].imag();
      h2[2 * j] = est.h2[static_cast<std::size_t>(j)].real();
      h2[2 * j + 1] = est.h2[static_cast<std::size_t>(j)].imag();
    }
  });
}

}  // extern "C"
