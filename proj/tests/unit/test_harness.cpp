#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fdsi/errors.hpp"
#include "fdsi/harness.hpp"
#include "fdsi/units.hpp"

using namespace fdsi;

namespace {

ExperimentConfig small(const std::string& name = "table1-baseline") {
  ExperimentConfig cfg = preset(name);
  cfg.n_realizations = 4;
  cfg.tx_powers = {-5.0, 15.0};
  cfg.waveform.training_samples = 2000;
  cfg.waveform.evaluation_samples = 2000;
  cfg.threads = 1;
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("fdsi_harness_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("presets") {
  const auto names = preset_names();
  CHECK(names.size() == 3);
  for (const auto& n : names) {
    const auto cfg = preset(n);
    CHECK(cfg.scenario == n);
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.tx_powers.size() == 16);
    CHECK(cfg.tx_powers.front() == -5.0);
    CHECK(cfg.tx_powers.back() == 25.0);
  }
  CHECK(preset("table1-baseline").system.antenna_attenuation_db == 40.0);
  CHECK(preset("low-isolation").system.rf_cancellation_db == 20.0);
  CHECK(preset("low-isolation").system.irr_tx_db == 25.0);
  CHECK(preset("altered-budget").system.irr_rx_db == 35.0);
  CHECK_THROWS_AS(preset("no-such-scenario"), ConfigurationError);
}

TEST_CASE("configuration text round trip") {
  ExperimentConfig cfg = preset("low-isolation");
  cfg.seed = 99;
  cfg.waveform.taps = 7;
  cfg.grid.samples = {100, 1000};
  cfg.bias.waveform = BiasWaveform::kOfdm;
  cfg.ldc = LdcPolicy::fixed(35.0);
  const std::string text = to_yaml(cfg);
  const ExperimentConfig back = parse_config(text);
  CHECK(to_yaml(back) == text);
  CHECK(back.seed == 99);
  CHECK(back.waveform.taps == 7);
  CHECK(back.grid.samples == std::vector<std::size_t>{100, 1000});
  CHECK(back.system.antenna_attenuation_db == 30.0);
  CHECK(back.ldc.kind == LdcPolicy::Kind::kFixed);
  CHECK(back.ldc.fixed_db == 35.0);
}

TEST_CASE("configuration overrides and rejections") {
  const auto cfg = parse_config(
      "preset: low-isolation\n"
      "seed: 5\n"
      "sweep:\n  tx_power_dbm: {start: 0, stop: 10, step: 5}\n  cancellers: [wl]\n"
      "grid:\n  samples: {start: 100, stop: 10000, points: 3}\n");
  CHECK(cfg.scenario == "low-isolation");
  CHECK(cfg.system.antenna_attenuation_db == 30.0);
  CHECK(cfg.tx_powers == std::vector<double>{0.0, 5.0, 10.0});
  CHECK(cfg.cancellers == std::vector<CancellerKind>{CancellerKind::kWidelyLinear});
  CHECK(cfg.grid.samples == std::vector<std::size_t>{100, 1000, 10000});

  CHECK_THROWS_AS(parse_config("bogus: 1\n"), ConfigurationError);
  CHECK_THROWS_AS(parse_config("system:\n  pa_gain: 27\n"), ConfigurationError);
  CHECK_THROWS_AS(parse_config("realizations: 0\n"), ConfigurationError);
  CHECK_THROWS_AS(parse_config("realizations: many\n"), ConfigurationError);
  CHECK_THROWS_AS(parse_config("waveform:\n  taps: 1\n  precursor_taps: 1\n"), ConfigurationError);
  CHECK_THROWS_AS(parse_config("ofdm:\n  n_data_subcarriers: 400\n"), ConfigurationError);
  CHECK_THROWS_AS(parse_config("system:\n  sensitivity_dbm: -70\n"), ConfigurationError);
  CHECK_THROWS_AS(parse_config("preset: nowhere\n"), ConfigurationError);
  CHECK_THROWS_AS(parse_config("sweep: [1, 2\n"), ConfigurationError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), IoError);

  const auto dir = scratch_dir("load");
  std::ofstream(dir / "c.yaml") << "preset: altered-budget\nrealizations: 3\n";
  const auto loaded = load_config(dir / "c.yaml");
  CHECK(loaded.n_realizations == 3);
  CHECK(loaded.system.irr_tx_db == 35.0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("log-spaced training lengths") {
  CHECK(log_spaced(100, 10000, 3) == std::vector<std::size_t>{100, 1000, 10000});
  CHECK(log_spaced(50, 50, 1) == std::vector<std::size_t>{50});
  const auto v = log_spaced(50, 20000, 10);
  CHECK(v.front() == 50);
  CHECK(v.back() == 20000);
  for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] > v[i - 1]);
  CHECK_THROWS_AS(log_spaced(0, 10, 3), DomainError);
  CHECK_THROWS_AS(log_spaced(10, 5, 3), DomainError);
}

TEST_CASE("parallel_for visits every index and forwards failures") {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(50, 3,
                               [](std::size_t i) {
                                 if (i == 17) throw DomainError("boom");
                               }),
                  DomainError);
}

TEST_CASE("sweeps are reproducible across runs and thread counts") {
  const auto dir = scratch_dir("repro");
  auto cfg = small();
  cfg.threads = 1;
  write_sweep_csv(dir / "a.csv", run_tx_power_sweep(cfg));
  write_sweep_csv(dir / "b.csv", run_tx_power_sweep(cfg));
  cfg.threads = 3;
  write_sweep_csv(dir / "c.csv", run_tx_power_sweep(cfg));
  const std::string a = slurp(dir / "a.csv");
  CHECK(a == slurp(dir / "b.csv"));
  CHECK(a == slurp(dir / "c.csv"));
  cfg.seed = 2;
  write_sweep_csv(dir / "d.csv", run_tx_power_sweep(cfg));
  CHECK(a != slurp(dir / "d.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("widely-linear cancellation beats linear at low power") {
  const auto res = run_tx_power_sweep(small());
  REQUIRE(res.points.size() == 4);
  double lin = 0.0, wl = 0.0;
  for (const auto& p : res.points) {
    CHECK(p.feasible);
    CHECK(p.realizations == 4);
    if (p.tx_dbm != -5.0) continue;
    (p.canceller == CancellerKind::kLinear ? lin : wl) = p.attenuation_db;
  }
  CHECK(wl > lin + 20.0);
  CHECK(std::abs(res.ideal_sinr_db - 15.0) < 0.5);
}

TEST_CASE("grid cells without enough data are flagged") {
  auto cfg = small();
  cfg.grid.taps = {5};
  cfg.grid.samples = {10, 2000};
  const auto res = run_mn_grid(cfg);
  int flagged = 0;
  for (const auto& p : res.points) {
    if (p.n == 10) {
      CHECK_FALSE(p.feasible);
      CHECK(p.realizations == 0);
      ++flagged;
    } else {
      CHECK(p.feasible);
    }
  }
  CHECK(flagged == 2);
  const auto dir = scratch_dir("grid");
  write_grid_csv(dir / "grid.csv", res);
  const std::string text = slurp(dir / "grid.csv");
  CHECK(text.rfind("m,n,canceller,sinr_db", 0) == 0);
  CHECK(text.find("insufficient-data") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("ideal reference SINR") {
  const auto cfg = small();
  const auto fe = build_front_end(cfg);
  double acc = 0.0;
  for (std::uint64_t s = 0; s < 8; ++s) acc += ideal_reference_sinr(cfg, fe, RngSeed{s});
  CHECK(std::abs(acc / 8.0 - 15.0) < 0.3);
}

TEST_CASE("an unreachable RF target names the scenario") {
  auto cfg = small("low-isolation");
  cfg.system.rf_cancellation_db = 30.0;
  cfg.waveform.rf_delay_error = 0.1;
  try {
    run_tx_power_sweep(cfg);
    FAIL("expected an infeasible RF target");
  } catch (const InfeasibleTargetError& e) {
    CHECK(std::string(e.what()).find("low-isolation") != std::string::npos);
    CHECK(e.best_achievable_db() < 30.0);
  }
}

TEST_CASE("more realisations agree within the standard error") {
  auto cfg = small();
  cfg.tx_powers = {5.0};
  cfg.n_realizations = 8;
  const auto a = run_tx_power_sweep(cfg);
  cfg.n_realizations = 16;
  const auto b = run_tx_power_sweep(cfg);
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const double se = std::hypot(a.points[i].sinr_se_db, b.points[i].sinr_se_db);
    CHECK(std::abs(a.points[i].sinr_db - b.points[i].sinr_db) <= 2.0 * se + 1e-9);
  }
}

TEST_CASE("simulated components follow the closed-form budget") {
  auto cfg = small();
  const auto res = run_tx_power_sweep(cfg);
  REQUIRE(res.components.size() == 2);
  for (std::size_t i = 0; i < res.tx_dbm.size(); ++i) {
    SystemParameters p = cfg.system;
    p.tx_power_dbm = res.tx_dbm[i];
    p.papr_db = res.components[i].adc_headroom_db;
    const auto b = compute_budget(p, LdcPolicy::fixed(0.0));
    const auto& c = res.components[i];
    CAPTURE(res.tx_dbm[i]);
    CHECK(std::abs(watts_to_dbm(c.si_linear) - b.p_si_before) < 2.0);
    CHECK(std::abs(watts_to_dbm(c.si_conjugate) - b.p_si_im) < 2.0);
    CHECK(std::abs(watts_to_dbm(c.imd) - b.p_imd) < 2.0);
    CHECK(std::abs(watts_to_dbm(c.noise) - b.p_noise) < 2.0);
    CHECK(std::abs(watts_to_dbm(c.quantization) - b.p_q) < 2.0);
    CHECK(std::abs(watts_to_dbm(c.soi) - b.p_soi) < 2.0);
  }
}

TEST_CASE("output files") {
  const auto dir = scratch_dir("out");
  auto cfg = small();
  write_budget_csv(dir / "budget.csv", run_budget(cfg));
  CHECK(slurp(dir / "budget.csv").rfind("tx_dbm,p_si,p_si_im,", 0) == 0);
  emit_plot_script(dir / "plot.py", "budget.csv", PlotStyle::kBudget);
  CHECK(slurp(dir / "plot.py").find("budget.csv") != std::string::npos);
  write_manifest(dir / "manifest.txt", "budget", cfg);
  const std::string manifest = slurp(dir / "manifest.txt");
  CHECK(manifest.find("budget") != std::string::npos);
  CHECK(manifest.find(to_yaml(cfg)) != std::string::npos);
  CHECK_THROWS_AS(write_sweep_csv(dir / "missing" / "x.csv", SweepResult{}), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("bias run uses the configured transmit power") {
  auto cfg = small();
  cfg.bias.trials = 100;
  cfg.bias.samples = 1000;
  const auto rep = run_bias(cfg);
  CHECK(rep.n_trials == 100);
  CHECK(rep.n_samples == 1000);
  CHECK(std::abs(rep.analytic_bias[0]) > 0.0);
}
