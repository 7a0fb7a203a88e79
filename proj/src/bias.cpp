#include "fdsi/bias.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "fdsi/canceller.hpp"
#include "fdsi/errors.hpp"
#include "fdsi/impairments.hpp"
#include "fdsi/ofdm.hpp"
#include "fdsi/units.hpp"

namespace fdsi {

FlatModel make_flat_model(const SystemParameters& p) {
  p.validate();
  const IqImbalance tx = derive_iq_from_irr(p.irr_tx_db, p.mixer_gain_db);
  const PaModel pa = calibrate_pa(p.pa_gain_db, p.pa_iip3_dbm);
  const double coupling = std::sqrt(from_db(-p.antenna_attenuation_db - p.rf_cancellation_db));
  const Complex k = std::sqrt(from_db(p.lna_gain_db + p.mixer_gain_db));

  FlatModel m;
  m.g1_tx = tx.g1.front();
  m.g2_tx = tx.g2.front();
  m.h1 = k * coupling * pa.alpha0 * m.g1_tx;
  m.h2 = k * coupling * pa.alpha0 * m.g2_tx;
  m.h_imd = k * coupling * pa.alpha1;
  m.noise_power = std::norm(k) * from_db(p.noise_figure_db) * dbm_to_watts(p.thermal_floor_dbm);
  m.signal_power = dbm_to_watts(p.tx_power_dbm) / (std::norm(pa.alpha0) * tx.power_gain());
  return m;
}

std::array<Complex, 2> analytic_bias(const FlatModel& model, SignalMoments moments) {
  if (!(moments.r > 0.0)) throw DomainError("signal power must be positive");
  const Complex scale = model.h_imd * std::norm(model.g1_tx) * moments.m4 / moments.r;
  return {scale * model.g1_tx, scale * 2.0 * model.g2_tx};
}

std::array<Complex, 2> analytic_bias_exact(const FlatModel& model, SignalMoments moments) {
  if (!(moments.r > 0.0)) throw DomainError("signal power must be positive");
  const double a = std::norm(model.g1_tx);
  const double b = std::norm(model.g2_tx);
  const Complex scale = model.h_imd * moments.m4 / moments.r;
  return {scale * model.g1_tx * (a + 2.0 * b), scale * model.g2_tx * (2.0 * a + b)};
}

BiasReport monte_carlo_bias(const SystemParameters& p, std::size_t n_samples, int n_trials,
                            RngSeed seed, BiasWaveform waveform) {
  if (n_trials < 100) throw DomainError("bias analysis needs at least 100 trials");
  const FlatModel model = make_flat_model(p);
  const double r = model.signal_power;
  const OfdmConfig ofdm;

  std::array<Complex, 2> sum{};
  std::array<double, 2> sum_sq{};
  double m4_sum = 0.0;
  for (int t = 0; t < n_trials; ++t) {
    const RngSeed trial = seed.derive({static_cast<std::uint64_t>(t)});
    const ComplexBasebandSignal x =
        waveform == BiasWaveform::kOfdm
            ? generate_ofdm_samples(ofdm, n_samples, r, trial.derive({1}))
            : awgn(r, n_samples, ofdm.sample_rate(), trial.derive({1}));
    const ComplexBasebandSignal u = awgn(model.noise_power, n_samples, x.sample_rate(),
                                         trial.derive({2}));
    double m4 = 0.0;
    for (const Complex& v : x.data()) m4 += std::norm(v) * std::norm(v);
    m4_sum += m4 / static_cast<double>(n_samples);
    Samples y(n_samples);
    for (std::size_t n = 0; n < n_samples; ++n) {
      const Complex v = x[n];
      const Complex iq = model.g1_tx * v + model.g2_tx * std::conj(v);
      y[n] = model.h1 * v + model.h2 * std::conj(v) + model.h_imd * iq * std::norm(iq) + u[n];
    }
    const ChannelEstimate est = estimate_wl_ls(
        build_augmented_matrix(x, ComplexBasebandSignal(std::move(y), x.sample_rate()), 1, 0));
    const std::array<Complex, 2> err{est.h1.front() - model.h1, est.h2.front() - model.h2};
    for (int i = 0; i < 2; ++i) {
      sum[i] += err[i];
      sum_sq[i] += std::norm(err[i]);
    }
  }

  BiasReport rep;
  rep.n_trials = n_trials;
  rep.n_samples = n_samples;
  // The OFDM variant uses the measured fourth moment; the Gaussian one the
  // exact 2 r^2.
  const double nt = static_cast<double>(n_trials);
  const SignalMoments moments{
      r, waveform == BiasWaveform::kOfdm ? m4_sum / nt : 2.0 * r * r};
  rep.analytic_bias = analytic_bias(model, moments);
  rep.analytic_bias_exact = analytic_bias_exact(model, moments);
  for (int i = 0; i < 2; ++i) {
    rep.empirical_mean_error[i] = sum[i] / nt;
    const double var = (sum_sq[i] - nt * std::norm(rep.empirical_mean_error[i])) / (nt - 1.0);
    rep.standard_error[i] = std::sqrt(std::max(var, 0.0) / nt);
  }
  const double ref = std::hypot(std::abs(rep.analytic_bias[0]), std::abs(rep.analytic_bias[1]));
  const double diff = std::hypot(std::abs(rep.empirical_mean_error[0] - rep.analytic_bias[0]),
                                 std::abs(rep.empirical_mean_error[1] - rep.analytic_bias[1]));
  rep.agreement = ref > 0.0 ? diff / ref : std::numeric_limits<double>::infinity();
  return rep;
}

void write_bias_jsonl(const std::filesystem::path& path, const BiasReport& rep,
                      const std::string& label) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  auto pair = [](const std::array<Complex, 2>& v) {
    return nlohmann::json::array({nlohmann::json::array({v[0].real(), v[0].imag()}),
                                  nlohmann::json::array({v[1].real(), v[1].imag()})});
  };
  nlohmann::json j;
  j["label"] = label;
  j["n_trials"] = rep.n_trials;
  j["n_samples"] = rep.n_samples;
  j["analytic_bias"] = pair(rep.analytic_bias);
  j["analytic_bias_exact"] = pair(rep.analytic_bias_exact);
  j["empirical_mean_error"] = pair(rep.empirical_mean_error);
  j["standard_error"] = {rep.standard_error[0], rep.standard_error[1]};
  j["agreement"] = std::isfinite(rep.agreement) ? nlohmann::json(rep.agreement) : nlohmann::json();
  out << j.dump() << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace fdsi
