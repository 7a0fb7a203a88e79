#include "fdsi/impairments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fdsi/errors.hpp"
#include "fdsi/units.hpp"

namespace fdsi {
namespace {

Complex tap_sum(const Samples& taps) {
  Complex s{};
  for (const Complex& t : taps) s += t;
  return s;
}

// Single-bin DFT amplitude of x at bin k.
double bin_power(const Samples& x, int k) {
  const double n = static_cast<double>(x.size());
  Complex acc{};
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += x[i] * std::polar(1.0, -2.0 * kPi * k * static_cast<double>(i) / n);
  }
  return std::norm(acc / n);
}

}  // namespace

IqImbalance IqImbalance::ideal(double gain_db) {
  IqImbalance imb;
  imb.g1 = {Complex{std::sqrt(from_db(gain_db)), 0.0}};
  imb.g2 = {Complex{}};
  return imb;
}

ComplexBasebandSignal IqImbalance::direct(const ComplexBasebandSignal& s) const {
  return convolve(s, g1);
}

ComplexBasebandSignal IqImbalance::image(const ComplexBasebandSignal& s) const {
  return convolve(s.conj(), g2);
}

double IqImbalance::irr_db() const {
  const double p2 = std::norm(tap_sum(g2));
  if (p2 == 0.0) return std::numeric_limits<double>::infinity();
  return to_db(std::norm(tap_sum(g1)) / p2);
}

double IqImbalance::power_gain() const {
  return std::norm(tap_sum(g1)) + std::norm(tap_sum(g2));
}

IqImbalance derive_iq_from_irr(double irr_db, double gain_db, IqErrorSplit split) {
  if (std::isnan(irr_db) || irr_db <= 0.0) {
    throw DomainError("image rejection ratio must be positive, got " + std::to_string(irr_db));
  }
  if (!(split.amplitude_share >= 0.0 && split.amplitude_share <= 1.0)) {
    throw DomainError("amplitude share must lie in [0, 1]");
  }
  if (std::isinf(irr_db)) return IqImbalance::ideal(gain_db);

  // rho = |1 - K|^2 / |1 + K|^2 with K = (1 + eps) e^{-j phi}. A pure phase
  // error gives tan^2(phi / 2); eps then trims the ratio to rho exactly.
  const double rho = from_db(-irr_db);
  const double phi = 2.0 * std::atan(std::sqrt((1.0 - split.amplitude_share) * rho));
  auto ratio = [phi](double eps) {
    const Complex k = std::polar(1.0 + eps, -phi);
    return std::norm(1.0 - k) / std::norm(1.0 + k);
  };
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ratio(mid) < rho ? lo : hi) = mid;
  }
  const Complex k = std::polar(1.0 + 0.5 * (lo + hi), -phi);
  Complex a = 0.5 * (1.0 + k);
  Complex b = 0.5 * (1.0 - k);
  const double scale = std::sqrt(from_db(gain_db) / (std::norm(a) + std::norm(b)));
  IqImbalance imb;
  imb.g1 = {a * scale};
  imb.g2 = {b * scale};
  return imb;
}

ComplexBasebandSignal apply_tx_iq(const IqImbalance& imb, const ComplexBasebandSignal& x) {
  return imb.direct(x) + imb.image(x);
}

ComplexBasebandSignal apply_rx_iq(const IqImbalance& imb, const ComplexBasebandSignal& y) {
  return imb.direct(y) + imb.image(y);
}

Samples PaModel::lowpass_memory() {
  Samples f{{0.98, 0.0}, {0.1, 0.0}, {-0.05, 0.0}};
  double e = 0.0;
  for (const Complex& t : f) e += std::norm(t);
  for (Complex& t : f) t /= std::sqrt(e);
  return f;
}

ComplexBasebandSignal PaModel::linear_part(const ComplexBasebandSignal& x) const {
  return convolve(x.scaled(alpha0), memory);
}

ComplexBasebandSignal PaModel::imd_part(const ComplexBasebandSignal& x) const {
  return convolve(third_order_term(x).scaled(alpha1), memory);
}

ComplexBasebandSignal third_order_term(const ComplexBasebandSignal& x) {
  Samples out(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) out[n] = x[n] * std::norm(x[n]);
  return {std::move(out), x.sample_rate()};
}

ComplexBasebandSignal apply_pa(const PaModel& pa, const ComplexBasebandSignal& x) {
  return pa.linear_part(x) + pa.imd_part(x);
}

double measure_two_tone_iip3_dbm(const PaModel& pa, double tone_power_dbm) {
  constexpr int kLength = 2048;
  constexpr int k1 = 40;
  constexpr int k2 = 48;
  const double amp = std::sqrt(dbm_to_watts(tone_power_dbm));
  // Periodic extension so the memory filter is in steady state over the
  // analysed block.
  const int lead = static_cast<int>(pa.memory.size());
  Samples x(static_cast<std::size_t>(kLength + lead));
  for (int i = 0; i < kLength + lead; ++i) {
    const double n = static_cast<double>(i - lead);
    x[static_cast<std::size_t>(i)] =
        amp * (std::polar(1.0, 2.0 * kPi * k1 * n / kLength) +
               std::polar(1.0, 2.0 * kPi * k2 * n / kLength));
  }
  const ComplexBasebandSignal y = apply_pa(pa, ComplexBasebandSignal(std::move(x), 1.0));
  const Samples block(y.data().begin() + lead, y.data().end());
  const double fund = bin_power(block, k1);
  const double im3 = bin_power(block, 2 * k1 - k2);
  if (im3 == 0.0) return std::numeric_limits<double>::infinity();
  return tone_power_dbm + 0.5 * (to_db(fund) - to_db(im3));
}

PaModel calibrate_pa(double gain_db, double iip3_dbm, Samples memory) {
  if (memory.empty()) throw DomainError("PA memory filter must have at least one tap");
  if (std::isnan(iip3_dbm)) throw DomainError("IIP3 must be a number");
  PaModel pa;
  pa.alpha0 = {std::sqrt(from_db(gain_db)), 0.0};
  pa.memory = std::move(memory);
  if (std::isinf(iip3_dbm) && iip3_dbm > 0.0) return pa;

  // Intercept of alpha0 A = |alpha1| A^3 with A^2 the per-tone power.
  double mag = std::abs(pa.alpha0) / dbm_to_watts(iip3_dbm);
  const double probe_dbm = iip3_dbm - 40.0;
  for (int it = 0; it < 50; ++it) {
    pa.alpha1 = -mag * pa.alpha0 / std::abs(pa.alpha0);
    const double err = measure_two_tone_iip3_dbm(pa, probe_dbm) - iip3_dbm;
    if (std::abs(err) < 1e-4) return pa;
    mag *= from_db(err);
  }
  throw DomainError("PA two-tone calibration did not converge");
}

double CouplingChannel::expected_los_power() const { return from_db(-antenna_attenuation_db); }

double CouplingChannel::expected_multipath_power() const {
  return expected_los_power() * from_db(-los_to_multipath_db);
}

CouplingChannel draw_coupling_channel(double antenna_attenuation_db, double ratio_db,
                                      RngSeed seed) {
  if (!std::isfinite(antenna_attenuation_db)) {
    throw DomainError("antenna attenuation must be finite");
  }
  if (std::isnan(ratio_db)) throw DomainError("LOS-to-multipath ratio must be a number");
  CouplingChannel ch;
  ch.antenna_attenuation_db = antenna_attenuation_db;
  ch.los_to_multipath_db = ratio_db;
  auto engine = seed.engine();
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  const double los_mag = std::sqrt(ch.expected_los_power());
  ch.taps.assign(3, Complex{});
  ch.taps[0] = std::polar(los_mag, phase(engine));
  const double per_tap = ch.expected_multipath_power() / 2.0;
  std::normal_distribution<double> rail(0.0, std::sqrt(per_tap / 2.0));
  for (std::size_t k = 1; k < 3; ++k) {
    const double re = rail(engine);
    const double im = rail(engine);
    ch.taps[k] = per_tap > 0.0 ? Complex{re, im} : Complex{};
  }
  return ch;
}

ComplexBasebandSignal RfCanceller::cancellation_signal(const ComplexBasebandSignal& x_pa) const {
  return fractional_delay(x_pa, delay_error).scaled(gain);
}

ComplexBasebandSignal coupled_residual(const CouplingChannel& ch, const RfCanceller& rf,
                                       const ComplexBasebandSignal& x_pa) {
  return convolve(x_pa, ch.taps) - rf.cancellation_signal(x_pa);
}

RfCanceller make_rf_canceller(const CouplingChannel& ch, double amplitude_error,
                              double delay_error, const ComplexBasebandSignal& x_pa) {
  if (!std::isfinite(amplitude_error) || !std::isfinite(delay_error)) {
    throw DomainError("RF canceller errors must be finite");
  }
  RfCanceller rf;
  rf.amplitude_error = amplitude_error;
  rf.delay_error = delay_error;
  rf.gain = ch.los() * (1.0 + amplitude_error);
  const ComplexBasebandSignal canc = rf.cancellation_signal(x_pa);
  const ComplexBasebandSignal los = x_pa.scaled(ch.los());
  const ComplexBasebandSignal si = convolve(x_pa, ch.taps);
  rf.achieved_attenuation_db = to_db(measure_power(si) / measure_power(si - canc));
  rf.los_attenuation_db = to_db(measure_power(los) / measure_power(los - canc));
  return rf;
}

RfCanceller calibrate_rf_canceller(const CouplingChannel& ch, double target_db,
                                   double delay_error, const ComplexBasebandSignal& x_pa) {
  if (!std::isfinite(target_db) || target_db < 0.0) {
    throw DomainError("RF cancellation target must be a finite, non-negative dB value");
  }
  // Residual of the LOS path relative to the LOS power as a function of the
  // canceller amplitude c = 1 + eps: (P - 2 c A + c^2 B) / P.
  const ComplexBasebandSignal dx = fractional_delay(x_pa, delay_error);
  double p = 0.0, a = 0.0, b = 0.0;
  for (std::size_t n = 0; n < x_pa.size(); ++n) {
    p += std::norm(x_pa[n]);
    a += std::real(x_pa[n] * std::conj(dx[n]));
    b += std::norm(dx[n]);
  }
  if (p == 0.0) throw DomainError("calibration waveform has zero power");
  auto los_residual = [&](double c) { return (p - 2.0 * c * a + c * c * b) / p; };

  const double mp = from_db(-ch.los_to_multipath_db);
  const double target_los = from_db(-target_db) * (1.0 + mp) - mp;
  const double c_best = std::max(1.0, a / b);
  const double best = los_residual(c_best);
  if (!(target_los >= best)) {
    const double best_db = -to_db((best + mp) / (1.0 + mp));
    throw InfeasibleTargetError("RF cancellation target of " + std::to_string(target_db) +
                                    " dB is unreachable with a delay error of " +
                                    std::to_string(delay_error) + " samples (best " +
                                    std::to_string(best_db) + " dB)",
                                best_db);
  }
  // Larger root of c^2 B - 2 c A + P (1 - target) = 0, at or above c_best.
  const double disc = a * a - b * p * (1.0 - target_los);
  const double c = std::max(c_best, (a + std::sqrt(std::max(disc, 0.0))) / b);
  return make_rf_canceller(ch, c - 1.0, delay_error, x_pa);
}

Complex LnaModel::gain() const { return {std::sqrt(from_db(gain_db)), 0.0}; }

double LnaModel::noise_factor() const { return from_db(noise_figure_db); }

double LnaModel::added_noise_power() const {
  return std::norm(gain()) * (noise_factor() - 1.0) * thermal_noise_power;
}

ComplexBasebandSignal LnaModel::amplify(const ComplexBasebandSignal& y) const {
  return y.scaled(gain());
}

ComplexBasebandSignal apply_lna(const LnaModel& lna, const ComplexBasebandSignal& y,
                                RngSeed seed) {
  if (lna.noise_figure_db < 0.0) throw DomainError("noise figure must be >= 0 dB");
  return lna.amplify(y) + awgn(lna.added_noise_power(), y.size(), y.sample_rate(), seed);
}

double snr_adc_db(int bits, double papr_db) { return 6.02 * bits + 4.76 - papr_db; }

double AdcModel::step() const {
  return peak_to_peak_voltage / std::ldexp(1.0, std::min(bits, kUnquantizedBits));
}

AdcOutput digitize(const AdcModel& adc, const ComplexBasebandSignal& y) {
  if (adc.bits < 1) throw DomainError("ADC needs at least one bit");
  if (!(adc.peak_to_peak_voltage > 0.0)) throw DomainError("ADC range must be positive");
  if (!(adc.agc_peak_percentile > 0.0 && adc.agc_peak_percentile <= 100.0)) {
    throw DomainError("AGC percentile must lie in (0, 100]");
  }
  std::vector<double> mag(y.size());
  std::transform(y.data().begin(), y.data().end(), mag.begin(),
                 [](Complex v) { return std::abs(v); });
  auto rank = static_cast<std::size_t>(
      std::ceil(adc.agc_peak_percentile / 100.0 * static_cast<double>(mag.size())));
  rank = std::clamp<std::size_t>(rank, 1, mag.size()) - 1;
  std::nth_element(mag.begin(), mag.begin() + static_cast<std::ptrdiff_t>(rank), mag.end());
  const double peak = mag[rank];
  if (!(peak > 0.0)) throw DomainError("AGC input has zero amplitude");

  const double k_bb = adc.full_scale() / peak;
  if (adc.bits >= AdcModel::kUnquantizedBits) return {y.scaled(k_bb), k_bb};

  const double fs = adc.full_scale();
  const double delta = adc.step();
  auto quantize = [&](double v) {
    const double level = (std::floor(v / delta) + 0.5) * delta;
    return std::clamp(level, -fs + 0.5 * delta, fs - 0.5 * delta);
  };
  Samples out(y.size());
  for (std::size_t n = 0; n < y.size(); ++n) {
    const Complex v = k_bb * y[n];
    out[n] = {quantize(v.real()), quantize(v.imag())};
  }
  return {ComplexBasebandSignal(std::move(out), y.sample_rate()), k_bb};
}

ComplexBasebandSignal apply_agc_adc(const AdcModel& adc, const ComplexBasebandSignal& y) {
  return digitize(adc, y).samples;
}

}  // namespace fdsi
