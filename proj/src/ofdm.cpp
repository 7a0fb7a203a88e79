#include "fdsi/ofdm.hpp"

#include <cmath>
#include <string>
#include <unsupported/Eigen/FFT>

#include "fdsi/errors.hpp"
#include "fdsi/units.hpp"

namespace fdsi {
namespace {

int qam_side(int order) {
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
  if (side < 2 || side * side != order) return 0;
  return side;
}

}  // namespace

std::vector<double> lowpass_taps(double cutoff, int half_length) {
  if (!(cutoff > 0.0 && cutoff < 0.5)) throw DomainError("low-pass cutoff must lie in (0, 0.5)");
  if (half_length < 1) throw DomainError("low-pass half length must be positive");
  constexpr double a0 = 0.35875, a1 = 0.48829, a2 = 0.14128, a3 = 0.01168;
  const double span = 2.0 * half_length + 2.0;
  std::vector<double> taps(static_cast<std::size_t>(2 * half_length + 1));
  double sum = 0.0;
  for (int k = -half_length; k <= half_length; ++k) {
    const double phase = 2.0 * kPi * (k + span / 2.0) / span;
    const double w = a0 - a1 * std::cos(phase) + a2 * std::cos(2.0 * phase) -
                     a3 * std::cos(3.0 * phase);
    const double t = 2.0 * cutoff * k;
    const double s = k == 0 ? 1.0 : std::sin(kPi * t) / (kPi * t);
    taps[static_cast<std::size_t>(k + half_length)] = s * w;
    sum += s * w;
  }
  for (double& h : taps) h /= sum;
  return taps;
}

void OfdmConfig::validate() const {
  if (qam_side(constellation) == 0) {
    throw ConfigurationError("constellation must be a square QAM order, got " +
                             std::to_string(constellation));
  }
  if (n_subcarriers < 2 || oversampling < 1) {
    throw ConfigurationError("subcarrier count and oversampling must be positive");
  }
  if (n_data_subcarriers < 2 || n_data_subcarriers > n_subcarriers) {
    throw ConfigurationError("data subcarriers (" + std::to_string(n_data_subcarriers) +
                             ") exceed total subcarriers (" + std::to_string(n_subcarriers) +
                             ")");
  }
  if (n_data_subcarriers % 2 != 0 || n_data_subcarriers / 2 > n_subcarriers / 2 - 1) {
    throw ConfigurationError("data subcarriers must fit symmetrically around a DC null");
  }
  if (!(guard_fraction >= 0.0 && guard_fraction < 1.0)) {
    throw ConfigurationError("guard fraction must lie in [0, 1)");
  }
  if (!(sample_interval_s > 0.0)) throw ConfigurationError("sample interval must be positive");
  if (shaping_cutoff_hz != 0.0 &&
      !(shaping_cutoff_hz > 0.0 && shaping_cutoff_hz < 0.5 * sample_rate())) {
    throw ConfigurationError("shaping cutoff must lie between 0 and half the sample rate");
  }
  if (shaping_cutoff_hz > 0.0 && shaping_half_length < 1) {
    throw ConfigurationError("shaping filter half length must be positive");
  }
  const double useful = static_cast<double>(fft_size()) * sample_interval_s;
  if (std::abs(useful - symbol_length_s) > sample_interval_s) {
    throw ConfigurationError("symbol length does not match subcarriers x oversampling x "
                             "sample interval");
  }
}

int OfdmConfig::prefix_length() const {
  return static_cast<int>(std::lround(guard_fraction * fft_size()));
}

std::vector<int> OfdmConfig::data_subcarriers() const {
  std::vector<int> idx;
  const int half = n_data_subcarriers / 2;
  for (int k = -half; k <= half; ++k) {
    if (k != 0) idx.push_back(k);
  }
  return idx;
}

ComplexBasebandSignal generate_ofdm_frame(const OfdmConfig& cfg, std::size_t n_symbols,
                                          double target_power, RngSeed seed) {
  cfg.validate();
  if (n_symbols < 1) throw DomainError("at least one OFDM symbol is required");
  if (!(target_power > 0.0)) throw DomainError("target power must be positive");

  const int nfft = cfg.fft_size();
  const int ncp = cfg.prefix_length();
  const int side = qam_side(cfg.constellation);
  const std::vector<int> carriers = cfg.data_subcarriers();

  auto engine = seed.engine();
  std::uniform_int_distribution<int> level(0, side - 1);

  Eigen::FFT<double> fft;
  std::vector<Complex> spectrum(static_cast<std::size_t>(nfft));
  std::vector<Complex> symbol;
  const bool shaped = cfg.shaping_cutoff_hz > 0.0;
  const auto per_symbol = static_cast<std::size_t>(nfft + ncp);
  // One extra symbol on each side so the low-pass sees a steady-state
  // waveform at both ends of the returned frame.
  const std::size_t guard = shaped ? 1 : 0;
  const std::size_t total = n_symbols + 2 * guard;
  Samples out;
  out.reserve(total * per_symbol);

  for (std::size_t s = 0; s < total; ++s) {
    std::fill(spectrum.begin(), spectrum.end(), Complex{});
    for (int k : carriers) {
      const double re = 2.0 * level(engine) - (side - 1);
      const double im = 2.0 * level(engine) - (side - 1);
      const int bin = k >= 0 ? k : nfft + k;
      spectrum[static_cast<std::size_t>(bin)] = {re, im};
    }
    fft.inv(symbol, spectrum);
    out.insert(out.end(), symbol.end() - ncp, symbol.end());
    out.insert(out.end(), symbol.begin(), symbol.end());
  }

  if (shaped) {
    const std::vector<double> h =
        lowpass_taps(cfg.shaping_cutoff_hz / cfg.sample_rate(), cfg.shaping_half_length);
    const auto half = static_cast<std::ptrdiff_t>(cfg.shaping_half_length);
    const auto len = static_cast<std::ptrdiff_t>(out.size());
    const auto begin = static_cast<std::ptrdiff_t>(per_symbol);
    Samples shaped_out(n_symbols * per_symbol);
    for (std::size_t i = 0; i < shaped_out.size(); ++i) {
      const std::ptrdiff_t c = begin + static_cast<std::ptrdiff_t>(i);
      Complex acc{};
      for (std::ptrdiff_t k = -half; k <= half; ++k) {
        const std::ptrdiff_t src = c - k;
        if (src < 0 || src >= len) continue;
        acc += h[static_cast<std::size_t>(k + half)] * out[static_cast<std::size_t>(src)];
      }
      shaped_out[i] = acc;
    }
    out = std::move(shaped_out);
  }

  const double scale = std::sqrt(target_power / measure_power(out));
  for (Complex& v : out) v *= scale;
  return {std::move(out), cfg.sample_rate()};
}

ComplexBasebandSignal generate_ofdm_samples(const OfdmConfig& cfg, std::size_t length,
                                            double target_power, RngSeed seed) {
  if (length < 1) throw DomainError("frame length must be positive");
  cfg.validate();
  const auto per_symbol = static_cast<std::size_t>(cfg.samples_per_symbol());
  const std::size_t n_symbols = (length + per_symbol - 1) / per_symbol;
  Samples frame = generate_ofdm_frame(cfg, n_symbols, 1.0, seed).release();
  frame.resize(length);
  const double scale = std::sqrt(target_power / measure_power(frame));
  for (Complex& v : frame) v *= scale;
  return {std::move(frame), cfg.sample_rate()};
}

}  // namespace fdsi
