#pragma once

#include <cstddef>

#include "fdsi/signal.hpp"

namespace fdsi {

/// OFDM waveform layout. Defaults follow the WLAN-like reference waveform:
/// 16-QAM on 48 of 64 subcarriers, 4x oversampling to a 15.625 ns sample
/// interval, 4 us useful symbol plus a 25 % cyclic prefix.
struct OfdmConfig {
  int constellation = 16;
  int n_subcarriers = 64;
  int n_data_subcarriers = 48;
  double guard_fraction = 0.25;
  double sample_interval_s = 15.625e-9;
  double symbol_length_s = 4e-6;
  int oversampling = 4;
  /// Transmit low-pass edge applied to the oversampled frame, Hz. Keeps the
  /// symbol-boundary splatter out of the oversampled band. 0 disables it.
  double shaping_cutoff_hz = 9e6;
  int shaping_half_length = 64;

  /// Throws ConfigurationError when the layout is inconsistent.
  void validate() const;

  int fft_size() const { return n_subcarriers * oversampling; }
  int prefix_length() const;
  int samples_per_symbol() const { return fft_size() + prefix_length(); }
  double sample_rate() const { return 1.0 / sample_interval_s; }
  /// Signed native-rate subcarrier indices carrying data, DC excluded.
  std::vector<int> data_subcarriers() const;
};

/// Blackman-Harris windowed-sinc low-pass, taps k = -half_length..half_length,
/// unit DC gain. `cutoff` is a fraction of the sample rate in (0, 0.5).
std::vector<double> lowpass_taps(double cutoff, int half_length);

/// Random square-QAM OFDM frame of `n_symbols` symbols (cyclic prefix
/// included), scaled to `target_power` watts. Unused subcarriers are zero
/// before the transmit low-pass.
ComplexBasebandSignal generate_ofdm_frame(const OfdmConfig& cfg, std::size_t n_symbols,
                                          double target_power, RngSeed seed);

/// Frame of exactly `length` samples (whole symbols generated, then cut).
ComplexBasebandSignal generate_ofdm_samples(const OfdmConfig& cfg, std::size_t length,
                                            double target_power, RngSeed seed);

}  // namespace fdsi
