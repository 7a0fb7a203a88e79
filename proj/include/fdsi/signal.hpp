#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace fdsi {

using Complex = std::complex<double>;
using Samples = std::vector<Complex>;

/// Seed of a deterministic random stream. Child streams are derived with
/// `derive`, so every generator is a pure function of (config, seed).
struct RngSeed {
  std::uint64_t value = 0;

  /// Counter-based child seed: SplitMix64 folded over the stream path.
  RngSeed derive(std::initializer_list<std::uint64_t> path) const;

  std::mt19937_64 engine() const;
};

/// Uniformly sampled complex baseband stream. Power convention: E|x|^2 in
/// watts. Always non-empty with a positive sample rate.
class ComplexBasebandSignal {
 public:
  ComplexBasebandSignal(Samples samples, double sample_rate_hz);

  static ComplexBasebandSignal zeros(std::size_t length, double sample_rate_hz);

  std::span<const Complex> samples() const { return samples_; }
  const Samples& data() const { return samples_; }
  Samples release() && { return std::move(samples_); }

  std::size_t size() const { return samples_.size(); }
  double sample_rate() const { return sample_rate_; }
  double sample_interval() const { return 1.0 / sample_rate_; }

  const Complex& operator[](std::size_t n) const { return samples_[n]; }

  ComplexBasebandSignal conj() const;
  ComplexBasebandSignal scaled(Complex gain) const;
  /// Sub-range [begin, begin + count).
  ComplexBasebandSignal slice(std::size_t begin, std::size_t count) const;

  ComplexBasebandSignal& operator+=(const ComplexBasebandSignal& other);
  ComplexBasebandSignal& operator-=(const ComplexBasebandSignal& other);

 private:
  Samples samples_;
  double sample_rate_;
};

ComplexBasebandSignal operator+(ComplexBasebandSignal lhs,
                                const ComplexBasebandSignal& rhs);
ComplexBasebandSignal operator-(ComplexBasebandSignal lhs,
                                const ComplexBasebandSignal& rhs);

/// Mean of |x(n)|^2 in watts. Throws DomainError on an empty span.
double measure_power(std::span<const Complex> samples);
double measure_power(const ComplexBasebandSignal& sig);

/// Ratio (dB) of the given percentile of |x|^2 to the mean power.
double papr_db(const ComplexBasebandSignal& sig, double percentile = 99.99);

/// Causal FIR filtering truncated to the input length:
/// y(n) = sum_k fir(k) x(n - k), samples before n = 0 taken as zero.
ComplexBasebandSignal convolve(const ComplexBasebandSignal& sig,
                               std::span<const Complex> fir);

/// Full linear convolution of two tap sequences (length a + b - 1).
Samples convolve_taps(std::span<const Complex> a, std::span<const Complex> b);

/// Element-wise conjugate of a tap sequence.
Samples conj_taps(std::span<const Complex> taps);

inline constexpr int kFractionalDelayHalfLength = 31;

/// Blackman-Harris windowed-sinc taps h(k), k = -half_length..half_length,
/// approximating a delay of `frac` samples (|frac| <= 0.5). Unit DC gain.
std::vector<double> fractional_delay_taps(double frac,
                                          int half_length = kFractionalDelayHalfLength);

/// Band-limited delay by `delay` samples: the nearest integer part is an
/// exact shift and the remainder goes through the windowed-sinc
/// interpolator. Output length equals input length; x outside the buffer is
/// zero.
ComplexBasebandSignal fractional_delay(const ComplexBasebandSignal& sig, double delay);

/// Circular complex white Gaussian noise of the given power.
ComplexBasebandSignal awgn(double power, std::size_t length, double sample_rate_hz,
                           RngSeed seed);

}  // namespace fdsi
