#include "fdsi/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fdsi/errors.hpp"
#include "fdsi/units.hpp"

namespace fdsi {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void require_compatible(const ComplexBasebandSignal& a, const ComplexBasebandSignal& b) {
  if (a.size() != b.size() || a.sample_rate() != b.sample_rate()) {
    throw AlignmentError("signal length or sample rate mismatch (" +
                         std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                         " samples)");
  }
}

double sinc(double t) {
  if (std::abs(t) < 1e-12) return 1.0;
  return std::sin(kPi * t) / (kPi * t);
}

}  // namespace

RngSeed RngSeed::derive(std::initializer_list<std::uint64_t> path) const {
  std::uint64_t state = splitmix64(value);
  for (std::uint64_t step : path) state = splitmix64(state ^ splitmix64(step + 1));
  return RngSeed{state};
}

std::mt19937_64 RngSeed::engine() const { return std::mt19937_64(splitmix64(value)); }

ComplexBasebandSignal::ComplexBasebandSignal(Samples samples, double sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_(sample_rate_hz) {
  if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_)) {
    throw DomainError("sample rate must be positive");
  }
  if (samples_.empty()) throw DomainError("signal must contain at least one sample");
}

ComplexBasebandSignal ComplexBasebandSignal::zeros(std::size_t length,
                                                   double sample_rate_hz) {
  return ComplexBasebandSignal(Samples(length), sample_rate_hz);
}

ComplexBasebandSignal ComplexBasebandSignal::conj() const {
  Samples out(samples_.size());
  std::transform(samples_.begin(), samples_.end(), out.begin(),
                 [](Complex v) { return std::conj(v); });
  return {std::move(out), sample_rate_};
}

ComplexBasebandSignal ComplexBasebandSignal::scaled(Complex gain) const {
  Samples out(samples_.size());
  std::transform(samples_.begin(), samples_.end(), out.begin(),
                 [gain](Complex v) { return gain * v; });
  return {std::move(out), sample_rate_};
}

ComplexBasebandSignal ComplexBasebandSignal::slice(std::size_t begin,
                                                   std::size_t count) const {
  if (begin + count > samples_.size() || count == 0) {
    throw AlignmentError("slice outside signal bounds");
  }
  return {Samples(samples_.begin() + static_cast<std::ptrdiff_t>(begin),
                  samples_.begin() + static_cast<std::ptrdiff_t>(begin + count)),
          sample_rate_};
}

ComplexBasebandSignal& ComplexBasebandSignal::operator+=(const ComplexBasebandSignal& other) {
  require_compatible(*this, other);
  for (std::size_t n = 0; n < samples_.size(); ++n) samples_[n] += other.samples_[n];
  return *this;
}

ComplexBasebandSignal& ComplexBasebandSignal::operator-=(const ComplexBasebandSignal& other) {
  require_compatible(*this, other);
  for (std::size_t n = 0; n < samples_.size(); ++n) samples_[n] -= other.samples_[n];
  return *this;
}

ComplexBasebandSignal operator+(ComplexBasebandSignal lhs, const ComplexBasebandSignal& rhs) {
  lhs += rhs;
  return lhs;
}

ComplexBasebandSignal operator-(ComplexBasebandSignal lhs, const ComplexBasebandSignal& rhs) {
  lhs -= rhs;
  return lhs;
}

double measure_power(std::span<const Complex> samples) {
  if (samples.empty()) throw DomainError("cannot measure power of an empty signal");
  double acc = 0.0;
  for (const Complex& v : samples) acc += std::norm(v);
  return acc / static_cast<double>(samples.size());
}

double measure_power(const ComplexBasebandSignal& sig) { return measure_power(sig.samples()); }

double papr_db(const ComplexBasebandSignal& sig, double percentile) {
  if (!(percentile > 0.0 && percentile <= 100.0)) {
    throw DomainError("percentile must lie in (0, 100]");
  }
  std::vector<double> mag2(sig.size());
  std::transform(sig.data().begin(), sig.data().end(), mag2.begin(),
                 [](Complex v) { return std::norm(v); });
  const double mean = std::accumulate(mag2.begin(), mag2.end(), 0.0) /
                      static_cast<double>(mag2.size());
  auto rank = static_cast<std::size_t>(
      std::ceil(percentile / 100.0 * static_cast<double>(mag2.size())));
  rank = std::clamp<std::size_t>(rank, 1, mag2.size()) - 1;
  std::nth_element(mag2.begin(), mag2.begin() + static_cast<std::ptrdiff_t>(rank), mag2.end());
  return to_db(mag2[rank] / mean);
}

ComplexBasebandSignal convolve(const ComplexBasebandSignal& sig, std::span<const Complex> fir) {
  if (fir.empty()) throw DomainError("FIR must have at least one tap");
  const auto& x = sig.data();
  const std::size_t n_out = x.size();
  Samples y(n_out);
  for (std::size_t k = 0; k < fir.size(); ++k) {
    const Complex tap = fir[k];
    if (tap == Complex{}) continue;
    for (std::size_t n = k; n < n_out; ++n) y[n] += tap * x[n - k];
  }
  return {std::move(y), sig.sample_rate()};
}

Samples convolve_taps(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.empty() || b.empty()) throw DomainError("FIR must have at least one tap");
  Samples out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Samples conj_taps(std::span<const Complex> taps) {
  Samples out(taps.size());
  std::transform(taps.begin(), taps.end(), out.begin(),
                 [](Complex v) { return std::conj(v); });
  return out;
}

std::vector<double> fractional_delay_taps(double frac, int half_length) {
  if (std::abs(frac) > 0.5 + 1e-12) throw DomainError("fractional part must satisfy |frac| <= 0.5");
  if (half_length < 1) throw DomainError("interpolator half length must be positive");
  // 4-term Blackman-Harris over a span of 2L + 2 samples, centred on the
  // delayed sinc peak so the window never reaches zero on an active tap.
  constexpr double a0 = 0.35875, a1 = 0.48829, a2 = 0.14128, a3 = 0.01168;
  const double span = 2.0 * half_length + 2.0;
  std::vector<double> taps(static_cast<std::size_t>(2 * half_length + 1));
  double sum = 0.0;
  for (int k = -half_length; k <= half_length; ++k) {
    const double t = static_cast<double>(k) - frac;
    const double phase = 2.0 * kPi * (t + span / 2.0) / span;
    const double w = a0 - a1 * std::cos(phase) + a2 * std::cos(2.0 * phase) -
                     a3 * std::cos(3.0 * phase);
    const double h = sinc(t) * w;
    taps[static_cast<std::size_t>(k + half_length)] = h;
    sum += h;
  }
  for (double& h : taps) h /= sum;
  return taps;
}

ComplexBasebandSignal fractional_delay(const ComplexBasebandSignal& sig, double delay) {
  if (!std::isfinite(delay)) throw DomainError("delay must be finite");
  const double whole = std::round(delay);
  const double frac = delay - whole;
  const auto shift = static_cast<std::ptrdiff_t>(whole);
  const auto& x = sig.data();
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  Samples y(x.size());

  if (std::abs(frac) < 1e-15) {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const std::ptrdiff_t src = i - shift;
      if (src >= 0 && src < n) y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(src)];
    }
    return {std::move(y), sig.sample_rate()};
  }

  const int half = kFractionalDelayHalfLength;
  const std::vector<double> taps = fractional_delay_taps(frac, half);
  // y(i) = sum_k h(k) x(i - shift - k), k = -half..half
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    Complex acc{};
    for (int k = -half; k <= half; ++k) {
      const std::ptrdiff_t src = i - shift - k;
      if (src < 0 || src >= n) continue;
      acc += taps[static_cast<std::size_t>(k + half)] * x[static_cast<std::size_t>(src)];
    }
    y[static_cast<std::size_t>(i)] = acc;
  }
  return {std::move(y), sig.sample_rate()};
}

ComplexBasebandSignal awgn(double power, std::size_t length, double sample_rate_hz,
                           RngSeed seed) {
  if (!(power >= 0.0) || !std::isfinite(power)) throw DomainError("noise power must be >= 0");
  Samples out(length);
  if (power > 0.0) {
    auto engine = seed.engine();
    std::normal_distribution<double> rail(0.0, std::sqrt(power / 2.0));
    for (Complex& v : out) {
      const double re = rail(engine);
      const double im = rail(engine);
      v = {re, im};
    }
  }
  return {std::move(out), sample_rate_hz};
}

}  // namespace fdsi
