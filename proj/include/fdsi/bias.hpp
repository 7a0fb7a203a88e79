#pragma once

#include <array>
#include <filesystem>

#include "fdsi/budget.hpp"
#include "fdsi/signal.hpp"

namespace fdsi {

struct SignalMoments {
  double r = 1.0;   ///< E|x|^2
  double m4 = 2.0;  ///< E|x|^4 (2 r^2 for circular Gaussian)
};

/// Single-tap coefficients of y = h1 x + h2 x^* + h_imd x_imd + u, with
/// x_imd = x_iq |x_iq|^2 and x_iq = g1 x + g2 x^* the TX mixer output.
struct FlatModel {
  Complex g1_tx;
  Complex g2_tx;
  Complex h1;
  Complex h2;
  Complex h_imd;
  double noise_power = 0.0;  ///< power of u at the regression output
  double signal_power = 0.0;  ///< E|x|^2 for the configured transmit power
};

/// Flat model for `p`: mixer from the TX IRR, PA from gain and IIP3, the
/// coupling after RF cancellation as a real gain sqrt(|a_ant|^2 |a_RF|^2), and
/// an ideal RX mixer of the configured gain. Thermal noise F p_th enters at the
/// receiver input.
FlatModel make_flat_model(const SystemParameters& p);

/// h_imd |g1|^2 m4 / r * [g1; 2 g2]
std::array<Complex, 2> analytic_bias(const FlatModel& model, SignalMoments moments);

/// Same expectation without dropping the |g2|^2 terms:
/// h_imd m4 / r * [g1 (|g1|^2 + 2|g2|^2); g2 (2|g1|^2 + |g2|^2)].
std::array<Complex, 2> analytic_bias_exact(const FlatModel& model, SignalMoments moments);

enum class BiasWaveform { kCircularGaussian, kOfdm };

struct BiasReport {
  std::array<Complex, 2> analytic_bias{};
  std::array<Complex, 2> analytic_bias_exact{};
  std::array<Complex, 2> empirical_mean_error{};
  std::array<double, 2> standard_error{};  ///< of the mean error, per coefficient
  int n_trials = 0;
  std::size_t n_samples = 0;
  double agreement = 0.0;  ///< |empirical - analytic| / |analytic|
};

/// n_trials independent WL-LS estimates (M = 1, K = 0) of the flat model on
/// fresh data; mean error against the true (h1, h2). Throws DomainError when
/// n_trials < 100.
BiasReport monte_carlo_bias(const SystemParameters& p, std::size_t n_samples, int n_trials,
                            RngSeed seed, BiasWaveform waveform = BiasWaveform::kCircularGaussian);

/// One JSON object per line with the report fields.
void write_bias_jsonl(const std::filesystem::path& path, const BiasReport& report,
                      const std::string& label);

}  // namespace fdsi
