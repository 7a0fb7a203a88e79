#pragma once

#include <limits>

#include "fdsi/signal.hpp"

namespace fdsi {

/// Widely-linear IQ mixer response: out = g1 * s + g2 * conj(s).
struct IqImbalance {
  Samples g1{Complex{1.0, 0.0}};
  Samples g2{Complex{0.0, 0.0}};

  static IqImbalance ideal(double gain_db = 0.0);

  /// g1 * s
  ComplexBasebandSignal direct(const ComplexBasebandSignal& s) const;
  /// g2 * conj(s)
  ComplexBasebandSignal image(const ComplexBasebandSignal& s) const;

  /// Image rejection ratio at DC in dB (+inf when g2 vanishes).
  double irr_db() const;
  /// |G1(0)|^2 + |G2(0)|^2
  double power_gain() const;
};

/// How the image power is shared between amplitude and phase error.
struct IqErrorSplit {
  /// Fraction of the image power left to the amplitude error. The phase
  /// error carries the rest; the amplitude error is then trimmed so the IRR
  /// is exact.
  double amplitude_share = 0.1;
};

/// Flat IQ imbalance from amplitude error eps and phase error phi:
/// g1 = (1 + (1+eps) e^{-j phi}) / 2, g2 = (1 - (1+eps) e^{-j phi}) / 2, scaled
/// so |g1|^2 + |g2|^2 equals the mixer power gain. `irr_db = +inf` is ideal.
IqImbalance derive_iq_from_irr(double irr_db, double gain_db, IqErrorSplit split = {});

ComplexBasebandSignal apply_tx_iq(const IqImbalance& imb, const ComplexBasebandSignal& x);
ComplexBasebandSignal apply_rx_iq(const IqImbalance& imb, const ComplexBasebandSignal& y);

/// Hammerstein PA: (alpha0 x + alpha1 x|x|^2) * f.
struct PaModel {
  Complex alpha0{1.0, 0.0};
  Complex alpha1{0.0, 0.0};  // 1/W
  Samples memory{Complex{1.0, 0.0}};

  /// Optional three-tap lowpass memory, normalised to unit energy.
  static Samples lowpass_memory();

  ComplexBasebandSignal linear_part(const ComplexBasebandSignal& x) const;
  ComplexBasebandSignal imd_part(const ComplexBasebandSignal& x) const;
};

/// x(n)|x(n)|^2
ComplexBasebandSignal third_order_term(const ComplexBasebandSignal& x);

/// Gain alpha0 from `gain_db`; |alpha1| found by two-tone calibration so the
/// measured input-referred third-order intercept equals `iip3_dbm`. alpha1 is
/// anti-phase to alpha0 (compressive). `iip3_dbm = +inf` gives a linear PA.
PaModel calibrate_pa(double gain_db, double iip3_dbm, Samples memory = {Complex{1.0, 0.0}});

/// Input-referred IP3 from a two-tone test at the given per-tone input power:
/// IIP3 = P_in + (P_fund - P_im3) / 2, tone levels read with single-bin DFTs.
double measure_two_tone_iip3_dbm(const PaModel& pa, double tone_power_dbm);

ComplexBasebandSignal apply_pa(const PaModel& pa, const ComplexBasebandSignal& x);

/// Static antenna coupling: LOS tap at lag 0, multipath taps at lags 1 and 2.
struct CouplingChannel {
  Samples taps;
  double los_to_multipath_db = std::numeric_limits<double>::infinity();
  double antenna_attenuation_db = 0.0;

  Complex los() const { return taps.front(); }
  double expected_los_power() const;
  double expected_multipath_power() const;
};

/// LOS magnitude 10^(-att/20) with uniform phase; two i.i.d. circular
/// Gaussian multipath taps sharing the multipath power equally.
CouplingChannel draw_coupling_channel(double antenna_attenuation_db, double ratio_db,
                                      RngSeed seed);

/// Analog canceller: subtracts gain * D_delay(x_pa), where D is a fractional
/// delay by `delay_error` samples.
struct RfCanceller {
  Complex gain{};
  double delay_error = 0.0;
  double amplitude_error = 0.0;
  /// Realised total-SI attenuation on the calibration waveform, dB (positive).
  double achieved_attenuation_db = 0.0;
  /// Realised attenuation of the LOS component alone, dB.
  double los_attenuation_db = 0.0;

  ComplexBasebandSignal cancellation_signal(const ComplexBasebandSignal& x_pa) const;
};

/// Canceller tracking the LOS tap with a relative amplitude error and a
/// delay error; attenuation fields are measured on `x_pa`.
RfCanceller make_rf_canceller(const CouplingChannel& ch, double amplitude_error,
                              double delay_error, const ComplexBasebandSignal& x_pa);

/// Amplitude error eps >= 0 chosen so that the expected total-SI attenuation
/// E|h_ch - a|^2 / E|h_ch|^2 (multipath taken at its mean power) equals
/// `target_db`; the LOS residual is quadratic in (1 + eps) on `x_pa`, so the
/// root is exact. Throws InfeasibleTargetError when the delay error alone
/// leaves more residual than the target allows.
RfCanceller calibrate_rf_canceller(const CouplingChannel& ch, double target_db,
                                   double delay_error, const ComplexBasebandSignal& x_pa);

/// h_ch * x_pa - a D(x_pa): coupled SI after RF cancellation.
ComplexBasebandSignal coupled_residual(const CouplingChannel& ch, const RfCanceller& rf,
                                       const ComplexBasebandSignal& x_pa);

/// LNA with power gain and noise figure referenced to a thermal noise power.
struct LnaModel {
  double gain_db = 0.0;
  double noise_figure_db = 0.0;
  double thermal_noise_power = 0.0;  // p_th, watts

  Complex gain() const;
  double noise_factor() const;
  /// |k|^2 (F - 1) p_th
  double added_noise_power() const;
  ComplexBasebandSignal amplify(const ComplexBasebandSignal& y) const;
};

/// k y + n_LNA with n_LNA circular Gaussian of power |k|^2 (F - 1) p_th.
ComplexBasebandSignal apply_lna(const LnaModel& lna, const ComplexBasebandSignal& y,
                                RngSeed seed);

/// 10 log10 of 10^((6.02 b + 4.76 - PAPR)/10)
double snr_adc_db(int bits, double papr_db);

/// Uniform I/Q quantiser behind an ideal AGC (VGA gain k_BB).
struct AdcModel {
  int bits = 12;  ///< >= kUnquantizedBits disables quantisation
  double peak_to_peak_voltage = 4.5;
  double papr_db = 10.0;  ///< headroom used by the snr_ADC formula
  /// Percentile of |y| mapped onto the per-rail full scale; 100 maps the
  /// absolute peak so nothing saturates.
  double agc_peak_percentile = 100.0;

  static constexpr int kUnquantizedBits = 53;

  double full_scale() const { return peak_to_peak_voltage / 2.0; }
  double step() const;
  double snr_db() const { return snr_adc_db(bits, papr_db); }
};

struct AdcOutput {
  ComplexBasebandSignal samples;  ///< quantised k_BB y, volts
  double vga_gain = 1.0;          ///< k_BB (real, positive)
};

/// AGC + ADC. Throws DomainError on a zero-power input.
AdcOutput digitize(const AdcModel& adc, const ComplexBasebandSignal& y);

ComplexBasebandSignal apply_agc_adc(const AdcModel& adc, const ComplexBasebandSignal& y);

}  // namespace fdsi
