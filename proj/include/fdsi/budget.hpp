#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace fdsi {

/// Link-level parameters of the transceiver. Defaults are the reference
/// wideband transceiver with low-cost components.
struct SystemParameters {
  double bandwidth_hz = 12.5e6;
  double thermal_floor_dbm = -103.0;
  double noise_figure_db = 4.1;
  double snr_requirement_db = 10.0;
  double sensitivity_dbm = -88.9;
  double soi_power_dbm = -83.9;
  double tx_power_dbm = 0.0;
  double pa_gain_db = 27.0;
  double pa_iip3_dbm = 20.0;
  double antenna_attenuation_db = 40.0;
  double rf_cancellation_db = 30.0;
  double lna_gain_db = 25.0;
  double mixer_gain_db = 6.0;
  double irr_tx_db = 25.0;
  double irr_rx_db = 25.0;
  int adc_bits = 12;
  double adc_vpp = 4.5;
  double papr_db = 10.0;

  /// Throws ConfigurationError on non-finite dB fields (IRR and IIP3 may be
  /// +inf), non-positive counts, or sensitivity != floor + NF + SNR.
  void validate() const;
};

struct LdcPolicy {
  enum class Kind { kFixed, kSuppressToNoiseFloor };
  Kind kind = Kind::kSuppressToNoiseFloor;
  double fixed_db = 0.0;

  static LdcPolicy fixed(double db) { return {Kind::kFixed, db}; }
  /// Linear SI attenuated down to the thermal noise floor at the receiver input.
  static LdcPolicy noise_floor() { return {Kind::kSuppressToNoiseFloor, 0.0}; }
};

/// Component powers in dBm, referred to the receiver input through the
/// common gain |k_BB k_LNA g1_RX|^2 (which cancels in every ratio).
struct PowerBudget {
  double tx_dbm = 0.0;
  double p_si_before = 0.0;  ///< linear SI ahead of digital cancellation
  double p_si = 0.0;         ///< linear SI after digital cancellation
  double p_si_im = 0.0;
  double p_imd = 0.0;
  double p_imd_im = 0.0;
  double p_noise = 0.0;
  double p_noise_im = 0.0;
  double p_ad = 0.0;  ///< total ADC input power
  double p_q = 0.0;
  double p_soi = 0.0;
  double required_ldc = 0.0;  ///< dB of linear digital cancellation applied
  double sinr = 0.0;
};

/// E|x|^6 / (E|x|^2)^3 of the transmit waveform; 6 for circular Gaussian.
inline constexpr double kGaussianSixthMoment = 6.0;

PowerBudget compute_budget(const SystemParameters& p, LdcPolicy policy = LdcPolicy::noise_floor(),
                           double sixth_moment = kGaussianSixthMoment);

/// One budget per transmit power. Throws DomainError on an empty range.
std::vector<PowerBudget> sweep_tx_power(const SystemParameters& p, std::span<const double> tx_dbm,
                                        LdcPolicy policy = LdcPolicy::noise_floor(),
                                        double sixth_moment = kGaussianSixthMoment);

/// Inclusive arithmetic range start, start + step, ..., <= stop.
std::vector<double> power_range(double start, double stop, double step);

/// Columns: tx_dbm,p_si,p_si_im,p_imd,p_imd_im,p_noise,p_noise_im,p_q,p_soi,sinr
void write_budget_csv(const std::filesystem::path& path, std::span<const PowerBudget> rows);

}  // namespace fdsi
