#include "fdsi/budget.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "fdsi/errors.hpp"
#include "fdsi/impairments.hpp"
#include "fdsi/units.hpp"

namespace fdsi {

void SystemParameters::validate() const {
  const std::pair<const char*, double> finite[] = {
      {"bandwidth", bandwidth_hz},
      {"thermal_floor", thermal_floor_dbm},
      {"noise_figure", noise_figure_db},
      {"snr_requirement", snr_requirement_db},
      {"sensitivity", sensitivity_dbm},
      {"soi_power", soi_power_dbm},
      {"tx_power", tx_power_dbm},
      {"pa_gain", pa_gain_db},
      {"antenna_attenuation", antenna_attenuation_db},
      {"rf_cancellation", rf_cancellation_db},
      {"lna_gain", lna_gain_db},
      {"mixer_gain", mixer_gain_db},
      {"adc_vpp", adc_vpp},
      {"papr", papr_db},
  };
  for (const auto& [name, v] : finite) {
    if (!std::isfinite(v)) throw ConfigurationError(std::string(name) + " must be finite");
  }
  for (const auto& [name, v] : {std::pair{"irr_tx", irr_tx_db}, std::pair{"irr_rx", irr_rx_db},
                                std::pair{"pa_iip3", pa_iip3_dbm}}) {
    if (std::isnan(v) || v == -std::numeric_limits<double>::infinity()) {
      throw ConfigurationError(std::string(name) + " must be a number or +inf");
    }
  }
  if (irr_tx_db <= 0.0 || irr_rx_db <= 0.0) throw ConfigurationError("IRR must be positive");
  if (bandwidth_hz <= 0.0) throw ConfigurationError("bandwidth must be positive");
  if (noise_figure_db < 0.0) throw ConfigurationError("noise figure must be >= 0 dB");
  if (adc_bits < 1) throw ConfigurationError("ADC needs at least one bit");
  if (adc_vpp <= 0.0) throw ConfigurationError("ADC range must be positive");
  const double expected = thermal_floor_dbm + noise_figure_db + snr_requirement_db;
  if (std::abs(sensitivity_dbm - expected) > 0.05) {
    throw ConfigurationError(fmt::format(
        "sensitivity {:.2f} dBm disagrees with floor + NF + SNR = {:.2f} dBm", sensitivity_dbm,
        expected));
  }
}

PowerBudget compute_budget(const SystemParameters& p, LdcPolicy policy, double sixth_moment) {
  p.validate();
  // Flat mixer gains |g1|^2 = G / (1 + 1/IRR), |g2|^2 = G / (1 + IRR); the
  // budget needs only their ratios to the total.
  auto direct_share = [](double irr_db) {
    return std::isinf(irr_db) ? 1.0 : 1.0 / (1.0 + from_db(-irr_db));
  };
  auto image_share = [](double irr_db) {
    return std::isinf(irr_db) ? 0.0 : 1.0 / (1.0 + from_db(irr_db));
  };
  const double g1_tx = direct_share(p.irr_tx_db), g2_tx = image_share(p.irr_tx_db);
  const double rx_image = std::isinf(p.irr_rx_db) ? 0.0 : from_db(-p.irr_rx_db);

  const double tx = dbm_to_watts(p.tx_power_dbm);
  const double coupling = from_db(-p.antenna_attenuation_db - p.rf_cancellation_db);
  const double si_before = tx * coupling * g1_tx;
  const double si_im = tx * coupling * (g2_tx + g1_tx * rx_image);

  // x_IMD = x_iq |x_iq|^2 with E|x_iq|^2 = tx / |alpha0|^2
  double imd = 0.0;
  if (std::isfinite(p.pa_iip3_dbm)) {
    const double alpha0_sq = from_db(p.pa_gain_db);
    const double alpha1_sq = alpha0_sq / std::pow(dbm_to_watts(p.pa_iip3_dbm), 2);
    const double r = tx / alpha0_sq;
    imd = alpha1_sq * sixth_moment * r * r * r * coupling;
  }
  const double noise = from_db(p.noise_figure_db) * dbm_to_watts(p.thermal_floor_dbm);

  double ldc_db = policy.fixed_db;
  if (policy.kind == LdcPolicy::Kind::kSuppressToNoiseFloor) {
    ldc_db = std::max(0.0, watts_to_dbm(si_before) - p.thermal_floor_dbm);
  }

  PowerBudget b;
  b.tx_dbm = p.tx_power_dbm;
  b.p_si_before = watts_to_dbm(si_before);
  b.p_si = b.p_si_before - ldc_db;
  b.p_si_im = watts_to_dbm(si_im);
  b.p_imd = watts_to_dbm(imd);
  b.p_imd_im = watts_to_dbm(imd * rx_image);
  b.p_noise = watts_to_dbm(noise);
  b.p_noise_im = watts_to_dbm(noise * rx_image);
  b.p_soi = p.soi_power_dbm;
  b.p_ad = power_sum_db({b.p_si_before, b.p_si_im, b.p_imd, b.p_imd_im, b.p_noise,
                         b.p_noise_im, b.p_soi});
  b.p_q = b.p_ad - snr_adc_db(p.adc_bits, p.papr_db);
  b.required_ldc = ldc_db;
  b.sinr = b.p_soi -
           power_sum_db({b.p_si, b.p_si_im, b.p_imd, b.p_imd_im, b.p_noise, b.p_noise_im, b.p_q});
  return b;
}

std::vector<PowerBudget> sweep_tx_power(const SystemParameters& p, std::span<const double> tx_dbm,
                                        LdcPolicy policy, double sixth_moment) {
  if (tx_dbm.empty()) throw DomainError("transmit power range is empty");
  std::vector<PowerBudget> out;
  out.reserve(tx_dbm.size());
  SystemParameters point = p;
  for (double tx : tx_dbm) {
    point.tx_power_dbm = tx;
    out.push_back(compute_budget(point, policy, sixth_moment));
  }
  return out;
}

std::vector<double> power_range(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start)) throw DomainError("invalid power range");
  std::vector<double> out;
  const auto n = static_cast<int>(std::floor((stop - start) / step + 1e-9));
  for (int i = 0; i <= n; ++i) out.push_back(start + step * i);
  return out;
}

void write_budget_csv(const std::filesystem::path& path, std::span<const PowerBudget> rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "tx_dbm,p_si,p_si_im,p_imd,p_imd_im,p_noise,p_noise_im,p_q,p_soi,sinr\n";
  for (const PowerBudget& b : rows) {
    out << fmt::format("{:.6g},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n",
                       b.tx_dbm, b.p_si, b.p_si_im, b.p_imd, b.p_imd_im, b.p_noise, b.p_noise_im,
                       b.p_q, b.p_soi, b.sinr);
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace fdsi
