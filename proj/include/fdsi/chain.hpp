#pragma once

#include <optional>

#include "fdsi/impairments.hpp"

namespace fdsi {

/// One realisation of the full-duplex transceiver front end.
struct TransceiverModel {
  IqImbalance tx_iq;
  PaModel pa;
  CouplingChannel channel;
  RfCanceller rf;
  double thermal_noise_power = 0.0;  // p_th at the receiver input, watts
  LnaModel lna;
  IqImbalance rx_iq;
  AdcModel adc;
};

/// Receiver signal split into its physical contributions. Every component
/// is referred to the RX mixer output (the ADC input divided by k_BB), so
/// they sum exactly to `adc_input` and `digital` differs from it only by
/// quantisation.
struct ChainComponents {
  ComplexBasebandSignal si_linear;     ///< direct RX path of the TX-direct SI
  ComplexBasebandSignal si_conjugate;  ///< TX image and RX image of the SI
  ComplexBasebandSignal imd;
  ComplexBasebandSignal imd_image;
  ComplexBasebandSignal noise;
  ComplexBasebandSignal noise_image;
  ComplexBasebandSignal soi;  ///< SOI including its RX image
  ComplexBasebandSignal quantization;

  ComplexBasebandSignal adc_input;  ///< sum of the analog components
  ComplexBasebandSignal digital;    ///< y_ADC / k_BB
  double vga_gain = 1.0;            ///< k_BB
  /// |k_LNA G1_RX(0)|^2: divide mixer-output powers by this to refer them to
  /// the receiver input.
  double input_referred_gain = 1.0;

  ComplexBasebandSignal si_total() const { return si_linear + si_conjugate; }
};

/// PA output for transmit data x (TX IQ mixer then PA).
ComplexBasebandSignal transmit(const TransceiverModel& model, const ComplexBasebandSignal& x);

/// Runs x (and an optional SOI at the receiver input) through the chain.
/// Thermal noise at the receiver input and LNA noise are drawn from `seed`.
ChainComponents run_chain(const TransceiverModel& model, const ComplexBasebandSignal& x,
                          const std::optional<ComplexBasebandSignal>& soi, RngSeed seed);

/// FIR taps with an explicit starting lag: h(first_lag + k) = taps[k].
struct LaggedTaps {
  Samples taps;
  int first_lag = 0;
};

/// y(n) = sum_k taps[k] x(n - first_lag - k), x zero outside the buffer.
ComplexBasebandSignal filter_lagged(const ComplexBasebandSignal& x, const LaggedTaps& h);

/// Effective widely-linear responses from the TX data to the mixer output:
/// y = h1 * x + h2 * x^* + h_imd * x_imd + h_imd_image * x_imd^* + ...
/// where x_imd = x_iq |x_iq|^2 is formed after the TX IQ mixer.
struct WidelyLinearResponse {
  LaggedTaps h1;
  LaggedTaps h2;
  LaggedTaps h_imd;
  LaggedTaps h_imd_image;
};

WidelyLinearResponse composite_response(const TransceiverModel& model);

}  // namespace fdsi
