#include "fdsi/chain.hpp"

#include <cmath>

#include "fdsi/errors.hpp"

namespace fdsi {
namespace {

LaggedTaps compose(const LaggedTaps& a, const LaggedTaps& b) {
  return {convolve_taps(a.taps, b.taps), a.first_lag + b.first_lag};
}

LaggedTaps conj(const LaggedTaps& a) { return {conj_taps(a.taps), a.first_lag}; }

LaggedTaps scale(const LaggedTaps& a, Complex g) {
  LaggedTaps out = a;
  for (Complex& t : out.taps) t *= g;
  return out;
}

LaggedTaps add(const LaggedTaps& a, const LaggedTaps& b) {
  const int first = std::min(a.first_lag, b.first_lag);
  const int last = std::max(a.first_lag + static_cast<int>(a.taps.size()),
                            b.first_lag + static_cast<int>(b.taps.size()));
  LaggedTaps out{Samples(static_cast<std::size_t>(last - first)), first};
  for (std::size_t k = 0; k < a.taps.size(); ++k) {
    out.taps[static_cast<std::size_t>(a.first_lag - first) + k] += a.taps[k];
  }
  for (std::size_t k = 0; k < b.taps.size(); ++k) {
    out.taps[static_cast<std::size_t>(b.first_lag - first) + k] += b.taps[k];
  }
  return out;
}

LaggedTaps causal(const Samples& taps) { return {taps, 0}; }

// h_ch - a D: the analog path seen by the PA output after RF cancellation.
LaggedTaps coupling_response(const TransceiverModel& m) {
  const double whole = std::round(m.rf.delay_error);
  const double frac = m.rf.delay_error - whole;
  LaggedTaps canc;
  if (std::abs(frac) < 1e-15) {
    canc = {Samples{m.rf.gain}, static_cast<int>(whole)};
  } else {
    const std::vector<double> h = fractional_delay_taps(frac);
    canc.first_lag = static_cast<int>(whole) - kFractionalDelayHalfLength;
    for (double v : h) canc.taps.push_back(m.rf.gain * v);
  }
  return add(causal(m.channel.taps), scale(canc, -1.0));
}

}  // namespace

ComplexBasebandSignal transmit(const TransceiverModel& model, const ComplexBasebandSignal& x) {
  return apply_pa(model.pa, apply_tx_iq(model.tx_iq, x));
}

ChainComponents run_chain(const TransceiverModel& m, const ComplexBasebandSignal& x,
                          const std::optional<ComplexBasebandSignal>& soi, RngSeed seed) {
  if (soi && (soi->size() != x.size() || soi->sample_rate() != x.sample_rate())) {
    throw AlignmentError("SOI and transmit data must share length and sample rate");
  }
  auto coupled = [&](const ComplexBasebandSignal& s) { return coupled_residual(m.channel, m.rf, s); };
  auto rx_direct = [&](const ComplexBasebandSignal& s) { return m.rx_iq.direct(m.lna.amplify(s)); };
  auto rx_image = [&](const ComplexBasebandSignal& s) { return m.rx_iq.image(m.lna.amplify(s)); };

  const ComplexBasebandSignal x_iq = apply_tx_iq(m.tx_iq, x);
  const ComplexBasebandSignal r_x = coupled(m.pa.linear_part(m.tx_iq.direct(x)));
  const ComplexBasebandSignal r_xc = coupled(m.pa.linear_part(m.tx_iq.image(x)));
  const ComplexBasebandSignal r_imd = coupled(m.pa.imd_part(x_iq));

  const ComplexBasebandSignal n_th = awgn(m.thermal_noise_power, x.size(), x.sample_rate(),
                                          seed.derive({1}));
  const ComplexBasebandSignal n_tot =
      apply_lna(m.lna, n_th, seed.derive({2}));  // k n_th + n_LNA

  ChainComponents c{
      rx_direct(r_x) + rx_image(r_xc),
      rx_direct(r_xc) + rx_image(r_x),
      rx_direct(r_imd),
      rx_image(r_imd),
      m.rx_iq.direct(n_tot),
      m.rx_iq.image(n_tot),
      soi ? rx_direct(*soi) + rx_image(*soi) : ComplexBasebandSignal::zeros(x.size(), x.sample_rate()),
      ComplexBasebandSignal::zeros(x.size(), x.sample_rate()),
      ComplexBasebandSignal::zeros(x.size(), x.sample_rate()),
      ComplexBasebandSignal::zeros(x.size(), x.sample_rate()),
  };
  c.adc_input = c.si_linear + c.si_conjugate + c.imd + c.imd_image + c.noise + c.noise_image + c.soi;

  const AdcOutput out = digitize(m.adc, c.adc_input);
  c.vga_gain = out.vga_gain;
  c.digital = out.samples.scaled(1.0 / out.vga_gain);
  c.quantization = c.digital - c.adc_input;
  Complex g1{};
  for (const Complex& t : m.rx_iq.g1) g1 += t;
  c.input_referred_gain = std::norm(m.lna.gain() * g1);
  return c;
}

ComplexBasebandSignal filter_lagged(const ComplexBasebandSignal& x, const LaggedTaps& h) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  Samples y(x.size());
  for (std::size_t k = 0; k < h.taps.size(); ++k) {
    const Complex tap = h.taps[k];
    if (tap == Complex{}) continue;
    const std::ptrdiff_t shift = h.first_lag + static_cast<std::ptrdiff_t>(k);
    for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(0, shift);
         i < std::min(n, n + shift); ++i) {
      y[static_cast<std::size_t>(i)] += tap * x[static_cast<std::size_t>(i - shift)];
    }
  }
  return {std::move(y), x.sample_rate()};
}

WidelyLinearResponse composite_response(const TransceiverModel& m) {
  const LaggedTaps c = coupling_response(m);
  const Complex k = m.lna.gain();
  const LaggedTaps f = causal(m.pa.memory);
  const LaggedTaps g1_tx = causal(m.tx_iq.g1), g2_tx = causal(m.tx_iq.g2);
  const LaggedTaps g1_rx = causal(m.rx_iq.g1), g2_rx = causal(m.rx_iq.g2);

  const LaggedTaps path = scale(compose(c, f), m.pa.alpha0);  // c * alpha0 f
  const LaggedTaps direct_x = compose(path, g1_tx);
  const LaggedTaps direct_xc = compose(path, g2_tx);
  const LaggedTaps imd = scale(compose(c, f), m.pa.alpha1);

  WidelyLinearResponse r;
  r.h1 = add(scale(compose(g1_rx, direct_x), k), scale(compose(g2_rx, conj(direct_xc)), std::conj(k)));
  r.h2 = add(scale(compose(g1_rx, direct_xc), k), scale(compose(g2_rx, conj(direct_x)), std::conj(k)));
  r.h_imd = scale(compose(g1_rx, imd), k);
  r.h_imd_image = scale(compose(g2_rx, conj(imd)), std::conj(k));
  return r;
}

}  // namespace fdsi
