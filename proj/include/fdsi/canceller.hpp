#pragma once

#include <Eigen/Dense>

#include "fdsi/signal.hpp"

namespace fdsi {

/// Widely-linear FIR pair with K pre-cursor taps: the estimated SI is
/// sum_j h1[j] x(n + K - j) + h2[j] x^*(n + K - j), j = 0..M-1.
struct ChannelEstimate {
  Samples h1;
  Samples h2;
  int k = 0;

  int m() const { return static_cast<int>(h1.size()); }
};

/// Covariance-windowed augmented regression [X X^*] against y. Row r pairs
/// y(first_sample + r) with x(first_sample + r + K - j) in column j.
struct AugmentedDataMatrix {
  Eigen::MatrixXcd x_aug;  ///< rows x 2M
  Eigen::VectorXcd y;
  int m = 0;
  int k = 0;
  std::size_t first_sample = 0;

  Eigen::Index rows() const { return x_aug.rows(); }
  auto left() const { return x_aug.leftCols(m); }
  auto right() const { return x_aug.rightCols(m); }
};

inline constexpr double kMaxConditionNumber = 1e10;

/// Rows for n = M-1 .. N-1-K, i.e. N - M - K + 1 of them. Throws
/// InsufficientDataError when N <= 2M + K, AlignmentError on length
/// mismatch and DomainError unless 0 <= K < M.
AugmentedDataMatrix build_augmented_matrix(const ComplexBasebandSignal& x,
                                           const ComplexBasebandSignal& y, int m, int k);

/// Least squares on the augmented matrix by column-pivoted QR. Throws
/// SingularMatrixError when the condition number exceeds kMaxConditionNumber.
ChannelEstimate estimate_wl_ls(const AugmentedDataMatrix& a);

/// Least squares on the direct block only; h2 is zero.
ChannelEstimate estimate_linear_ls(const AugmentedDataMatrix& a);

/// The regression SI estimate over the full record (x zero outside it).
ComplexBasebandSignal synthesize_si(const ChannelEstimate& est, const ComplexBasebandSignal& x);

/// y - synthesize_si(est, x). Throws AlignmentError on length mismatch.
ComplexBasebandSignal apply_cancellation(const ChannelEstimate& est,
                                         const ComplexBasebandSignal& x,
                                         const ComplexBasebandSignal& y);

/// Power-ratio floor reported for perfect cancellation.
inline constexpr double kAttenuationFloorDb = -300.0;

/// 10 log10(P(after) / P(before)); negative means attenuation. Throws
/// DomainError when `before` has zero power.
double measure_digital_attenuation(const ComplexBasebandSignal& before,
                                   const ComplexBasebandSignal& after);

/// P(soi) / P(residual - soi) in dB.
double measure_sinr(const ComplexBasebandSignal& residual_with_soi,
                    const ComplexBasebandSignal& soi_reference);

/// Lag d maximising |sum_n y(n) x^*(n - d)| over |d| <= max_lag.
int estimate_lag(const ComplexBasebandSignal& x, const ComplexBasebandSignal& y, int max_lag);

}  // namespace fdsi
