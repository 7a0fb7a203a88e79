#include "fdsi/canceller.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "fdsi/errors.hpp"
#include "fdsi/units.hpp"

namespace fdsi {
namespace {

void require_same_length(const ComplexBasebandSignal& a, const ComplexBasebandSignal& b) {
  if (a.size() != b.size()) {
    throw AlignmentError(fmt::format("signal lengths differ ({} vs {})", a.size(), b.size()));
  }
}

Eigen::VectorXcd solve(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
  const Eigen::Index n = a.cols();
  const Eigen::MatrixXcd r = qr.matrixR().topLeftCorner(n, n).triangularView<Eigen::Upper>();
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(r).singularValues();
  const double cond = sv(n - 1) > 0.0 ? sv(0) / sv(n - 1) : std::numeric_limits<double>::infinity();
  if (!(cond <= kMaxConditionNumber)) {
    throw SingularMatrixError(
        fmt::format("regression matrix is rank deficient (condition number {:.3g})", cond), cond);
  }
  return qr.solve(y);
}

}  // namespace

AugmentedDataMatrix build_augmented_matrix(const ComplexBasebandSignal& x,
                                           const ComplexBasebandSignal& y, int m, int k) {
  require_same_length(x, y);
  if (m < 1 || k < 0 || k >= m) {
    throw DomainError(fmt::format("need 0 <= K < M, got M = {}, K = {}", m, k));
  }
  const auto n = static_cast<long>(x.size());
  if (n <= 2L * m + k) {
    throw InsufficientDataError(
        fmt::format("{} samples cannot determine {} coefficients with K = {}", n, 2 * m, k));
  }
  const long rows = n - m - k + 1;
  AugmentedDataMatrix a;
  a.m = m;
  a.k = k;
  a.first_sample = static_cast<std::size_t>(m - 1);
  a.x_aug.resize(rows, 2 * m);
  a.y.resize(rows);
  for (long r = 0; r < rows; ++r) {
    const long sample = m - 1 + r;
    a.y(r) = y[static_cast<std::size_t>(sample)];
    for (int j = 0; j < m; ++j) {
      const Complex v = x[static_cast<std::size_t>(sample + k - j)];
      a.x_aug(r, j) = v;
      a.x_aug(r, m + j) = std::conj(v);
    }
  }
  return a;
}

ChannelEstimate estimate_wl_ls(const AugmentedDataMatrix& a) {
  const Eigen::VectorXcd h = solve(a.x_aug, a.y);
  ChannelEstimate est{Samples(h.data(), h.data() + a.m), Samples(h.data() + a.m, h.data() + 2 * a.m),
                      a.k};
  return est;
}

ChannelEstimate estimate_linear_ls(const AugmentedDataMatrix& a) {
  const Eigen::VectorXcd h = solve(a.left(), a.y);
  return {Samples(h.data(), h.data() + a.m), Samples(static_cast<std::size_t>(a.m)), a.k};
}

ComplexBasebandSignal synthesize_si(const ChannelEstimate& est, const ComplexBasebandSignal& x) {
  if (est.h1.size() != est.h2.size() || est.h1.empty() || est.k < 0 || est.k >= est.m()) {
    throw DomainError("malformed channel estimate");
  }
  const auto n = static_cast<long>(x.size());
  Samples s(x.size());
  for (long i = 0; i < n; ++i) {
    Complex acc{};
    for (int j = 0; j < est.m(); ++j) {
      const long src = i + est.k - j;
      if (src < 0 || src >= n) continue;
      const Complex v = x[static_cast<std::size_t>(src)];
      acc += est.h1[static_cast<std::size_t>(j)] * v + est.h2[static_cast<std::size_t>(j)] * std::conj(v);
    }
    s[static_cast<std::size_t>(i)] = acc;
  }
  return {std::move(s), x.sample_rate()};
}

ComplexBasebandSignal apply_cancellation(const ChannelEstimate& est,
                                         const ComplexBasebandSignal& x,
                                         const ComplexBasebandSignal& y) {
  require_same_length(x, y);
  return y - synthesize_si(est, x);
}

double measure_digital_attenuation(const ComplexBasebandSignal& before,
                                   const ComplexBasebandSignal& after) {
  const double p_before = measure_power(before);
  if (!(p_before > 0.0)) throw DomainError("SI power before cancellation is zero");
  return std::max(kAttenuationFloorDb, to_db(measure_power(after) / p_before));
}

double measure_sinr(const ComplexBasebandSignal& residual_with_soi,
                    const ComplexBasebandSignal& soi_reference) {
  return to_db(measure_power(soi_reference) /
               measure_power(residual_with_soi - soi_reference));
}

int estimate_lag(const ComplexBasebandSignal& x, const ComplexBasebandSignal& y, int max_lag) {
  require_same_length(x, y);
  if (max_lag < 0) throw DomainError("maximum lag must be non-negative");
  const auto n = static_cast<long>(x.size());
  int best = 0;
  double best_mag = -1.0;
  for (int d = -max_lag; d <= max_lag; ++d) {
    Complex acc{};
    for (long i = std::max(0L, static_cast<long>(d)); i < std::min(n, n + d); ++i) {
      acc += y[static_cast<std::size_t>(i)] * std::conj(x[static_cast<std::size_t>(i - d)]);
    }
    if (std::abs(acc) > best_mag) {
      best_mag = std::abs(acc);
      best = d;
    }
  }
  return best;
}

}  // namespace fdsi
