#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "fdsi/bias.hpp"
#include "fdsi/errors.hpp"
#include "fdsi/ofdm.hpp"
#include "fdsi/units.hpp"
#include "oracles.hpp"

using namespace fdsi;

namespace {

SystemParameters loud() {
  SystemParameters p;
  p.tx_power_dbm = 20.0;
  return p;
}

double magnitude(const std::array<Complex, 2>& v) { return std::hypot(std::abs(v[0]), std::abs(v[1])); }

}  // namespace

TEST_CASE("closed-form bias against sample cross-moments") {
  const auto model = make_flat_model(loud());
  const double r = model.signal_power;
  const std::size_t n = 2000000;
  const auto x = oracle::gaussian(n, 1, r);
  // For circular data the regressor covariance is r I, so the bias is the
  // projection of the distortion onto x and x^* divided by r.
  Complex on_x{}, on_xc{};
  for (const Complex& v : x) {
    const Complex iq = model.g1_tx * v + model.g2_tx * std::conj(v);
    const Complex d = model.h_imd * iq * std::norm(iq);
    on_x += d * std::conj(v);
    on_xc += d * v;
  }
  on_x /= static_cast<double>(n) * r;
  on_xc /= static_cast<double>(n) * r;
  const auto exact = analytic_bias_exact(model, {r, 2.0 * r * r});
  CHECK(std::abs(exact[0] - on_x) / std::abs(on_x) < 0.01);
  CHECK(std::abs(exact[1] - on_xc) / std::abs(on_xc) < 0.02);
  const auto approx = analytic_bias(model, {r, 2.0 * r * r});
  CHECK(std::abs(approx[0] - exact[0]) / std::abs(exact[0]) < 0.01);
}

TEST_CASE("no distortion or no image means no corresponding bias") {
  SystemParameters linear = loud();
  linear.pa_iip3_dbm = INFINITY;
  const auto m = make_flat_model(linear);
  CHECK(m.h_imd == Complex{});
  const auto b = analytic_bias(m, {1.0, 2.0});
  CHECK(b[0] == Complex{});
  CHECK(b[1] == Complex{});

  SystemParameters ideal_mixer = loud();
  ideal_mixer.irr_tx_db = INFINITY;
  const auto mi = make_flat_model(ideal_mixer);
  CHECK(analytic_bias(mi, {1.0, 2.0})[1] == Complex{});
  CHECK(analytic_bias_exact(mi, {1.0, 2.0})[1] == Complex{});
  CHECK(analytic_bias(mi, {1.0, 2.0})[0] != Complex{});
  CHECK_THROWS_AS(analytic_bias(mi, {0.0, 2.0}), DomainError);
}

TEST_CASE("Monte-Carlo mean error matches the analytic bias") {
  const auto rep = monte_carlo_bias(loud(), 2000, 500, RngSeed{7});
  CHECK(rep.n_trials == 500);
  CHECK(rep.agreement < 0.10);
  for (int i = 0; i < 2; ++i) {
    // Same direction: the error points along the predicted bias.
    const double cos = std::real(rep.empirical_mean_error[i] * std::conj(rep.analytic_bias[i])) /
                       (std::abs(rep.empirical_mean_error[i]) * std::abs(rep.analytic_bias[i]));
    CHECK(cos > 0.95);
    // And is resolved well above the trial-to-trial scatter.
    CHECK(std::abs(rep.empirical_mean_error[i]) > 3.0 * rep.standard_error[i]);
  }
}

TEST_CASE("unbiased without the third-order term") {
  SystemParameters p = loud();
  p.pa_iip3_dbm = INFINITY;
  const auto rep = monte_carlo_bias(p, 2000, 500, RngSeed{8});
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(rep.empirical_mean_error[i]) < 3.0 * rep.standard_error[i]);
    CHECK(rep.standard_error[i] > 0.0);
  }
}

TEST_CASE("fourth-order circularity of the test waveforms") {
  auto noncircularity = [](const ComplexBasebandSignal& x) {
    Complex c{};
    double m4 = 0.0;
    for (const Complex& v : x.data()) {
      c += v * v * std::norm(v);
      m4 += std::norm(v) * std::norm(v);
    }
    return std::abs(c) / m4;
  };
  CHECK(noncircularity(awgn(1.0, 400000, 64e6, RngSeed{1})) < 1e-2);
  CHECK(noncircularity(generate_ofdm_samples(OfdmConfig{}, 3200000, 1.0, RngSeed{2})) < 1e-2);
}

TEST_CASE("bias scales linearly with the third-order coefficient") {
  SystemParameters a = loud();
  SystemParameters b = loud();
  b.pa_iip3_dbm = a.pa_iip3_dbm - 10.0 * std::log10(2.0);
  const auto ma = make_flat_model(a);
  const auto mb = make_flat_model(b);
  const SignalMoments mom{ma.signal_power, 2.0 * ma.signal_power * ma.signal_power};
  CHECK(magnitude(analytic_bias(mb, mom)) / magnitude(analytic_bias(ma, mom)) ==
        doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("bias does not depend on the record length") {
  const auto short_rec = monte_carlo_bias(loud(), 1000, 400, RngSeed{9});
  const auto long_rec = monte_carlo_bias(loud(), 4000, 400, RngSeed{10});
  CHECK(short_rec.analytic_bias[0] == long_rec.analytic_bias[0]);
  for (int i = 0; i < 2; ++i) {
    const double se = std::hypot(short_rec.standard_error[i], long_rec.standard_error[i]);
    CHECK(std::abs(short_rec.empirical_mean_error[i] - long_rec.empirical_mean_error[i]) < 3.0 * se);
  }
}

TEST_CASE("OFDM training data gives the same bias") {
  const auto rep = monte_carlo_bias(loud(), 2000, 300, RngSeed{11}, BiasWaveform::kOfdm);
  CHECK(rep.agreement < 0.15);
}

TEST_CASE("bias analysis input checks and JSON lines output") {
  CHECK_THROWS_AS(monte_carlo_bias(loud(), 2000, 99, RngSeed{1}), DomainError);

  const auto rep = monte_carlo_bias(loud(), 500, 100, RngSeed{12});
  const auto path = std::filesystem::temp_directory_path() / "fdsi_bias_test.jsonl";
  std::filesystem::remove(path);
  write_bias_jsonl(path, rep, "first");
  write_bias_jsonl(path, rep, "second");
  std::ifstream in(path);
  std::string line;
  std::vector<nlohmann::json> rows;
  while (std::getline(in, line)) rows.push_back(nlohmann::json::parse(line));
  REQUIRE(rows.size() == 2);
  CHECK(rows[1]["label"] == "second");
  CHECK(rows[0]["n_trials"] == 100);
  CHECK(rows[0]["n_samples"] == 500);
  CHECK(rows[0]["analytic_bias"][1][0].get<double>() == rep.analytic_bias[1].real());
  CHECK(rows[0]["empirical_mean_error"][0][1].get<double>() == rep.empirical_mean_error[0].imag());
  CHECK(rows[0]["agreement"].get<double>() == rep.agreement);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(write_bias_jsonl("/nonexistent/dir/x.jsonl", rep, "x"), IoError);
}
