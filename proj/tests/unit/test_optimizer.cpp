#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gedsense/detector.hpp"
#include "gedsense/errors.hpp"
#include "gedsense/optimizer.hpp"
#include "gedsense/presets.hpp"
#include "gedsense/simulator.hpp"
#include "oracles.hpp"

using namespace gedsense;

namespace {

ThroughputConfig base_config() { return presets::tv_band_throughput(); }

}  // namespace

TEST_CASE("default configuration") {
  const auto cfg = base_config();
  CHECK(cfg.frame_duration == 2.0);
  CHECK(cfg.prior_h0 == 0.8);
  CHECK(cfg.snr_secondary == 100.0);
  CHECK(cfg.snr_target == doctest::Approx(0.01));
  CHECK(cfg.primary_snr() == cfg.snr_target);
  CHECK(cfg.target_pd == 0.9);
}

TEST_CASE("coefficient examples") {
  const auto c = coefficients(base_config());
  CHECK(c.psi == doctest::Approx(2.6633).epsilon(2e-5));
  CHECK(c.psi == doctest::Approx(0.4 * std::log2(101.0)).epsilon(1e-12));
  CHECK(c.rate_h1 == doctest::Approx(6.6440).epsilon(2e-5));
  CHECK(c.psi_tilde == doctest::Approx(2.7962).epsilon(2e-5));
  CHECK(c.psi_tilde == doctest::Approx(c.psi + 0.2 * c.rate_h1 * 0.1).epsilon(1e-12));

  auto cfg = base_config();
  cfg.target_pd = 0.5;
  for (double snr : {0.0, 0.01, 1.0}) {
    cfg.snr_target = snr;
    CHECK(coefficients(cfg).b == 0.0);
  }
}

TEST_CASE("coefficient identities") {
  std::mt19937_64 eng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    ThroughputConfig cfg;
    cfg.prior_h0 = 0.05 + 0.9 * u(eng);
    cfg.prior_h1 = 1.0 - cfg.prior_h0;
    cfg.snr_secondary = 1.0 + 1000.0 * u(eng);
    cfg.snr_target = 0.001 + 0.5 * u(eng);
    cfg.snr_primary_at_cr = 0.001 + 2.0 * u(eng);
    cfg.target_pd = 0.05 + 0.9 * u(eng);
    const double bk = 1e6 + 9e6 * u(eng);
    const double bi = 1e6 + 9e6 * u(eng);
    cfg.band = {bk + bi, bk, bi};
    const double beta = bi / bk;
    for (auto mode : {DetectorMode::ged, DetectorMode::ced}) {
      const auto c = coefficients(cfg, mode);
      const double pre = mode == DetectorMode::ged ? beta / (beta + 1.0) : 1.0;
      CHECK(c.a == doctest::Approx(std::sqrt(pre * bk) * cfg.snr_target).epsilon(1e-12));
      CHECK(c.b == doctest::Approx(std::sqrt(2.0) * (1.0 + cfg.snr_target) *
                                   oracle::erfc_inv_bisect(2.0 * cfg.target_pd))
                       .epsilon(1e-10));
      CHECK(c.rate_h0 == doctest::Approx(std::log2(1.0 + cfg.snr_secondary)).epsilon(1e-12));
      CHECK(c.rate_h1 ==
            doctest::Approx(std::log2(1.0 + cfg.snr_secondary / (1.0 + *cfg.snr_primary_at_cr))).epsilon(1e-12));
      CHECK(c.psi == doctest::Approx(0.5 * cfg.prior_h0 * c.rate_h0).epsilon(1e-12));
      CHECK(c.psi_tilde ==
            doctest::Approx(c.psi + cfg.prior_h1 * c.rate_h1 * (1.0 - cfg.target_pd)).epsilon(1e-12));
    }
  }
}

TEST_CASE("config validation names the field") {
  auto cfg = base_config();
  cfg.prior_h1 = 0.3;
  try {
    cfg.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "throughput.prior_h1");
  }
  cfg = base_config();
  cfg.target_pd = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = base_config();
  cfg.frame_duration = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = base_config();
  cfg.band = {12e6, 6e6, 5e6};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("threshold schedule examples") {
  ObjectiveCoefficients c;
  c.a = 0.0;
  c.b = -1.7;
  CHECK(threshold_schedule(c, 0.3) == -1.7);

  c = coefficients(base_config());
  for (double t : {1e-4, 0.01, 0.05, 0.3}) {
    CHECK(threshold_schedule(c, 4.0 * t) - c.b == doctest::Approx(2.0 * (threshold_schedule(c, t) - c.b)));
  }
  CHECK_THROWS_AS(threshold_schedule(c, 0.0), DomainError);
}

TEST_CASE("scheduled threshold pins Pd to the target") {
  const auto cfg = base_config();
  const auto c = coefficients(cfg);
  const double beta = cfg.band.white_hz / cfg.band.target_hz;
  auto pd_at = [&](double t) {
    const auto n = static_cast<std::size_t>(std::floor(t * cfg.band.target_hz));
    return pd_theory(threshold_schedule(c, t), H1Theory::ged(cfg.snr_target, n, beta));
  };
  CHECK(std::fabs(pd_at(0.05) - cfg.target_pd) <= 1e-3);
  for (int i = 1; i <= 100; ++i) {
    const double t = cfg.frame_duration * i / 100.0;
    CHECK(std::fabs(pd_at(t) - cfg.target_pd) <= 1e-3);
  }
}

TEST_CASE("objective examples") {
  const auto cfg = base_config();
  const auto c = coefficients(cfg);
  CHECK(objective(c, cfg.frame_duration, cfg.frame_duration) == 0.0);
  CHECK_THROWS_AS(objective(c, 0.0, 2.0), DomainError);
  CHECK_THROWS_AS(objective(c, 2.1, 2.0), DomainError);

  auto big = c;
  big.a = 1e9;
  for (double t : {0.01, 0.5, 1.5}) {
    const double duty = (2.0 - t) / 2.0;
    const double ceiling = duty * (cfg.prior_h0 * c.rate_h0 + cfg.prior_h1 * c.rate_h1 * (1.0 - cfg.target_pd));
    CHECK(objective(big, t, 2.0) == doctest::Approx(duty * (c.psi + c.psi_tilde)).epsilon(1e-12));
    CHECK(objective(big, t, 2.0) == doctest::Approx(ceiling).epsilon(1e-12));
  }

  const auto ced = coefficients(cfg, DetectorMode::ced);
  CHECK(objective(ced, 0.0285, 2.0) > objective(ced, 0.0506, 2.0));
}

TEST_CASE("objective equals the unconstrained throughput with Pd pinned") {
  std::mt19937_64 eng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    ThroughputConfig cfg = base_config();
    cfg.prior_h0 = 0.1 + 0.8 * u(eng);
    cfg.prior_h1 = 1.0 - cfg.prior_h0;
    cfg.target_pd = 0.5 + 0.49 * u(eng);
    cfg.frame_duration = 0.1 + 2.0 * u(eng);
    const auto c = coefficients(cfg);
    for (int i = 0; i < 50; ++i) {
      const double t = cfg.frame_duration * (0.001 + 0.999 * u(eng));
      const double lam = threshold_schedule(c, t);
      const double duty = (cfg.frame_duration - t) / cfg.frame_duration;
      const double direct = duty * (c.rate_h0 * cfg.prior_h0 * (1.0 - pf_theory(lam)) +
                                    c.rate_h1 * cfg.prior_h1 * (1.0 - cfg.target_pd));
      CHECK(objective(c, t, cfg.frame_duration) == doctest::Approx(direct).epsilon(1e-10));
    }
  }
}

TEST_CASE("objective boundary behavior") {
  const auto cfg = base_config();
  const auto c = coefficients(cfg);
  const double limit = c.psi * std::erf(c.b / std::numbers::sqrt2) + c.psi_tilde;
  double prev_gap = 1e300;
  for (double t = 1e-2; t > 1e-17; t /= 10.0) {
    const double gap = std::fabs(objective(c, t, cfg.frame_duration) - limit);
    CHECK(gap <= prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-6);
}

TEST_CASE("local maxima counter") {
  std::vector<ScanPoint> one{{0, 0}, {1, 1}, {2, 2}, {3, 1}, {4, 0}};
  CHECK(count_local_maxima(one, 1e-12) == 1);
  std::vector<ScanPoint> two{{0, 0}, {1, 2}, {2, 1}, {3, 3}, {4, 0}};
  CHECK(count_local_maxima(two, 1e-12) == 2);
  CHECK(count_local_maxima(two, 1.5) == 1);
  std::vector<ScanPoint> flat{{0, 1}, {1, 1}, {2, 1}};
  CHECK(count_local_maxima(flat, 1e-12) == 0);
}

TEST_CASE("coarse scan is unimodal on the reference configurations") {
  for (double tf : {0.1, 0.3, 0.6, 1.2, 2.0}) {
    for (auto mode : {DetectorMode::ged, DetectorMode::ced}) {
      auto cfg = base_config();
      cfg.frame_duration = tf;
      const auto c = coefficients(cfg, mode);
      const auto scan = scan_objective(c, tf, min_sensing_time(cfg), tf, 64);
      CHECK(scan.size() == 64);
      CHECK(scan.back().sensing_time == tf);
      CHECK(count_local_maxima(scan, 1e-12) == 1);
    }
  }
}

TEST_CASE("optimal sensing time examples") {
  const auto ged = optimize_sensing_time(base_config());
  CHECK(std::fabs(ged.optimal_sensing_time - 0.0506) <= 1e-3);
  CHECK(ged.mode == DetectorMode::ged);
  CHECK(ged.iterations > 0);
  const auto c = coefficients(base_config());
  CHECK(ged.optimal_threshold == doctest::Approx(threshold_schedule(c, ged.optimal_sensing_time)));
  CHECK(ged.max_throughput == doctest::Approx(objective(c, ged.optimal_sensing_time, 2.0)));

  const auto ced = optimize_sensing_time(base_config(), {}, DetectorMode::ced);
  CHECK(std::fabs(ced.optimal_sensing_time - 0.0285) <= 1e-3);
  CHECK(ged.optimal_sensing_time >= ced.optimal_sensing_time);
}

TEST_CASE("golden-section argmax matches a 0.1 ms grid scan") {
  for (double tf : {0.1, 0.3, 0.6, 1.2, 2.0}) {
    for (auto mode : {DetectorMode::ged, DetectorMode::ced}) {
      auto cfg = base_config();
      cfg.frame_duration = tf;
      const auto c = coefficients(cfg, mode);
      const auto res = optimize_sensing_time(cfg, {}, mode);
      const auto grid = oracle::grid_argmax([&](double t) { return objective(c, t, tf); }, 1e-4, tf, 1e-4);
      INFO("Tf = " << tf);
      CHECK(std::fabs(res.optimal_sensing_time - grid.argmax) <= 1e-4);
      CHECK(res.max_throughput >= grid.max - 1e-12);
    }
  }
}

TEST_CASE("frame sweep is monotone") {
  double prev = 0.0;
  for (double tf : {0.1, 0.3, 0.6, 1.2, 2.0}) {
    auto cfg = base_config();
    cfg.frame_duration = tf;
    const double t = optimize_sensing_time(cfg).optimal_sensing_time;
    CHECK(t >= prev);
    CHECK(t > 0.0);
    CHECK(t <= tf);
    prev = t;
  }
}

TEST_CASE("wider white band never lengthens sensing") {
  for (double tf : {0.2, 1.2, 2.0}) {
    double prev = 1e300;
    for (double bi : {6e6, 8e6, 10e6}) {
      auto cfg = base_config();
      cfg.frame_duration = tf;
      cfg.band = {6e6 + bi, 6e6, bi};
      const double t = optimize_sensing_time(cfg).optimal_sensing_time;
      CHECK(t <= prev);
      prev = t;
    }
  }
}

TEST_CASE("known-noise optimum bounds the GED optimum") {
  for (double bi : {1e6, 4.28e6, 6e6, 20e6}) {
    for (double tf : {0.1, 1.0, 2.0}) {
      auto cfg = base_config();
      cfg.frame_duration = tf;
      cfg.band = {6e6 + bi, 6e6, bi};
      CHECK(optimize_sensing_time(cfg).optimal_sensing_time >=
            optimize_sensing_time(cfg, {}, DetectorMode::ced).optimal_sensing_time);
    }
  }
}

TEST_CASE("frame too short for one sample") {
  auto cfg = base_config();
  cfg.frame_duration = 1e-7;
  CHECK_THROWS_AS(optimize_sensing_time(cfg), ConfigError);
}

TEST_CASE("run_frame input errors") {
  const auto cfg = base_config();
  CHECK_THROWS_AS(run_frame(cfg, SampleBuffer{{}, 12e6}), InsufficientSamplesError);
  CHECK_THROWS_AS(run_frame(cfg, SampleBuffer{std::vector<Complex>(1000, 1.0), 12e6}), InsufficientSamplesError);
  CHECK_THROWS_AS(run_frame(cfg, SampleBuffer{std::vector<Complex>(1000, 1.0), 10e6}), DomainError);
}

TEST_CASE("run_frame decisions follow the detector theory") {
  const auto cfg = base_config();
  const auto opt = optimize_sensing_time(cfg);

  Scenario sc;
  sc.band = cfg.band;
  sc.sensing_time = opt.optimal_sensing_time;
  sc.signal.kind = SignalKind::freq_domain_gaussianized;
  sc.channel.signal_power = cfg.snr_target * sc.noise.nominal_variance;
  const TrialGenerator gen(sc);
  const std::size_t n = 400;

  std::size_t white = 0, non_white = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto e0 = make_engine(77, 0, i);
    const auto f0 = run_frame(cfg, gen.generate(Hypothesis::h0, e0).buffer);
    CHECK(f0.plan.n_samples == gen.plan().n_samples);
    CHECK(f0.decision.threshold == opt.optimal_threshold);
    if (f0.decision.label == Label::white) ++white;
    auto e1 = make_engine(77, 1, i);
    if (run_frame(cfg, gen.generate(Hypothesis::h1, e1).buffer).decision.label == Label::non_white) ++non_white;
  }
  const double p_white = 1.0 - pf_theory(opt.optimal_threshold);
  const double sd_white = std::sqrt(p_white * (1.0 - p_white) / n);
  CHECK(std::fabs(double(white) / n - p_white) <= 3.0 * sd_white);
  const double sd_pd = std::sqrt(cfg.target_pd * (1.0 - cfg.target_pd) / n);
  CHECK(double(non_white) / n >= cfg.target_pd - 3.0 * sd_pd);
}
