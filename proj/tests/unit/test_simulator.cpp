#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "gedsense/detector.hpp"
#include "gedsense/errors.hpp"
#include "gedsense/presets.hpp"
#include "gedsense/report_io.hpp"
#include "gedsense/simulator.hpp"

using namespace gedsense;

namespace {

// 12 MHz band split 6/6 MHz, -20 dB, theory-exact generator.
Scenario small_scenario(double sensing_time = 1e-3) {
  Scenario sc;
  sc.band = {12e6, 6e6, 6e6};
  sc.sensing_time = sensing_time;
  sc.signal.kind = SignalKind::freq_domain_gaussianized;
  sc.channel.signal_power = 1.0;
  sc.noise = {100.0, 0.0};
  return sc;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

}  // namespace

TEST_CASE("snr definition") {
  CHECK(presets::qpsk_sensing().snr() == doctest::Approx(0.01));
  CHECK(10.0 * std::log10(small_scenario().snr()) == doctest::Approx(-20.0));
}

TEST_CASE("noise model") {
  NoiseModel nm{100.0, 0.0};
  auto eng = make_engine(1, 0, 0);
  CHECK(nm.epsilon() == 1.0);
  CHECK(nm.draw_variance(eng) == 100.0);

  nm.uncertainty_db = 2.0;
  const double eps = std::pow(10.0, 0.2);
  CHECK(nm.epsilon() == doctest::Approx(eps));
  const int n = 20000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = nm.draw_variance(eng);
    CHECK(v >= 100.0 / eps);
    CHECK(v <= 100.0 * eps);
    sum += v;
  }
  const double width = 100.0 * (eps - 1.0 / eps);
  CHECK(std::fabs(sum / n - 0.5 * 100.0 * (eps + 1.0 / eps)) <= 3.0 * width / std::sqrt(12.0 * n));

  CHECK_THROWS_AS((NoiseModel{0.0, 0.0}.validate()), ConfigError);
  CHECK_THROWS_AS((NoiseModel{1.0, -1.0}.validate()), ConfigError);
}

TEST_CASE("trial shape and the H0 signal is absent") {
  const auto sc = small_scenario();
  const auto t0 = generate_trial(sc, Hypothesis::h0, 5);
  CHECK(t0.buffer.samples.size() == 12000);
  CHECK(t0.buffer.sample_rate == 12e6);
  CHECK(t0.gain == Complex{1.0, 0.0});

  auto quiet = sc;
  quiet.channel.signal_power = 0.0;
  const auto a = generate_trial(quiet, Hypothesis::h0, 9);
  const auto b = generate_trial(quiet, Hypothesis::h1, 9);
  CHECK(a.buffer.samples.size() == b.buffer.samples.size());
}

TEST_CASE("noise calibration") {
  auto sc = small_scenario(10e-3);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto t = generate_trial(sc, Hypothesis::h0, seed);
    double p = 0.0;
    for (const auto& v : t.buffer.samples) p += std::norm(v);
    const double n = static_cast<double>(t.buffer.samples.size());
    p /= n;
    CHECK(std::fabs(p - 100.0) <= 3.0 * 100.0 / std::sqrt(n));
  }
}

TEST_CASE("signal occupies the target band only") {
  auto sc = small_scenario(2e-3);
  for (auto kind : {SignalKind::freq_domain_gaussianized, SignalKind::qpsk_time_domain}) {
    sc.signal.kind = kind;
    sc.channel.signal_power = 1e4;  // 20 dB above the noise
    const TrialGenerator gen(sc);
    auto eng = make_engine(3, 1, 0);
    const auto t = gen.generate(Hypothesis::h1, eng);
    const auto e = measure_energies(t.buffer.samples, gen.plan());
    const double nw = static_cast<double>(gen.plan().n_white);
    CHECK(std::fabs(e.white_avg - 100.0) <= 4.0 * 100.0 / std::sqrt(nw));
    CHECK(e.target_avg == doctest::Approx(1e4 + 100.0).epsilon(0.05));
  }
}

TEST_CASE("expected energy ratio under H1 is 1 + snr") {
  const auto sc = small_scenario(1e-3);
  const TrialGenerator gen(sc);
  const std::size_t trials = 400;
  double target = 0.0, white = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    auto eng = make_engine(21, 1, i);
    const auto e = measure_energies(gen.generate(Hypothesis::h1, eng).buffer.samples, gen.plan());
    target += e.target_avg;
    white += e.white_avg;
  }
  const double bins = static_cast<double>(trials * gen.plan().n_target);
  CHECK(std::fabs(target / white - 1.01) <= 4.0 * std::sqrt(2.0 / bins));
}

TEST_CASE("rayleigh gain calibration") {
  auto sc = small_scenario(0.1e-3);
  sc.channel.kind = ChannelKind::rayleigh_block;
  const TrialGenerator gen(sc);
  const std::size_t n = 5000;
  const auto st = simulate_statistics(gen, Hypothesis::h1, n, 8);
  CHECK(std::fabs(mean(st.gain_power) - 1.0) <= 3.0 / std::sqrt(double(n)));
  const auto h0 = simulate_statistics(gen, Hypothesis::h0, 10, 8);
  for (double g : h0.gain_power) CHECK(g == 1.0);
}

TEST_CASE("reports are reproducible and independent of the job count") {
  const auto sc = small_scenario(1e-3);
  const double thresholds[] = {0.0, 1.2816, 2.0};
  const MonteCarloOptions one{300, 42, 1};
  const MonteCarloOptions many{300, 42, 3};
  const auto a = roc(sc, thresholds, one);
  const auto b = roc(sc, thresholds, one);
  const auto c = roc(sc, thresholds, many);
  CHECK(to_json(a) == to_json(b));
  CHECK(to_json(a) == to_json(c));
  const auto d = roc(sc, thresholds, MonteCarloOptions{300, 43, 1});
  CHECK(to_json(a) != to_json(d));

  const auto s1 = simulate_statistics(TrialGenerator(sc), Hypothesis::h1, 50, 9, 1);
  const auto s4 = simulate_statistics(TrialGenerator(sc), Hypothesis::h1, 50, 9, 4);
  CHECK(s1.ged == s4.ged);
  CHECK(s1.ced == s4.ced);
}

TEST_CASE("report invariants") {
  const auto sc = small_scenario(1e-3);
  const auto r = monte_carlo(sc, 1.2816, {500, 3, 2});
  CHECK(r.trials == 500);
  CHECK(r.seed == 3);
  CHECK(r.false_alarms <= r.trials);
  CHECK(r.detections <= r.trials);
  CHECK(r.empirical_pf == doctest::Approx(double(r.false_alarms) / r.trials));
  CHECK(r.pf_stderr == doctest::Approx(std::sqrt(r.empirical_pf * (1 - r.empirical_pf) / r.trials)));
  CHECK(r.pd_stderr == doctest::Approx(std::sqrt(r.empirical_pd * (1 - r.empirical_pd) / r.trials)));
  CHECK(r.theory_pf == doctest::Approx(pf_theory(1.2816)));
  const auto p = sc.plan();
  CHECK(r.theory_pd == doctest::Approx(pd_theory(1.2816, H1Theory::ged(0.01, p.n_target, p.beta))));
}

TEST_CASE("too few trials") {
  const auto sc = small_scenario();
  CHECK_THROWS_AS(monte_carlo(sc, 1.0, {0, 1, 1}), DomainError);
  CHECK_THROWS_AS(monte_carlo(sc, 1.0, {99, 1, 1}), DomainError);
  CHECK_THROWS_AS(binomial_stderr(0.5, 0), DomainError);
}

TEST_CASE("noise uncertainty leaves the GED false-alarm rate alone") {
  auto sc = small_scenario(1e-3);
  const double lam = threshold_for_pf(0.1);
  const MonteCarloOptions opt{2000, 5, 1};
  const auto nominal = monte_carlo(sc, lam, opt);
  sc.noise.uncertainty_db = 2.0;
  const auto uncertain = monte_carlo(sc, lam, opt);
  const double sigma = std::hypot(binomial_stderr(0.1, opt.trials), binomial_stderr(0.1, opt.trials));
  CHECK(std::fabs(uncertain.empirical_pf - nominal.empirical_pf) <= 3.0 * sigma);
  CHECK(std::fabs(uncertain.empirical_pf - 0.1) <= 3.0 * binomial_stderr(0.1, opt.trials));
  // The known-noise detector fed the nominal variance cannot hold its Pf.
  CHECK(std::fabs(uncertain.ced_empirical_pf - 0.1) > 3.0 * binomial_stderr(0.1, opt.trials));
  CHECK(std::fabs(nominal.ced_empirical_pf - 0.1) <= 3.0 * binomial_stderr(0.1, opt.trials));
}

TEST_CASE("longer sensing raises the detection rate") {
  const double lam = threshold_for_pf(0.1);
  const MonteCarloOptions opt{1000, 6, 1};
  const auto shorter = monte_carlo(small_scenario(5e-3), lam, opt);
  const auto longer = monte_carlo(small_scenario(10e-3), lam, opt);
  CHECK(longer.empirical_pd - shorter.empirical_pd > 3.0 * std::hypot(longer.pd_stderr, shorter.pd_stderr));
}

TEST_CASE("theory pd averages over fading and uncertainty") {
  auto sc = small_scenario(20e-3);
  const double lam = 1.2816;
  const double awgn = theory_pd(sc, lam);
  sc.channel.kind = ChannelKind::rayleigh_block;
  const double fading = theory_pd(sc, lam);
  CHECK(fading < awgn);
  // Independent check: Simpson integration of Pd(snr g) e^{-g} on [0, 40].
  const auto p = sc.plan();
  const int m = 20000;
  const double h = 40.0 / m;
  double acc = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double g = i * h;
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * pd_theory(lam, H1Theory::ged(0.01 * g, p.n_target, p.beta)) * std::exp(-g);
  }
  CHECK(fading == doctest::Approx(acc * h / 3.0).epsilon(1e-3));
}

TEST_CASE("channel ordering") {
  const double lam = threshold_for_pf(0.1);
  const MonteCarloOptions opt{600, 12, 1};
  auto sc = small_scenario(20e-3);
  const auto awgn = monte_carlo(sc, lam, opt);
  sc.channel.kind = ChannelKind::rayleigh_block;
  const auto fading = monte_carlo(sc, lam, opt);
  CHECK(rayleigh_vs_awgn_ordering(awgn, fading));
  CHECK_FALSE(rayleigh_vs_awgn_ordering(awgn, awgn));

  auto silent = small_scenario(20e-3);
  silent.channel.signal_power = 0.0;
  const auto s_awgn = monte_carlo(silent, lam, opt);
  silent.channel.kind = ChannelKind::rayleigh_block;
  const auto s_fading = monte_carlo(silent, lam, opt);
  CHECK_FALSE(rayleigh_vs_awgn_ordering(s_awgn, s_fading));
}

TEST_CASE("root-raised-cosine pulse") {
  const double ts = 1.0;
  for (double a : {0.2, 0.5, 1.0}) {
    // Continuity across the removable singularities.
    for (double t0 : {0.0, ts / (4.0 * a)}) {
      CHECK(rrc_pulse(t0, ts, a) == doctest::Approx(rrc_pulse(t0 + 1e-6, ts, a)).epsilon(1e-4));
    }
    // Self-convolution is a Nyquist pulse: zero at nonzero multiples of Ts.
    const double dt = 1e-3;
    auto corr = [&](int k) {
      double s = 0.0;
      for (double t = -40.0; t <= 40.0; t += dt) s += rrc_pulse(t, ts, a) * rrc_pulse(t - k * ts, ts, a);
      return s * dt;
    };
    const double c0 = corr(0);
    CHECK(c0 == doctest::Approx(1.0).epsilon(1e-2));
    for (int k = 1; k <= 3; ++k) CHECK(std::fabs(corr(k)) < 2e-3 * c0);
  }
}

TEST_CASE("srrcf scenario checks") {
  auto sc = presets::rolloff_sensing();
  CHECK_NOTHROW(sc.validate());
  const auto p = sc.plan();
  CHECK(p.beta == doctest::Approx(0.2).epsilon(1e-3));
  const double rho = signal_spectrum(sc).white_to_target;
  CHECK(rho > 0.0);
  CHECK(rho < 0.5);
  CHECK(rho * sc.snr() <= 0.01);
  CHECK(effective_snr(sc, sc.snr()) < sc.snr());
  CHECK(effective_snr(small_scenario(), 0.01) == doctest::Approx(0.01));

  auto bad = sc;
  bad.layout = BandLayout::lower_edge;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = sc;
  bad.band = {8e6, 6e6, 2e6};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = sc;
  bad.channel.signal_power = 100.0;  // 0 dB: leakage far above the limit
  try {
    bad.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "signal.kind");
  }
}

TEST_CASE("srrcf trials have the configured power and leakage") {
  auto sc = presets::rolloff_sensing();
  sc.sensing_time = 0.2e-3;
  sc.channel.signal_power = 4.0;  // -14 dB keeps the leakage under the limit
  const TrialGenerator gen(sc);
  const double rho = signal_spectrum(sc).white_to_target;
  double target = 0.0, white = 0.0;
  const int trials = 300;
  for (int i = 0; i < trials; ++i) {
    auto eng = make_engine(4, 1, i);
    const auto e = measure_energies(gen.generate(Hypothesis::h1, eng).buffer.samples, gen.plan());
    target += e.target_avg;
    white += e.white_avg;
  }
  const double nt = static_cast<double>(trials) * gen.plan().n_target;
  const double nw = static_cast<double>(trials) * gen.plan().n_white;
  CHECK(std::fabs(target / trials - 104.0) <= 4.0 * 104.0 / std::sqrt(nt));
  CHECK(std::fabs(white / trials - 100.0 * (1.0 + rho * 0.04)) <= 4.0 * 100.0 / std::sqrt(nw));
}
