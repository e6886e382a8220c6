#include "gedsense/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "gedsense/errors.hpp"

namespace gedsense {

namespace {

constexpr double kLeakageLimit = 0.01;  // leakage power / noise power, i.e. -20 dB

std::uint64_t stream_id(Hypothesis h) { return h == Hypothesis::h0 ? 0 : 1; }

// Signed frequency of 0-based DFT bin m for an n-point transform at rate fs.
double bin_frequency(std::size_t m, std::size_t n, double fs) {
  const auto signed_m = 2 * m < n ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
  return signed_m * fs / static_cast<double>(n);
}

// |P(f)|^2 of the truncated pulse, by Simpson quadrature of the (even) pulse.
class PulseSpectrum {
 public:
  PulseSpectrum(double symbol_period, double rolloff) {
    constexpr int intervals = 64 * 2 * kRrcSpanSymbols;
    const double half = kRrcSpanSymbols * symbol_period;
    step_ = 2.0 * half / intervals;
    for (int i = 0; i <= intervals; ++i) {
      const double t = -half + i * step_;
      const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      times_.push_back(t);
      weighted_.push_back(w * rrc_pulse(t, symbol_period, rolloff));
    }
  }

  double power(double f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < times_.size(); ++i) {
      acc += weighted_[i] * std::cos(2.0 * std::numbers::pi * f * times_[i]);
    }
    const double amplitude = acc * step_ / 3.0;
    return amplitude * amplitude;
  }

 private:
  double step_ = 0.0;
  std::vector<double> times_;
  std::vector<double> weighted_;
};

// Mean expected per-bin energy over a set of bin ranges, for unit-power symbols.
double mean_bin_level(const PulseSpectrum& spec, const std::vector<BinRange>& ranges, std::size_t n, double fs,
                      double symbol_period) {
  std::size_t count = 0;
  for (const auto& r : ranges) count += r.size();
  const std::size_t stride = std::max<std::size_t>(1, count / 4096);
  double sum = 0.0;
  std::size_t used = 0;
  std::size_t k = 0;
  for (const auto& r : ranges) {
    for (std::size_t m = r.begin; m < r.end; ++m, ++k) {
      if (k % stride != 0) continue;
      sum += spec.power(bin_frequency(m, n, fs));
      ++used;
    }
  }
  return fs / symbol_period * sum / static_cast<double>(used);
}

struct SrrcfLevels {
  double target = 0.0;
  double white = 0.0;
};

SrrcfLevels srrcf_levels(const Scenario& sc, const SubbandPlan& plan) {
  const PulseSpectrum spec(sc.signal.symbol_period, sc.signal.rolloff);
  const double fs = sc.band.total_hz;
  return {mean_bin_level(spec, plan.target_ranges, plan.n_samples, fs, sc.signal.symbol_period),
          mean_bin_level(spec, plan.white_ranges, plan.n_samples, fs, sc.signal.symbol_period)};
}

template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> workers;
  workers.reserve(jobs);
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

std::complex<double> qpsk_symbol(std::uint64_t two_bits) {
  constexpr double s = std::numbers::sqrt2 / 2.0;
  return {(two_bits & 1u) ? s : -s, (two_bits & 2u) ? s : -s};
}

// Midpoint-rule average of g(|h|^2) over |h|^2 ~ Exp(1).
template <class Fn>
double average_over_rayleigh(Fn&& g) {
  constexpr int points = 1024;
  double acc = 0.0;
  for (int i = 0; i < points; ++i) {
    const double u = (i + 0.5) / points;
    acc += g(-std::log1p(-u));
  }
  return acc / points;
}

}  // namespace

void NoiseModel::validate() const {
  if (!(nominal_variance > 0.0) || !std::isfinite(nominal_variance)) {
    throw ConfigError("noise.nominal_variance_mw", "must be positive and finite");
  }
  if (!(uncertainty_db >= 0.0) || !std::isfinite(uncertainty_db)) {
    throw ConfigError("noise.uncertainty_db", "must be finite and >= 0");
  }
}

double NoiseModel::epsilon() const { return std::pow(10.0, uncertainty_db / 10.0); }

double NoiseModel::draw_variance(Engine& eng) const {
  if (uncertainty_db == 0.0) return nominal_variance;
  const double eps = epsilon();
  const double lo = nominal_variance / eps;
  const double hi = nominal_variance * eps;
  return lo + (hi - lo) * (1.0 - uniform_open0(eng));
}

void ChannelModel::validate() const {
  if (!(signal_power >= 0.0) || !std::isfinite(signal_power)) {
    throw ConfigError("channel.signal_power_mw", "must be finite and >= 0");
  }
}

std::complex<double> ChannelModel::draw_gain(Engine& eng) const {
  if (kind == ChannelKind::awgn) return {1.0, 0.0};
  return complex_gaussian(eng, 1.0);
}

void SignalModel::validate() const {
  if (kind != SignalKind::qpsk_srrcf) return;
  if (!(rolloff > 0.0 && rolloff <= 1.0)) throw ConfigError("signal.rolloff", "must lie in (0, 1]");
  if (!(symbol_period > 0.0) || !std::isfinite(symbol_period)) {
    throw ConfigError("signal.symbol_period_s", "must be positive for the srrcf signal");
  }
}

void Scenario::validate() const {
  band.validate();
  noise.validate();
  channel.validate();
  signal.validate();
  if (!(sensing_time > 0.0) || !std::isfinite(sensing_time)) {
    throw ConfigError("sensing.sensing_time_s", "must be positive and finite");
  }
  SubbandPlan p;
  try {
    p = plan();
  } catch (const DegeneratePlanError& e) {
    throw ConfigError("sensing.sensing_time_s", e.what());
  }
  if (signal.kind == SignalKind::qpsk_srrcf) {
    if (layout != BandLayout::centered) {
      throw ConfigError("band.layout", "srrcf signal needs the centered layout (white band in the rolloff edges)");
    }
    if (std::abs(band.target_hz * signal.symbol_period - 1.0) > 1e-6) {
      throw ConfigError("band.target_hz", "srrcf signal needs target_hz = 1 / symbol_period");
    }
    if (std::abs(band.white_hz * signal.symbol_period - signal.rolloff) > 1e-6) {
      throw ConfigError("band.white_hz", "srrcf signal needs white_hz = rolloff / symbol_period");
    }
    const auto levels = srrcf_levels(*this, p);
    const double leakage = levels.white / levels.target * snr();
    if (leakage > kLeakageLimit) {
      std::ostringstream msg;
      msg << "white-band signal leakage is " << 10.0 * std::log10(leakage)
          << " dB relative to the noise floor; must stay below -20 dB";
      throw ConfigError("signal.kind", msg.str());
    }
  }
}

SubbandPlan Scenario::plan() const { return plan_subbands(band, sensing_time, layout); }

SignalSpectrum signal_spectrum(const Scenario& sc) {
  if (sc.signal.kind != SignalKind::qpsk_srrcf) return {0.0};
  const auto levels = srrcf_levels(sc, sc.plan());
  return {levels.white / levels.target};
}

double effective_snr(const Scenario& sc, double snr) {
  const double rho = signal_spectrum(sc).white_to_target;
  return (1.0 + snr) / (1.0 + rho * snr) - 1.0;
}

double rrc_pulse(double t, double symbol_period, double rolloff) {
  const double x = t / symbol_period;
  const double a = rolloff;
  if (std::abs(x) < 1e-12) return 1.0 + a * (4.0 / std::numbers::pi - 1.0);
  const double edge = 4.0 * a * x;
  if (std::abs(std::abs(edge) - 1.0) < 1e-9) {
    const double q = std::numbers::pi / (4.0 * a);
    return a / std::numbers::sqrt2 *
           ((1.0 + 2.0 / std::numbers::pi) * std::sin(q) + (1.0 - 2.0 / std::numbers::pi) * std::cos(q));
  }
  const double pix = std::numbers::pi * x;
  return (std::sin(pix * (1.0 - a)) + edge * std::cos(pix * (1.0 + a))) / (pix * (1.0 - edge * edge));
}

TrialGenerator::TrialGenerator(Scenario sc) : scenario_(std::move(sc)) {
  scenario_.validate();
  plan_ = scenario_.plan();
  double unit_level = 1.0;
  if (scenario_.signal.kind == SignalKind::qpsk_srrcf) unit_level = srrcf_levels(scenario_, plan_).target;
  amplitude_ = std::sqrt(scenario_.channel.signal_power / unit_level);
}

std::vector<Complex> TrialGenerator::signal_samples(Engine& eng) const {
  const std::size_t n = plan_.n_samples;
  switch (scenario_.signal.kind) {
    case SignalKind::freq_domain_gaussianized: {
      std::vector<Complex> bins(n);
      for (const auto& r : plan_.target_ranges) {
        for (std::size_t m = r.begin; m < r.end; ++m) bins[m] = amplitude_ * complex_gaussian(eng, 1.0);
      }
      return inverse_unitary_dft(bins);
    }
    case SignalKind::qpsk_time_domain: {
      std::vector<Complex> symbols(n);
      std::uint64_t bits = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i % 32 == 0) bits = eng();
        symbols[i] = qpsk_symbol(bits & 3u);
        bits >>= 2;
      }
      const auto spectrum = unitary_dft(symbols);
      std::vector<Complex> masked(n);
      for (const auto& r : plan_.target_ranges) {
        for (std::size_t m = r.begin; m < r.end; ++m) masked[m] = amplitude_ * spectrum[m];
      }
      return inverse_unitary_dft(masked);
    }
    case SignalKind::qpsk_srrcf: {
      const double ts = scenario_.signal.symbol_period;
      const double fs = scenario_.band.total_hz;
      const double offset = ts * (1.0 - uniform_open0(eng));  // random symbol timing in [0, Ts)
      const auto first = static_cast<long>(std::floor(-offset / ts)) - kRrcSpanSymbols - 1;
      const auto last = static_cast<long>(std::ceil((static_cast<double>(n) / fs - offset) / ts)) +
                        kRrcSpanSymbols + 1;
      std::vector<Complex> symbols(static_cast<std::size_t>(last - first + 1));
      std::uint64_t bits = 0;
      for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (i % 32 == 0) bits = eng();
        symbols[i] = qpsk_symbol(bits & 3u);
        bits >>= 2;
      }
      std::vector<Complex> out(n);
      for (std::size_t idx = 0; idx < n; ++idx) {
        const double t = static_cast<double>(idx) / fs - offset;
        const auto k_lo = static_cast<long>(std::ceil(t / ts - kRrcSpanSymbols));
        const auto k_hi = static_cast<long>(std::floor(t / ts + kRrcSpanSymbols));
        Complex acc{0.0, 0.0};
        for (long k = k_lo; k <= k_hi; ++k) {
          acc += symbols[static_cast<std::size_t>(k - first)] * rrc_pulse(t - k * ts, ts, scenario_.signal.rolloff);
        }
        out[idx] = amplitude_ * acc;
      }
      return out;
    }
  }
  throw ConfigError("signal.kind", "unknown signal kind");
}

Trial TrialGenerator::generate(Hypothesis h, Engine& eng) const {
  Trial trial;
  trial.noise_variance = scenario_.noise.draw_variance(eng);
  trial.buffer.sample_rate = scenario_.band.total_hz;
  auto& r = trial.buffer.samples;
  r.resize(plan_.n_samples);
  if (h == Hypothesis::h1) {
    trial.gain = scenario_.channel.draw_gain(eng);
    const auto s = signal_samples(eng);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = trial.gain * s[i];
  }
  add_complex_gaussian(r, eng, trial.noise_variance);
  return trial;
}

Trial generate_trial(const Scenario& sc, Hypothesis h, std::uint64_t seed) {
  TrialGenerator gen(sc);
  Engine eng(seed);
  return gen.generate(h, eng);
}

TrialStatistics simulate_statistics(const TrialGenerator& gen, Hypothesis h, std::size_t trials,
                                    std::uint64_t seed, unsigned jobs) {
  TrialStatistics st;
  st.ged.resize(trials);
  st.ced.resize(trials);
  st.noise_variance.resize(trials);
  st.gain_power.resize(trials);
  const auto& plan = gen.plan();
  const double nominal = gen.scenario().noise.nominal_variance;
  parallel_for(trials, jobs, [&](std::size_t i) {
    auto eng = make_engine(seed, stream_id(h), i);
    const auto trial = gen.generate(h, eng);
    const auto energies = measure_energies(trial.buffer.samples, plan);
    st.ged[i] = ged_statistic(energies, plan).value;
    st.ced[i] = ced_statistic(energies, nominal, plan);
    st.noise_variance[i] = trial.noise_variance;
    st.gain_power[i] = std::norm(trial.gain);
  });
  return st;
}

double binomial_stderr(double p, std::size_t n) {
  if (n == 0) throw DomainError("binomial_stderr: n must be positive");
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

double theory_pd(const Scenario& sc, double threshold) {
  const auto plan = sc.plan();
  const double rho = signal_spectrum(sc).white_to_target;
  const auto pd_at = [&](double snr) {
    const double eff = (1.0 + snr) / (1.0 + rho * snr) - 1.0;
    return pd_theory(threshold, H1Theory::ged(eff, plan.n_target, plan.beta));
  };
  const auto pd_for_variance = [&](double variance) {
    const double snr = sc.channel.signal_power / variance;
    if (sc.channel.kind == ChannelKind::awgn) return pd_at(snr);
    return average_over_rayleigh([&](double gain_power) { return pd_at(snr * gain_power); });
  };
  if (sc.noise.uncertainty_db == 0.0) return pd_for_variance(sc.noise.nominal_variance);

  constexpr int points = 64;
  const double eps = sc.noise.epsilon();
  const double lo = sc.noise.nominal_variance / eps;
  const double hi = sc.noise.nominal_variance * eps;
  double acc = 0.0;
  for (int i = 0; i < points; ++i) acc += pd_for_variance(lo + (hi - lo) * (i + 0.5) / points);
  return acc / points;
}

MonteCarloReport summarize(const Scenario& sc, const TrialStatistics& h0, const TrialStatistics& h1,
                           double threshold, std::uint64_t seed) {
  if (h0.ged.size() != h1.ged.size() || h0.ged.empty()) {
    throw DomainError("summarize: H0 and H1 need the same, nonzero number of trials");
  }
  const auto crossings = [threshold](const std::vector<double>& v) {
    return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [&](double r) { return r >= threshold; }));
  };
  MonteCarloReport rep;
  rep.trials = h0.ged.size();
  rep.seed = seed;
  rep.threshold = threshold;
  const auto n = static_cast<double>(rep.trials);
  rep.false_alarms = crossings(h0.ged);
  rep.detections = crossings(h1.ged);
  rep.empirical_pf = static_cast<double>(rep.false_alarms) / n;
  rep.empirical_pd = static_cast<double>(rep.detections) / n;
  rep.pf_stderr = binomial_stderr(rep.empirical_pf, rep.trials);
  rep.pd_stderr = binomial_stderr(rep.empirical_pd, rep.trials);
  rep.theory_pf = pf_theory(threshold);
  rep.theory_pd = theory_pd(sc, threshold);
  rep.ced_false_alarms = crossings(h0.ced);
  rep.ced_empirical_pf = static_cast<double>(rep.ced_false_alarms) / n;
  rep.ced_pf_stderr = binomial_stderr(rep.ced_empirical_pf, rep.trials);
  return rep;
}

MonteCarloReport monte_carlo(const Scenario& sc, double threshold, const MonteCarloOptions& opt) {
  const double thresholds[] = {threshold};
  return roc(sc, thresholds, opt).front();
}

std::vector<MonteCarloReport> roc(const Scenario& sc, std::span<const double> thresholds,
                                  const MonteCarloOptions& opt) {
  if (opt.trials < 100) throw DomainError("monte_carlo: need at least 100 trials per hypothesis");
  const TrialGenerator gen(sc);
  const auto h0 = simulate_statistics(gen, Hypothesis::h0, opt.trials, opt.seed, opt.jobs);
  const auto h1 = simulate_statistics(gen, Hypothesis::h1, opt.trials, opt.seed, opt.jobs);
  std::vector<MonteCarloReport> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) out.push_back(summarize(sc, h0, h1, t, opt.seed));
  return out;
}

bool rayleigh_vs_awgn_ordering(const MonteCarloReport& awgn, const MonteCarloReport& rayleigh) {
  const double sigma = std::hypot(awgn.pd_stderr, rayleigh.pd_stderr);
  return awgn.empirical_pd - rayleigh.empirical_pd > 3.0 * sigma;
}

}  // namespace gedsense
