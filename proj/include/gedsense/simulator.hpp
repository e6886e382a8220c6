#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gedsense/detector.hpp"
#include "gedsense/rng.hpp"
#include "gedsense/spectral.hpp"

namespace gedsense {

/// Per-trial noise variance, uniform on [sigma^2/eps, eps sigma^2] with eps = 10^(dB/10).
struct NoiseModel {
  double nominal_variance = 100.0;  // mW
  double uncertainty_db = 0.0;

  void validate() const;
  double epsilon() const;
  double draw_variance(Engine& eng) const;
};

enum class ChannelKind { awgn, rayleigh_block };

/// Primary-to-sensor channel. Rayleigh gain is drawn once per window with E|h|^2 = 1.
struct ChannelModel {
  ChannelKind kind = ChannelKind::awgn;
  double signal_power = 1.0;  // mW, per target-band bin

  void validate() const;
  std::complex<double> draw_gain(Engine& eng) const;
};

enum class SignalKind {
  freq_domain_gaussianized,  // target bins drawn directly as complex Gaussians
  qpsk_time_domain,          // i.i.d. QPSK masked to the target bins
  qpsk_srrcf                 // QPSK shaped by a truncated root-raised-cosine pulse
};

struct SignalModel {
  SignalKind kind = SignalKind::qpsk_time_domain;
  double rolloff = 0.2;         // srrcf only
  double symbol_period = 0.0;   // seconds, srrcf only

  void validate() const;
};

/// Root-raised-cosine pulse support is +-kRrcSpanSymbols symbol periods.
inline constexpr int kRrcSpanSymbols = 8;

/// Everything needed to synthesize one sensing window.
struct Scenario {
  BandConfig band;
  BandLayout layout = BandLayout::lower_edge;
  double sensing_time = 0.0;  // T_ts, seconds
  SignalModel signal;
  ChannelModel channel;
  NoiseModel noise;

  /// Validates every model and their combination. Throws ConfigError.
  void validate() const;
  SubbandPlan plan() const;
  /// Design SNR gamma_k = signal_power / nominal_variance.
  double snr() const { return channel.signal_power / noise.nominal_variance; }
};

enum class Hypothesis { h0, h1 };

/// Expected per-bin signal energy of the generator, relative to the target band.
struct SignalSpectrum {
  double white_to_target = 0.0;  // rho: leakage into the white band
};

SignalSpectrum signal_spectrum(const Scenario& sc);

/// SNR that the energy ratio actually sees once leakage inflates M_z:
/// (1 + snr) / (1 + rho snr) - 1.
double effective_snr(const Scenario& sc, double snr);

/// Root-raised-cosine impulse response (unnormalized amplitude) at time t.
double rrc_pulse(double t, double symbol_period, double rolloff);

struct Trial {
  SampleBuffer buffer;
  double noise_variance = 0.0;
  std::complex<double> gain{1.0, 0.0};
};

/// Synthesizes windows for one scenario. Construction validates the scenario and
/// precomputes the plan and signal scaling; generate() is const and thread-safe.
class TrialGenerator {
 public:
  explicit TrialGenerator(Scenario sc);

  const Scenario& scenario() const noexcept { return scenario_; }
  const SubbandPlan& plan() const noexcept { return plan_; }

  Trial generate(Hypothesis h, Engine& eng) const;

 private:
  std::vector<Complex> signal_samples(Engine& eng) const;

  Scenario scenario_;
  SubbandPlan plan_;
  double amplitude_ = 1.0;  // scales unit-power symbols to signal_power per target bin
};

/// One trial from its own seed.
Trial generate_trial(const Scenario& sc, Hypothesis h, std::uint64_t seed);

struct TrialStatistics {
  std::vector<double> ged;             // R_k per trial
  std::vector<double> ced;             // CED statistic using the nominal noise variance
  std::vector<double> noise_variance;  // drawn per trial
  std::vector<double> gain_power;      // |h|^2 per trial
};

/// Runs `trials` windows under hypothesis h on `jobs` worker threads. Trial i
/// draws from substream (seed, h, i), so the result is independent of `jobs`.
TrialStatistics simulate_statistics(const TrialGenerator& gen, Hypothesis h, std::size_t trials,
                                    std::uint64_t seed, unsigned jobs = 1);

struct MonteCarloReport {
  std::size_t trials = 0;  // per hypothesis
  std::uint64_t seed = 0;
  double threshold = 0.0;
  std::size_t false_alarms = 0;
  std::size_t detections = 0;
  double empirical_pf = 0.0;
  double pf_stderr = 0.0;
  double empirical_pd = 0.0;
  double pd_stderr = 0.0;
  double theory_pf = 0.0;
  double theory_pd = 0.0;
  // Known-noise detector fed the nominal variance, same threshold.
  std::size_t ced_false_alarms = 0;
  double ced_empirical_pf = 0.0;
  double ced_pf_stderr = 0.0;
};

/// sqrt(p (1 - p) / n).
double binomial_stderr(double p, std::size_t n);

/// Pd predicted for the scenario: Eq.-(8) Gaussian model at the effective SNR,
/// averaged over the Rayleigh gain and the noise-variance draw when present.
double theory_pd(const Scenario& sc, double threshold);

/// Counts threshold crossings of pre-computed statistics.
MonteCarloReport summarize(const Scenario& sc, const TrialStatistics& h0, const TrialStatistics& h1,
                           double threshold, std::uint64_t seed);

struct MonteCarloOptions {
  std::size_t trials = 2000;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

/// Empirical Pf/Pd at one threshold. Throws DomainError for trials < 100.
MonteCarloReport monte_carlo(const Scenario& sc, double threshold, const MonteCarloOptions& opt);

/// One report per threshold, all computed from the same simulated trials.
std::vector<MonteCarloReport> roc(const Scenario& sc, std::span<const double> thresholds,
                                  const MonteCarloOptions& opt);

/// True iff Pd(AWGN) exceeds Pd(Rayleigh) by more than three combined standard errors.
bool rayleigh_vs_awgn_ordering(const MonteCarloReport& awgn, const MonteCarloReport& rayleigh);

}  // namespace gedsense
