#pragma once

#include <optional>
#include <vector>

#include "gedsense/detector.hpp"
#include "gedsense/errors.hpp"
#include "gedsense/numerics.hpp"
#include "gedsense/spectral.hpp"

namespace gedsense {

/// Frame and link parameters of the sensing-time/throughput tradeoff. SNRs are linear.
struct ThroughputConfig {
  double frame_duration = 2.0;  // T_f, seconds
  double prior_h0 = 0.8;
  double prior_h1 = 0.2;
  double snr_secondary = 100.0;                     // gamma_c
  std::optional<double> snr_primary_at_cr;          // gamma_pk; defaults to snr_target
  double target_pd = 0.9;                           // required detection probability
  BandConfig band{12e6, 6e6, 6e6};
  double snr_target = 0.01;                         // gamma_k

  double primary_snr() const { return snr_primary_at_cr.value_or(snr_target); }

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

/// ged: white-band noise estimate (finite beta). ced: known noise variance (beta -> infinity).
enum class DetectorMode { ged, ced };

struct ObjectiveCoefficients {
  double a = 0.0;           // s^-1/2
  double b = 0.0;
  double psi = 0.0;         // bits/s/Hz
  double psi_tilde = 0.0;   // bits/s/Hz
  double rate_h0 = 0.0;     // R_0k = log2(1 + gamma_c)
  double rate_h1 = 0.0;     // R_1k = log2(1 + gamma_c / (1 + gamma_pk))
};

struct ScanPoint {
  double sensing_time = 0.0;
  double throughput = 0.0;
};

struct OptimizationResult {
  double optimal_sensing_time = 0.0;  // T*_o, seconds
  double optimal_threshold = 0.0;     // a sqrt(T*_o) + b
  double max_throughput = 0.0;        // normalized, bits/s/Hz
  int iterations = 0;
  DetectorMode mode = DetectorMode::ged;
};

/// The coarse scan found more than one interior local maximum.
class NonUnimodalError : public Error {
 public:
  NonUnimodalError(const std::string& what, std::vector<ScanPoint> scan)
      : Error(what), scan_(std::move(scan)) {}
  const std::vector<ScanPoint>& scan() const noexcept { return scan_; }

 private:
  std::vector<ScanPoint> scan_;
};

ObjectiveCoefficients coefficients(const ThroughputConfig& cfg, DetectorMode mode = DetectorMode::ged);

/// Threshold that pins Pd to the target for a window of `sensing_time` seconds.
double threshold_schedule(const ObjectiveCoefficients& coef, double sensing_time);

/// Normalized throughput ((T_f - T_o)/T_f)(psi erf((a sqrt T_o + b)/sqrt 2) + psi_tilde).
/// Throws DomainError unless 0 < sensing_time <= frame_duration.
double objective(const ObjectiveCoefficients& coef, double sensing_time, double frame_duration);

/// Objective sampled at `points` evenly spaced sensing times in [lo, hi].
std::vector<ScanPoint> scan_objective(const ObjectiveCoefficients& coef, double frame_duration, double lo,
                                      double hi, int points);

/// Number of interior local maxima of a scan, ignoring steps smaller than `flat_tol`.
int count_local_maxima(const std::vector<ScanPoint>& scan, double flat_tol);

/// Lower end of the search domain: one target-band sample, 1/B_k.
double min_sensing_time(const ThroughputConfig& cfg);

/// Maximizes the objective over [1/B_k, T_f]. A 64-point scan checks unimodality
/// (NonUnimodalError otherwise) and brackets the peak; golden-section refines it.
OptimizationResult optimize_sensing_time(const ThroughputConfig& cfg, const Tolerance& tol = {},
                                         DetectorMode mode = DetectorMode::ged);

struct FrameOutcome {
  Decision decision;
  OptimizationResult optimization;
  SubbandPlan plan;
};

/// One pass of the sense-then-transmit loop: optimize T_o, keep the first
/// floor(T*_o B) samples of `window`, compute R_k and compare it with the
/// scheduled threshold. Throws InsufficientSamplesError for short windows.
FrameOutcome run_frame(const ThroughputConfig& cfg, const SampleBuffer& window, const Tolerance& tol = {},
                       BandLayout layout = BandLayout::lower_edge);

}  // namespace gedsense
