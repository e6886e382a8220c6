#include "gedsense/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace gedsense {

namespace {

void require_unit_interval(double p, const char* field) {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError(field, "must lie strictly between 0 and 1");
}

void require_nonnegative(double v, const char* field) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be finite and >= 0");
}

constexpr int kCoarseScanPoints = 64;

}  // namespace

void ThroughputConfig::validate() const {
  if (!(frame_duration > 0.0) || !std::isfinite(frame_duration)) {
    throw ConfigError("throughput.frame_duration_s", "must be positive and finite");
  }
  if (!(prior_h0 >= 0.0 && prior_h0 <= 1.0)) throw ConfigError("throughput.prior_h0", "must lie in [0, 1]");
  if (!(prior_h1 >= 0.0 && prior_h1 <= 1.0)) throw ConfigError("throughput.prior_h1", "must lie in [0, 1]");
  if (std::abs(prior_h0 + prior_h1 - 1.0) > 1e-9) {
    throw ConfigError("throughput.prior_h1", "prior_h0 + prior_h1 must equal 1");
  }
  require_nonnegative(snr_secondary, "throughput.snr_secondary");
  if (snr_primary_at_cr) require_nonnegative(*snr_primary_at_cr, "throughput.snr_primary_at_cr");
  require_unit_interval(target_pd, "throughput.target_pd");
  require_nonnegative(snr_target, "throughput.snr_target");
  band.validate();
}

ObjectiveCoefficients coefficients(const ThroughputConfig& cfg, DetectorMode mode) {
  cfg.validate();
  const double beta = cfg.band.white_hz / cfg.band.target_hz;
  const double prefactor = mode == DetectorMode::ced ? 1.0 : beta / (beta + 1.0);

  ObjectiveCoefficients c;
  c.a = std::sqrt(prefactor * cfg.band.target_hz) * cfg.snr_target;
  c.b = std::numbers::sqrt2 * (1.0 + cfg.snr_target) * erfc_inv(2.0 * cfg.target_pd);
  c.rate_h0 = std::log2(1.0 + cfg.snr_secondary);
  c.rate_h1 = std::log2(1.0 + cfg.snr_secondary / (1.0 + cfg.primary_snr()));
  c.psi = 0.5 * cfg.prior_h0 * c.rate_h0;
  c.psi_tilde = c.psi + cfg.prior_h1 * c.rate_h1 * (1.0 - cfg.target_pd);
  return c;
}

double threshold_schedule(const ObjectiveCoefficients& coef, double sensing_time) {
  if (!(sensing_time > 0.0)) throw DomainError("threshold_schedule: sensing time must be positive");
  return coef.a * std::sqrt(sensing_time) + coef.b;
}

double objective(const ObjectiveCoefficients& coef, double sensing_time, double frame_duration) {
  if (!(sensing_time > 0.0 && sensing_time <= frame_duration)) {
    std::ostringstream msg;
    msg << "objective: sensing time " << sensing_time << " outside (0, " << frame_duration << "]";
    throw DomainError(msg.str());
  }
  const double lambda = threshold_schedule(coef, sensing_time);
  const double duty = (frame_duration - sensing_time) / frame_duration;
  return duty * (coef.psi * erf(lambda / std::numbers::sqrt2) + coef.psi_tilde);
}

std::vector<ScanPoint> scan_objective(const ObjectiveCoefficients& coef, double frame_duration, double lo,
                                      double hi, int points) {
  if (points < 2) throw DomainError("scan_objective: need at least 2 points");
  std::vector<ScanPoint> scan(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = i + 1 == points ? hi : lo + (hi - lo) * i / (points - 1);
    scan[static_cast<std::size_t>(i)] = {t, objective(coef, t, frame_duration)};
  }
  return scan;
}

int count_local_maxima(const std::vector<ScanPoint>& scan, double flat_tol) {
  int maxima = 0;
  int last_sign = 0;
  for (std::size_t i = 1; i < scan.size(); ++i) {
    const double step = scan[i].throughput - scan[i - 1].throughput;
    const int sign = step > flat_tol ? 1 : (step < -flat_tol ? -1 : 0);
    if (sign == 0) continue;
    if (last_sign == 1 && sign == -1) ++maxima;
    last_sign = sign;
  }
  return maxima;
}

double min_sensing_time(const ThroughputConfig& cfg) { return 1.0 / cfg.band.target_hz; }

OptimizationResult optimize_sensing_time(const ThroughputConfig& cfg, const Tolerance& tol, DetectorMode mode) {
  tol.validate();
  const auto coef = coefficients(cfg, mode);
  const double lo = min_sensing_time(cfg);
  const double hi = cfg.frame_duration;
  if (!(lo < hi)) throw ConfigError("throughput.frame_duration_s", "shorter than one target-band sample");

  auto scan = scan_objective(coef, hi, lo, hi, kCoarseScanPoints);
  double peak = 0.0;
  for (const auto& p : scan) peak = std::max(peak, std::abs(p.throughput));
  if (count_local_maxima(scan, 1e-12 * std::max(peak, 1.0)) > 1) {
    throw NonUnimodalError("objective has more than one interior local maximum on the coarse scan",
                           std::move(scan));
  }

  const auto best = std::max_element(scan.begin(), scan.end(), [](const ScanPoint& a, const ScanPoint& b) {
    return a.throughput < b.throughput;
  });
  const auto idx = static_cast<std::size_t>(best - scan.begin());
  const double bracket_lo = scan[idx == 0 ? 0 : idx - 1].sensing_time;
  const double bracket_hi = scan[std::min(idx + 1, scan.size() - 1)].sensing_time;

  const auto f = [&](double t) { return objective(coef, t, hi); };
  const auto refined = maximize_unimodal(f, bracket_lo, bracket_hi, tol);

  OptimizationResult r;
  r.optimal_sensing_time = refined.argmax;
  r.optimal_threshold = threshold_schedule(coef, refined.argmax);
  r.max_throughput = refined.max;
  r.iterations = refined.iterations;
  r.mode = mode;
  return r;
}

FrameOutcome run_frame(const ThroughputConfig& cfg, const SampleBuffer& window, const Tolerance& tol,
                       BandLayout layout) {
  cfg.validate();
  if (window.samples.empty()) throw InsufficientSamplesError("run_frame: empty sensing window");
  if (std::abs(window.sample_rate - cfg.band.total_hz) > 1e-9 * cfg.band.total_hz) {
    throw DomainError("run_frame: window sample rate must equal the total bandwidth B");
  }

  FrameOutcome out;
  out.optimization = optimize_sensing_time(cfg, tol, DetectorMode::ged);
  out.plan = plan_subbands(cfg.band, out.optimization.optimal_sensing_time, layout);
  if (window.samples.size() < out.plan.n_samples) {
    std::ostringstream msg;
    msg << "run_frame: window has " << window.samples.size() << " samples, optimal sensing time needs "
        << out.plan.n_samples;
    throw InsufficientSamplesError(msg.str());
  }

  const std::span<const Complex> head(window.samples.data(), out.plan.n_samples);
  const auto stat = ged_statistic(measure_energies(head, out.plan), out.plan);
  out.decision = decide(stat, out.optimization.optimal_threshold);
  return out;
}

}  // namespace gedsense
