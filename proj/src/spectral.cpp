#include "gedsense/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <utility>

#include "gedsense/errors.hpp"

namespace gedsense {

namespace {

std::size_t snapped_floor(double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) x = nearest;
  return x <= 0.0 ? 0 : static_cast<std::size_t>(std::floor(x));
}

// FFTW planning is not thread-safe; execution of an existing plan is.
// Plans are created once per (size, direction) and live for the process.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

std::vector<Complex> transform(std::span<const Complex> input, int sign) {
  const std::size_t n = input.size();
  if (n == 0) throw DomainError("DFT of an empty buffer");
  std::vector<Complex> out(n);
  fftw_plan plan = PlanCache::instance().get(n, sign);
  // Out-of-place complex transforms preserve their input.
  auto* in_ptr = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(input.data()));
  fftw_execute_dft(plan, in_ptr, reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : out) v *= scale;
  return out;
}

void check_ranges(std::size_t n_samples, const std::vector<BinRange>& ranges, const char* which) {
  for (const auto& r : ranges) {
    if (r.begin > r.end || r.end > n_samples) {
      std::ostringstream msg;
      msg << which << " range [" << r.begin << ", " << r.end << ") outside [0, " << n_samples << ")";
      throw DomainError(msg.str());
    }
  }
}

std::size_t total_size(const std::vector<BinRange>& ranges) {
  std::size_t n = 0;
  for (const auto& r : ranges) n += r.size();
  return n;
}

double mean_power(std::span<const Complex> bins, const std::vector<BinRange>& ranges) {
  long double sum = 0.0L;
  std::size_t count = 0;
  for (const auto& r : ranges) {
    for (std::size_t m = r.begin; m < r.end; ++m) sum += std::norm(bins[m]);
    count += r.size();
  }
  return static_cast<double>(sum / static_cast<long double>(count));
}

}  // namespace

void BandConfig::validate() const {
  auto positive = [](double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be a positive finite frequency");
  };
  positive(total_hz, "band.total_hz");
  positive(target_hz, "band.target_hz");
  positive(white_hz, "band.white_hz");
  if (std::abs(target_hz + white_hz - total_hz) > 1e-9 * total_hz) {
    throw ConfigError("band.total_hz", "must equal target_hz + white_hz");
  }
}

std::size_t sample_count(double sensing_time_s, double rate_hz) {
  if (!(sensing_time_s > 0.0) || !std::isfinite(sensing_time_s)) {
    throw DomainError("sensing time must be positive and finite");
  }
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) throw DomainError("sample rate must be positive");
  return snapped_floor(sensing_time_s * rate_hz);
}

SubbandPlan plan_subbands(const BandConfig& cfg, double sensing_time_s, BandLayout layout) {
  cfg.validate();
  const std::size_t n_samples = sample_count(sensing_time_s, cfg.total_hz);
  const std::size_t n_target =
      snapped_floor(cfg.target_hz * static_cast<double>(n_samples) / cfg.total_hz);
  return plan_from_counts(n_samples, n_target, layout);
}

SubbandPlan plan_from_counts(std::size_t n_samples, std::size_t n_target, BandLayout layout) {
  if (n_target == 0 || n_target >= n_samples) {
    std::ostringstream msg;
    msg << "sub-band maps to zero bins (N_s=" << n_samples << ", N_dk=" << n_target << ")";
    throw DegeneratePlanError(msg.str());
  }
  SubbandPlan plan;
  plan.n_samples = n_samples;
  plan.n_target = n_target;
  plan.n_white = n_samples - n_target;
  plan.beta = static_cast<double>(plan.n_white) / static_cast<double>(n_target);
  if (layout == BandLayout::lower_edge) {
    plan.target_ranges = {{0, n_target}};
    plan.white_ranges = {{n_target, n_samples}};
  } else {
    // FFT order: non-negative frequencies first, then negative ones.
    const std::size_t positive = (n_target + 1) / 2;
    const std::size_t negative = n_target / 2;
    plan.target_ranges = {{0, positive}};
    if (negative > 0) plan.target_ranges.push_back({n_samples - negative, n_samples});
    plan.white_ranges = {{positive, n_samples - negative}};
  }
  return plan;
}

SubbandPlan plan_from_ranges(std::size_t n_samples, std::vector<BinRange> target,
                             std::vector<BinRange> white) {
  check_ranges(n_samples, target, "target");
  check_ranges(n_samples, white, "white");
  std::vector<BinRange> all = target;
  all.insert(all.end(), white.begin(), white.end());
  std::sort(all.begin(), all.end(), [](const BinRange& a, const BinRange& b) { return a.begin < b.begin; });
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i].begin < all[i - 1].end) throw DomainError("bin ranges overlap");
  }
  SubbandPlan plan;
  plan.n_samples = n_samples;
  plan.n_target = total_size(target);
  plan.n_white = total_size(white);
  if (plan.n_target == 0 || plan.n_white == 0) {
    throw DegeneratePlanError("sub-band maps to zero bins");
  }
  plan.beta = static_cast<double>(plan.n_white) / static_cast<double>(plan.n_target);
  plan.target_ranges = std::move(target);
  plan.white_ranges = std::move(white);
  return plan;
}

std::vector<Complex> unitary_dft(const SampleBuffer& buf) { return unitary_dft(buf.samples); }

std::vector<Complex> unitary_dft(std::span<const Complex> samples) {
  return transform(samples, FFTW_FORWARD);
}

std::vector<Complex> inverse_unitary_dft(std::span<const Complex> bins) {
  return transform(bins, FFTW_BACKWARD);
}

SubbandEnergies subband_energies(std::span<const Complex> bins, const SubbandPlan& plan) {
  if (bins.size() != plan.n_samples) {
    std::ostringstream msg;
    msg << "bin count " << bins.size() << " does not match plan N_s=" << plan.n_samples;
    throw DomainError(msg.str());
  }
  SubbandEnergies e;
  e.target_avg = mean_power(bins, plan.target_ranges);
  e.white_avg = mean_power(bins, plan.white_ranges);
  if (!(e.white_avg > 0.0)) throw DegenerateInputError("white sub-band carries zero energy");
  return e;
}

SubbandEnergies measure_energies(std::span<const Complex> samples, const SubbandPlan& plan) {
  return subband_energies(unitary_dft(samples), plan);
}

}  // namespace gedsense
