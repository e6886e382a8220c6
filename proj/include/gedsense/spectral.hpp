#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gedsense {

using Complex = std::complex<double>;

/// Sensing bandwidth split into the target sub-band and the white sub-band (all Hz).
struct BandConfig {
  double total_hz = 0.0;
  double target_hz = 0.0;
  double white_hz = 0.0;

  /// Throws ConfigError unless all widths are positive and total = target + white.
  void validate() const;
};

/// Where the target band sits inside the sampled spectrum.
///
/// lower_edge: target occupies DFT bins [0, N_dk), white the rest (one-sided layout).
/// centered:   target occupies |f| < B_k/2, white both spectral edges (pulse-shaped rolloff layout).
enum class BandLayout { lower_edge, centered };

/// Half-open range of 0-based DFT bin indices.
struct BinRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const BinRange&, const BinRange&) = default;
};

/// Mapping of a band configuration onto the bins of one N_s-point DFT.
///
/// The 1-based bin m of the textbook DFT is stored at index m-1, so the
/// lower-edge target range {0, N_dk} holds bins 1..N_dk.
struct SubbandPlan {
  std::size_t n_samples = 0;
  std::size_t n_target = 0;
  std::size_t n_white = 0;
  double beta = 0.0;  // n_white / n_target
  std::vector<BinRange> target_ranges;
  std::vector<BinRange> white_ranges;
};

struct SampleBuffer {
  std::vector<Complex> samples;
  double sample_rate = 0.0;  // Hz
};

struct SubbandEnergies {
  double target_avg = 0.0;  // M_dk
  double white_avg = 0.0;   // M_z
};

/// floor(T * B), snapping products within 1e-9 relative of an integer.
std::size_t sample_count(double sensing_time_s, double rate_hz);

/// Plan for a sensing window of length `sensing_time_s` sampled at B = cfg.total_hz.
/// Throws DegeneratePlanError if either sub-band maps to zero bins.
SubbandPlan plan_subbands(const BandConfig& cfg, double sensing_time_s,
                          BandLayout layout = BandLayout::lower_edge);

/// Plan from explicit counts: n_samples bins of which n_target belong to the target band.
SubbandPlan plan_from_counts(std::size_t n_samples, std::size_t n_target,
                             BandLayout layout = BandLayout::lower_edge);

/// Plan from explicit bin ranges. Ranges must be in-bounds and mutually disjoint;
/// bins covered by neither list are ignored by subband_energies.
SubbandPlan plan_from_ranges(std::size_t n_samples, std::vector<BinRange> target,
                             std::vector<BinRange> white);

/// DFT scaled by 1/sqrt(N_s), so that the transform is unitary.
std::vector<Complex> unitary_dft(const SampleBuffer& buf);
std::vector<Complex> unitary_dft(std::span<const Complex> samples);

/// Inverse of unitary_dft.
std::vector<Complex> inverse_unitary_dft(std::span<const Complex> bins);

/// Mean |bin|^2 over the target bins and over the white bins.
/// Throws DegenerateInputError when the white-band energy is zero.
SubbandEnergies subband_energies(std::span<const Complex> bins, const SubbandPlan& plan);

/// Convenience: unitary_dft followed by subband_energies.
SubbandEnergies measure_energies(std::span<const Complex> samples, const SubbandPlan& plan);

}  // namespace gedsense
