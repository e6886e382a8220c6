#pragma once

#include <filesystem>

#include "gedsense/spectral.hpp"

namespace gedsense {

// On-disk sensing window:
//   <path>       interleaved real/imag pairs, IEEE-754 binary64, little-endian
//   <path>.json  {"format": "cf64le", "sample_rate": <Hz>, "length": <samples>}

std::filesystem::path sidecar_path(const std::filesystem::path& samples_path);

/// Writes both files. Throws Error on I/O failure.
void save_samples(const std::filesystem::path& path, const SampleBuffer& buf);

/// Throws MalformedFileError if either file is missing, unparsable, or the
/// binary payload length disagrees with the sidecar.
SampleBuffer load_samples(const std::filesystem::path& path);

}  // namespace gedsense
