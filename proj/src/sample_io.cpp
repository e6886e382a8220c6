#include "gedsense/sample_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "gedsense/errors.hpp"

namespace gedsense {

namespace {

constexpr const char* kFormat = "cf64le";

void put_le(std::uint64_t bits, char* out) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
}

std::uint64_t get_le(const unsigned char* in) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(in[i]) << (8 * i);
  return bits;
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& samples_path) {
  auto p = samples_path;
  p += ".json";
  return p;
}

void save_samples(const std::filesystem::path& path, const SampleBuffer& buf) {
  std::ofstream bin(path, std::ios::binary | std::ios::trunc);
  if (!bin) throw Error("cannot open " + path.string() + " for writing");
  std::array<char, 16> record{};
  for (const auto& s : buf.samples) {
    put_le(std::bit_cast<std::uint64_t>(s.real()), record.data());
    put_le(std::bit_cast<std::uint64_t>(s.imag()), record.data() + 8);
    bin.write(record.data(), record.size());
  }
  if (!bin) throw Error("write failed for " + path.string());

  nlohmann::json meta = {
      {"format", kFormat}, {"sample_rate", buf.sample_rate}, {"length", buf.samples.size()}};
  std::ofstream side(sidecar_path(path), std::ios::trunc);
  if (!side) throw Error("cannot open " + sidecar_path(path).string() + " for writing");
  side << meta.dump(2) << '\n';
}

SampleBuffer load_samples(const std::filesystem::path& path) {
  std::ifstream side(sidecar_path(path));
  if (!side) throw MalformedFileError("missing sidecar " + sidecar_path(path).string());
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(side);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedFileError("unparsable sidecar: " + std::string(e.what()));
  }

  SampleBuffer buf;
  std::size_t length = 0;
  try {
    if (meta.contains("format") && meta.at("format").get<std::string>() != kFormat) {
      throw MalformedFileError("unsupported sample format " + meta.at("format").get<std::string>());
    }
    buf.sample_rate = meta.at("sample_rate").get<double>();
    length = meta.at("length").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw MalformedFileError("bad sidecar field: " + std::string(e.what()));
  }
  if (!(buf.sample_rate > 0.0) || !std::isfinite(buf.sample_rate)) {
    throw MalformedFileError("sidecar sample_rate must be positive");
  }

  std::ifstream bin(path, std::ios::binary);
  if (!bin) throw MalformedFileError("missing sample file " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(bin)), std::istreambuf_iterator<char>());
  if (bytes.size() != 16 * length) {
    throw MalformedFileError("sample file holds " + std::to_string(bytes.size()) + " bytes, sidecar promises " +
                             std::to_string(16 * length));
  }
  buf.samples.resize(length);
  for (std::size_t i = 0; i < length; ++i) {
    const auto* rec = bytes.data() + 16 * i;
    buf.samples[i] = {std::bit_cast<double>(get_le(rec)), std::bit_cast<double>(get_le(rec + 8))};
  }
  return buf;
}

}  // namespace gedsense
