#pragma once

// Internal binary model container: a magic line, a JSON header (metadata
// plus tensor shapes), then the tensor payload as little-endian doubles in
// header order. Byte-stable for a given model, which is what the
// no-retraining hashes and determinism checks rely on.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace driftbench::serial {

inline constexpr std::string_view kMagic = "DRIFTBENCH_MODEL1\n";

struct TensorRef {
  std::string name;
  const double* data;
  std::size_t rows;
  std::size_t cols;
};

std::string pack(nlohmann::ordered_json meta, const std::vector<TensorRef>& tensors);

struct Unpacked {
  nlohmann::json meta;
  std::vector<std::pair<std::string, std::vector<double>>> tensors;  // in order
  std::vector<std::pair<std::size_t, std::size_t>> shapes;
};

Unpacked unpack(std::string_view bytes);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace driftbench::serial
