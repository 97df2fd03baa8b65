#include "serial.hpp"

#include <cstring>

#include "driftbench/errors.hpp"

namespace driftbench::serial {

std::string pack(nlohmann::ordered_json meta, const std::vector<TensorRef>& tensors) {
  nlohmann::ordered_json shapes = nlohmann::ordered_json::array();
  for (const auto& t : tensors)
    shapes.push_back({{"name", t.name}, {"rows", t.rows}, {"cols", t.cols}});
  meta["tensors"] = std::move(shapes);

  const std::string header = meta.dump();
  std::string out;
  out.reserve(kMagic.size() + 8 + header.size());
  out.append(kMagic);
  const std::uint64_t header_len = header.size();
  char len_bytes[8];
  std::memcpy(len_bytes, &header_len, 8);
  out.append(len_bytes, 8);
  out.append(header);
  for (const auto& t : tensors) {
    const std::size_t bytes = t.rows * t.cols * sizeof(double);
    const std::size_t offset = out.size();
    out.resize(offset + bytes);
    std::memcpy(out.data() + offset, t.data, bytes);
  }
  return out;
}

Unpacked unpack(std::string_view bytes) {
  if (bytes.size() < kMagic.size() + 8 ||
      bytes.substr(0, kMagic.size()) != kMagic)
    throw Error(Errc::parse_error, "not a driftbench model file");
  std::uint64_t header_len = 0;
  std::memcpy(&header_len, bytes.data() + kMagic.size(), 8);
  const std::size_t header_start = kMagic.size() + 8;
  if (bytes.size() < header_start + header_len)
    throw Error(Errc::parse_error, "model file truncated in header");

  Unpacked result;
  try {
    result.meta = nlohmann::json::parse(bytes.substr(header_start, header_len));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string("bad model header: ") + e.what());
  }
  std::size_t cursor = header_start + header_len;
  for (const auto& shape : result.meta.at("tensors")) {
    const std::size_t rows = shape.at("rows").get<std::size_t>();
    const std::size_t cols = shape.at("cols").get<std::size_t>();
    const std::size_t count = rows * cols;
    if (bytes.size() < cursor + count * sizeof(double))
      throw Error(Errc::parse_error, "model file truncated in tensor payload");
    std::vector<double> data(count);
    std::memcpy(data.data(), bytes.data() + cursor, count * sizeof(double));
    cursor += count * sizeof(double);
    result.tensors.emplace_back(shape.at("name").get<std::string>(), std::move(data));
    result.shapes.emplace_back(rows, cols);
  }
  if (cursor != bytes.size())
    throw Error(Errc::parse_error, "model file has trailing bytes");
  return result;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

}  // namespace driftbench::serial
