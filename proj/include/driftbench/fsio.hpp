#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace driftbench::fsio {

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temp file, then renames over the target, so a crash
// mid-write never leaves a torn output behind.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

void ensure_directory(const std::filesystem::path& dir);

}  // namespace driftbench::fsio
