#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hmn/tensor.hpp"

namespace hmn {

inline constexpr const char* kCheckpointSchema = "hmn-checkpoint/1";

struct ArchiveEntry {
  std::string name;
  Shape shape;
  std::vector<double> values;
};

// Flat name -> (shape, row-major doubles) archive with a free-form metadata
// string. Doubles are stored as their little-endian IEEE-754 bit patterns, so
// a save/load round trip is bit exact.
struct Archive {
  std::string schema = kCheckpointSchema;
  std::string metadata;
  std::vector<ArchiveEntry> entries;

  const ArchiveEntry* find(const std::string& name) const;
};

void save_archive(const std::filesystem::path& path, const Archive& archive);
Archive load_archive(const std::filesystem::path& path);

std::string serialize_archive(const Archive& archive);
Archive parse_archive(const std::string& bytes);

// Writes `contents` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace hmn
