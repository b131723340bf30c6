#include "hmn/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <iterator>
#include <sstream>

#include "hmn/error.hpp"

namespace hmn {
namespace {

constexpr char kMagic[8] = {'H', 'M', 'N', 'C', 'K', 'P', 'T', '\0'};

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_string(std::string& out, const std::string& s) {
  put_u64(out, s.size());
  out += s;
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }

  std::string string() {
    const std::uint64_t n = u64();
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  void expect_magic() {
    need(sizeof(kMagic));
    if (bytes_.compare(pos_, sizeof(kMagic), kMagic, sizeof(kMagic)) != 0) {
      throw CheckpointError("not a checkpoint archive (bad magic)");
    }
    pos_ += sizeof(kMagic);
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::uint64_t n) const {
    if (bytes_.size() - pos_ < n) throw CheckpointError("truncated checkpoint archive");
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

const ArchiveEntry* Archive::find(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::string serialize_archive(const Archive& archive) {
  std::string out(kMagic, sizeof(kMagic));
  put_string(out, archive.schema);
  put_string(out, archive.metadata);
  put_u64(out, archive.entries.size());
  for (const auto& e : archive.entries) {
    if (shape_size(e.shape) != e.values.size()) {
      throw CheckpointError("entry '" + e.name + "' has shape " + shape_to_string(e.shape) + " but " +
                            std::to_string(e.values.size()) + " values");
    }
    put_string(out, e.name);
    put_u64(out, e.shape.size());
    for (std::size_t d : e.shape) put_u64(out, d);
    for (double v : e.values) put_u64(out, std::bit_cast<std::uint64_t>(v));
  }
  return out;
}

Archive parse_archive(const std::string& bytes) {
  Reader in(bytes);
  in.expect_magic();
  Archive archive;
  archive.schema = in.string();
  if (archive.schema != kCheckpointSchema) {
    throw CheckpointError("unsupported checkpoint schema '" + archive.schema + "', expected '" + kCheckpointSchema +
                          "'");
  }
  archive.metadata = in.string();
  const std::uint64_t count = in.u64();
  for (std::uint64_t i = 0; i < count; ++i) {
    ArchiveEntry e;
    e.name = in.string();
    const std::uint64_t rank = in.u64();
    if (rank > 8) throw CheckpointError("entry '" + e.name + "' has implausible rank " + std::to_string(rank));
    for (std::uint64_t r = 0; r < rank; ++r) e.shape.push_back(in.u64());
    const std::size_t n = shape_size(e.shape);
    e.values.reserve(n);
    for (std::size_t k = 0; k < n; ++k) e.values.push_back(std::bit_cast<double>(in.u64()));
    archive.entries.push_back(std::move(e));
  }
  if (!in.done()) throw CheckpointError("trailing bytes after checkpoint archive");
  return archive;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

void save_archive(const std::filesystem::path& path, const Archive& archive) {
  write_file_atomic(path, serialize_archive(archive));
}

Archive load_archive(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint '" + path.string() + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_archive(bytes);
}

}  // namespace hmn
