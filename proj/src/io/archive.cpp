#include "ppath/io/archive.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

namespace ppath::io {

namespace {

template <typename U>
void put_le(std::string& out, U value) {
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  template <typename U>
  U get() {
    need(sizeof(U));
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      v |= static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(U);
    return v;
  }

  std::string take(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw Error(ErrorKind::MalformedArchive, "truncated archive");
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t narrow32(Index v, const char* what) {
  if (v < 0 || v > static_cast<Index>(std::numeric_limits<std::uint32_t>::max())) {
    throw Error(ErrorKind::ShapeMismatch, std::string(what) + " does not fit in 32 bits");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::string encode_archive(const ParameterPath& path) {
  path.validate();
  std::string out(kArchiveMagic, 6);
  put_le<std::uint16_t>(out, kArchiveVersion);
  put_le<std::uint32_t>(out, narrow32(path.size(), "n"));
  put_le<std::uint32_t>(out, narrow32(path.width(), "m"));
  put_le<std::uint32_t>(out, narrow32(static_cast<Index>(path.layers.size()), "layer count"));
  for (const auto& seg : path.layers) {
    put_le<std::uint32_t>(out, narrow32(static_cast<Index>(seg.name.size()), "layer name"));
    out += seg.name;
    put_le<std::uint32_t>(out, narrow32(seg.offset, "layer offset"));
    put_le<std::uint32_t>(out, narrow32(seg.length, "layer length"));
  }
  for (std::uint64_t s : path.steps) put_le<std::uint64_t>(out, s);
  for (Index i = 0; i < path.size(); ++i) {
    for (Index j = 0; j < path.width(); ++j) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(path.params(i, j)));
  }
  return out;
}

ParameterPath decode_archive(const std::string& bytes) {
  Reader in(bytes);
  if (in.take(6) != std::string(kArchiveMagic, 6)) throw Error(ErrorKind::MalformedArchive, "bad magic");
  const auto version = in.get<std::uint16_t>();
  if (version != kArchiveVersion) {
    throw Error(ErrorKind::MalformedArchive, "unsupported version " + std::to_string(version));
  }
  const auto n = in.get<std::uint32_t>();
  const auto m = in.get<std::uint32_t>();
  const auto layer_count = in.get<std::uint32_t>();

  ParameterPath path;
  for (std::uint32_t l = 0; l < layer_count; ++l) {
    LayerSegment seg;
    seg.name = in.take(in.get<std::uint32_t>());
    seg.offset = in.get<std::uint32_t>();
    seg.length = in.get<std::uint32_t>();
    path.layers.push_back(std::move(seg));
  }
  const std::uint64_t payload = 8ull * n + 8ull * n * m;
  if (in.remaining() != payload) {
    throw Error(ErrorKind::MalformedArchive, "declared sizes need " + std::to_string(payload) + " payload bytes, found " +
                                                 std::to_string(in.remaining()));
  }
  path.steps.resize(n);
  for (auto& s : path.steps) s = in.get<std::uint64_t>();
  path.params.resize(n, m);
  for (Index i = 0; i < path.params.rows(); ++i) {
    for (Index j = 0; j < path.params.cols(); ++j) path.params(i, j) = std::bit_cast<double>(in.get<std::uint64_t>());
  }
  try {
    path.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::MalformedArchive, e.what());
  }
  return path;
}

void write_archive(const std::filesystem::path& file, const ParameterPath& path) {
  const std::string bytes = encode_archive(path);
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + file.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "failed writing " + file.string());
}

ParameterPath read_archive(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + file.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_archive(bytes);
}

}  // namespace ppath::io
