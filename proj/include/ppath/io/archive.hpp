#ifndef PPATH_IO_ARCHIVE_HPP
#define PPATH_IO_ARCHIVE_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include "ppath/path.hpp"

namespace ppath::io {

// PPATH1 archive, all fields little-endian:
//   "PPATH1" | u16 version | u32 n | u32 m | u32 layer_count
//   | layer_count x (u32 name_len | name bytes | u32 offset | u32 length)
//   | n x u64 step | n*m x f64 (row-major)
inline constexpr char kArchiveMagic[] = "PPATH1";
inline constexpr std::uint16_t kArchiveVersion = 1;

std::string encode_archive(const ParameterPath& path);
// Throws MalformedArchive on any structural problem, including trailing bytes.
ParameterPath decode_archive(const std::string& bytes);

void write_archive(const std::filesystem::path& file, const ParameterPath& path);
ParameterPath read_archive(const std::filesystem::path& file);

}  // namespace ppath::io

#endif  // PPATH_IO_ARCHIVE_HPP
