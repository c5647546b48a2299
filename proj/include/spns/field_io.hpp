#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "spns/field.hpp"

namespace spns {

/// Binary field format, little-endian:
///   "SPNS" | u32 version | u32 d | u32 n (x d) | f64 L | u32 components |
///   f64 payload, component-major, row-major within a component.
inline constexpr std::uint32_t field_format_version = 1;

std::string encode_field(const Field& f);
/// Throws io on a bad magic/version/header or when the payload length does not match.
Field decode_field(const std::string& bytes);

void write_field(const std::filesystem::path& path, const Field& f);
Field read_field(const std::filesystem::path& path);

}  // namespace spns
