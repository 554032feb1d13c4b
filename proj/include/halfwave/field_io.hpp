//==============================================================================
// field_io.hpp
// HWF1 on-disk field format.
//   bytes 0-3 : magic "HWF1"
//   u32       : version = 1
//   u64       : n (points per axis)
//   f64       : box_length
//   u8        : space tag (0 physical, 1 frequency)
//   payload   : n^2 little-endian complex128, row-major, second axis fastest
// Round-trips are bit exact; malformed files are rejected with typed errors.
//==============================================================================
#pragma once

#include <string>

#include "halfwave/field.hpp"

namespace hw {

void save_field(const Field& f, const std::string& path);
Field load_field(const std::string& path);

// Write bytes to a temporary file in the target directory, then rename.
void atomic_write_bytes(const std::string& path, const void* data, std::size_t size);
void atomic_write_text(const std::string& path, const std::string& text);

}  // namespace hw
