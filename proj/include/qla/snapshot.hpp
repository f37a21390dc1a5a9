// snapshot.hpp: binary field snapshots.
//
// Little-endian layout:
//   "QLAF"  u32 version (1)  u32 nx  u32 ny  u32 components (6)
//   f64 delta  u64 step
//   nx * ny * 6 f64 amplitudes, row-major, component fastest
//   u32 CRC-32 of every preceding byte
#pragma once

#include <cstdint>
#include <filesystem>

#include "qla/lattice.hpp"

namespace qla {

inline constexpr std::uint32_t kSnapshotVersion = 1;

struct Snapshot {
  QubitField field;
  std::uint64_t step = 0;
};

/// Returns the CRC-32 stored in the trailer.
std::uint32_t write_snapshot(const QubitField& field, std::uint64_t step, const std::filesystem::path& path);

/// Throws qla::Error on a short or malformed header, a version other than
/// kSnapshotVersion, a size mismatch or a CRC mismatch.
Snapshot read_snapshot(const std::filesystem::path& path);

/// The CRC-32 recorded in a snapshot trailer (not re-verified).
std::uint32_t stored_crc(const std::filesystem::path& path);

std::uint32_t crc32_of(const void* data, std::size_t size);

}  // namespace qla
