#include "qla/snapshot.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include <zlib.h>

#include "binary_io.hpp"

namespace qla {
namespace {

constexpr std::size_t kHeader = 4 + 4 * 4 + 8 + 8;

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open snapshot " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::uint32_t crc32_of(const void* data, std::size_t size) {
  uLong crc = crc32(0L, Z_NULL, 0);
  const auto* p = static_cast<const Bytef*>(data);
  // zlib takes uInt lengths; feed large buffers in pieces.
  while (size > 0) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(size, 1u << 30));
    crc = crc32(crc, p, chunk);
    p += chunk;
    size -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::uint32_t write_snapshot(const QubitField& field, std::uint64_t step, const std::filesystem::path& path) {
  const LatticeGrid& g = field.grid();
  std::vector<unsigned char> buf{'Q', 'L', 'A', 'F'};
  buf.reserve(kHeader + field.data().size() * 8 + 4);
  detail::put_le<std::uint32_t>(buf, kSnapshotVersion);
  detail::put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(g.nx));
  detail::put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(g.ny));
  detail::put_le<std::uint32_t>(buf, kComponents);
  detail::put_le<double>(buf, g.delta);
  detail::put_le<std::uint64_t>(buf, step);
  for (double v : field.data()) detail::put_le<double>(buf, v);
  const std::uint32_t crc = crc32_of(buf.data(), buf.size());
  detail::put_le<std::uint32_t>(buf, crc);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot create snapshot " + path.string());
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  out.close();
  if (!out) throw Error("failed writing snapshot " + path.string());
  return crc;
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  const std::vector<unsigned char> buf = slurp(path);
  const std::string name = path.string();
  if (buf.size() < kHeader + 4 || std::memcmp(buf.data(), "QLAF", 4) != 0) {
    throw Error("snapshot " + name + ": missing or truncated QLAF header");
  }
  const auto version = detail::get_le<std::uint32_t>(buf.data() + 4);
  if (version != kSnapshotVersion) {
    throw Error("snapshot " + name + ": format version " + std::to_string(version) + " is not supported (expected " +
                std::to_string(kSnapshotVersion) + ")");
  }
  LatticeGrid g;
  g.nx = static_cast<int>(detail::get_le<std::uint32_t>(buf.data() + 8));
  g.ny = static_cast<int>(detail::get_le<std::uint32_t>(buf.data() + 12));
  const auto comps = detail::get_le<std::uint32_t>(buf.data() + 16);
  g.delta = detail::get_le<double>(buf.data() + 20);
  const auto step = detail::get_le<std::uint64_t>(buf.data() + 28);
  if (comps != kComponents) throw Error("snapshot " + name + ": component count must be 6");
  try {
    g.validate();
  } catch (const Error& e) {
    throw Error("snapshot " + name + ": bad header (" + e.what() + ")");
  }
  const std::size_t count = g.sites() * kComponents;
  if (buf.size() != kHeader + count * 8 + 4) throw Error("snapshot " + name + ": size does not match header");
  const auto stored = detail::get_le<std::uint32_t>(buf.data() + buf.size() - 4);
  if (crc32_of(buf.data(), buf.size() - 4) != stored) throw Error("snapshot " + name + ": checksum mismatch");

  Snapshot s{QubitField(g), step};
  std::span<double> a = s.field.data();
  for (std::size_t i = 0; i < count; ++i) a[i] = detail::get_le<double>(buf.data() + kHeader + i * 8);
  if (!s.field.all_finite()) throw Error("snapshot " + name + ": non-finite amplitudes");
  return s;
}

std::uint32_t stored_crc(const std::filesystem::path& path) {
  const std::vector<unsigned char> buf = slurp(path);
  if (buf.size() < 4) throw Error("snapshot " + path.string() + " is truncated");
  return detail::get_le<std::uint32_t>(buf.data() + buf.size() - 4);
}

}  // namespace qla
