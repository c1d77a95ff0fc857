#pragma once
#include <string>

#include "atomfocus/wavefunction.hpp"

namespace atomfocus::io {

// Binary field snapshot. Layout (all little-endian):
//   bytes 0-7   magic "ATOMFSNP"
//   bytes 8-11  format version, u32 (currently 1)
//   bytes 12-35 grid counts nx, ny, nz as u64
//   bytes 36-59 grid spacings dx, dy, dz as f64 [m]
//   then nx*ny*nz complex values as interleaved f64 (re, im) pairs,
//   x-fastest order: index = i + nx*(j + ny*k).
inline constexpr char snapshot_magic[8] = {'A', 'T', 'O', 'M', 'F', 'S', 'N', 'P'};
inline constexpr std::uint32_t snapshot_version = 1;

void write_snapshot(const std::string& path, const gpe::Wavefunction& wf);

// Throws std::runtime_error on bad magic, version, truncation, or dimensions
// that fail the Grid3 power-of-two/budget rules.
gpe::Wavefunction read_snapshot(const std::string& path);

} // namespace atomfocus::io
