#include "atomfocus/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "snapshot i/o assumes a little-endian host");

namespace atomfocus::io {
namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

} // namespace

void write_snapshot(const std::string& path, const gpe::Wavefunction& wf) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) bad(path, "cannot open for writing");
    out.write(snapshot_magic, sizeof snapshot_magic);
    std::uint32_t ver = snapshot_version;
    out.write(reinterpret_cast<const char*>(&ver), sizeof ver);
    const auto& g = wf.grid;
    std::uint64_t dims[3] = {g.nx, g.ny, g.nz};
    double spacing[3] = {g.dx, g.dy, g.dz};
    out.write(reinterpret_cast<const char*>(dims), sizeof dims);
    out.write(reinterpret_cast<const char*>(spacing), sizeof spacing);
    static_assert(sizeof(std::complex<double>) == 16);
    out.write(reinterpret_cast<const char*>(wf.psi.data()),
              static_cast<std::streamsize>(wf.psi.size() * sizeof(std::complex<double>)));
    if (!out) bad(path, "write failed");
}

gpe::Wavefunction read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) bad(path, "cannot open");
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, snapshot_magic, sizeof magic) != 0)
        bad(path, "not a field snapshot (bad magic)");
    std::uint32_t ver = 0;
    in.read(reinterpret_cast<char*>(&ver), sizeof ver);
    if (!in || ver != snapshot_version)
        bad(path, "unsupported snapshot version " + std::to_string(ver));
    std::uint64_t dims[3];
    double spacing[3];
    in.read(reinterpret_cast<char*>(dims), sizeof dims);
    in.read(reinterpret_cast<char*>(spacing), sizeof spacing);
    if (!in) bad(path, "truncated header");

    gpe::Grid3 g;
    try {
        g = gpe::Grid3::make(dims[0], dims[1], dims[2], spacing[0] * static_cast<double>(dims[0]),
                        spacing[1] * static_cast<double>(dims[1]),
                        spacing[2] * static_cast<double>(dims[2]));
    } catch (const std::exception& e) {
        bad(path, std::string("header rejected: ") + e.what());
    }
    gpe::Wavefunction wf(g);
    in.read(reinterpret_cast<char*>(wf.psi.data()),
            static_cast<std::streamsize>(wf.psi.size() * sizeof(std::complex<double>)));
    if (!in || in.gcount() != static_cast<std::streamsize>(wf.psi.size() * 16))
        bad(path, "truncated field data");
    return wf;
}

} // namespace atomfocus::io
