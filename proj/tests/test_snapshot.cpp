#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "atomfocus/snapshot.hpp"

using namespace atomfocus;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

gpe::Wavefunction random_field() {
    auto g = gpe::Grid3::make(16, 4, 8, 12e-6, 3e-6, 7e-6);
    gpe::Wavefunction wf(std::move(g));
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-1, 1);
    for (auto& v : wf.psi) v = {u(rng), u(rng)};
    wf.time = 1.25e-3;
    return wf;
}

} // namespace

TEST_CASE("snapshot roundtrip is bitwise") {
    TempFile f("snap_roundtrip.snap");
    auto wf = random_field();
    io::write_snapshot(f.path, wf);
    auto back = io::read_snapshot(f.path);
    CHECK(back.grid.nx == 16);
    CHECK(back.grid.ny == 4);
    CHECK(back.grid.nz == 8);
    CHECK(back.grid.dx == wf.grid.dx);  // exact
    CHECK(back.grid.dy == wf.grid.dy);
    CHECK(back.grid.dz == wf.grid.dz);
    REQUIRE(back.psi.size() == wf.psi.size());
    for (std::size_t i = 0; i < wf.psi.size(); ++i) CHECK(back.psi[i] == wf.psi[i]);
    // extents rebuild as spacing * count
    CHECK(back.grid.Lx == doctest::Approx(12e-6).epsilon(1e-15));
}

TEST_CASE("header size matches the documented layout") {
    TempFile f("snap_size.snap");
    auto wf = random_field();
    io::write_snapshot(f.path, wf);
    std::ifstream in(f.path, std::ios::binary | std::ios::ate);
    const auto bytes = static_cast<std::size_t>(in.tellg());
    CHECK(bytes == 60 + wf.psi.size() * 16);
}

TEST_CASE("bad magic is rejected") {
    TempFile f("snap_magic.snap");
    {
        std::ofstream out(f.path, std::ios::binary);
        out << "NOTASNAPxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxx";
    }
    CHECK_THROWS_AS(io::read_snapshot(f.path), std::runtime_error);
}

TEST_CASE("wrong version is rejected") {
    TempFile f("snap_version.snap");
    auto wf = random_field();
    io::write_snapshot(f.path, wf);
    {
        std::fstream io(f.path, std::ios::binary | std::ios::in | std::ios::out);
        io.seekp(8);
        const std::uint32_t v = 999;
        io.write(reinterpret_cast<const char*>(&v), 4);
    }
    CHECK_THROWS_AS(io::read_snapshot(f.path), std::runtime_error);
}

TEST_CASE("truncated payload is rejected") {
    TempFile f("snap_trunc.snap");
    auto wf = random_field();
    io::write_snapshot(f.path, wf);
    std::string data;
    {
        std::ifstream in(f.path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        data = ss.str();
    }
    {
        std::ofstream out(f.path, std::ios::binary | std::ios::trunc);
        out.write(data.data(), static_cast<std::streamsize>(data.size() - 16));
    }
    CHECK_THROWS_AS(io::read_snapshot(f.path), std::runtime_error);
}

TEST_CASE("absurd grid counts are rejected before allocation") {
    TempFile f("snap_dims.snap");
    auto wf = random_field();
    io::write_snapshot(f.path, wf);
    {
        std::fstream io(f.path, std::ios::binary | std::ios::in | std::ios::out);
        io.seekp(12);
        const std::uint64_t n = 1ull << 40;
        io.write(reinterpret_cast<const char*>(&n), 8);
    }
    CHECK_THROWS_AS(io::read_snapshot(f.path), std::runtime_error);
}

TEST_CASE("missing file is rejected") {
    CHECK_THROWS_AS(io::read_snapshot("no_such_file.snap"), std::runtime_error);
}
