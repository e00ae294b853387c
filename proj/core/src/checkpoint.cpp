#include "llb/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "llb/errors.hpp"

namespace llb {

namespace {
constexpr char kMagic[4] = {'L', 'L', 'B', 'S'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
template <typename T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}
}  // namespace

void write_checkpoint(const std::string& path, const SpectralField& u, double time) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw MissingData("cannot open checkpoint for writing: " + path);
    os.write(kMagic, 4);
    put<std::uint32_t>(os, kVersion);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(u.grid.n));
    put<double>(os, u.grid.box_length);
    put<double>(os, time);
    for (const cplx& z : u.coeffs) {
        put<double>(os, z.real());
        put<double>(os, z.imag());
    }
    if (!os) throw MissingData("short write on checkpoint: " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw MissingData("cannot open checkpoint: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw MissingData("bad checkpoint magic in " + path);
    const auto version = get<std::uint32_t>(is);
    if (version != kVersion)
        throw MissingData("unsupported checkpoint version in " + path);
    const auto n = get<std::uint32_t>(is);
    const double L = get<double>(is);
    const double time = get<double>(is);
    Checkpoint cp;
    cp.field = SpectralField(Grid(static_cast<int>(n), L), true);
    cp.time = time;
    for (cplx& z : cp.field.coeffs) {
        const double re = get<double>(is);
        const double im = get<double>(is);
        z = cplx(re, im);
    }
    if (!is) throw MissingData("truncated checkpoint: " + path);
    return cp;
}

}  // namespace llb
