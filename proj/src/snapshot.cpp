#include "mns/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace mns {

static_assert(std::endian::native == std::endian::little,
              "snapshot io assumes a little-endian host");

namespace {

template <class T>
void put(std::ofstream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw std::runtime_error("snapshot: truncated file");
    return v;
}

void put_doubles(std::ofstream& os, const std::vector<double>& v) {
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void get_doubles(std::ifstream& is, std::vector<double>& v) {
    is.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!is) throw std::runtime_error("snapshot: truncated file");
}

void check_magic(std::ifstream& is, const char* want) {
    char m[4];
    is.read(m, 4);
    if (!is || std::memcmp(m, want, 4) != 0)
        throw std::runtime_error("snapshot: bad magic");
    const auto version = get<std::uint16_t>(is);
    if (version != kSnapshotVersion)
        throw std::runtime_error("snapshot: unsupported version");
}

}  // namespace

void write_particles(const std::string& path, const ParticleState& s) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("snapshot: cannot open " + path);
    os.write("MNSP", 4);
    put<std::uint16_t>(os, kSnapshotVersion);
    put<std::uint64_t>(os, static_cast<std::uint64_t>(s.N));
    put<std::uint16_t>(os, static_cast<std::uint16_t>(s.d));
    put<double>(os, s.L);
    put<double>(os, s.t);
    put_doubles(os, s.X);
    put_doubles(os, s.V);
    if (!os) throw std::runtime_error("snapshot: write failed for " + path);
}

ParticleState read_particles(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("snapshot: cannot open " + path);
    check_magic(is, "MNSP");
    ParticleState s;
    s.N = static_cast<std::int64_t>(get<std::uint64_t>(is));
    s.d = get<std::uint16_t>(is);
    s.L = get<double>(is);
    s.t = get<double>(is);
    s.X.resize(s.N * s.d);
    s.V.resize(s.N * s.d);
    get_doubles(is, s.X);
    get_doubles(is, s.V);
    return s;
}

void write_fields(const std::string& path, const FieldState& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("snapshot: cannot open " + path);
    os.write("MNSF", 4);
    put<std::uint16_t>(os, kSnapshotVersion);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.g.M));
    put<std::uint16_t>(os, static_cast<std::uint16_t>(f.g.d));
    put<double>(os, f.g.L);
    put<double>(os, f.t);
    put_doubles(os, f.rho);
    put_doubles(os, f.ups);
    if (!os) throw std::runtime_error("snapshot: write failed for " + path);
}

FieldState read_fields(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("snapshot: cannot open " + path);
    check_magic(is, "MNSF");
    GridSpec g;
    g.M = static_cast<int>(get<std::uint32_t>(is));
    g.d = get<std::uint16_t>(is);
    g.L = get<double>(is);
    const double t = get<double>(is);
    std::vector<double> rho(g.cells()), ups(g.cells() * g.d);
    get_doubles(is, rho);
    get_doubles(is, ups);
    FieldState f = make_field(g, std::move(rho), std::move(ups));
    f.t = t;
    return f;
}

std::string snapshot_magic(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("snapshot: cannot open " + path);
    char m[4];
    is.read(m, 4);
    if (!is) throw std::runtime_error("snapshot: truncated file");
    return std::string(m, 4);
}

}  // namespace mns
