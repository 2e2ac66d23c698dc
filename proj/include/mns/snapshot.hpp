#pragma once

#include <string>

#include "mns/particles.hpp"
#include "mns/spde.hpp"

namespace mns {

// Little-endian binary snapshots.
//   particles: "MNSP", u16 version, u64 N, u16 d, f64 L, f64 t,
//              X row-major (N*d f64), V row-major (N*d f64)
//   fields:    "MNSF", u16 version, u32 M, u16 d, f64 L, f64 t,
//              rho (M^d f64), ups plane-major (d * M^d f64)
inline constexpr std::uint16_t kSnapshotVersion = 1;

void write_particles(const std::string& path, const ParticleState& s);
ParticleState read_particles(const std::string& path);

void write_fields(const std::string& path, const FieldState& f);
FieldState read_fields(const std::string& path);

// "MNSP" or "MNSF" or throws
std::string snapshot_magic(const std::string& path);

}  // namespace mns
