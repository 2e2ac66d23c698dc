#pragma once

#include <span>
#include <vector>

#include "mns/grid.hpp"
#include "mns/kernels.hpp"
#include "mns/particles.hpp"

namespace mns {

// Mollified empirical fields on the grid:
//   density(x)  = (1/N) sum_k phi^r(x - X_k)
//   momentum(x) = (1/N) sum_k V_k phi^r(x - X_k)   (d planes)
struct EmpiricalDeposit {
    GridSpec g;
    std::vector<double> density;
    std::vector<double> momentum;
};

// Separable evaluation of the Gaussian mollifier (per-axis stencils, outer
// product); truncation region is the cube |x_i| <= cutoff. Requires the grid
// to resolve the mollifier: h <= stddev/4, else throws (GRID_TOO_COARSE).
EmpiricalDeposit deposit(const ParticleState& s, const KernelFamily& fam,
                         const GridSpec& g);

// Multilinear periodic interpolation of one scalar plane.
double interpolate(std::span<const double> field, const GridSpec& g,
                   std::span<const double> x);

// d-component interpolation of a plane-major vector field.
void interpolate_vec(std::span<const double> planes, const GridSpec& g,
                     std::span<const double> x, std::span<double> out);

struct EnergyBreakdown {
    double kinetic = 0.0;     // (1/N) sum_k |V_k - ups(X_k)|^2
    double density_l2 = 0.0;  // ||density - rho||_{L^2}^2 (grid quadrature)
    double total = 0.0;
};

// The empirical energy against reference fields rho (one plane) and ups
// (d planes) on the same grid.
EnergyBreakdown energy(const ParticleState& s, std::span<const double> rho,
                       std::span<const double> ups, const EmpiricalDeposit& dep);

struct PairResult {
    double s_pair = 0.0;              // <S^N, f>
    std::vector<double> v_pair;       // <V^N, f> per component
};

// Raw-measure pairings of a gridded test function f: <S,f> = (1/N) sum f(X_k),
// <V,f>_q = (1/N) sum V_k,q f(X_k), f evaluated by interpolation.
PairResult pair(const ParticleState& s, std::span<const double> f, const GridSpec& g);

}  // namespace mns
