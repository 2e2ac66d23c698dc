#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mns/params.hpp"

namespace mns {

enum class KernelKind { potential, friction };

// One Gaussian scaling family. With e the exponent (beta or gamma) and
// s = N^{e/d}:
//   mollifier(x) = N^e pi^{-d/2} exp(-s^2 |x|^2)        (the convolution root)
//   kernel(x)    = N^e (2pi)^{-d/2} exp(-s^2 |x|^2 / 2) (= mollifier * mollifier)
//   grad_kernel  = -N^e s^2 x (2pi)^{-d/2} exp(-s^2|x|^2/2)
// The friction family additionally exposes the rank-one matrix
//   zeta(x) = s^4 kernel(x) x x^T.
// Every evaluation is exactly 0 when |x| >= cutoff.
struct KernelFamily {
    KernelKind kind;
    int d;
    std::int64_t N;
    double exponent;   // beta or gamma
    double inv_bw;     // N^{e/d}
    double bandwidth;  // N^{-e/d}
    double amp_kernel; // N^e (2pi)^{-d/2}
    double amp_moll;   // N^e pi^{-d/2}
    double cutoff;     // truncation radius, position units

    // cutoff_cap bounds the default 6-bandwidth cutoff (pass L/2 for a
    // periodic box; infinity keeps the full 6-bandwidth radius).
    static KernelFamily potential(const ScalingParams& p, double cutoff_cap);
    static KernelFamily friction(const ScalingParams& p, double cutoff_cap);
    // direct constructor for tests and non-default cutoffs
    static KernelFamily make(KernelKind kind, int d, std::int64_t N, double exponent,
                             double cutoff);

    double mollifier(std::span<const double> x) const;
    double kernel(std::span<const double> x) const;
    void grad_kernel(std::span<const double> x, std::span<double> out) const;
    // scalar radial factors on |x|^2 (already cutoff-aware); zeta(x) =
    // zeta_scalar(|x|^2) * x x^T
    double kernel_scalar(double r2) const;
    double grad_scalar(double r2) const;   // grad_kernel(x) = grad_scalar(|x|^2) * x
    double zeta_scalar(double r2) const;
    void zeta(std::span<const double> x, std::span<double> out_dxd) const;
};

// Closed-form friction moment
//   h^alpha_{N,q,q'} = \int x^alpha x_q x_{q'} N^{4 gamma/d} psi_N(x) dx
// = 0 unless every entry of alpha + e_q + e_{q'} is even, else
//   N^{gamma (4 - |alpha|-2)/d} * prod_i (alpha_i + [i==q] + [i==q'] - 1)!!.
// Throws std::invalid_argument for |alpha| > max_order or bad q/q'.
double gaussian_moment(std::span<const int> alpha, int q, int qp,
                       const ScalingParams& p, int max_order = 8);

}  // namespace mns
