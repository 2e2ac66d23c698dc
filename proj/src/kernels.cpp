#include "mns/kernels.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mns {

namespace {

double sumsq(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

KernelFamily build(KernelKind kind, int d, std::int64_t N, double e, double cutoff) {
    KernelFamily f;
    f.kind = kind;
    f.d = d;
    f.N = N;
    f.exponent = e;
    const double Nd = static_cast<double>(N);
    f.inv_bw = std::pow(Nd, e / d);
    f.bandwidth = 1.0 / f.inv_bw;
    f.amp_kernel = std::pow(Nd, e) * std::pow(2.0 * std::numbers::pi, -0.5 * d);
    f.amp_moll = std::pow(Nd, e) * std::pow(std::numbers::pi, -0.5 * d);
    f.cutoff = cutoff;
    return f;
}

}  // namespace

KernelFamily KernelFamily::make(KernelKind kind, int d, std::int64_t N, double e,
                                double cutoff) {
    return build(kind, d, N, e, cutoff);
}

KernelFamily KernelFamily::potential(const ScalingParams& p, double cutoff_cap) {
    const double bw = std::pow(static_cast<double>(p.N), -p.beta / p.d);
    return build(KernelKind::potential, p.d, p.N, p.beta,
                 std::min(6.0 * bw, cutoff_cap));
}

KernelFamily KernelFamily::friction(const ScalingParams& p, double cutoff_cap) {
    const double bw = std::pow(static_cast<double>(p.N), -p.gamma / p.d);
    return build(KernelKind::friction, p.d, p.N, p.gamma,
                 std::min(6.0 * bw, cutoff_cap));
}

double KernelFamily::mollifier(std::span<const double> x) const {
    assert(static_cast<int>(x.size()) == d);
    const double r2 = sumsq(x);
    if (r2 >= cutoff * cutoff) return 0.0;
    return amp_moll * std::exp(-inv_bw * inv_bw * r2);
}

double KernelFamily::kernel_scalar(double r2) const {
    if (r2 >= cutoff * cutoff) return 0.0;
    return amp_kernel * std::exp(-0.5 * inv_bw * inv_bw * r2);
}

double KernelFamily::kernel(std::span<const double> x) const {
    assert(static_cast<int>(x.size()) == d);
    return kernel_scalar(sumsq(x));
}

double KernelFamily::grad_scalar(double r2) const {
    return -inv_bw * inv_bw * kernel_scalar(r2);
}

void KernelFamily::grad_kernel(std::span<const double> x, std::span<double> out) const {
    assert(static_cast<int>(x.size()) == d && out.size() == x.size());
    const double g = grad_scalar(sumsq(x));
    for (int i = 0; i < d; ++i) out[i] = g * x[i];
}

double KernelFamily::zeta_scalar(double r2) const {
    assert(kind == KernelKind::friction);
    const double s2 = inv_bw * inv_bw;
    return s2 * s2 * kernel_scalar(r2);
}

void KernelFamily::zeta(std::span<const double> x, std::span<double> out_dxd) const {
    assert(static_cast<int>(x.size()) == d &&
           static_cast<int>(out_dxd.size()) == d * d);
    const double z = zeta_scalar(sumsq(x));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out_dxd[i * d + j] = z * x[i] * x[j];
}

double gaussian_moment(std::span<const int> alpha, int q, int qp,
                       const ScalingParams& p, int max_order) {
    const int d = p.d;
    if (static_cast<int>(alpha.size()) != d)
        throw std::invalid_argument("gaussian_moment: alpha size != d");
    if (q < 0 || q >= d || qp < 0 || qp >= d)
        throw std::invalid_argument("gaussian_moment: component out of range");
    int order = 0;
    for (int a : alpha) {
        if (a < 0) throw std::invalid_argument("gaussian_moment: negative entry");
        order += a;
    }
    if (order > max_order)
        throw std::invalid_argument("gaussian_moment: |alpha| exceeds max order");

    // m = alpha + e_q + e_{q'}; odd entry -> 0 by symmetry
    double dblfact = 1.0;
    for (int i = 0; i < d; ++i) {
        int m = alpha[i] + (i == q ? 1 : 0) + (i == qp ? 1 : 0);
        if (m % 2 != 0) return 0.0;
        for (int k = m - 1; k >= 3; k -= 2) dblfact *= k;
    }
    const double scale =
        std::pow(static_cast<double>(p.N), p.gamma * (4.0 - (order + 2)) / d);
    return scale * dblfact;
}

}  // namespace mns
