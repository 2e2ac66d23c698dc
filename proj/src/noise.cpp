#include "mns/noise.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mns {

NoiseCoefficient NoiseCoefficient::constant(int d, std::span<const double> amp) {
    if (static_cast<int>(amp.size()) != d)
        throw std::invalid_argument("noise: amplitude size != d");
    NoiseCoefficient n;
    n.kind = NoiseKind::constant;
    n.d = d;
    n.amplitude.assign(amp.begin(), amp.end());
    return n;
}

NoiseCoefficient NoiseCoefficient::smooth_bump(int d, double L,
                                               std::span<const double> amp,
                                               std::span<const double> center,
                                               double width) {
    if (static_cast<int>(amp.size()) != d || static_cast<int>(center.size()) != d)
        throw std::invalid_argument("noise: bump parameter size != d");
    if (!(width > 0.0) || !(L > 0.0))
        throw std::invalid_argument("noise: bump width and L must be positive");
    NoiseCoefficient n;
    n.kind = NoiseKind::smooth_bump;
    n.d = d;
    n.L = L;
    n.amplitude.assign(amp.begin(), amp.end());
    n.center.assign(center.begin(), center.end());
    n.width = width;
    return n;
}

double NoiseCoefficient::eval(std::span<const double> x, int q) const {
    assert(q >= 0 && q < d);
    if (kind == NoiseKind::constant) return amplitude[q];
    // per-axis exp(-2 (L/2pi w)^2 sin^2(pi (x-c)/L)): matches the Gaussian
    // bump exp(-|x-c|^2/2w^2) to second order at the center, smooth on the torus
    const double k = L / (2.0 * std::numbers::pi * width);
    double expo = 0.0;
    for (int i = 0; i < d; ++i) {
        const double s = std::sin(std::numbers::pi * (x[i] - center[i]) / L);
        expo += s * s;
    }
    return amplitude[q] * std::exp(-2.0 * k * k * expo);
}

void NoiseCoefficient::eval_all(std::span<const double> x, std::span<double> out) const {
    assert(static_cast<int>(out.size()) == d);
    if (kind == NoiseKind::constant) {
        std::copy(amplitude.begin(), amplitude.end(), out.begin());
        return;
    }
    for (int q = 0; q < d; ++q) out[q] = eval(x, q);
}

double NoiseCoefficient::max_amplitude() const {
    double m = 0.0;
    for (double a : amplitude) m = std::max(m, std::abs(a));
    return m;
}

}  // namespace mns
