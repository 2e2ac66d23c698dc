#pragma once

#include <span>
#include <vector>

namespace mns {

enum class NoiseKind { constant, smooth_bump };

// Per-component multiplicative noise coefficient sigma_q(x). The same d
// Brownian components drive every particle and the limit field; sigma only
// shapes the amplitude in space.
struct NoiseCoefficient {
    NoiseKind kind = NoiseKind::constant;
    int d = 2;
    double L = 1.0;                 // box side, for the periodic bump
    std::vector<double> amplitude;  // per component, size d
    std::vector<double> center;     // bump center, size d
    double width = 1.0;             // bump width

    static NoiseCoefficient constant(int d, std::span<const double> amp);
    static NoiseCoefficient smooth_bump(int d, double L, std::span<const double> amp,
                                        std::span<const double> center, double width);

    // sigma_q(x); exactly periodic and smooth on the torus
    double eval(std::span<const double> x, int q) const;
    void eval_all(std::span<const double> x, std::span<double> out) const;
    double max_amplitude() const;
};

}  // namespace mns
