#include "mns/besov.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mns {

namespace {

double glue(double t) { return t <= 0.0 ? 0.0 : std::exp(-1.0 / t); }

// smooth monotone transition: 1 for r <= 1/lambda, 0 for r >= lambda
double theta(double r, double lambda) {
    const double a = 1.0 / lambda;
    if (r <= a) return 1.0;
    if (r >= lambda) return 0.0;
    const double s = (r - a) / (lambda - a);
    const double g1 = glue(1.0 - s);
    return g1 / (g1 + glue(s));
}

std::vector<double> lattice_abs_xi(const GridSpec& g) {
    const std::int64_t n = g.cells();
    std::vector<double> out(n);
    std::vector<int> iv(g.d);
    const double base = 2.0 * std::numbers::pi / g.L;
    for (std::int64_t c = 0; c < n; ++c) {
        g.coords(c, iv.data());
        double s2 = 0.0;
        for (int a = 0; a < g.d; ++a) {
            const double x = base * freq_of_bin(iv[a], g.M);
            s2 += x * x;
        }
        out[c] = std::sqrt(s2);
    }
    return out;
}

}  // namespace

DyadicPartition build_partition(double lambda, const GridSpec& g) {
    const double root2 = std::sqrt(2.0);
    if (!(lambda > 1.0 + 1e-9) || !(lambda < root2 - 1e-9))
        throw std::invalid_argument("PARTITION_INVALID: lambda must lie in (1, sqrt 2)");
    if (!is_pow2(g.M))
        throw std::invalid_argument("PARTITION_INVALID: grid size must be a power of two");

    DyadicPartition P;
    P.lambda = lambda;
    P.g = g;
    const std::vector<double> axi = lattice_abs_xi(g);
    const double xi_max = *std::max_element(axi.begin(), axi.end());
    P.j_max = std::max(0, static_cast<int>(std::ceil(std::log2(lambda * xi_max))));

    const std::int64_t n = g.cells();
    P.mult.assign(P.j_max + 2, std::vector<double>(n));
    for (std::int64_t c = 0; c < n; ++c) {
        P.mult[0][c] = theta(axi[c], lambda);  // chi
        for (int j = 0; j <= P.j_max; ++j) {
            const double r = std::ldexp(axi[c], -j);  // 2^{-j} |xi|
            P.mult[j + 1][c] = theta(0.5 * r, lambda) - theta(r, lambda);
        }
    }

    // invariants: range, partition of unity, disjointness beyond neighbors
    for (const auto& pl : P.mult)
        for (double v : pl)
            if (v < -1e-12 || v > 1.0 + 1e-12)
                throw std::invalid_argument("PARTITION_INVALID: multiplier out of [0,1]");
    for (std::int64_t c = 0; c < n; ++c) {
        double sum = 0.0;
        for (const auto& pl : P.mult) sum += pl[c];
        if (std::abs(sum - 1.0) > 1e-10)
            throw std::invalid_argument("PARTITION_INVALID: partition of unity failed");
        for (std::size_t i = 0; i + 2 < P.mult.size(); ++i)
            for (std::size_t j = i + 2; j < P.mult.size(); ++j)
                if (P.mult[i][c] * P.mult[j][c] > 1e-14)
                    throw std::invalid_argument(
                        "PARTITION_INVALID: non-adjacent blocks overlap");
    }
    return P;
}

void block(std::span<const double> f, int j, const DyadicPartition& P,
           std::span<double> out) {
    const std::int64_t n = P.g.cells();
    assert(static_cast<std::int64_t>(f.size()) == n &&
           static_cast<std::int64_t>(out.size()) == n);
    if (j < -1) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    if (j > P.j_max) {  // above the lattice band: multiplier is identically 0
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    std::vector<cplx> spec(n);
    for (std::int64_t c = 0; c < n; ++c) spec[c] = f[c];
    fft_nd(spec.data(), P.g, false);
    const auto& m = P.multiplier(j);
    for (std::int64_t c = 0; c < n; ++c) spec[c] *= m[c];
    fft_nd(spec.data(), P.g, true);
    for (std::int64_t c = 0; c < n; ++c) out[c] = spec[c].real();
}

void validate_norm_spec(const NormSpec& spec) {
    const bool p_ok = spec.family == NormFamily::triebel_lizorkin
                          ? (spec.p > 1.0 && std::isfinite(spec.p))
                          : spec.p >= 1.0;
    if (!p_ok) throw std::invalid_argument("norm: p out of range for the family");
    if (!(spec.r > 1.0)) throw std::invalid_argument("norm: r must exceed 1");
}

double lp_norm(std::span<const double> f, const GridSpec& g, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (double v : f) acc += std::pow(std::abs(v), p);
    return std::pow(acc * g.dV(), 1.0 / p);
}

double norm(std::span<const double> f, const NormSpec& spec,
            const DyadicPartition& P) {
    validate_norm_spec(spec);
    const std::int64_t n = P.g.cells();
    assert(static_cast<std::int64_t>(f.size()) == n);

    // one forward transform, one inverse per block
    std::vector<cplx> spectrum(n), work(n);
    for (std::int64_t c = 0; c < n; ++c) spectrum[c] = f[c];
    fft_nd(spectrum.data(), P.g, false);
    std::vector<double> blk(n);

    const bool r_inf = std::isinf(spec.r);
    if (spec.family == NormFamily::besov) {
        double acc = 0.0, mx = 0.0;
        for (int j = -1; j <= P.j_max; ++j) {
            const auto& m = P.multiplier(j);
            for (std::int64_t c = 0; c < n; ++c) work[c] = spectrum[c] * m[c];
            fft_nd(work.data(), P.g, true);
            for (std::int64_t c = 0; c < n; ++c) blk[c] = work[c].real();
            const double a = std::pow(2.0, j * spec.s) * lp_norm(blk, P.g, spec.p);
            if (r_inf)
                mx = std::max(mx, a);
            else
                acc += std::pow(a, spec.r);
        }
        return r_inf ? mx : std::pow(acc, 1.0 / spec.r);
    }

    // Triebel-Lizorkin: aggregate pointwise over j first
    std::vector<double> point(n, 0.0);
    for (int j = -1; j <= P.j_max; ++j) {
        const auto& m = P.multiplier(j);
        for (std::int64_t c = 0; c < n; ++c) work[c] = spectrum[c] * m[c];
        fft_nd(work.data(), P.g, true);
        const double w = std::pow(2.0, j * spec.s);
        if (r_inf) {
            for (std::int64_t c = 0; c < n; ++c)
                point[c] = std::max(point[c], w * std::abs(work[c].real()));
        } else {
            for (std::int64_t c = 0; c < n; ++c)
                point[c] += std::pow(w * std::abs(work[c].real()), spec.r);
        }
    }
    if (!r_inf)
        for (std::int64_t c = 0; c < n; ++c) point[c] = std::pow(point[c], 1.0 / spec.r);
    return lp_norm(point, P.g, spec.p);
}

namespace {

template <class Weight>
void cic_scatter(const ParticleState& s, const GridSpec& g, Weight&& wk,
                 std::vector<double>& out) {
    const int d = g.d;
    const double h = g.h();
    const double unit = 1.0 / (static_cast<double>(s.N) * g.dV());
    int c0[8];
    double fr[8];
    for (std::int64_t k = 0; k < s.N; ++k) {
        for (int a = 0; a < d; ++a) {
            const double u = wrap_coord(s.X[k * d + a], g.L) / h;
            const int i = static_cast<int>(std::floor(u));
            c0[a] = i >= g.M ? 0 : i;
            fr[a] = u - i;
        }
        const double wp = unit * wk(k);
        for (int corner = 0; corner < (1 << d); ++corner) {
            double w = wp;
            std::int64_t idx = 0;
            for (int a = 0; a < d; ++a) {
                const int up = (corner >> a) & 1;
                w *= up ? fr[a] : 1.0 - fr[a];
                idx += g.stride(a) * wrap_cell(c0[a] + up, g.M);
            }
            out[idx] += w;
        }
    }
}

}  // namespace

std::vector<double> cic_density(const ParticleState& s, const GridSpec& g) {
    std::vector<double> out(g.cells(), 0.0);
    cic_scatter(s, g, [](std::int64_t) { return 1.0; }, out);
    return out;
}

std::vector<double> cic_momentum(const ParticleState& s, const GridSpec& g) {
    const std::int64_t n = g.cells();
    std::vector<double> out(n * g.d, 0.0);
    for (int q = 0; q < g.d; ++q) {
        std::vector<double> plane(n, 0.0);
        cic_scatter(s, g, [&](std::int64_t k) { return s.V[k * g.d + q]; }, plane);
        std::copy(plane.begin(), plane.end(), out.begin() + q * n);
    }
    return out;
}

DistanceResult distribution_distance(const ParticleState& s,
                                     std::span<const double> rho,
                                     std::span<const double> ups, double alpha,
                                     double r_tilde, NormFamily family,
                                     const DyadicPartition& P) {
    const int d = P.g.d;
    if (!(alpha > 0.5 * d + 1.0))
        throw std::invalid_argument("distribution_distance: alpha must exceed d/2 + 1");
    const std::int64_t n = P.g.cells();
    NormSpec spec{family, -alpha, 2.0, r_tilde};

    DistanceResult res;
    std::vector<double> diff = cic_density(s, P.g);
    for (std::int64_t c = 0; c < n; ++c) diff[c] -= rho[c];
    res.dist_s = norm(diff, spec, P);

    const std::vector<double> mom = cic_momentum(s, P.g);
    double acc = 0.0;
    for (int q = 0; q < d; ++q) {
        for (std::int64_t c = 0; c < n; ++c)
            diff[c] = mom[q * n + c] - rho[c] * ups[q * n + c];
        const double nq = norm(diff, spec, P);
        acc += nq * nq;
    }
    res.dist_v = std::sqrt(acc);
    return res;
}

}  // namespace mns
