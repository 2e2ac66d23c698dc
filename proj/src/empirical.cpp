#include "mns/empirical.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mns {

EmpiricalDeposit deposit(const ParticleState& s, const KernelFamily& fam,
                         const GridSpec& g) {
    assert(g.d == s.d && std::abs(g.L - s.L) < 1e-12 * s.L);
    const int d = g.d;
    const double h = g.h();
    // mollifier stddev is bandwidth/sqrt(2); demand >= 4 cells per stddev
    const double stddev = fam.bandwidth / std::sqrt(2.0);
    if (h > stddev / 4.0)
        throw std::invalid_argument(
            "GRID_TOO_COARSE: deposit grid must resolve the mollifier "
            "(>= 4 cells per stddev)");

    EmpiricalDeposit dep;
    dep.g = g;
    dep.density.assign(g.cells(), 0.0);
    dep.momentum.assign(g.cells() * d, 0.0);

    // per-axis factor: kernel = prod_a N^{e/d} pi^{-1/2} exp(-(s*dx_a)^2)
    const double axis_amp = fam.inv_bw / std::sqrt(std::numbers::pi);
    // clamp the stencil to the nearest periodic image so every cell is
    // visited at most once per particle
    const int reach = std::min(static_cast<int>(std::floor(fam.cutoff / h)) + 1,
                               (g.M - 1) / 2);
    const int span_n = 2 * reach + 1;

    const double wnorm = 1.0 / static_cast<double>(s.N);
    std::vector<double> w(span_n * d);
    std::vector<std::int64_t> widx(span_n * d);  // wrapped index offset per axis
    std::vector<int> iv(d);
    const std::int64_t ncell = g.cells();

    for (std::int64_t k = 0; k < s.N; ++k) {
        for (int a = 0; a < d; ++a) {
            const double xa = s.X[k * d + a];
            const int c0 = static_cast<int>(std::floor(xa / h));
            const std::int64_t st = g.stride(a);
            for (int j = 0; j < span_n; ++j) {
                const int cell = c0 - reach + j;
                const double dx = cell * h - xa;
                w[a * span_n + j] =
                    std::abs(dx) >= fam.cutoff
                        ? 0.0
                        : axis_amp * std::exp(-fam.inv_bw * fam.inv_bw * dx * dx);
                widx[a * span_n + j] = st * wrap_cell(cell, g.M);
            }
        }
        const double* vk = &s.V[k * d];
        if (d == 2) {
            for (int j1 = 0; j1 < span_n; ++j1) {
                const double w1 = wnorm * w[span_n + j1];
                if (w1 == 0.0) continue;
                const std::int64_t row = widx[span_n + j1];
                for (int j0 = 0; j0 < span_n; ++j0) {
                    const double wk = w1 * w[j0];
                    if (wk == 0.0) continue;
                    const std::int64_t idx = row + widx[j0];
                    dep.density[idx] += wk;
                    dep.momentum[idx] += wk * vk[0];
                    dep.momentum[ncell + idx] += wk * vk[1];
                }
            }
            continue;
        }
        // generic-dimension odometer over the stencil cube
        std::fill(iv.begin(), iv.end(), 0);
        while (true) {
            double wk = wnorm;
            std::int64_t idx = 0;
            for (int a = 0; a < d; ++a) {
                wk *= w[a * span_n + iv[a]];
                idx += widx[a * span_n + iv[a]];
            }
            if (wk != 0.0) {
                dep.density[idx] += wk;
                for (int q = 0; q < d; ++q) dep.momentum[q * ncell + idx] += wk * vk[q];
            }
            int a = 0;
            for (; a < d; ++a) {
                if (++iv[a] < span_n) break;
                iv[a] = 0;
            }
            if (a == d) break;
        }
    }
    return dep;
}

double interpolate(std::span<const double> field, const GridSpec& g,
                   std::span<const double> x) {
    assert(static_cast<std::int64_t>(field.size()) == g.cells());
    const int d = g.d;
    const double h = g.h();
    int c0[8];
    double fr[8];
    for (int a = 0; a < d; ++a) {
        const double u = wrap_coord(x[a], g.L) / h;
        const int i = static_cast<int>(std::floor(u));
        c0[a] = i >= g.M ? 0 : i;
        fr[a] = u - i;
    }
    double acc = 0.0;
    for (int corner = 0; corner < (1 << d); ++corner) {
        double wgt = 1.0;
        std::int64_t idx = 0;
        for (int a = 0; a < d; ++a) {
            const int up = (corner >> a) & 1;
            wgt *= up ? fr[a] : 1.0 - fr[a];
            idx += g.stride(a) * wrap_cell(c0[a] + up, g.M);
        }
        acc += wgt * field[idx];
    }
    return acc;
}

void interpolate_vec(std::span<const double> planes, const GridSpec& g,
                     std::span<const double> x, std::span<double> out) {
    const std::int64_t n = g.cells();
    for (int q = 0; q < g.d; ++q)
        out[q] = interpolate(planes.subspan(q * n, n), g, x);
}

EnergyBreakdown energy(const ParticleState& s, std::span<const double> rho,
                       std::span<const double> ups, const EmpiricalDeposit& dep) {
    const int d = s.d;
    const GridSpec& g = dep.g;
    EnergyBreakdown e;
    double u[8];
    for (std::int64_t k = 0; k < s.N; ++k) {
        interpolate_vec(ups, g, std::span(&s.X[k * d], d), std::span(u, d));
        double dv2 = 0.0;
        for (int q = 0; q < d; ++q) {
            const double dv = s.V[k * d + q] - u[q];
            dv2 += dv * dv;
        }
        e.kinetic += dv2;
    }
    e.kinetic /= static_cast<double>(s.N);
    const std::int64_t n = g.cells();
    for (std::int64_t i = 0; i < n; ++i) {
        const double df = dep.density[i] - rho[i];
        e.density_l2 += df * df;
    }
    e.density_l2 *= g.dV();
    e.total = e.kinetic + e.density_l2;
    return e;
}

PairResult pair(const ParticleState& s, std::span<const double> f,
                const GridSpec& g) {
    const int d = s.d;
    PairResult r;
    r.v_pair.assign(d, 0.0);
    for (std::int64_t k = 0; k < s.N; ++k) {
        const double fk = interpolate(f, g, std::span(&s.X[k * d], d));
        r.s_pair += fk;
        for (int q = 0; q < d; ++q) r.v_pair[q] += s.V[k * d + q] * fk;
    }
    const double invN = 1.0 / static_cast<double>(s.N);
    r.s_pair *= invN;
    for (double& v : r.v_pair) v *= invN;
    return r;
}

}  // namespace mns
