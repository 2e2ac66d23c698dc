#include "mns/spde.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mns {

bool FieldState::finite() const {
    for (double v : rho)
        if (!std::isfinite(v)) return false;
    for (double v : ups)
        if (!std::isfinite(v)) return false;
    return true;
}

double FieldState::max_rho() const {
    double m = 0.0;
    for (double v : rho) m = std::max(m, std::abs(v));
    return m;
}

double FieldState::min_rho() const {
    double m = rho.empty() ? 0.0 : rho[0];
    for (double v : rho) m = std::min(m, v);
    return m;
}

double FieldState::max_ups() const {
    double m = 0.0;
    for (double v : ups) m = std::max(m, std::abs(v));
    return m;
}

double FieldState::mass() const {
    double s = 0.0;
    for (double v : rho) s += v;
    return s * g.dV();
}

FieldState make_field(const GridSpec& g, std::vector<double> rho0,
                      std::vector<double> ups0) {
    if (static_cast<std::int64_t>(rho0.size()) != g.cells() ||
        static_cast<std::int64_t>(ups0.size()) != g.cells() * g.d)
        throw std::invalid_argument("make_field: field size mismatch");
    FieldState f;
    f.g = g;
    f.rho = std::move(rho0);
    f.ups = std::move(ups0);
    double mean = 0.0;
    for (double v : f.rho) mean += v;
    mean /= static_cast<double>(g.cells());
    f.rho_floor = 1e-6 * mean;
    return f;
}

std::vector<double>& SpdeWorkspace::plane(std::size_t i, std::int64_t n) {
    if (planes.size() <= i) planes.resize(i + 1);
    planes[i].resize(n);
    return planes[i];
}

void central_diff(const double* in, double* out, const GridSpec& g, int axis) {
    const int M = g.M;
    const std::int64_t s = g.stride(axis);
    const std::int64_t block = s * M;
    const std::int64_t nblocks = g.cells() / block;
    const double inv2h = 1.0 / (2.0 * g.h());
    for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::int64_t base = b * block;
        for (std::int64_t lo = 0; lo < s; ++lo) {
            const double* col = in + base + lo;
            double* oc = out + base + lo;
            oc[0] = (col[s] - col[(M - 1) * s]) * inv2h;
            for (int c = 1; c < M - 1; ++c)
                oc[c * s] = (col[(c + 1) * s] - col[(c - 1) * s]) * inv2h;
            oc[(M - 1) * s] = (col[0] - col[(M - 2) * s]) * inv2h;
        }
    }
}

void continuity_rhs(const FieldState& f, std::span<double> out, SpdeWorkspace& ws) {
    const std::int64_t n = f.g.cells();
    assert(static_cast<std::int64_t>(out.size()) == n);
    auto& flux = ws.plane(0, n);
    auto& dflux = ws.plane(1, n);
    std::fill(out.begin(), out.end(), 0.0);
    for (int i = 0; i < f.g.d; ++i) {
        const double* ui = &f.ups[i * n];
        for (std::int64_t c = 0; c < n; ++c) flux[c] = f.rho[c] * ui[c];
        central_diff(flux.data(), dflux.data(), f.g, i);
        for (std::int64_t c = 0; c < n; ++c) out[c] -= dflux[c];
    }
}

SpdeStatus momentum_rhs(const FieldState& f, std::span<double> out,
                        SpdeWorkspace& ws) {
    const int d = f.g.d;
    const std::int64_t n = f.g.cells();
    assert(static_cast<std::int64_t>(out.size()) == n * d);
    if (f.min_rho() < f.rho_floor) return SpdeStatus::density_floor;

    // plane layout: 0..d*d-1 dU[i][q], d*d rho2, d*d+1 div, d*d+2.. scratch
    const std::size_t pdu = 0;
    auto du = [&](int i, int q) -> std::vector<double>& {
        return ws.plane(pdu + i * d + q, n);
    };
    for (int i = 0; i < d; ++i)
        for (int q = 0; q < d; ++q) central_diff(&f.ups[q * n], du(i, q).data(), f.g, i);

    auto& rho2 = ws.plane(d * d, n);
    for (std::int64_t c = 0; c < n; ++c) rho2[c] = f.rho[c] * f.rho[c];
    auto& div = ws.plane(d * d + 1, n);
    std::fill(div.begin(), div.end(), 0.0);
    for (int i = 0; i < d; ++i) {
        auto& dii = du(i, i);
        for (std::int64_t c = 0; c < n; ++c) div[c] += dii[c];
    }
    auto& bulk = ws.plane(d * d + 2, n);  // rho^2 div ups
    for (std::int64_t c = 0; c < n; ++c) bulk[c] = rho2[c] * div[c];

    auto& flux = ws.plane(d * d + 3, n);
    auto& dflux = ws.plane(d * d + 4, n);
    auto& drho = ws.plane(d * d + 5, n);
    auto& visc = ws.plane(d * d + 6, n);

    for (int q = 0; q < d; ++q) {
        double* oq = out.data() + q * n;
        // viscous divergence sum_i D_i(rho^2 (dU[i][q] + dU[q][i]))
        std::fill(visc.begin(), visc.end(), 0.0);
        for (int i = 0; i < d; ++i) {
            auto& diq = du(i, q);
            auto& dqi = du(q, i);
            for (std::int64_t c = 0; c < n; ++c)
                flux[c] = rho2[c] * (diq[c] + dqi[c]);
            central_diff(flux.data(), dflux.data(), f.g, i);
            for (std::int64_t c = 0; c < n; ++c) visc[c] += dflux[c];
        }
        central_diff(bulk.data(), dflux.data(), f.g, q);  // D_q(rho^2 div)
        central_diff(f.rho.data(), drho.data(), f.g, q);  // pressure: D_q rho
        for (std::int64_t c = 0; c < n; ++c)
            oq[c] = -drho[c] + (dflux[c] + visc[c]) / (2.0 * f.rho[c]);
        // advection -sum_i ups_i D_i ups_q
        for (int i = 0; i < d; ++i) {
            const double* ui = &f.ups[i * n];
            auto& diq = du(i, q);
            for (std::int64_t c = 0; c < n; ++c) oq[c] -= ui[c] * diq[c];
        }
    }
    return SpdeStatus::ok;
}

std::vector<double> grid_sigma(const NoiseCoefficient& sigma, const GridSpec& g) {
    const std::int64_t n = g.cells();
    std::vector<double> planes(n * g.d);
    std::vector<int> iv(g.d);
    std::vector<double> x(g.d);
    for (std::int64_t c = 0; c < n; ++c) {
        g.coords(c, iv.data());
        for (int a = 0; a < g.d; ++a) x[a] = iv[a] * g.h();
        for (int q = 0; q < g.d; ++q) planes[q * n + c] = sigma.eval(x, q);
    }
    return planes;
}

SpdeStatus spde_step(FieldState& f, const double* dB, double dt,
                     const std::vector<double>& sigma_planes, Scheme scheme,
                     bool frozen_transport, SpdeWorkspace& ws) {
    const int d = f.g.d;
    const std::int64_t n = f.g.cells();
    assert(static_cast<std::int64_t>(sigma_planes.size()) == n * d);

    // workspace planes above the momentum_rhs range
    const std::size_t base = static_cast<std::size_t>(d) * d + 8;
    auto& r0_rho = ws.plane(base + 0, n);
    auto& r1_rho = ws.plane(base + 1, n);
    auto& r0_u = ws.plane(base + 2, n * d);
    auto& r1_u = ws.plane(base + 3, n * d);

    auto deterministic = [&](const FieldState& state, std::vector<double>& rr,
                             std::vector<double>& ru) -> SpdeStatus {
        if (frozen_transport) {
            std::fill(rr.begin(), rr.end(), 0.0);
            std::fill(ru.begin(), ru.end(), 0.0);
            return SpdeStatus::ok;
        }
        continuity_rhs(state, rr, ws);
        return momentum_rhs(state, ru, ws);
    };

    if (scheme == Scheme::ito_euler) {
        if (auto st = deterministic(f, r0_rho, r0_u); st != SpdeStatus::ok) return st;
        for (std::int64_t c = 0; c < n; ++c) f.rho[c] += dt * r0_rho[c];
        for (int q = 0; q < d; ++q) {
            double* uq = &f.ups[q * n];
            const double* sq = &sigma_planes[q * n];
            const double* rq = &r0_u[q * n];
            for (std::int64_t c = 0; c < n; ++c)
                uq[c] += dt * (rq[c] + 0.5 * sq[c] * sq[c] * uq[c]) +
                         sq[c] * uq[c] * dB[q];
        }
    } else {
        if (auto st = deterministic(f, r0_rho, r0_u); st != SpdeStatus::ok) return st;
        FieldState pred = f;
        pred.t = f.t + dt;
        for (std::int64_t c = 0; c < n; ++c) pred.rho[c] = f.rho[c] + dt * r0_rho[c];
        for (int q = 0; q < d; ++q) {
            double* pq = &pred.ups[q * n];
            const double* uq = &f.ups[q * n];
            const double* sq = &sigma_planes[q * n];
            const double* rq = &r0_u[q * n];
            for (std::int64_t c = 0; c < n; ++c)
                pq[c] = uq[c] + dt * rq[c] + sq[c] * uq[c] * dB[q];
        }
        if (auto st = deterministic(pred, r1_rho, r1_u); st != SpdeStatus::ok)
            return st;
        for (std::int64_t c = 0; c < n; ++c)
            f.rho[c] += 0.5 * dt * (r0_rho[c] + r1_rho[c]);
        for (int q = 0; q < d; ++q) {
            double* uq = &f.ups[q * n];
            const double* pq = &pred.ups[q * n];
            const double* sq = &sigma_planes[q * n];
            const double* r0q = &r0_u[q * n];
            const double* r1q = &r1_u[q * n];
            for (std::int64_t c = 0; c < n; ++c)
                uq[c] += 0.5 * dt * (r0q[c] + r1q[c]) +
                         0.5 * dB[q] * sq[c] * (uq[c] + pq[c]);
        }
    }
    f.t += dt;
    return f.finite() ? SpdeStatus::ok : SpdeStatus::blowup;
}

StopCheck check_stopping(const FieldState& f, double m, SpdeWorkspace& ws) {
    const int d = f.g.d;
    const std::int64_t n = f.g.cells();
    double level = std::max(f.max_rho(), f.max_ups());
    auto& dplane = ws.plane(0, n);
    for (int i = 0; i < d; ++i)
        for (int q = 0; q < d; ++q) {
            central_diff(&f.ups[q * n], dplane.data(), f.g, i);
            for (std::int64_t c = 0; c < n; ++c)
                level = std::max(level, std::abs(dplane[c]));
        }
    return {level >= m, level};
}

double stable_dt(const FieldState& f, double c_stab) {
    const double h = f.g.h();
    const double rmax = f.max_rho();
    const double visc = std::max(rmax, rmax * rmax);
    double dt = visc > 0.0 ? c_stab * h * h / visc
                           : std::numeric_limits<double>::infinity();
    const double speed = f.max_ups() + std::sqrt(std::max(rmax, 0.0));
    if (speed > 0.0) dt = std::min(dt, 0.25 * h / speed);
    return dt;
}

}  // namespace mns
