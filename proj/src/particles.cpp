#include "mns/particles.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "mns/empirical.hpp"
#include "mns/rng.hpp"

namespace mns {

bool ParticleState::finite() const {
    for (double v : X)
        if (!std::isfinite(v)) return false;
    for (double v : V)
        if (!std::isfinite(v)) return false;
    return true;
}

double ParticleState::max_speed() const {
    double m = 0.0;
    for (double v : V) m = std::max(m, std::abs(v));
    return m;
}

void CellList::build(const ParticleState& s, double rcut) {
    n_ = s.N;
    d_ = s.d;
    nb_ = rcut > 0.0 ? static_cast<int>(std::floor(s.L / rcut)) : 0;
    all_pairs_ = nb_ < 3;
    if (all_pairs_) return;

    std::int64_t ncells = 1;
    for (int a = 0; a < d_; ++a) ncells *= nb_;
    cell_of_.assign(n_, 0);
    const double inv_cell = nb_ / s.L;
    for (std::int64_t k = 0; k < n_; ++k) {
        std::int64_t c = 0;
        for (int a = d_ - 1; a >= 0; --a) {
            int i = static_cast<int>(s.X[k * d_ + a] * inv_cell);
            if (i >= nb_) i = nb_ - 1;  // x == L edge after rounding
            c = c * nb_ + i;
        }
        cell_of_[k] = c;
    }
    // counting sort: ascending particle index within each cell
    start_.assign(ncells + 1, 0);
    for (std::int64_t k = 0; k < n_; ++k) ++start_[cell_of_[k] + 1];
    for (std::int64_t c = 0; c < ncells; ++c) start_[c + 1] += start_[c];
    list_.assign(n_, 0);
    std::vector<std::int64_t> fill(start_.begin(), start_.end() - 1);
    for (std::int64_t k = 0; k < n_; ++k) list_[fill[cell_of_[k]]++] = k;

    // offsets with the highest-axis nonzero component positive: each
    // unordered cell pair is visited exactly once
    offsets_.clear();
    std::vector<int> o(d_, -1);
    while (true) {
        int hi = -1;
        for (int a = d_ - 1; a >= 0; --a)
            if (o[a] != 0) {
                hi = a;
                break;
            }
        if (hi >= 0 && o[hi] > 0) offsets_.push_back(o);
        int a = 0;
        for (; a < d_; ++a) {
            if (o[a] < 1) {
                ++o[a];
                break;
            }
            o[a] = -1;
        }
        if (a == d_) break;
    }
}

std::vector<std::int64_t> CellList::half_shell_of(std::int64_t c) const {
    std::vector<std::int64_t> out;
    out.reserve(offsets_.size());
    std::array<int, 8> iv{};
    std::int64_t rem = c;
    for (int a = 0; a < d_; ++a) {
        iv[a] = static_cast<int>(rem % nb_);
        rem /= nb_;
    }
    for (const auto& o : offsets_) {
        std::int64_t nc = 0;
        for (int a = d_ - 1; a >= 0; --a) nc = nc * nb_ + wrap_cell(iv[a] + o[a], nb_);
        out.push_back(nc);
    }
    return out;
}

namespace {

template <class Pairs>
void accumulate_pairs(const ParticleState& s, const KernelFamily& pot,
                      const KernelFamily& fric, std::span<double> out, Pairs&& pairs) {
    const int d = s.d;
    const double invN = 1.0 / static_cast<double>(s.N);
    const double reach = std::max(pot.cutoff, fric.cutoff);
    const double reach2 = reach * reach;
    double r[8], dv[8];
    pairs([&](std::int64_t k, std::int64_t l) {
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) {
            r[a] = min_image(s.X[k * d + a] - s.X[l * d + a], s.L);
            r2 += r[a] * r[a];
        }
        if (r2 >= reach2) return;
        const double g = pot.grad_scalar(r2);
        const double z = fric.zeta_scalar(r2);
        if (g == 0.0 && z == 0.0) return;
        double rdv = 0.0;
        for (int a = 0; a < d; ++a) {
            dv[a] = s.V[k * d + a] - s.V[l * d + a];
            rdv += r[a] * dv[a];
        }
        const double c = g + z * rdv;
        for (int a = 0; a < d; ++a) {
            const double f = invN * c * r[a];
            out[k * d + a] -= f;
            out[l * d + a] += f;
        }
    });
}

}  // namespace

void interaction_drift(const ParticleState& s, const KernelFamily& pot,
                       const KernelFamily& fric, std::span<double> out,
                       const CellList* cells) {
    assert(static_cast<std::int64_t>(out.size()) == s.N * s.d);
    std::fill(out.begin(), out.end(), 0.0);
    if (cells) {
        accumulate_pairs(s, pot, fric, out,
                         [&](auto&& f) { cells->for_each_pair(f); });
    } else {
        accumulate_pairs(s, pot, fric, out, [&](auto&& f) {
            for (std::int64_t k = 0; k < s.N; ++k)
                for (std::int64_t l = k + 1; l < s.N; ++l) f(k, l);
        });
    }
}

namespace {

void drift_into(const ParticleState& s, const KernelFamily& pot,
                const KernelFamily& fric, bool interactions, ParticleWorkspace& ws,
                std::vector<double>& out) {
    out.assign(s.N * s.d, 0.0);
    if (!interactions) return;
    const double reach = std::max(pot.cutoff, fric.cutoff);
    ws.cells.build(s, reach);
    interaction_drift(s, pot, fric, out, &ws.cells);
}

void eval_sigma(const ParticleState& s, const NoiseCoefficient& sigma,
                std::vector<double>& out) {
    const int d = s.d;
    out.resize(s.N * d);
    for (std::int64_t k = 0; k < s.N; ++k)
        sigma.eval_all(std::span(&s.X[k * d], d), std::span(&out[k * d], d));
}

}  // namespace

StepStatus step(ParticleState& s, const double* dB, double dt,
                const NoiseCoefficient& sigma, const KernelFamily& pot,
                const KernelFamily& fric, Scheme scheme, bool interactions,
                ParticleWorkspace& ws) {
    const int d = s.d;
    const std::int64_t n = s.N * d;

    if (scheme == Scheme::ito_euler) {
        drift_into(s, pot, fric, interactions, ws, ws.a0);
        eval_sigma(s, sigma, ws.sig0);
        for (std::int64_t k = 0; k < s.N; ++k) {
            for (int q = 0; q < d; ++q) {
                const std::int64_t i = k * d + q;
                const double sg = ws.sig0[i];
                const double v = s.V[i];
                s.X[i] = wrap_coord(s.X[i] + dt * v, s.L);
                s.V[i] = v + dt * (ws.a0[i] + 0.5 * sg * sg * v) + sg * v * dB[q];
            }
        }
    } else {
        drift_into(s, pot, fric, interactions, ws, ws.a0);
        eval_sigma(s, sigma, ws.sig0);
        ws.xp.resize(n);
        ws.vp.resize(n);
        ParticleState pred;
        pred.N = s.N;
        pred.d = d;
        pred.L = s.L;
        pred.t = s.t + dt;
        for (std::int64_t k = 0; k < s.N; ++k)
            for (int q = 0; q < d; ++q) {
                const std::int64_t i = k * d + q;
                ws.xp[i] = wrap_coord(s.X[i] + dt * s.V[i], s.L);
                ws.vp[i] = s.V[i] + dt * ws.a0[i] + ws.sig0[i] * s.V[i] * dB[q];
            }
        pred.X.swap(ws.xp);
        pred.V.swap(ws.vp);
        drift_into(pred, pot, fric, interactions, ws, ws.a1);
        eval_sigma(pred, sigma, ws.sig1);
        for (std::int64_t k = 0; k < s.N; ++k)
            for (int q = 0; q < d; ++q) {
                const std::int64_t i = k * d + q;
                s.X[i] = wrap_coord(s.X[i] + 0.5 * dt * (s.V[i] + pred.V[i]), s.L);
                s.V[i] += 0.5 * dt * (ws.a0[i] + ws.a1[i]) +
                          0.5 * dB[q] * (ws.sig0[i] * s.V[i] + ws.sig1[i] * pred.V[i]);
            }
        ws.xp.swap(pred.X);  // reclaim buffers
        ws.vp.swap(pred.V);
    }
    s.t += dt;
    return s.finite() ? StepStatus::ok : StepStatus::blowup;
}

ParticleTrajectory simulate(const ParticleState& s0, const BrownianPath& path,
                            const NoiseCoefficient& sigma, const KernelFamily& pot,
                            const KernelFamily& fric, const SimOptions& opts) {
    if (std::abs(path.dt - opts.dt) > 1e-12 * opts.dt || path.n_steps < opts.n_steps)
        throw std::invalid_argument("simulate: path grid must match the step size");
    ParticleTrajectory traj;
    ParticleState s = s0;
    ParticleWorkspace ws;
    std::size_t next_out = 0;
    auto emit_due = [&](std::int64_t istep) {
        while (next_out < opts.output_steps.size() &&
               opts.output_steps[next_out] == istep) {
            traj.snaps.push_back(s);
            ++next_out;
        }
    };
    emit_due(0);
    for (std::int64_t i = 0; i < opts.n_steps; ++i) {
        if (!traj.stopped && !traj.blowup) {
            ParticleState backup = s;
            const StepStatus st = step(s, path.increment(i), opts.dt, sigma, pot,
                                       fric, opts.scheme, opts.interactions, ws);
            if (st == StepStatus::blowup) {
                s = backup;  // keep last finite state
                traj.blowup = true;
                traj.stop_time = s.t;
            } else if (s.max_speed() >= opts.m) {
                traj.stopped = true;
                traj.stop_time = s.t;
            }
        }
        emit_due(i + 1);
    }
    return traj;
}

namespace {

double halton(std::uint64_t i, int base) {
    double f = 1.0, r = 0.0;
    for (std::uint64_t n = i + 1; n > 0; n /= base) {
        f /= base;
        r += f * (n % base);
    }
    return r;
}

}  // namespace

ParticleState sample_initial(const std::vector<double>& rho0,
                             const std::vector<double>& ups0, const GridSpec& g,
                             std::int64_t N, std::uint64_t stream,
                             bool low_discrepancy) {
    const int d = g.d;
    if (static_cast<std::int64_t>(rho0.size()) != g.cells() ||
        static_cast<std::int64_t>(ups0.size()) != g.cells() * d)
        throw std::invalid_argument("sample_initial: field size mismatch");
    double mass = 0.0, rmax = 0.0, rmin = 0.0;
    for (double v : rho0) {
        mass += v;
        rmax = std::max(rmax, v);
        rmin = std::min(rmin, v);
    }
    mass *= g.dV();
    if (rmin < 0.0 || std::abs(mass - 1.0) > 1e-8)
        throw std::invalid_argument("sample_initial: rho0 must be >= 0 with unit mass");

    ParticleState s;
    s.N = N;
    s.d = d;
    s.L = g.L;
    s.X.resize(N * d);
    s.V.resize(N * d);
    auto eng = make_engine(stream);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> shift(d);
    for (int a = 0; a < d; ++a) shift[a] = uni(eng);
    static constexpr int bases[] = {2, 3, 5, 7, 11, 13, 17, 19};

    double x[8];
    std::uint64_t qidx = 0;
    for (std::int64_t k = 0; k < N; ++k) {
        while (true) {
            if (low_discrepancy) {
                for (int a = 0; a < d; ++a) {
                    double u = halton(qidx, bases[a]) + shift[a];
                    x[a] = (u - std::floor(u)) * g.L;
                }
                ++qidx;
            } else {
                for (int a = 0; a < d; ++a) x[a] = uni(eng) * g.L;
            }
            const double r = interpolate(rho0, g, std::span(x, d));
            if (uni(eng) * rmax <= r) break;
        }
        for (int a = 0; a < d; ++a) s.X[k * d + a] = x[a];
        for (int q = 0; q < d; ++q)
            s.V[k * d + q] = interpolate(
                std::span(&ups0[q * g.cells()], g.cells()), g,
                std::span(&s.X[k * d], d));
    }
    return s;
}

}  // namespace mns
