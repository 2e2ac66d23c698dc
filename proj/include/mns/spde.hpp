#pragma once

#include <deque>
#include <span>
#include <vector>

#include "mns/grid.hpp"
#include "mns/noise.hpp"
#include "mns/particles.hpp"  // Scheme

namespace mns {

// Density and velocity of the limit system on a periodic grid; ups is
// plane-major (d planes of cells() values). Pressure is p = rho^2/2, so the
// pressure acceleration reduces to -grad rho.
struct FieldState {
    GridSpec g;
    double t = 0.0;
    std::vector<double> rho;
    std::vector<double> ups;
    double rho_floor = 0.0;

    bool finite() const;
    double max_rho() const;
    double min_rho() const;
    double max_ups() const;
    double mass() const;  // grid quadrature of rho
};

// rho_floor = 1e-6 * mean(rho0); crossing it is an error, never a clamp.
FieldState make_field(const GridSpec& g, std::vector<double> rho0,
                      std::vector<double> ups0);

enum class SpdeStatus { ok, density_floor, blowup };

struct SpdeWorkspace {
    // deque: growing at the end must not invalidate references handed out
    // for lower plane indices within the same rhs evaluation
    std::deque<std::vector<double>> planes;
    std::vector<double>& plane(std::size_t i, std::int64_t n);
};

// Periodic second-order central difference along one axis.
void central_diff(const double* in, double* out, const GridSpec& g, int axis);

// d rho/dt = -div(rho ups), conservative flux form: the grid sum of the
// output telescopes to zero.
void continuity_rhs(const FieldState& f, std::span<double> out, SpdeWorkspace& ws);

// d ups_q/dt deterministic part:
//   -ups.grad ups_q - grad_q rho
//   + (1/2rho) grad_q(rho^2 div ups)
//   + (1/2rho) sum_i grad_i(rho^2 (grad_i ups_q + grad_q ups_i))
// Conservative fluxes are formed before the division by rho. Fails with
// density_floor when min rho < rho_floor.
SpdeStatus momentum_rhs(const FieldState& f, std::span<double> out,
                        SpdeWorkspace& ws);

// sigma_q(x) sampled on the grid, d planes (static over a run).
std::vector<double> grid_sigma(const NoiseCoefficient& sigma, const GridSpec& g);

// One step under the shared Brownian increment dB[d]; noise is
// sigma_q(x) ups_q per component, Stratonovich. frozen_transport disables
// every deterministic term (test switch for the closed-form noise solution).
SpdeStatus spde_step(FieldState& f, const double* dB, double dt,
                     const std::vector<double>& sigma_planes, Scheme scheme,
                     bool frozen_transport, SpdeWorkspace& ws);

struct StopCheck {
    bool stopped = false;
    double level = 0.0;  // max(|rho|_inf, |ups|_inf, |grad ups|_inf)
};

// Discrete proxy for the blow-up functional; stop when level >= m.
StopCheck check_stopping(const FieldState& f, double m, SpdeWorkspace& ws);

// Explicit-step bound: c_stab h^2 / max(rho_max, rho_max^2) capped by an
// advective CFL 0.25 h / (|ups|_inf + sqrt(rho_max)).
double stable_dt(const FieldState& f, double c_stab = 0.2);

}  // namespace mns
