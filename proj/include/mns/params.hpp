#pragma once

#include <cstdint>
#include <string>

namespace mns {

// Scaling exponents and run horizon for the interacting system and its limit.
struct ScalingParams {
    int d = 2;               // spatial dimension, >= 2 (1 only with allow_d1)
    std::int64_t N = 1;      // particle count
    double beta = 0.5;       // potential scaling exponent, in (0,1)
    double gamma = 0.05;     // friction scaling exponent, in (0, 2*beta/(3d+8))
    double delta = 0.2;      // convergence-rate exponent, inside the window below
    double T = 1.0;          // time horizon
    double m = 10.0;         // stopping threshold
    bool allow_d1 = false;   // debug switch for one-dimensional runs
};

// Open interval of admissible delta: (gamma(d+4)/d, min(beta/d, 2(beta-gamma(d+2))/d)).
struct DeltaWindow {
    double lo = 0.0;
    double hi = 0.0;
    bool empty() const { return !(lo < hi); }
};

enum class ParamCheck {
    ok,
    basic_range,   // d, N, T, m out of range
    beta_range,    // beta outside (0,1)
    gamma_bound,   // gamma outside (0, 2*beta/(3d+8))
    empty_window,  // admissible delta interval is empty
    delta_window,  // delta outside the (open) interval
};

const char* param_check_name(ParamCheck c);

struct Admissibility {
    ParamCheck check = ParamCheck::ok;
    DeltaWindow window;
    bool valid() const { return check == ParamCheck::ok; }
};

// Window endpoints for given (d, beta, gamma); meaningful only when the
// beta/gamma constraints hold.
DeltaWindow delta_window(int d, double beta, double gamma);

// Full admissibility check. Endpoints are rejected with a 1e-12 tolerance:
// the interval is open. force_delta skips only the delta-window test (used by
// the negative-control study mode).
Admissibility validate_params(const ScalingParams& p, bool force_delta = false);

}  // namespace mns
