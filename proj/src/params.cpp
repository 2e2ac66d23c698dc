#include "mns/params.hpp"

#include <algorithm>

namespace mns {

const char* param_check_name(ParamCheck c) {
    switch (c) {
        case ParamCheck::ok: return "OK";
        case ParamCheck::basic_range: return "BASIC_RANGE";
        case ParamCheck::beta_range: return "BETA_RANGE";
        case ParamCheck::gamma_bound: return "GAMMA_BOUND";
        case ParamCheck::empty_window: return "EMPTY_WINDOW";
        case ParamCheck::delta_window: return "DELTA_WINDOW";
    }
    return "UNKNOWN";
}

DeltaWindow delta_window(int d, double beta, double gamma) {
    const double dd = static_cast<double>(d);
    DeltaWindow w;
    w.lo = gamma * (dd + 4.0) / dd;
    w.hi = std::min(beta / dd, 2.0 * (beta - gamma * (dd + 2.0)) / dd);
    return w;
}

Admissibility validate_params(const ScalingParams& p, bool force_delta) {
    constexpr double tol = 1e-12;
    Admissibility a;

    const bool dim_ok = p.d >= 2 || (p.d == 1 && p.allow_d1);
    if (!dim_ok || p.N < 1 || !(p.T > 0.0) || !(p.m > 0.0)) {
        a.check = ParamCheck::basic_range;
        return a;
    }
    if (!(p.beta > 0.0) || !(p.beta < 1.0)) {
        a.check = ParamCheck::beta_range;
        return a;
    }
    const double gmax = 2.0 * p.beta / (3.0 * p.d + 8.0);
    if (!(p.gamma > 0.0) || !(p.gamma < gmax)) {
        a.check = ParamCheck::gamma_bound;
        return a;
    }
    a.window = delta_window(p.d, p.beta, p.gamma);
    if (a.window.empty()) {
        a.check = ParamCheck::empty_window;
        return a;
    }
    // Open interval; endpoint hits within tol are rejected.
    if (!force_delta &&
        !(p.delta > a.window.lo + tol && p.delta < a.window.hi - tol)) {
        a.check = ParamCheck::delta_window;
        return a;
    }
    a.check = ParamCheck::ok;
    return a;
}

}  // namespace mns
