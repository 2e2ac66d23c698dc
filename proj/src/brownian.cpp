#include "mns/brownian.hpp"

#include <cmath>
#include <stdexcept>

#include "mns/rng.hpp"

namespace mns {

void BrownianPath::sum_increments(std::int64_t i0, std::int64_t i1, double* out) const {
    for (int q = 0; q < d; ++q) out[q] = 0.0;
    for (std::int64_t i = i0; i < i1; ++i)
        for (int q = 0; q < d; ++q) out[q] += inc[i * d + q];
}

void BrownianPath::value_at(std::int64_t step, double* out) const {
    sum_increments(0, step, out);
}

BrownianPath BrownianPath::coarsen(int factor) const {
    if (factor < 1 || n_steps % factor != 0)
        throw std::invalid_argument("coarsen: factor must divide step count");
    BrownianPath c;
    c.d = d;
    c.dt = dt * factor;
    c.n_steps = n_steps / factor;
    c.inc.resize(c.n_steps * d);
    for (std::int64_t i = 0; i < c.n_steps; ++i)
        sum_increments(i * factor, (i + 1) * factor, &c.inc[i * d]);
    return c;
}

BrownianPath generate_path(std::uint64_t stream, double T, double dt, int d) {
    const double steps_f = T / dt;
    const std::int64_t n = static_cast<std::int64_t>(std::llround(steps_f));
    if (n < 1 || std::abs(steps_f - n) > 1e-9 * steps_f)
        throw std::invalid_argument("generate_path: dt must divide T");
    BrownianPath p;
    p.d = d;
    p.dt = dt;
    p.n_steps = n;
    p.inc.resize(n * d);
    auto eng = make_engine(stream);
    std::normal_distribution<double> gauss(0.0, std::sqrt(dt));
    for (auto& v : p.inc) v = gauss(eng);
    return p;
}

}  // namespace mns
