#pragma once

#include <cstdint>
#include <vector>

namespace mns {

// One d-dimensional Brownian path sampled as i.i.d. N(0, dt) increments on a
// uniform grid. The path is generated once at the finest step used by a run;
// any consumer stepping at k*dt must consume sums of k consecutive increments
// so that refinement is exactly consistent.
struct BrownianPath {
    int d = 0;
    double dt = 0.0;
    std::int64_t n_steps = 0;
    std::vector<double> inc;  // n_steps x d, step-major

    const double* increment(std::int64_t step) const { return &inc[step * d]; }
    // sum of increments over steps [i0, i1) -> out[d]
    void sum_increments(std::int64_t i0, std::int64_t i1, double* out) const;
    // B_t at grid index (prefix sum), mostly for tests
    void value_at(std::int64_t step, double* out) const;
    // coarsen by an integer factor (exact refinement consistency)
    BrownianPath coarsen(int factor) const;
};

// Deterministic in (stream, T, dt, d); dt must divide T to round-off.
BrownianPath generate_path(std::uint64_t stream, double T, double dt, int d);

}  // namespace mns
