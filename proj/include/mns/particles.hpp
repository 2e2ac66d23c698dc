#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "mns/brownian.hpp"
#include "mns/grid.hpp"
#include "mns/kernels.hpp"
#include "mns/noise.hpp"

namespace mns {

// N particles in [0,L)^d, row-major N x d coordinate blocks.
struct ParticleState {
    std::int64_t N = 0;
    int d = 2;
    double L = 1.0;
    double t = 0.0;
    std::vector<double> X, V;

    bool finite() const;
    double max_speed() const;  // max_k |V_k|_inf
};

// Deterministic linked-cell neighbor structure. Falls back to all-pairs when
// fewer than 3 bins fit per axis (wide kernels), which keeps minimum-image
// pair enumeration unambiguous.
class CellList {
public:
    void build(const ParticleState& s, double rcut);
    bool all_pairs() const { return all_pairs_; }

    // f(k, l) for every unordered pair with k < l within rcut reach,
    // enumerated in a fixed order
    template <class F>
    void for_each_pair(F&& f) const {
        if (all_pairs_) {
            for (std::int64_t k = 0; k < n_; ++k)
                for (std::int64_t l = k + 1; l < n_; ++l) f(k, l);
            return;
        }
        const std::int64_t ncells = cell_of_.empty() ? 0 : start_.size() - 1;
        for (std::int64_t c = 0; c < ncells; ++c) {
            for (std::int64_t a = start_[c]; a < start_[c + 1]; ++a)
                for (std::int64_t b = a + 1; b < start_[c + 1]; ++b)
                    f(list_[a], list_[b]);
            for (std::int64_t nc : half_shell_of(c))
                for (std::int64_t a = start_[c]; a < start_[c + 1]; ++a)
                    for (std::int64_t b = start_[nc]; b < start_[nc + 1]; ++b) {
                        const std::int64_t i = list_[a], j = list_[b];
                        f(i < j ? i : j, i < j ? j : i);
                    }
        }
    }

private:
    std::vector<std::int64_t> half_shell_of(std::int64_t c) const;
    std::int64_t n_ = 0;
    int d_ = 0;
    int nb_ = 0;
    bool all_pairs_ = true;
    std::vector<std::int64_t> start_, list_, cell_of_;
    std::vector<std::vector<int>> offsets_;  // lexicographically positive shell
};

// a_k = -(1/N) sum_{l != k} [grad phi_N(r_kl) + zeta_N(r_kl)(V_k - V_l)],
// r_kl the minimum-image displacement X_k - X_l. Contributions are applied
// action-reaction from a single evaluation, so the summed interaction
// momentum cancels pairwise. cells == nullptr runs the O(N^2) reference.
void interaction_drift(const ParticleState& s, const KernelFamily& pot,
                       const KernelFamily& fric, std::span<double> out,
                       const CellList* cells = nullptr);

enum class Scheme { heun, ito_euler };
enum class StepStatus { ok, blowup };

struct ParticleWorkspace {
    std::vector<double> a0, a1, xp, vp, sig0, sig1;
    CellList cells;
};

// One step of the velocity SDE under the shared Brownian increment dB[d].
// heun: Stratonovich predictor-corrector. ito_euler: Euler-Maruyama on the
// Ito form, drift corrected by +1/2 sigma_q(X)^2 V_q per component.
StepStatus step(ParticleState& s, const double* dB, double dt,
                const NoiseCoefficient& sigma, const KernelFamily& pot,
                const KernelFamily& fric, Scheme scheme, bool interactions,
                ParticleWorkspace& ws);

struct SimOptions {
    double dt = 0.0;
    std::int64_t n_steps = 0;
    std::vector<std::int64_t> output_steps;  // ascending, may include 0 and n
    Scheme scheme = Scheme::heun;
    bool interactions = true;
    double m = std::numeric_limits<double>::infinity();  // stopping threshold
};

struct ParticleTrajectory {
    std::vector<ParticleState> snaps;  // one per requested output step
    bool stopped = false;              // max speed reached m
    bool blowup = false;               // non-finite state detected
    double stop_time = std::numeric_limits<double>::infinity();
};

// Fixed-step driver; after stopping the state is frozen and later outputs
// repeat it (statistics at t ^ tau). path.dt must equal opts.dt.
ParticleTrajectory simulate(const ParticleState& s0, const BrownianPath& path,
                            const NoiseCoefficient& sigma, const KernelFamily& pot,
                            const KernelFamily& fric, const SimOptions& opts);

// Draw N positions from the gridded density rho0 (unit mass, multilinear
// interpolant) by rejection, then set V_k = ups0(X_k) by interpolation.
// low_discrepancy replaces the uniform proposal stream with randomized
// Halton points. Throws std::invalid_argument on non-normalized rho0.
ParticleState sample_initial(const std::vector<double>& rho0,
                             const std::vector<double>& ups0, const GridSpec& g,
                             std::int64_t N, std::uint64_t stream,
                             bool low_discrepancy = false);

}  // namespace mns
