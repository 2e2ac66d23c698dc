#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mns/besov.hpp"
#include "mns/config.hpp"
#include "mns/spde.hpp"

namespace mns {

struct InitialFields {
    std::vector<double> rho;  // unit mass under grid quadrature
    std::vector<double> ups;  // d planes
};

// Named presets: uniform (rho = 1/L^d, ups = 0), bump (renormalized periodic
// Gaussian bump + shear flow), wave (single-mode density perturbation, ups=0),
// file (MNSF snapshot whose grid must match).
InitialFields initial_fields(const ExperimentConfig& cfg, const GridSpec& g);

// One CSV row: statistics of the coupled pair at an output time, state taken
// at t ^ tau (frozen after stopping).
struct RunRow {
    std::int64_t N = 0;
    int rep = 0;
    double t = 0.0;
    double q_total = 0.0;
    double q_kinetic = 0.0;
    double q_density = 0.0;
    double besov_s = 0.0;
    double besov_v = 0.0;
    int stopped = 0;
    double tau = std::numeric_limits<double>::infinity();
};

struct RunResult {
    std::vector<RunRow> rows;
    bool stopped = false;
    double tau = std::numeric_limits<double>::infinity();
    std::string stop_reason;  // "", "THRESHOLD", "BLOWUP", "DENSITY_FLOOR"
    double dt = 0.0;
    std::int64_t n_steps = 0;
    ParticleState particles;  // final (possibly frozen) states
    FieldState field;
};

// Runs the particle system and the limit equations over one shared Brownian
// path and evaluates the energy and distribution distances at the output
// times. partition == nullptr builds a private one.
RunResult run_coupled(const ExperimentConfig& cfg, std::int64_t N, int rep,
                      const DyadicPartition* partition = nullptr);

struct AggregateRow {
    std::int64_t N = 0;
    double e_supq = 0.0;     // mean over reps of sup_t Q
    double e_supq_sq = 0.0;  // mean of (sup_t Q)^2
    double scaled = 0.0;     // N^{2 delta} * e_supq_sq
    double ci_lo = 0.0, ci_hi = 0.0;  // normal 95% CI on e_supq
};

std::vector<AggregateRow> aggregate_rows(const std::vector<RunRow>& rows,
                                         double delta);

struct StudyReport {
    std::vector<RunRow> rows;  // sorted by (N, rep, t)
    std::vector<AggregateRow> aggregate;
    std::vector<double> mean_sup_dist_s;  // per schedule entry, mean_t sup
    std::vector<double> mean_sup_dist_v;
    double slope = 0.0;  // log-log fit of e_supq against N
    bool monotone_decay = false;
    bool scaled_nonincreasing_top = false;
};

// Sweeps the N-schedule with `replications` independent streams per N.
// Jobs run in parallel (MNS_THREADS caps the pool); output is independent of
// the thread count. Requires >= 2 schedule entries and >= 4 replications.
StudyReport convergence_study(const ExperimentConfig& cfg);

// raw CSV: N,rep,t,Q_total,Q_kinetic,Q_density,besov_S,besov_V,stopped,tau_m
// aggregate CSV: N,E_supQ,E_supQ_sq,scaled_N2delta,ci_lo,ci_hi
std::string format_g17(double v);
void write_raw_csv(const std::string& path, const std::vector<RunRow>& rows);
std::vector<RunRow> read_raw_csv(const std::string& path);
void write_aggregate_csv(const std::string& path,
                         const std::vector<AggregateRow>& rows);
void write_manifest(const std::string& path, const ExperimentConfig& cfg);

// raw.csv + aggregate.csv + manifest.txt under dir (created if absent).
void write_study(const StudyReport& report, const ExperimentConfig& cfg,
                 const std::string& dir);

}  // namespace mns
