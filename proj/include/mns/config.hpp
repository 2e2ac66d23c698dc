#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mns/besov.hpp"
#include "mns/noise.hpp"
#include "mns/params.hpp"
#include "mns/particles.hpp"

namespace mns {

// Flat key=value experiment description. Unknown keys are errors; '#' starts
// a comment. Values listed per axis are comma-separated.
struct ExperimentConfig {
    // params.*
    ScalingParams scaling;      // N filled per run from run.N / the schedule
    bool force_delta = false;   // accept delta outside the window (negative control)

    // run.* / study.*
    std::int64_t run_N = 256;
    int run_rep = 0;
    std::vector<std::int64_t> schedule = {256, 512, 1024, 2048};
    int replications = 8;

    // grid.*
    int M = 64;
    double L = 8.0;

    // time.*
    double dt = 1e-3;  // upper bound; the driver clamps to the stability bounds
    int outputs = 50;

    // noise.*
    std::string noise_kind = "constant";
    std::vector<double> sigma = {0.05, 0.05};
    std::vector<double> noise_center;
    double noise_width = 1.0;

    // init.*
    std::string preset = "bump";  // uniform | bump | wave | file
    std::string rho_file, ups_file;
    bool low_discrepancy = false;

    // scheme.*
    std::string scheme_kind = "heun";

    // norms.*
    double alpha = 2.5;
    double r_tilde = 2.0;
    double lambda = 4.0 / 3.0;
    std::string norm_family = "besov";

    std::uint64_t seed = 1;

    // raw file text and its FNV-1a hash, for the manifest
    std::string text;
    std::uint64_t hash = 0;
};

// Parse + structural validation (types, enum values, axis counts). Does not
// run the scaling-parameter admissibility check; callers do that per N.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

Scheme scheme_from_config(const ExperimentConfig& cfg);
NormFamily family_from_config(const ExperimentConfig& cfg);
NoiseCoefficient noise_from_config(const ExperimentConfig& cfg);

std::uint64_t fnv1a(const std::string& bytes);

}  // namespace mns
