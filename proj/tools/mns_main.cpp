#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "mns/besov.hpp"
#include "mns/config.hpp"
#include "mns/harness.hpp"
#include "mns/snapshot.hpp"
#include "mns/version.hpp"

namespace {

int cmd_validate(const std::string& config_path, std::int64_t n_override) {
    mns::ExperimentConfig cfg = mns::parse_config_file(config_path);
    mns::ScalingParams p = cfg.scaling;
    p.N = n_override > 0 ? n_override : cfg.run_N;
    const mns::Admissibility adm = mns::validate_params(p, cfg.force_delta);
    std::printf("d=%d N=%lld beta=%g gamma=%g delta=%g\n", p.d,
                static_cast<long long>(p.N), p.beta, p.gamma, p.delta);
    std::printf("delta window: (%.12g, %.12g)%s\n", adm.window.lo, adm.window.hi,
                adm.window.empty() ? " (empty)" : "");
    if (adm.valid()) {
        std::printf("VALID\n");
        return 0;
    }
    std::printf("INVALID: %s\n", mns::param_check_name(adm.check));
    return 2;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::int64_t n_override, int rep_override, bool snapshots) {
    mns::ExperimentConfig cfg = mns::parse_config_file(config_path);
    const std::int64_t N = n_override > 0 ? n_override : cfg.run_N;
    const int rep = rep_override >= 0 ? rep_override : cfg.run_rep;
    const mns::RunResult res = mns::run_coupled(cfg, N, rep);
    std::filesystem::create_directories(out_dir);
    mns::write_raw_csv(out_dir + "/raw.csv", res.rows);
    mns::write_manifest(out_dir + "/manifest.txt", cfg);
    if (snapshots) {
        mns::write_particles(out_dir + "/final.mnsp", res.particles);
        mns::write_fields(out_dir + "/final.mnsf", res.field);
    }
    std::printf("run N=%lld rep=%d: %zu rows, dt=%.6g, steps=%lld\n",
                static_cast<long long>(N), rep, res.rows.size(), res.dt,
                static_cast<long long>(res.n_steps));
    if (res.stopped)
        std::printf("stopped at tau=%.6g (%s)\n", res.tau, res.stop_reason.c_str());
    double supq = 0.0;
    for (const mns::RunRow& r : res.rows) supq = std::max(supq, r.q_total);
    std::printf("sup_t Q = %.12g\n", supq);
    return 0;
}

int cmd_study(const std::string& config_path, const std::string& out_dir) {
    mns::ExperimentConfig cfg = mns::parse_config_file(config_path);
    const mns::StudyReport rep = mns::convergence_study(cfg);
    mns::write_study(rep, cfg, out_dir);
    std::printf("%10s %16s %16s %16s\n", "N", "E_supQ", "E_supQ_sq", "scaled");
    for (const mns::AggregateRow& a : rep.aggregate)
        std::printf("%10lld %16.8e %16.8e %16.8e\n", static_cast<long long>(a.N),
                    a.e_supq, a.e_supq_sq, a.scaled);
    std::printf("slope(E_supQ vs N) = %.4f\n", rep.slope);
    std::printf("MONOTONE_DECAY: %s\n", rep.monotone_decay ? "pass" : "fail");
    std::printf("SCALED_NONINCREASING(top half): %s\n",
                rep.scaled_nonincreasing_top ? "pass" : "fail");
    std::printf("wrote %s/{raw.csv,aggregate.csv,manifest.txt}\n", out_dir.c_str());
    return 0;
}

int cmd_norms(const std::string& snapshot_path, const std::string& config_path) {
    mns::ExperimentConfig cfg = mns::parse_config_file(config_path);
    const mns::NormFamily family = mns::family_from_config(cfg);
    const mns::NormSpec spec{family, -cfg.alpha, 2.0, cfg.r_tilde};
    const std::string magic = mns::snapshot_magic(snapshot_path);
    if (magic == "MNSF") {
        const mns::FieldState f = mns::read_fields(snapshot_path);
        const mns::DyadicPartition P = mns::build_partition(cfg.lambda, f.g);
        std::printf("fields t=%g M=%d d=%d L=%g\n", f.t, f.g.M, f.g.d, f.g.L);
        std::printf("norm(rho)   = %.12g\n",
                    mns::norm(f.rho, spec, P));
        const std::int64_t n = f.g.cells();
        for (int q = 0; q < f.g.d; ++q)
            std::printf("norm(ups_%d) = %.12g\n", q,
                        mns::norm(std::span<const double>(f.ups.data() + q * n, n),
                                  spec, P));
        return 0;
    }
    if (magic == "MNSP") {
        const mns::ParticleState s = mns::read_particles(snapshot_path);
        const mns::GridSpec g{s.d, cfg.M, cfg.L};
        if (g.L != s.L) {
            std::fprintf(stderr, "snapshot box L=%g does not match config L=%g\n",
                         s.L, cfg.L);
            return 2;
        }
        const mns::DyadicPartition P = mns::build_partition(cfg.lambda, g);
        const std::vector<double> dens = mns::cic_density(s, g);
        const std::vector<double> mom = mns::cic_momentum(s, g);
        std::printf("particles t=%g N=%lld d=%d L=%g (norms of CIC rasters)\n",
                    s.t, static_cast<long long>(s.N), s.d, s.L);
        std::printf("norm(S^N)   = %.12g\n", mns::norm(dens, spec, P));
        const std::int64_t n = g.cells();
        for (int q = 0; q < s.d; ++q)
            std::printf("norm(V^N_%d) = %.12g\n", q,
                        mns::norm(std::span<const double>(mom.data() + q * n, n),
                                  spec, P));
        return 0;
    }
    std::fprintf(stderr, "unrecognized snapshot magic '%s'\n", magic.c_str());
    return 2;
}

int cmd_report(const std::string& raw_path, const std::string& config_path,
               const std::string& out_path) {
    mns::ExperimentConfig cfg = mns::parse_config_file(config_path);
    const std::vector<mns::RunRow> rows = mns::read_raw_csv(raw_path);
    const std::vector<mns::AggregateRow> agg =
        mns::aggregate_rows(rows, cfg.scaling.delta);
    mns::write_aggregate_csv(out_path, agg);
    std::printf("%10s %16s %16s %16s\n", "N", "E_supQ", "E_supQ_sq", "scaled");
    for (const mns::AggregateRow& a : agg)
        std::printf("%10lld %16.8e %16.8e %16.8e\n", static_cast<long long>(a.N),
                    a.e_supq, a.e_supq_sq, a.scaled);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"moderately interacting particles and their compressible limit"};
    app.set_version_flag("--version", mns::kVersion);
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", snapshot_path, raw_path;
    std::string report_out = "aggregate.csv";
    std::int64_t n_override = 0;
    int rep_override = -1;
    bool snapshots = false;

    CLI::App* validate = app.add_subcommand("validate", "check scaling parameters");
    validate->add_option("--config", config_path, "config file")->required();
    validate->add_option("--N", n_override, "particle count override");

    CLI::App* run = app.add_subcommand("run", "one coupled particle/limit run");
    run->add_option("--config", config_path, "config file")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--N", n_override, "particle count override");
    run->add_option("--rep", rep_override, "replication index override");
    run->add_flag("--snapshots", snapshots, "write final state snapshots");

    CLI::App* study = app.add_subcommand("study", "N-schedule convergence study");
    study->add_option("--config", config_path, "config file")->required();
    study->add_option("--out", out_dir, "output directory");

    CLI::App* norms = app.add_subcommand("norms", "norms of a snapshot file");
    norms->add_option("--snapshot", snapshot_path, "MNSP or MNSF file")->required();
    norms->add_option("--config", config_path, "config file")->required();

    CLI::App* report = app.add_subcommand("report", "re-aggregate a raw CSV");
    report->add_option("--raw", raw_path, "raw CSV produced by run/study")->required();
    report->add_option("--config", config_path, "config file")->required();
    report->add_option("--out", report_out, "aggregate CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(config_path, n_override);
        if (run->parsed())
            return cmd_run(config_path, out_dir, n_override, rep_override, snapshots);
        if (study->parsed()) return cmd_study(config_path, out_dir);
        if (norms->parsed()) return cmd_norms(snapshot_path, config_path);
        if (report->parsed()) return cmd_report(raw_path, config_path, report_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
