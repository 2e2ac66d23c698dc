#include "mns/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mns/empirical.hpp"
#include "mns/rng.hpp"
#include "mns/snapshot.hpp"
#include "mns/version.hpp"

namespace mns {
namespace {

// periodic bump exp(-2 k^2 sum_i sin^2(pi (x_i - c_i) / L)), k = L/(2 pi w):
// Gaussian of width w near the center, exactly L-periodic
double periodic_bump(std::span<const double> x, std::span<const double> c,
                     double L, double w) {
    const double k = L / (2.0 * std::acos(-1.0) * w);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = std::sin(std::acos(-1.0) * (x[i] - c[i]) / L);
        s += u * u;
    }
    return std::exp(-2.0 * k * k * s);
}

void normalize_mass(std::vector<double>& rho, const GridSpec& g) {
    double z = 0.0;
    for (double v : rho) z += v;
    z *= g.dV();
    if (!(z > 0)) throw std::runtime_error("initial density has no mass");
    for (double& v : rho) v /= z;
}

}  // namespace

InitialFields initial_fields(const ExperimentConfig& cfg, const GridSpec& g) {
    const std::int64_t n = g.cells();
    InitialFields out;
    out.rho.assign(n, 0.0);
    out.ups.assign(static_cast<std::size_t>(g.d) * n, 0.0);

    if (cfg.preset == "file") {
        FieldState f = read_fields(cfg.rho_file);
        if (f.g.M != g.M || f.g.d != g.d || f.g.L != g.L)
            throw std::runtime_error("init.rho_file grid does not match config grid");
        out.rho = f.rho;
        FieldState fu = read_fields(cfg.ups_file);
        if (fu.g.M != g.M || fu.g.d != g.d || fu.g.L != g.L)
            throw std::runtime_error("init.ups_file grid does not match config grid");
        out.ups = fu.ups;
        return out;
    }

    std::vector<int> iv(g.d);
    std::vector<double> x(g.d);
    auto cell_center = [&](std::int64_t idx) {
        g.coords(idx, iv.data());
        for (int a = 0; a < g.d; ++a) x[a] = iv[a] * g.h();
    };
    if (cfg.preset == "uniform") {
        const double r = 1.0 / std::pow(g.L, g.d);
        std::fill(out.rho.begin(), out.rho.end(), r);
        return out;
    }
    if (cfg.preset == "bump") {
        const std::vector<double> c(g.d, g.L / 2);
        const double w = g.L / 8;
        for (std::int64_t i = 0; i < n; ++i) {
            cell_center(i);
            out.rho[i] = 1.0 + periodic_bump(x, c, g.L, w);
        }
        normalize_mass(out.rho, g);
        // shear: component 0 varies along axis 1 (axis 0 when d = 1)
        const int ax = g.d > 1 ? 1 : 0;
        const double U = 0.1;
        for (std::int64_t i = 0; i < n; ++i) {
            cell_center(i);
            out.ups[i] = U * std::sin(2.0 * std::acos(-1.0) * x[ax] / g.L);
        }
        return out;
    }
    // wave
    const double a = 0.2;
    for (std::int64_t i = 0; i < n; ++i) {
        cell_center(i);
        out.rho[i] = 1.0 + a * std::sin(2.0 * std::acos(-1.0) * x[0] / g.L);
    }
    normalize_mass(out.rho, g);
    return out;
}

RunResult run_coupled(const ExperimentConfig& cfg, std::int64_t N, int rep,
                      const DyadicPartition* partition) {
    ScalingParams params = cfg.scaling;
    params.N = N;
    const Admissibility adm = validate_params(params, cfg.force_delta);
    if (!adm.valid())
        throw std::runtime_error(std::string("invalid scaling parameters: ") +
                                 param_check_name(adm.check));

    const GridSpec g{params.d, cfg.M, cfg.L};
    InitialFields init = initial_fields(cfg, g);
    FieldState field = make_field(g, init.rho, init.ups);

    const KernelFamily pot = KernelFamily::potential(params, g.L / 2);
    const KernelFamily fric = KernelFamily::friction(params, g.L / 2);
    const NoiseCoefficient sigma = noise_from_config(cfg);
    const std::vector<double> sigma_planes = grid_sigma(sigma, g);
    const Scheme scheme = scheme_from_config(cfg);
    const NormFamily family = family_from_config(cfg);

    const std::uint64_t path_stream =
        derive_stream(cfg.seed, static_cast<std::uint64_t>(N),
                      static_cast<std::uint64_t>(rep));
    std::uint64_t st = path_stream;
    const std::uint64_t init_stream = splitmix64(st);

    ParticleState particles =
        sample_initial(init.rho, init.ups, g, N, init_stream, cfg.low_discrepancy);

    // step size: config bound, explicit-stability bound, and at most a quarter
    // of the kernel bandwidth per step at the reference speed
    const double vref = std::max(field.max_ups(), 0.5);
    double dt = std::min(cfg.dt, stable_dt(field));
    dt = std::min(dt, 0.25 * pot.bandwidth / vref);
    std::int64_t n_steps =
        static_cast<std::int64_t>(std::ceil(params.T / dt - 1e-9));
    n_steps = std::max<std::int64_t>(n_steps, 1);
    dt = params.T / static_cast<double>(n_steps);

    const BrownianPath path = generate_path(path_stream, params.T, dt, params.d);

    std::set<std::int64_t> outs;
    const int K = std::min<std::int64_t>(cfg.outputs, n_steps);
    for (int i = 0; i <= K; ++i)
        outs.insert(static_cast<std::int64_t>(
            std::llround(static_cast<double>(i) * static_cast<double>(n_steps) / K)));

    DyadicPartition local;
    if (!partition) {
        local = build_partition(cfg.lambda, g);
        partition = &local;
    }

    RunResult res;
    res.dt = dt;
    res.n_steps = n_steps;

    ParticleWorkspace pws;
    SpdeWorkspace sws;
    ParticleState p_backup;
    FieldState f_backup;
    bool have_frozen_row = false;
    RunRow frozen;

    for (std::int64_t i = 0; i <= n_steps; ++i) {
        if (outs.count(i)) {
            RunRow row;
            if (res.stopped && have_frozen_row) {
                row = frozen;
            } else {
                const EmpiricalDeposit dep = deposit(particles, pot, g);
                const EnergyBreakdown e = energy(particles, field.rho, field.ups, dep);
                const DistanceResult dist =
                    distribution_distance(particles, field.rho, field.ups, cfg.alpha,
                                          cfg.r_tilde, family, *partition);
                row.q_total = e.total;
                row.q_kinetic = e.kinetic;
                row.q_density = e.density_l2;
                row.besov_s = dist.dist_s;
                row.besov_v = dist.dist_v;
                if (res.stopped) {
                    frozen = row;
                    have_frozen_row = true;
                }
            }
            row.N = N;
            row.rep = rep;
            row.t = static_cast<double>(i) * dt;
            row.stopped = res.stopped ? 1 : 0;
            row.tau = res.tau;
            res.rows.push_back(row);
        }
        if (i == n_steps || res.stopped) continue;

        p_backup = particles;
        f_backup = field;
        const double* dB = path.increment(i);
        const StepStatus ps =
            step(particles, dB, dt, sigma, pot, fric, scheme, true, pws);
        const SpdeStatus fs =
            spde_step(field, dB, dt, sigma_planes, scheme, false, sws);
        if (ps != StepStatus::ok || fs != SpdeStatus::ok) {
            particles = p_backup;  // freeze at the last valid state
            field = f_backup;
            res.stopped = true;
            res.tau = static_cast<double>(i) * dt;
            res.stop_reason = fs == SpdeStatus::density_floor ? "DENSITY_FLOOR" : "BLOWUP";
            continue;
        }
        const StopCheck sc = check_stopping(field, params.m, sws);
        if (sc.stopped || particles.max_speed() >= params.m) {
            res.stopped = true;
            res.tau = static_cast<double>(i + 1) * dt;
            res.stop_reason = "THRESHOLD";
        }
    }

    res.particles = std::move(particles);
    res.field = std::move(field);
    return res;
}

std::vector<AggregateRow> aggregate_rows(const std::vector<RunRow>& rows,
                                         double delta) {
    // sup_t Q per (N, rep), in sorted order
    std::vector<std::pair<std::pair<std::int64_t, int>, double>> sups;
    for (const RunRow& r : rows) {
        const std::pair<std::int64_t, int> key{r.N, r.rep};
        if (sups.empty() || sups.back().first != key)
            sups.push_back({key, r.q_total});
        else
            sups.back().second = std::max(sups.back().second, r.q_total);
    }
    std::vector<AggregateRow> out;
    std::size_t i = 0;
    while (i < sups.size()) {
        const std::int64_t N = sups[i].first.first;
        std::vector<double> v;
        while (i < sups.size() && sups[i].first.first == N) v.push_back(sups[i++].second);
        AggregateRow a;
        a.N = N;
        double s1 = 0, s2 = 0;
        for (double q : v) {
            s1 += q;
            s2 += q * q;
        }
        const double R = static_cast<double>(v.size());
        a.e_supq = s1 / R;
        a.e_supq_sq = s2 / R;
        a.scaled = std::pow(static_cast<double>(N), 2.0 * delta) * a.e_supq_sq;
        double sd = 0.0;
        if (v.size() > 1) {
            double acc = 0;
            for (double q : v) acc += (q - a.e_supq) * (q - a.e_supq);
            sd = std::sqrt(acc / (R - 1.0));
        }
        const double half = 1.96 * sd / std::sqrt(R);
        a.ci_lo = a.e_supq - half;
        a.ci_hi = a.e_supq + half;
        out.push_back(a);
    }
    return out;
}

StudyReport convergence_study(const ExperimentConfig& cfg) {
    if (cfg.schedule.size() < 2)
        throw std::runtime_error("study requires at least 2 schedule entries");
    if (cfg.replications < 4)
        throw std::runtime_error("study requires at least 4 replications");

    const GridSpec g{cfg.scaling.d, cfg.M, cfg.L};
    const DyadicPartition partition = build_partition(cfg.lambda, g);

    struct Job {
        std::int64_t N;
        int rep;
    };
    std::vector<Job> jobs;
    for (std::int64_t N : cfg.schedule)
        for (int r = 0; r < cfg.replications; ++r) jobs.push_back({N, r});

    std::vector<std::vector<RunRow>> slots(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());

    int threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
    if (const char* env = std::getenv("MNS_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) threads = cap;
    }
    threads = std::min<int>(threads, static_cast<int>(jobs.size()));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                slots[i] = run_coupled(cfg, jobs[i].N, jobs[i].rep, &partition).rows;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);

    StudyReport rep;
    for (const std::vector<RunRow>& s : slots)
        rep.rows.insert(rep.rows.end(), s.begin(), s.end());
    rep.aggregate = aggregate_rows(rep.rows, cfg.scaling.delta);

    // per-N mean over reps of sup_t for both distances
    for (std::int64_t N : cfg.schedule) {
        double ss = 0, sv = 0;
        for (int r = 0; r < cfg.replications; ++r) {
            double ms = 0, mv = 0;
            for (const RunRow& row : rep.rows)
                if (row.N == N && row.rep == r) {
                    ms = std::max(ms, row.besov_s);
                    mv = std::max(mv, row.besov_v);
                }
            ss += ms;
            sv += mv;
        }
        rep.mean_sup_dist_s.push_back(ss / cfg.replications);
        rep.mean_sup_dist_v.push_back(sv / cfg.replications);
    }

    // log-log least squares of E[sup Q] on N
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(rep.aggregate.size());
        for (const AggregateRow& a : rep.aggregate) {
            const double x = std::log(static_cast<double>(a.N));
            const double y = std::log(a.e_supq);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }

    rep.monotone_decay = true;
    for (std::size_t i = 0; i + 1 < rep.aggregate.size(); ++i)
        if (!(rep.aggregate[i + 1].e_supq < rep.aggregate[i].e_supq))
            rep.monotone_decay = false;

    rep.scaled_nonincreasing_top = true;
    for (std::size_t i = rep.aggregate.size() / 2; i + 1 < rep.aggregate.size(); ++i)
        if (rep.aggregate[i + 1].scaled > rep.aggregate[i].scaled)
            rep.scaled_nonincreasing_top = false;

    return rep;
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_raw_csv(const std::string& path, const std::vector<RunRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "N,rep,t,Q_total,Q_kinetic,Q_density,besov_S,besov_V,stopped,tau_m\n";
    for (const RunRow& r : rows) {
        out << r.N << ',' << r.rep << ',' << format_g17(r.t) << ','
            << format_g17(r.q_total) << ',' << format_g17(r.q_kinetic) << ','
            << format_g17(r.q_density) << ',' << format_g17(r.besov_s) << ','
            << format_g17(r.besov_v) << ',' << r.stopped << ','
            << format_g17(r.tau) << '\n';
    }
}

std::vector<RunRow> read_raw_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line) ||
        line != "N,rep,t,Q_total,Q_kinetic,Q_density,besov_S,besov_V,stopped,tau_m")
        throw std::runtime_error(path + ": unexpected CSV header");
    std::vector<RunRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string f;
        std::vector<std::string> fs;
        while (std::getline(ss, f, ',')) fs.push_back(f);
        if (fs.size() != 10) throw std::runtime_error(path + ": malformed row");
        RunRow r;
        r.N = std::stoll(fs[0]);
        r.rep = std::stoi(fs[1]);
        r.t = std::stod(fs[2]);
        r.q_total = std::stod(fs[3]);
        r.q_kinetic = std::stod(fs[4]);
        r.q_density = std::stod(fs[5]);
        r.besov_s = std::stod(fs[6]);
        r.besov_v = std::stod(fs[7]);
        r.stopped = std::stoi(fs[8]);
        r.tau = std::stod(fs[9]);
        rows.push_back(r);
    }
    return rows;
}

void write_aggregate_csv(const std::string& path,
                         const std::vector<AggregateRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "N,E_supQ,E_supQ_sq,scaled_N2delta,ci_lo,ci_hi\n";
    for (const AggregateRow& a : rows) {
        out << a.N << ',' << format_g17(a.e_supq) << ',' << format_g17(a.e_supq_sq)
            << ',' << format_g17(a.scaled) << ',' << format_g17(a.ci_lo) << ','
            << format_g17(a.ci_hi) << '\n';
    }
}

void write_manifest(const std::string& path, const ExperimentConfig& cfg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(cfg.hash));
    out << "version=" << kVersion << "\n"
        << "config_hash=" << hash << "\n"
        << "seed=" << cfg.seed << "\n"
        << "--- config ---\n"
        << cfg.text;
    if (!cfg.text.empty() && cfg.text.back() != '\n') out << '\n';
}

void write_study(const StudyReport& report, const ExperimentConfig& cfg,
                 const std::string& dir) {
    std::filesystem::create_directories(dir);
    write_raw_csv(dir + "/raw.csv", report.rows);
    write_aggregate_csv(dir + "/aggregate.csv", report.aggregate);
    write_manifest(dir + "/manifest.txt", cfg);
}

}  // namespace mns
