#include "mns/config.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mns {
namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void bad(const std::string& key, const std::string& why) {
    throw std::runtime_error("config key '" + key + "': " + why);
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x = 0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        bad(key, "expected a number, got '" + v + "'");
    }
    if (pos != v.size()) bad(key, "trailing characters in '" + v + "'");
    return x;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    std::int64_t x = 0;
    try {
        x = std::stoll(v, &pos);
    } catch (const std::exception&) {
        bad(key, "expected an integer, got '" + v + "'");
    }
    if (pos != v.size()) bad(key, "trailing characters in '" + v + "'");
    return x;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    bad(key, "expected true/false, got '" + v + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    if (out.empty()) bad(key, "empty list");
    return out;
}

std::vector<std::int64_t> to_ints(const std::string& key, const std::string& v) {
    std::vector<std::int64_t> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_int(key, trim(item)));
    if (out.empty()) bad(key, "empty list");
    return out;
}

}  // namespace

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    cfg.text = text;
    cfg.hash = fnv1a(text);

    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (std::size_t h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key=value, got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": empty key or value");
        if (!seen.insert(key).second)
            throw std::runtime_error("config: duplicate key '" + key + "'");

        if (key == "params.d") cfg.scaling.d = static_cast<int>(to_int(key, val));
        else if (key == "params.beta") cfg.scaling.beta = to_double(key, val);
        else if (key == "params.gamma") cfg.scaling.gamma = to_double(key, val);
        else if (key == "params.delta") cfg.scaling.delta = to_double(key, val);
        else if (key == "params.T") cfg.scaling.T = to_double(key, val);
        else if (key == "params.m") cfg.scaling.m = to_double(key, val);
        else if (key == "params.allow_d1") cfg.scaling.allow_d1 = to_bool(key, val);
        else if (key == "params.force_delta") cfg.force_delta = to_bool(key, val);
        else if (key == "run.N") cfg.run_N = to_int(key, val);
        else if (key == "run.rep") cfg.run_rep = static_cast<int>(to_int(key, val));
        else if (key == "study.N_schedule") cfg.schedule = to_ints(key, val);
        else if (key == "study.replications") cfg.replications = static_cast<int>(to_int(key, val));
        else if (key == "grid.M") cfg.M = static_cast<int>(to_int(key, val));
        else if (key == "grid.L") cfg.L = to_double(key, val);
        else if (key == "time.dt") cfg.dt = to_double(key, val);
        else if (key == "time.outputs") cfg.outputs = static_cast<int>(to_int(key, val));
        else if (key == "noise.kind") cfg.noise_kind = val;
        else if (key == "noise.sigma") cfg.sigma = to_doubles(key, val);
        else if (key == "noise.center") cfg.noise_center = to_doubles(key, val);
        else if (key == "noise.width") cfg.noise_width = to_double(key, val);
        else if (key == "init.preset") cfg.preset = val;
        else if (key == "init.rho_file") cfg.rho_file = val;
        else if (key == "init.ups_file") cfg.ups_file = val;
        else if (key == "init.low_discrepancy") cfg.low_discrepancy = to_bool(key, val);
        else if (key == "scheme.kind") cfg.scheme_kind = val;
        else if (key == "norms.alpha") cfg.alpha = to_double(key, val);
        else if (key == "norms.r_tilde") cfg.r_tilde = to_double(key, val);
        else if (key == "norms.lambda") cfg.lambda = to_double(key, val);
        else if (key == "norms.family") cfg.norm_family = val;
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, val));
        else throw std::runtime_error("config: unknown key '" + key + "'");
    }

    // structural checks that do not depend on N
    if (cfg.M < 2) bad("grid.M", "must be >= 2");
    if (!(cfg.L > 0)) bad("grid.L", "must be positive");
    if (!(cfg.dt > 0)) bad("time.dt", "must be positive");
    if (cfg.outputs < 1) bad("time.outputs", "must be >= 1");
    if (cfg.replications < 1) bad("study.replications", "must be >= 1");
    if (cfg.schedule.empty()) bad("study.N_schedule", "must be non-empty");
    for (std::size_t i = 0; i + 1 < cfg.schedule.size(); ++i)
        if (cfg.schedule[i] >= cfg.schedule[i + 1])
            bad("study.N_schedule", "must be strictly increasing");
    for (std::int64_t n : cfg.schedule)
        if (n < 2) bad("study.N_schedule", "entries must be >= 2");
    if (cfg.run_N < 2) bad("run.N", "must be >= 2");
    if (cfg.run_rep < 0) bad("run.rep", "must be >= 0");
    if (cfg.noise_kind != "constant" && cfg.noise_kind != "smooth_bump")
        bad("noise.kind", "expected constant or smooth_bump");
    if (cfg.preset != "uniform" && cfg.preset != "bump" && cfg.preset != "wave" &&
        cfg.preset != "file")
        bad("init.preset", "expected uniform, bump, wave or file");
    if (cfg.preset == "file" && (cfg.rho_file.empty() || cfg.ups_file.empty()))
        bad("init.preset", "preset 'file' needs init.rho_file and init.ups_file");
    if (cfg.scheme_kind != "heun" && cfg.scheme_kind != "ito_euler")
        bad("scheme.kind", "expected heun or ito_euler");
    if (cfg.norm_family != "besov" && cfg.norm_family != "triebel_lizorkin")
        bad("norms.family", "expected besov or triebel_lizorkin");
    if (static_cast<int>(cfg.sigma.size()) != cfg.scaling.d)
        bad("noise.sigma", "needs one entry per dimension");
    if (!cfg.noise_center.empty() &&
        static_cast<int>(cfg.noise_center.size()) != cfg.scaling.d)
        bad("noise.center", "needs one entry per dimension");
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

Scheme scheme_from_config(const ExperimentConfig& cfg) {
    return cfg.scheme_kind == "heun" ? Scheme::heun : Scheme::ito_euler;
}

NormFamily family_from_config(const ExperimentConfig& cfg) {
    return cfg.norm_family == "besov" ? NormFamily::besov : NormFamily::triebel_lizorkin;
}

NoiseCoefficient noise_from_config(const ExperimentConfig& cfg) {
    if (cfg.noise_kind == "constant")
        return NoiseCoefficient::constant(cfg.scaling.d, cfg.sigma);
    std::vector<double> center = cfg.noise_center;
    if (center.empty()) center.assign(cfg.scaling.d, cfg.L / 2);
    return NoiseCoefficient::smooth_bump(cfg.scaling.d, cfg.L, cfg.sigma, center,
                                         cfg.noise_width);
}

}  // namespace mns
