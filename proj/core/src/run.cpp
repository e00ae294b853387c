#include "llb/run.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "llb/checkpoint.hpp"
#include "llb/errors.hpp"
#include "llb/fft.hpp"
#include "llb/operators.hpp"
#include "llb/svg.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace llb {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Fail-closed JSON ingestion: every object is checked against its allowed key
// set and every access error is rephrased as a ConfigError carrying the path.

void expect_keys(const ordered_json& obj, const std::string& path,
                 std::initializer_list<const char*> allowed) {
    if (!obj.is_object())
        throw ConfigError("expected an object at '" + path + "'");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) { ok = true; break; }
        if (!ok)
            throw ConfigError("unknown key '" +
                              (path.empty() ? it.key() : path + "." + it.key()) + "'");
    }
}

template <typename T>
void read_field(const ordered_json& obj, const std::string& path, const char* key,
                T& dst) {
    if (!obj.contains(key)) return;
    try {
        obj.at(key).get_to(dst);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("ill-typed value at '" +
                          (path.empty() ? std::string(key) : path + "." + key) +
                          "': " + e.what());
    }
}

void read_vec3i(const ordered_json& obj, const std::string& path, const char* key,
                std::array<int, 3>& dst) {
    if (!obj.contains(key)) return;
    const ordered_json& a = obj.at(key);
    if (!a.is_array() || a.size() != 3)
        throw ConfigError("'" + path + "." + key + "' must be a 3-element integer array");
    for (int i = 0; i < 3; ++i) {
        try {
            a.at(i).get_to(dst[i]);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("ill-typed value at '" + path + "." + key + "': " + e.what());
        }
    }
}

void parse_params(const ordered_json& j, LLBParams& p) {
    expect_keys(j, "params",
                {"kappa", "mu", "cross_coeff", "cutoff_n", "rho", "delta", "p_blowup",
                 "m_sobolev", "norm_ceiling"});
    read_field(j, "params", "kappa", p.kappa);
    read_field(j, "params", "mu", p.mu);
    read_field(j, "params", "cross_coeff", p.cross_coeff);
    read_field(j, "params", "cutoff_n", p.cutoff_n);
    read_field(j, "params", "rho", p.rho);
    read_field(j, "params", "delta", p.delta);
    read_field(j, "params", "p_blowup", p.p_blowup);
    read_field(j, "params", "m_sobolev", p.m_sobolev);
    read_field(j, "params", "norm_ceiling", p.norm_ceiling);
}

void parse_initial(const ordered_json& j, InitialDataSpec& s) {
    expect_keys(j, "initial",
                {"profile", "k", "k_second", "amplitude", "amplitude_second",
                 "component", "component_second", "width", "j_lo", "j_hi", "seed",
                 "path"});
    read_field(j, "initial", "profile", s.profile);
    read_vec3i(j, "initial", "k", s.k);
    read_vec3i(j, "initial", "k_second", s.k_second);
    read_field(j, "initial", "amplitude", s.amplitude);
    read_field(j, "initial", "amplitude_second", s.amplitude_second);
    read_field(j, "initial", "component", s.component);
    read_field(j, "initial", "component_second", s.component_second);
    read_field(j, "initial", "width", s.width);
    read_field(j, "initial", "j_lo", s.j_lo);
    read_field(j, "initial", "j_hi", s.j_hi);
    read_field(j, "initial", "seed", s.seed);
    read_field(j, "initial", "path", s.path);

    static const std::vector<std::string> kProfiles = {
        "zero", "constant", "single-mode", "two-mode", "gaussian-bump",
        "random-band", "checkpoint"};
    if (std::find(kProfiles.begin(), kProfiles.end(), s.profile) == kProfiles.end()) {
        std::string names;
        for (const auto& n : kProfiles) names += (names.empty() ? "" : ", ") + n;
        throw ConfigError("unknown value at 'initial.profile': '" + s.profile +
                          "' (valid: " + names + ")");
    }
    if (s.profile == "checkpoint" && s.path.empty())
        throw ConfigError("missing key 'initial.path' for the checkpoint profile");
    if ((s.component < 1 || s.component > 3) ||
        (s.component_second < 1 || s.component_second > 3))
        throw ConfigError("'initial.component' must be in {1,2,3}");
    if (s.profile == "gaussian-bump" && !(s.width > 0.0))
        throw ConfigError("'initial.width' must be positive");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    expect_keys(j, "",
                {"kind", "grid", "params", "initial", "horizon", "dt", "output_dir",
                 "monitors", "sweep", "stability", "verify"});

    ExperimentConfig cfg;
    read_field(j, "", "kind", cfg.kind);
    static const std::vector<std::string> kKinds = {
        "solve", "verify", "sweep-smallness", "blowup-watch", "stability"};
    if (std::find(kKinds.begin(), kKinds.end(), cfg.kind) == kKinds.end())
        throw ConfigError("'kind' must be one of solve, verify, sweep-smallness, "
                          "blowup-watch, stability (got '" + cfg.kind + "')");

    if (j.contains("grid")) {
        expect_keys(j.at("grid"), "grid", {"n", "box_length"});
        read_field(j.at("grid"), "grid", "n", cfg.grid_n);
        read_field(j.at("grid"), "grid", "box_length", cfg.box_length);
    }
    if (j.contains("params")) parse_params(j.at("params"), cfg.params);
    if (j.contains("initial")) parse_initial(j.at("initial"), cfg.initial);
    read_field(j, "", "horizon", cfg.horizon);
    read_field(j, "", "dt", cfg.dt);
    read_field(j, "", "output_dir", cfg.output_dir);

    if (j.contains("monitors")) {
        const ordered_json& m = j.at("monitors");
        expect_keys(m, "monitors",
                    {"smallness_eps", "damped_split", "gronwall_c", "condition1_c"});
        read_field(m, "monitors", "smallness_eps", cfg.monitors.smallness_eps);
        read_field(m, "monitors", "damped_split", cfg.monitors.damped_split);
        read_field(m, "monitors", "gronwall_c", cfg.monitors.gronwall_c);
        read_field(m, "monitors", "condition1_c", cfg.monitors.condition1_c);
    }
    if (j.contains("sweep")) {
        const ordered_json& s = j.at("sweep");
        expect_keys(s, "sweep", {"amplitudes", "workers"});
        read_field(s, "sweep", "amplitudes", cfg.sweep.amplitudes);
        read_field(s, "sweep", "workers", cfg.sweep.workers);
    }
    if (j.contains("stability")) {
        const ordered_json& s = j.at("stability");
        expect_keys(s, "stability", {"perturbation_scale", "perturbation_seed"});
        read_field(s, "stability", "perturbation_scale", cfg.stability.perturbation_scale);
        read_field(s, "stability", "perturbation_seed", cfg.stability.perturbation_seed);
    }
    if (j.contains("verify")) {
        const ordered_json& v = j.at("verify");
        expect_keys(v, "verify", {"suite", "samples", "seed"});
        read_field(v, "verify", "suite", cfg.verify.suite);
        read_field(v, "verify", "samples", cfg.verify.samples);
        read_field(v, "verify", "seed", cfg.verify.seed);
    }

    // Kind-specific invariants.
    try {
        cfg.params.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }
    const bool run_kind = cfg.kind == "solve" || cfg.kind == "blowup-watch" ||
                          cfg.kind == "stability" || cfg.kind == "sweep-smallness";
    if (run_kind && !(cfg.horizon > 0.0))
        throw ConfigError("'horizon' must be positive for run kinds");
    if (cfg.kind == "sweep-smallness") {
        const auto& a = cfg.sweep.amplitudes;
        if (a.size() < 3)
            throw ConfigError("'sweep.amplitudes' needs at least 3 points");
        for (std::size_t i = 1; i < a.size(); ++i)
            if (!(a[i] > a[i - 1]))
                throw ConfigError("'sweep.amplitudes' must be strictly increasing");
    }
    if (cfg.kind == "stability" && !(cfg.stability.perturbation_scale > 0.0))
        throw ConfigError("'stability.perturbation_scale' must be positive");
    if (cfg.kind == "verify" && cfg.verify.samples < 1)
        throw ConfigError("'verify.samples' must be at least 1");
    if (cfg.grid_n < 8 || cfg.grid_n % 2 != 0)
        throw ConfigError("'grid.n' must be even and >= 8");
    if (!(cfg.box_length > 0.0))
        throw ConfigError("'grid.box_length' must be positive");
    if (!(cfg.dt >= 0.0))
        throw ConfigError("'dt' must be nonnegative (0 selects the default)");
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

std::string ExperimentConfig::to_json() const {
    ordered_json j;
    j["kind"] = kind;
    j["grid"] = {{"n", grid_n}, {"box_length", box_length}};
    j["params"] = {{"kappa", params.kappa},
                   {"mu", params.mu},
                   {"cross_coeff", params.cross_coeff},
                   {"cutoff_n", params.cutoff_n},
                   {"rho", params.rho},
                   {"delta", params.delta},
                   {"p_blowup", params.p_blowup},
                   {"m_sobolev", params.m_sobolev},
                   {"norm_ceiling", params.norm_ceiling}};
    j["initial"] = {{"profile", initial.profile},
                    {"k", initial.k},
                    {"k_second", initial.k_second},
                    {"amplitude", initial.amplitude},
                    {"amplitude_second", initial.amplitude_second},
                    {"component", initial.component},
                    {"component_second", initial.component_second},
                    {"width", initial.width},
                    {"j_lo", initial.j_lo},
                    {"j_hi", initial.j_hi},
                    {"seed", initial.seed},
                    {"path", initial.path}};
    j["horizon"] = horizon;
    j["dt"] = dt;
    j["output_dir"] = output_dir;
    j["monitors"] = {{"smallness_eps", monitors.smallness_eps},
                     {"damped_split", monitors.damped_split},
                     {"gronwall_c", monitors.gronwall_c},
                     {"condition1_c", monitors.condition1_c}};
    j["sweep"] = {{"amplitudes", sweep.amplitudes}, {"workers", sweep.workers}};
    j["stability"] = {{"perturbation_scale", stability.perturbation_scale},
                      {"perturbation_seed", stability.perturbation_seed}};
    j["verify"] = {{"suite", verify.suite},
                   {"samples", verify.samples},
                   {"seed", verify.seed}};
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Initial data

SpectralField build_initial_data(const InitialDataSpec& spec, const Grid& grid,
                                 const DyadicPartition& P) {
    SpectralField u(grid, true);
    auto place_cosine = [&](const std::array<int, 3>& k, double amplitude, int comp) {
        auto slot = [&](int m) { return (m % grid.n + grid.n) % grid.n; };
        // amplitude * cos(k.x) e_comp: coefficients amplitude/2 at +-k.
        u.at(comp - 1, slot(k[0]), slot(k[1]), slot(k[2])) += cplx(amplitude / 2.0, 0.0);
        u.at(comp - 1, slot(-k[0]), slot(-k[1]), slot(-k[2])) += cplx(amplitude / 2.0, 0.0);
    };

    if (spec.profile == "zero") {
        return u;
    } else if (spec.profile == "constant") {
        u.at(spec.component - 1, 0, 0, 0) = cplx(spec.amplitude, 0.0);
        return u;
    } else if (spec.profile == "single-mode") {
        place_cosine(spec.k, spec.amplitude, spec.component);
        return u;
    } else if (spec.profile == "two-mode") {
        place_cosine(spec.k, spec.amplitude, spec.component);
        place_cosine(spec.k_second, spec.amplitude_second, spec.component_second);
        return u;
    } else if (spec.profile == "gaussian-bump") {
        PhysicalField f(grid);
        const double c = grid.box_length / 2.0;
        const double inv2w2 = 1.0 / (2.0 * spec.width * spec.width);
        for (int i1 = 0; i1 < grid.n; ++i1)
            for (int i2 = 0; i2 < grid.n; ++i2)
                for (int i3 = 0; i3 < grid.n; ++i3) {
                    const double x = i1 * grid.dx() - c, y = i2 * grid.dx() - c,
                                 z = i3 * grid.dx() - c;
                    f.at(spec.component - 1, i1, i2, i3) =
                        spec.amplitude * std::exp(-(x * x + y * y + z * z) * inv2w2);
                }
        return forward_transform(f);
    } else if (spec.profile == "random-band") {
        FieldEnsembleSpec e;
        e.count = 1;
        e.kind = FieldEnsembleSpec::Kind::Band;
        e.j_lo = spec.j_lo;
        e.j_hi = spec.j_hi;
        e.amplitude = spec.amplitude;
        e.seed = spec.seed;
        e.components = 3;
        return ensemble_sample(e, grid, P, 0);
    } else if (spec.profile == "checkpoint") {
        Checkpoint c = read_checkpoint(spec.path);
        if (!(c.field.grid == grid))
            throw ConfigError("checkpoint grid (" + std::to_string(c.field.grid.n) +
                              ") does not match 'grid.n' (" + std::to_string(grid.n) + ")");
        return c.field;
    }
    throw ConfigError("unknown initial profile '" + spec.profile + "'");
}

// ---------------------------------------------------------------------------
// Solve runs

namespace {

std::string checkpoint_name(int step) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%06d", step);
    return buf;
}

ordered_json sample_to_json(const MonitorSample& s) {
    return ordered_json{{"t", s.t},
                        {"L2_energy", s.L2_energy},
                        {"grad_L2", s.grad_L2},
                        {"L4_fourth_power", s.L4_fourth_power},
                        {"conservation_residual", s.conservation_residual},
                        {"besov_32", s.besov_32},
                        {"besov_72", s.besov_72},
                        {"phi_t", s.phi_t},
                        {"psi_t", s.psi_t},
                        {"blowup_integrand", s.blowup_integrand},
                        {"Hm_norm", s.Hm_norm}};
}

MonitorSample sample_from_json(const ordered_json& j) {
    MonitorSample s;
    s.t = j.at("t").get<double>();
    s.L2_energy = j.at("L2_energy").get<double>();
    s.grad_L2 = j.at("grad_L2").get<double>();
    s.L4_fourth_power = j.at("L4_fourth_power").get<double>();
    s.conservation_residual = j.at("conservation_residual").get<double>();
    s.besov_32 = j.at("besov_32").get<double>();
    s.besov_72 = j.at("besov_72").get<double>();
    s.phi_t = j.at("phi_t").get<double>();
    s.psi_t = j.at("psi_t").get<double>();
    s.blowup_integrand = j.at("blowup_integrand").get<double>();
    s.Hm_norm = j.at("Hm_norm").get<double>();
    return s;
}

std::string csv_header() {
    std::string h;
    for (const std::string& c : MonitorSample::column_names())
        h += (h.empty() ? "" : ",") + c;
    return h + "\n";
}

/// Re-reads monitors.csv for end-of-run quantities that need the whole
/// series (keeps resumed runs consistent without sidecar series state).
struct SeriesColumns {
    std::vector<double> t, phi, psi;
};

SeriesColumns read_phi_psi(const fs::path& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw MissingData("cannot open " + csv_path.string());
    std::string line;
    std::getline(in, line);  // header
    SeriesColumns s;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) vals.push_back(std::strtod(cell.c_str(), nullptr));
        if (vals.size() != MonitorSample::column_names().size())
            throw MissingData("malformed monitors row in " + csv_path.string());
        s.t.push_back(vals[0]);
        s.phi.push_back(vals[7]);
        s.psi.push_back(vals[8]);
    }
    return s;
}

// int_0^T phi(t) exp(C int_t^T psi) dt, trapezoidal in both layers.
double condition1_from_series(const SeriesColumns& s, double C) {
    const std::size_t n = s.t.size();
    if (n < 2) return 0.0;
    std::vector<double> tail(n, 0.0);  // int_t^T psi
    for (std::size_t i = n - 1; i-- > 0;)
        tail[i] = tail[i + 1] +
                  0.5 * (s.psi[i] + s.psi[i + 1]) * (s.t[i + 1] - s.t[i]);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double f0 = s.phi[i] * std::exp(C * tail[i]);
        const double f1 = s.phi[i + 1] * std::exp(C * tail[i + 1]);
        acc += 0.5 * (f0 + f1) * (s.t[i + 1] - s.t[i]);
    }
    return acc;
}

void truncate_csv(const fs::path& csv_path, std::size_t rows) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw MissingData("resume: cannot open " + csv_path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    in.close();
    const std::size_t keep = std::min(lines.size(), rows + 1);  // header + rows
    std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
    for (std::size_t i = 0; i < keep; ++i) out << lines[i] << "\n";
}

struct ResumePoint {
    bool found = false;
    int step = 0;
    std::size_t rows_written = 0;
    SolverState state;
    MonitorSample prev;
    bool have_prev = false;
};

ResumePoint find_resume_point(const fs::path& ckpt_dir) {
    ResumePoint r;
    if (!fs::exists(ckpt_dir)) return r;
    int best = -1;
    for (const auto& e : fs::directory_iterator(ckpt_dir)) {
        const std::string name = e.path().filename().string();
        if (name.size() != 11 || name.substr(6) != ".llbs") continue;
        const int step = std::atoi(name.substr(0, 6).c_str());
        if (!fs::exists(ckpt_dir / (checkpoint_name(step) + ".state.json"))) continue;
        best = std::max(best, step);
    }
    if (best < 0) return r;

    Checkpoint c = read_checkpoint((ckpt_dir / (checkpoint_name(best) + ".llbs")).string());
    std::ifstream in(ckpt_dir / (checkpoint_name(best) + ".state.json"));
    ordered_json j = ordered_json::parse(in);
    r.found = true;
    r.step = best;
    r.rows_written = j.at("rows_written").get<std::size_t>();
    r.state.u = c.field;
    r.state.t = c.time;
    r.state.dt = j.at("dt").get<double>();
    for (auto it = j.at("accumulators").begin(); it != j.at("accumulators").end(); ++it)
        r.state.accumulators[it.key()] = it.value().get<double>();
    if (j.contains("sample")) {
        r.prev = sample_from_json(j.at("sample"));
        r.have_prev = true;
    }
    return r;
}

void write_state_sidecar(const fs::path& ckpt_dir, int step, const SolverState& state,
                         std::size_t rows_written, const MonitorSample& sample) {
    ordered_json j;
    j["step"] = step;
    j["t"] = state.t;
    j["dt"] = state.dt;
    j["rows_written"] = rows_written;
    ordered_json acc = ordered_json::object();
    for (const auto& [k, v] : state.accumulators) acc[k] = v;
    j["accumulators"] = acc;
    j["sample"] = sample_to_json(sample);
    // Write-then-rename so an interrupted run never leaves a torn sidecar.
    const fs::path final_path = ckpt_dir / (checkpoint_name(step) + ".state.json");
    const fs::path tmp_path = ckpt_dir / (checkpoint_name(step) + ".state.json.tmp");
    {
        std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
        out << j.dump(2) << "\n";
    }
    fs::rename(tmp_path, final_path);
}

std::string classify(const RunSummary& s, double initial_besov32) {
    if (s.diverged) return "diverged(grid-limited)";
    if (initial_besov32 > 0.0 && s.terminal.besov_32 <= 0.1 * initial_besov32)
        return "decayed";
    return "bounded";
}

constexpr int kMaxHalvings = 6;

// Friedrichs projection of the initial data.  Without an explicit cutoff the
// annulus [1/n, n] spans the whole grid except k = 0, whose dynamics the
// solver keeps; preserve the mean so constant data evolves too.
SpectralField project_initial(SpectralField u, const LLBParams& params) {
    const double cutoff = params.effective_cutoff(u.grid);
    SpectralField out = spectral_cutoff(u, cutoff);
    if (params.cutoff_n == 0.0)
        for (int c = 0; c < 3; ++c) out.at(c, 0, 0, 0) = u.at(c, 0, 0, 0);
    return out;
}

}  // namespace

RunSummary run_solve(const ExperimentConfig& cfg, const std::string& out_dir,
                     bool resume) {
    cfg.params.validate();
    if (!(cfg.horizon > 0.0)) throw ConfigError("'horizon' must be positive");

    const Grid grid(cfg.grid_n, cfg.box_length);
    const DyadicPartition P = build_partition(grid);
    const fs::path dir(out_dir);
    const fs::path ckpt_dir = dir / "checkpoints";
    const fs::path csv_path = dir / "monitors.csv";
    fs::create_directories(ckpt_dir);

    {
        std::ofstream out(dir / "config.json", std::ios::binary | std::ios::trunc);
        out << cfg.to_json();
    }

    // The run evolves the Friedrichs projection of the configured data.
    SpectralField u0 = project_initial(build_initial_data(cfg.initial, grid, P),
                                       cfg.params);
    const double initial_besov32 = besov(u0, 1.5, 2.0, 1.0, P);

    SolverState state;
    state.u = u0;
    state.t = 0.0;
    state.dt = cfg.dt > 0.0 ? cfg.dt : default_dt(u0, cfg.params);

    const int cadence = std::max(
        1, static_cast<int>(std::ceil(cfg.horizon / (10.0 * state.dt))));

    MonitorSample prev;
    bool have_prev = false;
    int step_index = 0;
    std::size_t rows_written = 0;
    int halvings = 0;

    RunSummary summary;
    summary.dt_used = state.dt;

    std::ofstream csv;
    const ResumePoint rp = resume ? find_resume_point(ckpt_dir) : ResumePoint{};
    if (rp.found) {
        state = rp.state;
        prev = rp.prev;
        have_prev = rp.have_prev;
        step_index = rp.step;
        rows_written = rp.rows_written;
        truncate_csv(csv_path, rows_written);
        csv.open(csv_path, std::ios::binary | std::ios::app);
    } else {
        csv.open(csv_path, std::ios::binary | std::ios::trunc);
        csv << csv_header();
    }
    if (!csv) throw ConfigError("cannot write " + csv_path.string());

    auto record = [&](const SpectralField& u, double t) {
        const auto split = split_solution(state, u0, cfg.monitors.damped_split, cfg.params);
        MonitorSample s = measure(u, t, split.first, cfg.params, P);
        if (have_prev) {
            s.conservation_residual = conservation_residual(prev, s, cfg.params);
            accumulate(state, prev, s);
        }
        csv << s.csv_row() << "\n";
        csv.flush();
        ++rows_written;
        prev = s;
        have_prev = true;
        return s;
    };

    auto checkpoint_now = [&](const MonitorSample& s) {
        write_checkpoint((ckpt_dir / (checkpoint_name(step_index) + ".llbs")).string(),
                         state.u, state.t);
        write_state_sidecar(ckpt_dir, step_index, state, rows_written, s);
    };

    if (!rp.found) {
        const MonitorSample s0 = record(state.u, 0.0);
        checkpoint_now(s0);
    }

    const double t_end = cfg.horizon;
    const double t_eps = 1e-12 * std::max(1.0, t_end);
    double dt_nominal = state.dt;
    while (state.t < t_end - t_eps) {
        state.dt = std::min(dt_nominal, t_end - state.t);
        StepResult r = step(state, cfg.params);
        if (r.diverged) {
            if (halvings < kMaxHalvings) {
                ++halvings;
                dt_nominal *= 0.5;
                continue;
            }
            summary.diverged = true;
            summary.diagnostic = r.diagnostic;
            state = r.state;  // last healthy state
            const MonitorSample s = record(state.u, state.t);
            ++step_index;
            checkpoint_now(s);
            break;
        }
        state = std::move(r.state);
        ++step_index;
        const MonitorSample s = record(state.u, state.t);
        const bool terminal = !(state.t < t_end - t_eps);
        if (step_index % cadence == 0 || terminal) checkpoint_now(s);
    }

    summary.completed = !summary.diverged;
    summary.t_final = state.t;
    summary.dt_used = dt_nominal;
    summary.steps = step_index;
    summary.accumulators = state.accumulators;
    summary.terminal = prev;
    summary.c1 = fit_c1(grid, P);
    summary.smallness_active = cfg.monitors.smallness_eps > 0.0;
    if (summary.smallness_active)
        summary.smallness = smallness_monitor(state, cfg.params, summary.c1,
                                              cfg.monitors.smallness_eps);
    summary.condition1_integral =
        condition1_from_series(read_phi_psi(csv_path), cfg.monitors.condition1_c);
    auto acc_it = state.accumulators.find("last_blowup_increment");
    summary.blowup_converged =
        acc_it != state.accumulators.end() && acc_it->second < 1e-12;
    summary.classification = classify(summary, initial_besov32);

    ordered_json j;
    j["kind"] = cfg.kind.empty() ? "solve" : cfg.kind;
    j["completed"] = summary.completed;
    j["diverged"] = summary.diverged;
    j["diagnostic"] = summary.diagnostic;
    j["t_final"] = summary.t_final;
    j["dt_used"] = summary.dt_used;
    j["steps"] = summary.steps;
    j["classification"] = summary.classification;
    j["terminal"] = sample_to_json(summary.terminal);
    ordered_json acc = ordered_json::object();
    for (const auto& [k, v] : summary.accumulators) acc[k] = v;
    j["accumulators"] = acc;
    j["c1_fitted"] = summary.c1;
    j["condition1_c"] = cfg.monitors.condition1_c;
    j["condition1_integral"] = summary.condition1_integral;
    j["blowup_converged"] = summary.blowup_converged;
    j["smallness_active"] = summary.smallness_active;
    if (summary.smallness_active)
        j["smallness"] = {{"passed", summary.smallness.passed},
                          {"eps", summary.smallness.eps},
                          {"sup_term", summary.smallness.sup_term},
                          {"heat_term", summary.smallness.heat_term},
                          {"damping_term", summary.smallness.damping_term},
                          {"total", summary.smallness.total}};
    {
        std::ofstream out(dir / "summary.json", std::ios::binary | std::ios::trunc);
        out << j.dump(2) << "\n";
    }
    return summary;
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg,
                                  const std::string& out_dir) {
    const auto& ladder = cfg.sweep.amplitudes;
    if (ladder.size() < 3)
        throw ConfigError("'sweep.amplitudes' needs at least 3 points");
    for (std::size_t i = 1; i < ladder.size(); ++i)
        if (!(ladder[i] > ladder[i - 1]))
            throw ConfigError("'sweep.amplitudes' must be strictly increasing");
    if (cfg.initial.profile == "zero" || cfg.initial.profile == "checkpoint")
        throw ConfigError("sweep-smallness needs an amplitude-scalable initial profile");

    fs::create_directories(out_dir);
    {
        std::ofstream out(fs::path(out_dir) / "config.json",
                          std::ios::binary | std::ios::trunc);
        out << cfg.to_json();
    }

    std::vector<SweepPoint> points(ladder.size());
    std::vector<std::string> errors(ladder.size());
    std::atomic<std::size_t> next{0};
    int workers = cfg.sweep.workers > 0
                      ? cfg.sweep.workers
                      : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, static_cast<int>(ladder.size())));

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= ladder.size()) return;
            ExperimentConfig point_cfg = cfg;
            point_cfg.kind = "solve";
            // Shared shape and seed; only the amplitude moves along the ladder.
            const double scale =
                cfg.initial.amplitude != 0.0 ? ladder[i] / cfg.initial.amplitude : 0.0;
            point_cfg.initial.amplitude = ladder[i];
            point_cfg.initial.amplitude_second =
                cfg.initial.amplitude != 0.0 ? cfg.initial.amplitude_second * scale
                                             : cfg.initial.amplitude_second;
            if (cfg.monitors.smallness_eps == 0.0)
                point_cfg.monitors.smallness_eps = 2.0 * ladder[i];
            char name[32];
            std::snprintf(name, sizeof(name), "point_%03zu", i);
            const std::string sub = (fs::path(out_dir) / name).string();
            points[i].amplitude = ladder[i];
            try {
                points[i].summary = run_solve(point_cfg, sub, false);
                points[i].classification = points[i].summary.classification;
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (std::size_t i = 0; i < ladder.size(); ++i)
        if (!errors[i].empty())
            throw ConfigError("sweep point " + std::to_string(i) + " failed: " + errors[i]);

    // Index file, written once by the orchestrator in ladder order.
    std::ofstream out(fs::path(out_dir) / "sweep.csv", std::ios::binary | std::ios::trunc);
    out << "amplitude,classification,terminal_besov32,sup_besov32,int_blowup,"
           "smallness_passed\n";
    for (const SweepPoint& p : points) {
        auto acc = [&](const char* key) {
            auto it = p.summary.accumulators.find(key);
            return it == p.summary.accumulators.end() ? 0.0 : it->second;
        };
        out << fmt17(p.amplitude) << ',' << p.classification << ','
            << fmt17(p.summary.terminal.besov_32) << ',' << fmt17(acc("sup_besov32"))
            << ',' << fmt17(acc("int_blowup")) << ','
            << (p.summary.smallness_active && p.summary.smallness.passed ? 1 : 0) << "\n";
    }
    return points;
}

// ---------------------------------------------------------------------------
// Stability probe

StabilityReport run_stability(const ExperimentConfig& cfg, const std::string& out_dir) {
    cfg.params.validate();
    if (!(cfg.stability.perturbation_scale > 0.0))
        throw ConfigError("'stability.perturbation_scale' must be positive");
    if (!(cfg.horizon > 0.0)) throw ConfigError("'horizon' must be positive");

    const Grid grid(cfg.grid_n, cfg.box_length);
    const DyadicPartition P = build_partition(grid);
    fs::create_directories(out_dir);
    {
        std::ofstream out(fs::path(out_dir) / "config.json",
                          std::ios::binary | std::ios::trunc);
        out << cfg.to_json();
    }

    const double cutoff = cfg.params.effective_cutoff(grid);
    SpectralField u0 = project_initial(build_initial_data(cfg.initial, grid, P),
                                       cfg.params);

    FieldEnsembleSpec pert_spec;
    pert_spec.count = 1;
    pert_spec.kind = FieldEnsembleSpec::Kind::Band;
    pert_spec.j_lo = P.j_min + 1;
    pert_spec.j_hi = std::min(P.j_min + 3, P.j_max);
    pert_spec.amplitude = cfg.stability.perturbation_scale;
    pert_spec.seed = cfg.stability.perturbation_seed;
    const SpectralField pert =
        spectral_cutoff(ensemble_sample(pert_spec, grid, P, 0), cutoff);

    SolverState a, b;
    a.u = u0;
    b.u = u0 + pert;
    const double denom = besov(b.u - a.u, 1.5, 2.0, 1.0, P);
    if (!(denom > 0.0))
        throw ConfigError("stability probe: the perturbation vanished after the "
                          "spectral cutoff (zero denominator)");

    const double dt0 =
        cfg.dt > 0.0 ? cfg.dt
                     : std::min(default_dt(a.u, cfg.params), default_dt(b.u, cfg.params));
    a.dt = b.dt = dt0;

    std::ofstream csv(fs::path(out_dir) / "stability.csv",
                      std::ios::binary | std::ios::trunc);
    csv << "t,delta_ratio,besov32_base,besov32_perturbed\n";

    StabilityReport rep;
    double gronwall_integral = 0.0;
    double prev_integrand = 0.0;
    const double t_end = cfg.horizon;
    const double t_eps = 1e-12 * std::max(1.0, t_end);
    bool first = true;
    for (;;) {
        const double na = besov(a.u, 1.5, 2.0, 1.0, P);
        const double nb = besov(b.u, 1.5, 2.0, 1.0, P);
        const double ratio = besov(b.u - a.u, 1.5, 2.0, 1.0, P) / denom;
        const double integrand = na * na + nb * nb;
        if (!first)
            gronwall_integral += 0.5 * (prev_integrand + integrand) *
                                 (a.t - rep.times.back());
        rep.times.push_back(a.t);
        rep.ratios.push_back(ratio);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        csv << fmt17(a.t) << ',' << fmt17(ratio) << ',' << fmt17(na) << ','
            << fmt17(nb) << "\n";
        prev_integrand = integrand;
        first = false;

        if (!(a.t < t_end - t_eps)) break;
        a.dt = b.dt = std::min(dt0, t_end - a.t);
        StepResult ra = step(a, cfg.params);
        StepResult rb = step(b, cfg.params);
        if (ra.diverged || rb.diverged) {
            rep.diverged = true;
            rep.diagnostic = ra.diverged ? ra.diagnostic : rb.diagnostic;
            break;
        }
        a = std::move(ra.state);
        b = std::move(rb.state);
    }

    rep.gronwall_budget = cfg.monitors.gronwall_c * gronwall_integral;
    rep.bound = std::exp(rep.gronwall_budget);
    rep.within_bound = !rep.diverged && rep.max_ratio <= rep.bound;

    ordered_json j;
    j["kind"] = "stability";
    j["diverged"] = rep.diverged;
    j["diagnostic"] = rep.diagnostic;
    j["max_ratio"] = rep.max_ratio;
    j["gronwall_c"] = cfg.monitors.gronwall_c;
    j["gronwall_budget"] = rep.gronwall_budget;
    j["bound"] = rep.bound;
    j["within_bound"] = rep.within_bound;
    j["perturbation_scale"] = cfg.stability.perturbation_scale;
    j["perturbation_seed"] = cfg.stability.perturbation_seed;
    std::ofstream out(fs::path(out_dir) / "summary.json",
                      std::ios::binary | std::ios::trunc);
    out << j.dump(2) << "\n";
    return rep;
}

// ---------------------------------------------------------------------------
// Verify driver

bool run_verify(const ExperimentConfig& cfg, const std::string& out_dir) {
    const Grid grid(cfg.grid_n, cfg.box_length);
    const DyadicPartition P = build_partition(grid);
    fs::create_directories(out_dir);
    {
        std::ofstream out(fs::path(out_dir) / "config.json",
                          std::ios::binary | std::ios::trunc);
        out << cfg.to_json();
    }
    const std::vector<InequalityVerdict> verdicts =
        run_suite(cfg.verify.suite, grid, P, cfg.verify.samples, cfg.verify.seed);
    std::ofstream out(fs::path(out_dir) / "verdicts.jsonl",
                      std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + out_dir + "/verdicts.jsonl");
    bool all_passed = true;
    for (const InequalityVerdict& v : verdicts) {
        out << v.to_json_line() << "\n";
        all_passed = all_passed && v.passed;
    }
    return all_passed;
}

// ---------------------------------------------------------------------------
// Plots

void run_plot(const std::string& run_dir) {
    const fs::path csv_path = fs::path(run_dir) / "monitors.csv";
    if (!fs::exists(csv_path))
        throw MissingData("no monitors.csv in " + run_dir);

    std::ifstream in(csv_path);
    std::string line;
    if (!std::getline(in, line))
        throw MissingData("empty monitors.csv in " + run_dir);
    const auto& cols = MonitorSample::column_names();
    std::vector<std::vector<double>> data(cols.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(ss, cell, ',') && c < cols.size())
            data[c++].push_back(std::strtod(cell.c_str(), nullptr));
        if (c != cols.size())
            throw MissingData("malformed monitors row in " + csv_path.string());
    }

    auto col = [&](const char* name) -> const std::vector<double>& {
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (cols[i] == name) return data[i];
        throw MissingData(std::string("missing monitors column ") + name);
    };
    const std::vector<double>& t = col("t");

    auto chart = [&](const char* file, const char* title,
                     std::initializer_list<const char*> names) {
        std::vector<PlotSeries> series;
        for (const char* name : names) series.push_back({name, t, col(name)});
        write_svg_chart((fs::path(run_dir) / file).string(), title, series);
    };
    chart("energy.svg", "Energy monitors", {"L2_energy", "grad_L2", "L4_fourth_power"});
    chart("besov.svg", "Besov norms", {"besov_32", "besov_72"});
    chart("phipsi.svg", "phi / psi monitors", {"phi_t", "psi_t"});
    chart("blowup.svg", "Blow-up integrand", {"blowup_integrand"});
}

}  // namespace llb
