#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "llb/checkpoint.hpp"
#include "llb/errors.hpp"
#include "llb/operators.hpp"
#include "llb/run.hpp"

namespace fs = std::filesystem;
using namespace llb;
using llbtest::read_file;
using llbtest::rel_err;
using llbtest::TempDir;

namespace {

ExperimentConfig small_solve_config() {
    ExperimentConfig cfg;
    cfg.kind = "solve";
    cfg.grid_n = 16;
    cfg.initial.profile = "single-mode";
    cfg.initial.k = {1, 0, 0};
    cfg.initial.amplitude = 1e-3;
    cfg.horizon = 0.2;
    cfg.dt = 1e-2;
    return cfg;
}

std::vector<std::string> csv_lines(const std::string& path) {
    std::vector<std::string> lines;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<double> split_row(const std::string& row) {
    std::vector<double> vals;
    std::stringstream ss(row);
    std::string cell;
    while (std::getline(ss, cell, ',')) vals.push_back(std::strtod(cell.c_str(), nullptr));
    return vals;
}

}  // namespace

TEST_SUITE_BEGIN("run");

TEST_CASE("config parsing is fail-closed") {
    SUBCASE("unknown top-level key carries its path") {
        try {
            ExperimentConfig::from_json_text(R"({"kind":"solve","horizons":1.0})");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("horizons") != std::string::npos);
        }
    }
    SUBCASE("unknown nested key carries its path") {
        try {
            ExperimentConfig::from_json_text(
                R"({"kind":"solve","horizon":1.0,"params":{"kapa":2.0}})");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("params.kapa") != std::string::npos);
        }
    }
    SUBCASE("ill-typed value carries its path") {
        try {
            ExperimentConfig::from_json_text(
                R"({"kind":"solve","horizon":"soon"})");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("horizon") != std::string::npos);
        }
    }
    SUBCASE("invalid kind") {
        CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"kind":"explore"})"),
                        ConfigError);
        CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({})"), ConfigError);
    }
    SUBCASE("bad syntax") {
        CHECK_THROWS_AS(ExperimentConfig::from_json_text("{"), ConfigError);
    }
    SUBCASE("unknown initial profile lists the valid names") {
        try {
            ExperimentConfig::from_json_text(
                R"({"kind":"solve","horizon":1.0,"initial":{"profile":"vortex"}})");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("single-mode") != std::string::npos);
        }
    }
    SUBCASE("mathematical parameter bounds") {
        CHECK_THROWS_AS(
            ExperimentConfig::from_json_text(
                R"({"kind":"solve","horizon":1.0,"params":{"delta":2.5}})"),
            ConfigError);
    }
    SUBCASE("sweep ladder validation") {
        const char* dup =
            R"({"kind":"sweep-smallness","horizon":1.0,"sweep":{"amplitudes":[1e-3,1e-3,1e-2]}})";
        CHECK_THROWS_AS(ExperimentConfig::from_json_text(dup), ConfigError);
        const char* single =
            R"({"kind":"sweep-smallness","horizon":1.0,"sweep":{"amplitudes":[1e-3]}})";
        CHECK_THROWS_AS(ExperimentConfig::from_json_text(single), ConfigError);
        const char* decreasing =
            R"({"kind":"sweep-smallness","horizon":1.0,"sweep":{"amplitudes":[3e-3,2e-3,1e-3]}})";
        CHECK_THROWS_AS(ExperimentConfig::from_json_text(decreasing), ConfigError);
    }
    SUBCASE("round trip through to_json") {
        ExperimentConfig cfg = small_solve_config();
        cfg.monitors.smallness_eps = 2e-3;
        const ExperimentConfig back = ExperimentConfig::from_json_text(cfg.to_json());
        CHECK(back.kind == cfg.kind);
        CHECK(back.grid_n == cfg.grid_n);
        CHECK(back.initial.profile == cfg.initial.profile);
        CHECK(back.initial.amplitude == cfg.initial.amplitude);
        CHECK(back.horizon == cfg.horizon);
        CHECK(back.monitors.smallness_eps == cfg.monitors.smallness_eps);
        CHECK(back.to_json() == cfg.to_json());
    }
}

TEST_CASE("initial data profiles") {
    const Grid g(16);
    const DyadicPartition P = build_partition(g);
    SUBCASE("single-mode coefficients") {
        InitialDataSpec s;
        s.profile = "single-mode";
        s.k = {0, 2, 0};
        s.amplitude = 0.5;
        s.component = 2;
        const SpectralField u = build_initial_data(s, g, P);
        CHECK(rel_err(u.at(1, 0, 2, 0).real(), 0.25) < 1e-15);
        CHECK(rel_err(u.at(1, 0, 14, 0).real(), 0.25) < 1e-15);
        CHECK(std::abs(u.at(0, 0, 2, 0)) == 0.0);
    }
    SUBCASE("constant") {
        InitialDataSpec s;
        s.profile = "constant";
        s.amplitude = 0.1;
        const SpectralField u = build_initial_data(s, g, P);
        CHECK(rel_err(u.at(0, 0, 0, 0).real(), 0.1) < 1e-15);
    }
    SUBCASE("two-mode superposes both cosines") {
        InitialDataSpec s;
        s.profile = "two-mode";
        s.k = {1, 0, 0};
        s.amplitude = 0.2;
        s.component = 1;
        s.k_second = {0, 2, 0};
        s.amplitude_second = 0.4;
        s.component_second = 2;
        const SpectralField u = build_initial_data(s, g, P);
        CHECK(rel_err(u.at(0, 1, 0, 0).real(), 0.1) < 1e-15);
        CHECK(rel_err(u.at(1, 0, 2, 0).real(), 0.2) < 1e-15);
    }
    SUBCASE("gaussian-bump is real with the right peak") {
        InitialDataSpec s;
        s.profile = "gaussian-bump";
        s.amplitude = 0.3;
        s.width = 0.8;
        const SpectralField u = build_initial_data(s, g, P);
        const PhysicalField f = inverse_transform(u);
        CHECK(rel_err(f.at(0, 8, 8, 8), 0.3) < 1e-10);  // box centre at n/2
    }
    SUBCASE("random-band is deterministic in the seed") {
        InitialDataSpec s;
        s.profile = "random-band";
        s.j_lo = 0;
        s.j_hi = 1;
        s.amplitude = 0.01;
        s.seed = 77;
        const SpectralField a = build_initial_data(s, g, P);
        const SpectralField b = build_initial_data(s, g, P);
        CHECK(llbtest::field_rel_err(a, b) == 0.0);
        CHECK(rel_err(l2_norm(a), 0.01) < 1e-12);
    }
    SUBCASE("checkpoint grid mismatch is a config error") {
        TempDir dir("ckpt_cfg");
        const std::string path = dir.str() + "/c.llbs";
        write_checkpoint(path, SpectralField(Grid(32), true), 0.0);
        InitialDataSpec s;
        s.profile = "checkpoint";
        s.path = path;
        CHECK_THROWS_AS(build_initial_data(s, g, P), ConfigError);
        CHECK_NOTHROW(build_initial_data(s, Grid(32), build_partition(Grid(32))));
    }
}

TEST_CASE("zero-data run: flat monitors, psi = 1") {
    TempDir dir("zero");
    ExperimentConfig cfg = small_solve_config();
    cfg.initial.profile = "zero";
    const RunSummary s = run_solve(cfg, dir.str());
    CHECK(s.completed);
    CHECK(!s.diverged);
    const auto lines = csv_lines(dir.str() + "/monitors.csv");
    REQUIRE(lines.size() >= 3);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto vals = split_row(lines[i]);
        REQUIRE(vals.size() == 11);
        for (std::size_t c = 1; c < vals.size(); ++c) {
            if (c == 8)
                CHECK(vals[c] == 1.0);  // psi
            else
                CHECK(vals[c] == 0.0);
        }
    }
    SUBCASE("plot files for the zero run") {
        run_plot(dir.str());
        for (const char* f : {"energy.svg", "besov.svg", "phipsi.svg", "blowup.svg"}) {
            CHECK(fs::exists(dir.path() / f));
            CHECK(fs::file_size(dir.path() / f) > 0);
        }
    }
}

TEST_CASE("constant-data run matches the scalar ODE oracle") {
    TempDir dir("const");
    ExperimentConfig cfg = small_solve_config();
    cfg.initial.profile = "constant";
    cfg.initial.amplitude = 0.1;
    cfg.horizon = 5.0;
    cfg.dt = 5e-3;
    const RunSummary s = run_solve(cfg, dir.str());
    CHECK(s.completed);
    // c(t)^2 = c0^2 e^{-2kt} / (1 + mu c0^2 (1 - e^{-2kt})); L2 = |c| sqrt(V).
    const double e = std::exp(-2.0 * 5.0);
    const double c = 0.1 * std::sqrt(e / (1.0 + 0.01 * (1.0 - e)));
    const Grid g(16);
    CHECK(rel_err(s.terminal.L2_energy, c * std::sqrt(g.volume())) < 1e-8);
    CHECK(fs::exists(dir.path() / "summary.json"));
    const std::string summary = read_file(dir.str() + "/summary.json");
    CHECK(summary.find("\"completed\": true") != std::string::npos);
    // Constant data is pure mean: homogeneous-Besov classification stays
    // "bounded" even though the L2 energy decays.
    CHECK(summary.find("\"classification\": \"bounded\"") != std::string::npos);
}

TEST_CASE("runs are byte-identical across reruns") {
    TempDir a("det_a"), b("det_b");
    ExperimentConfig cfg = small_solve_config();
    cfg.initial.profile = "random-band";
    cfg.initial.j_lo = 0;
    cfg.initial.j_hi = 1;
    cfg.initial.seed = 5;
    run_solve(cfg, a.str());
    run_solve(cfg, b.str());
    CHECK(read_file(a.str() + "/monitors.csv") == read_file(b.str() + "/monitors.csv"));
    CHECK(read_file(a.str() + "/summary.json") == read_file(b.str() + "/summary.json"));
}

TEST_CASE("resume from a mid-run checkpoint reproduces the full run") {
    TempDir full("res_full"), cut("res_cut");
    ExperimentConfig cfg = small_solve_config();
    cfg.horizon = 0.5;
    cfg.dt = 1e-2;  // 50 steps, cadence 5
    run_solve(cfg, full.str());

    // Simulate an interruption: copy the run dir, drop everything after an
    // early checkpoint, truncate the CSV mid-stream.
    fs::copy(full.path(), cut.path(),
             fs::copy_options::recursive | fs::copy_options::overwrite_existing);
    int kept = 0;
    for (const auto& e : fs::directory_iterator(cut.path() / "checkpoints")) {
        const std::string name = e.path().filename().string();
        const int step = std::atoi(name.substr(0, 6).c_str());
        if (step > 20) fs::remove(e.path());
        else kept = std::max(kept, step);
    }
    REQUIRE(kept == 20);
    const auto lines = csv_lines(cut.str() + "/monitors.csv");
    {
        std::ofstream out(cut.str() + "/monitors.csv", std::ios::trunc);
        for (std::size_t i = 0; i < 25 && i < lines.size(); ++i) out << lines[i] << "\n";
    }
    fs::remove(cut.path() / "summary.json");

    const RunSummary resumed = run_solve(cfg, cut.str(), true);
    CHECK(resumed.completed);
    const auto la = csv_lines(full.str() + "/monitors.csv");
    const auto lb = csv_lines(cut.str() + "/monitors.csv");
    REQUIRE(la.size() == lb.size());
    for (std::size_t i = 1; i < la.size(); ++i) {
        const auto va = split_row(la[i]);
        const auto vb = split_row(lb[i]);
        REQUIRE(va.size() == vb.size());
        for (std::size_t c = 0; c < va.size(); ++c)
            CHECK(std::abs(va[c] - vb[c]) <=
                  1e-12 * std::max(1.0, std::abs(va[c])));
    }
    CHECK(read_file(full.str() + "/summary.json") == read_file(cut.str() + "/summary.json"));
}

TEST_CASE("sweep: per-point directories and the index file") {
    TempDir dir("sweep");
    ExperimentConfig cfg = small_solve_config();
    cfg.kind = "sweep-smallness";
    cfg.horizon = 0.3;
    cfg.sweep.amplitudes = {1e-4, 1e-3, 1e-2};
    cfg.sweep.workers = 2;
    const auto points = run_sweep(cfg, dir.str());
    REQUIRE(points.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(points[i].amplitude == cfg.sweep.amplitudes[i]);
        CHECK(!points[i].classification.empty());
        char name[32];
        std::snprintf(name, sizeof(name), "point_%03d", i);
        CHECK(fs::exists(dir.path() / name / "summary.json"));
        CHECK(fs::exists(dir.path() / name / "monitors.csv"));
    }
    const auto lines = csv_lines(dir.str() + "/sweep.csv");
    REQUIRE(lines.size() == 4);
    CHECK(lines[0].rfind("amplitude,", 0) == 0);
    // Closed classification set.
    for (const auto& p : points)
        CHECK((p.classification == "decayed" || p.classification == "bounded" ||
               p.classification == "diverged(grid-limited)"));
}

TEST_CASE("stability probe: linear regime closed form and the Gronwall bound") {
    TempDir dir("stab");
    ExperimentConfig cfg = small_solve_config();
    cfg.kind = "stability";
    cfg.initial.profile = "zero";
    cfg.horizon = 0.5;
    cfg.dt = 2.5e-2;
    cfg.stability.perturbation_scale = 1e-6;
    cfg.stability.perturbation_seed = 3;
    const StabilityReport rep = run_stability(cfg, dir.str());
    REQUIRE(!rep.diverged);
    REQUIRE(rep.times.size() > 2);
    CHECK(rep.within_bound);
    CHECK(rep.ratios.front() == doctest::Approx(1.0));
    CHECK(fs::exists(dir.path() / "stability.csv"));
    CHECK(fs::exists(dir.path() / "summary.json"));

    // Base state zero: delta u evolves (to O(scale^2)) by the damped heat
    // flow, so the ratio matches the closed-form decay of the perturbation.
    const Grid g(16);
    const DyadicPartition P = build_partition(g);
    FieldEnsembleSpec pert_spec;
    pert_spec.count = 1;
    pert_spec.kind = FieldEnsembleSpec::Kind::Band;
    pert_spec.j_lo = P.j_min + 1;
    pert_spec.j_hi = std::min(P.j_min + 3, P.j_max);
    pert_spec.amplitude = 1e-6;
    pert_spec.seed = 3;
    const SpectralField pert = ensemble_sample(pert_spec, g, P, 0);
    const double denom = besov(pert, 1.5, 2.0, 1.0, P);
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        const double want =
            besov(heat_propagate(pert, rep.times[i], 1.0), 1.5, 2.0, 1.0, P) / denom;
        CHECK(rel_err(rep.ratios[i], want) < 1e-5);  // cross term is O(scale^2)
    }
}

TEST_CASE("stability probe rejects a vanishing perturbation") {
    TempDir dir("stab_bad");
    ExperimentConfig cfg = small_solve_config();
    cfg.kind = "stability";
    cfg.stability.perturbation_scale = 0.0;
    CHECK_THROWS_AS(run_stability(cfg, dir.str()), ConfigError);
}

TEST_CASE("verify driver writes JSON-lines verdicts") {
    TempDir dir("verify");
    ExperimentConfig cfg;
    cfg.kind = "verify";
    cfg.grid_n = 16;
    cfg.verify.suite = "composition";
    cfg.verify.samples = 5;
    cfg.verify.seed = 7;
    CHECK(run_verify(cfg, dir.str()));
    const std::string text = read_file(dir.str() + "/verdicts.jsonl");
    CHECK(!text.empty());
    // One JSON object per line.
    std::stringstream ss(text);
    std::string line;
    int n = 0;
    while (std::getline(ss, line)) {
        CHECK(line.front() == '{');
        CHECK(line.back() == '}');
        ++n;
    }
    CHECK(n >= 1);

    SUBCASE("byte-identical on rerun") {
        TempDir dir2("verify2");
        CHECK(run_verify(cfg, dir2.str()));
        CHECK(read_file(dir2.str() + "/verdicts.jsonl") == text);
    }
}

TEST_CASE("plot without monitors is MissingData") {
    TempDir dir("noplot");
    CHECK_THROWS_AS(run_plot(dir.str()), MissingData);
}

TEST_SUITE_END();
