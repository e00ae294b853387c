#pragma once

#include <unistd.h>

#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "llb/ensemble.hpp"
#include "llb/fft.hpp"

namespace llbtest {

// amplitude * cos(k . x) in the given component (0-based).
inline llb::SpectralField single_mode(const llb::Grid& g, const std::array<int, 3>& k,
                                      double amplitude, int comp = 0) {
    llb::SpectralField u(g, true);
    auto slot = [&](int m) { return (m % g.n + g.n) % g.n; };
    u.at(comp, slot(k[0]), slot(k[1]), slot(k[2])) += llb::cplx(amplitude / 2.0, 0.0);
    u.at(comp, slot(-k[0]), slot(-k[1]), slot(-k[2])) += llb::cplx(amplitude / 2.0, 0.0);
    return u;
}

inline llb::SpectralField random_field(const llb::Grid& g, const llb::DyadicPartition& P,
                                       std::uint64_t seed, double amplitude = 1.0,
                                       int components = 3) {
    llb::FieldEnsembleSpec spec;
    spec.kind = llb::FieldEnsembleSpec::Kind::PowerLaw;
    spec.alpha = 2.0;
    spec.amplitude = amplitude;
    spec.seed = seed;
    spec.components = components;
    return llb::ensemble_sample(spec, g, P, 0);
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline double field_rel_err(const llb::SpectralField& got, const llb::SpectralField& want) {
    return llb::l2_norm(got - want) / std::max(llb::l2_norm(want), 1e-300);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Fresh scratch directory under the system temp root.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("llb_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string str() const { return path_.string(); }
    std::filesystem::path path() const { return path_; }

  private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

}  // namespace llbtest
