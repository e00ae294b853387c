#include "llb/monitors.hpp"

#include <cmath>
#include <sstream>

#include "llb/fft.hpp"
#include "llb/operators.hpp"

namespace llb {

bool MonitorSample::finite() const {
    for (double v : {t, L2_energy, grad_L2, L4_fourth_power, conservation_residual,
                     besov_32, besov_72, phi_t, psi_t, blowup_integrand, Hm_norm})
        if (!std::isfinite(v)) return false;
    return true;
}

const std::vector<std::string>& MonitorSample::column_names() {
    static const std::vector<std::string> cols = {
        "t",          "L2_energy", "grad_L2", "L4_fourth_power",
        "conservation_residual",   "besov_32", "besov_72",
        "phi_t",      "psi_t",     "blowup_integrand", "Hm_norm"};
    return cols;
}

std::string MonitorSample::csv_row() const {
    std::ostringstream os;
    os.precision(17);
    const double vals[] = {t,       L2_energy, grad_L2, L4_fourth_power,
                           conservation_residual, besov_32, besov_72,
                           phi_t,   psi_t,     blowup_integrand, Hm_norm};
    for (std::size_t i = 0; i < std::size(vals); ++i) {
        if (i) os << ",";
        os << vals[i];
    }
    return os.str();
}

std::pair<double, double> monitor_phi_psi(const SpectralField& uL,
                                          const LLBParams& params,
                                          const DyadicPartition& P) {
    const double rho = params.rho;
    const double b32 = besov(uL, 1.5, 2.0, 1.0, P);
    const double b72 = besov(uL, 3.5, 2.0, 1.0, P);
    const double b52 = besov(uL, 2.5, 2.0, 1.0, P);
    const double b_mid = besov(uL, 2.0 / rho + 1.5, 2.0, 1.0, P);
    const double b2 = besov(uL, 2.0, 2.0, 1.0, P);   // 7/2 - 3/2
    const double phi = b32 + b32 * b72;
    const double psi = b52 * b52 + b72 + std::pow(b_mid, rho) +
                       std::pow(b2, rho / (rho - 1.0)) + 1.0;
    return {phi, psi};
}

double blowup_integrand(const SpectralField& u, const LLBParams& params,
                        const DyadicPartition& P) {
    const double p = params.p_blowup;
    const double b1 = besov(u, 3.0 / p, p, 1.0, P);
    const double b2 = besov(u, 2.0 - params.delta, kInf, kInf, P);
    return b1 * b1 + std::pow(b2, 2.0 / (2.0 - params.delta));
}

double conservation_residual(const MonitorSample& prev, const MonitorSample& next,
                             const LLBParams& params) {
    const double dt = next.t - prev.t;
    if (dt <= 0.0) return 0.0;
    auto dissipation = [&](const MonitorSample& s) {
        return s.grad_L2 * s.grad_L2 + params.kappa * s.L2_energy * s.L2_energy +
               params.kappa * params.mu * s.L4_fourth_power;
    };
    const double dE = 0.5 *
        (next.L2_energy * next.L2_energy - prev.L2_energy * prev.L2_energy) / dt;
    const double mid = 0.5 * (dissipation(prev) + dissipation(next));
    return (dE + mid) / (mid + 1e-30);
}

MonitorSample measure(const SpectralField& u, double t, const SpectralField& uL,
                      const LLBParams& params, const DyadicPartition& P) {
    MonitorSample s;
    s.t = t;
    s.L2_energy = l2_norm(u);
    s.grad_L2 = sobolev_norm(u, 1.0, true).value;
    const double l4 = lebesgue_norm(inverse_transform(u), 4.0);
    s.L4_fourth_power = l4 * l4 * l4 * l4;
    s.besov_32 = besov(u, 1.5, 2.0, 1.0, P);
    s.besov_72 = besov(u, 3.5, 2.0, 1.0, P);
    const auto [phi, psi] = monitor_phi_psi(uL, params, P);
    s.phi_t = phi;
    s.psi_t = psi;
    s.blowup_integrand = blowup_integrand(u, params, P);
    s.Hm_norm = sobolev_norm(u, double(params.m_sobolev), false).value;
    return s;
}

double fit_c1(const Grid& grid, const DyadicPartition& P) {
    double c1 = kInf;
    for (int j = P.j_min; j <= P.j_max; ++j) {
        double kmin2 = kInf;
        // Scan radial values realized on the grid within this block's support.
        for (int i1 = 0; i1 < grid.n; ++i1)
            for (int i2 = 0; i2 < grid.n; ++i2)
                for (int i3 = 0; i3 < grid.n; ++i3) {
                    const double k2 = grid.k_squared(i1, i2, i3);
                    if (k2 == 0.0) continue;
                    if (P.block_weight(j, std::sqrt(k2)) > 0.0 && k2 < kmin2) kmin2 = k2;
                }
        if (kmin2 == kInf) continue;
        c1 = std::min(c1, kmin2 / std::ldexp(1.0, 2 * j));
    }
    return c1;
}

SmallnessReport smallness_monitor(const SolverState& state, const LLBParams& params,
                                  double c1, double eps) {
    SmallnessReport r;
    r.eps = eps;
    auto get = [&](const char* key) {
        auto it = state.accumulators.find(key);
        return it == state.accumulators.end() ? 0.0 : it->second;
    };
    r.sup_term = get("sup_besov32");
    r.heat_term = 0.5 * c1 * get("int_besov72");
    r.damping_term = 0.5 * params.kappa * get("int_besov32");
    r.total = r.sup_term + r.heat_term + r.damping_term;
    r.passed = r.total <= eps;
    return r;
}

void accumulate(SolverState& state, const MonitorSample& prev,
                const MonitorSample& next) {
    const double dt = next.t - prev.t;
    auto& acc = state.accumulators;
    auto trap = [&](const char* key, double a, double b) {
        acc[key] += 0.5 * (a + b) * dt;
    };
    trap("int_besov32", prev.besov_32, next.besov_32);
    trap("int_besov72", prev.besov_72, next.besov_72);
    trap("int_blowup", prev.blowup_integrand, next.blowup_integrand);
    trap("int_phi", prev.phi_t, next.phi_t);
    trap("int_psi", prev.psi_t, next.psi_t);
    trap("int_gronwall", prev.besov_32 * prev.besov_32, next.besov_32 * next.besov_32);
    acc["sup_besov32"] = std::max(acc["sup_besov32"],
                                  std::max(prev.besov_32, next.besov_32));
    acc["last_blowup_increment"] =
        0.5 * (prev.blowup_integrand + next.blowup_integrand) * dt;
}

}  // namespace llb
