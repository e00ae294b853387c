#include "llb/verifiers.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "llb/errors.hpp"
#include "llb/fft.hpp"
#include "llb/operators.hpp"
#include "llb/paraproduct.hpp"

namespace llb {

namespace {

constexpr double kDegenerate = 1e-14;
constexpr int kMaxRegenerate = 64;

std::string fmt(double v) {
    std::ostringstream os;
    if (v == kInf) return "\"inf\"";
    os.precision(17);
    os << v;
    return os.str();
}

// Draws sample `i`, regenerating (deterministically) while `degenerate`
// rejects it; the ensemble count is preserved.
SpectralField draw(const FieldEnsembleSpec& spec, const Grid& grid,
                   const DyadicPartition& P, int i,
                   const std::function<bool(const SpectralField&)>& degenerate,
                   std::uint64_t* seed_out) {
    for (int attempt = 0; attempt < kMaxRegenerate; ++attempt) {
        const int idx = i + attempt * spec.count;
        SpectralField f = ensemble_sample(spec, grid, P, idx);
        if (!degenerate(f)) {
            if (seed_out) *seed_out = sample_seed(spec, idx);
            return f;
        }
    }
    throw std::runtime_error("ensemble: sample stayed degenerate after regeneration");
}

bool never_degenerate(const SpectralField&) { return false; }

bool l2_degenerate(const SpectralField& f) { return l2_norm(f) < kDegenerate; }

using RatioFn = std::function<double(int, std::uint64_t*)>;

// Ratio-maximizing verdict scaffold shared by the upper-bound inequalities.
InequalityVerdict max_ratio_verdict(const std::string& name, int count,
                                    const RatioFn& ratio_of) {
    InequalityVerdict v;
    v.name = name;
    v.samples = count;
    v.fitted_constant = 0.0;
    v.passed = true;
    for (int i = 0; i < count; ++i) {
        std::uint64_t seed = 0;
        const double ratio = ratio_of(i, &seed);
        if (!std::isfinite(ratio)) v.passed = false;
        if (ratio > v.fitted_constant) {
            v.fitted_constant = ratio;
            v.worst_sample_seed = seed;
        }
    }
    if (!std::isfinite(v.fitted_constant)) v.passed = false;
    return v;
}

// Like max_ratio_verdict, but evaluates the per-sample ratios once over
// 2*count samples and reads off both the count-sample fit and the doubled
// one; the doubling-stability requirement (change < 25%) folds into passed.
InequalityVerdict doubled_max_ratio(const std::string& name, int count,
                                    const RatioFn& ratio_of) {
    InequalityVerdict v;
    v.name = name;
    v.samples = count;
    v.fitted_constant = 0.0;
    v.passed = true;
    double fit2 = 0.0;
    for (int i = 0; i < 2 * count; ++i) {
        std::uint64_t seed = 0;
        const double ratio = ratio_of(i, &seed);
        if (!std::isfinite(ratio)) v.passed = false;
        if (i < count && ratio > v.fitted_constant) {
            v.fitted_constant = ratio;
            v.worst_sample_seed = seed;
        }
        if (ratio > fit2) fit2 = ratio;
    }
    if (!std::isfinite(v.fitted_constant) || !std::isfinite(fit2)) v.passed = false;
    const double change = std::abs(fit2 - v.fitted_constant) /
                          std::max(std::abs(v.fitted_constant), kDegenerate);
    v.parameters["fitted_doubled"] = fit2;
    v.parameters["doubling_change"] = change;
    v.passed = v.passed && change < 0.25;
    return v;
}

// Minimizing counterpart (bernstein fits the smallest admissible constant;
// a nonpositive or nonfinite sample fails the verdict).
InequalityVerdict doubled_min_ratio(const std::string& name, int count,
                                    const RatioFn& ratio_of) {
    InequalityVerdict v;
    v.name = name;
    v.samples = count;
    v.fitted_constant = kInf;
    v.passed = true;
    double fit2 = kInf;
    for (int i = 0; i < 2 * count; ++i) {
        std::uint64_t seed = 0;
        const double c0 = ratio_of(i, &seed);
        if (!std::isfinite(c0) || c0 <= 0.0) v.passed = false;
        if (i < count && c0 < v.fitted_constant) {
            v.fitted_constant = c0;
            v.worst_sample_seed = seed;
        }
        if (c0 < fit2) fit2 = c0;
    }
    if (!std::isfinite(v.fitted_constant) || !std::isfinite(fit2)) v.passed = false;
    const double change = std::abs(fit2 - v.fitted_constant) /
                          std::max(std::abs(v.fitted_constant), kDegenerate);
    v.parameters["fitted_doubled"] = fit2;
    v.parameters["doubling_change"] = change;
    v.passed = v.passed && change < 0.25;
    return v;
}

double linf_norm(const SpectralField& f) {
    return lebesgue_norm(inverse_transform(f), kInf);
}

// L^p norm of the pointwise Frobenius magnitude of the gradient.
double grad_lp(const SpectralField& f, double p) {
    const Grid& g = f.grid;
    std::vector<PhysicalField> d;
    for (int ax = 0; ax < 3; ++ax) {
        std::array<int, 3> alpha{0, 0, 0};
        alpha[ax] = 1;
        d.push_back(inverse_transform(apply_derivative(f, alpha)));
    }
    const std::size_t N3 = g.points() * 3;
    if (p == kInf) {
        double m = 0.0;
        for (std::size_t i = 0; i < N3; ++i) {
            double s = 0.0;
            for (int ax = 0; ax < 3; ++ax) s += d[ax].values[i] * d[ax].values[i];
            m = std::max(m, s);
        }
        return std::sqrt(m);
    }
    double sum = 0.0;
    const std::size_t N = g.points();
    for (std::size_t i = 0; i < N; ++i) {
        double s = 0.0;
        for (int c = 0; c < 3; ++c)
            for (int ax = 0; ax < 3; ++ax) {
                const double v = d[ax].values[c * N + i];
                s += v * v;
            }
        sum += std::pow(std::sqrt(s), p);
    }
    return std::pow(sum * g.cell_volume(), 1.0 / p);
}

double grad_linf(const SpectralField& f) { return grad_lp(f, kInf); }

// ---- per-sample ratio builders (shared by the public verifiers and the
// ---- doubling suite driver) ------------------------------------------------

SpectralField restrict_annulus(const Grid& grid, SpectralField f, double R1,
                               double R2) {
    for (int c = 0; c < 3; ++c) {
        cplx* a = f.component(c);
        for (int i1 = 0; i1 < grid.n; ++i1)
            for (int i2 = 0; i2 < grid.n; ++i2)
                for (int i3 = 0; i3 < grid.n; ++i3) {
                    const double k = std::sqrt(grid.k_squared(i1, i2, i3));
                    if (k < R1 || k > R2) a[grid.index(i1, i2, i3)] = 0.0;
                }
    }
    return f;
}

RatioFn bernstein_constant(FieldEnsembleSpec spec, Grid grid, DyadicPartition P,
                           double p, int j) {
    const double R1 = std::ldexp(3.0 / 4.0, j);
    const double R2 = std::ldexp(8.0 / 3.0, j);
    return [=](int i, std::uint64_t* seed) {
        auto degenerate = [&](const SpectralField& f) {
            const PhysicalField ph = inverse_transform(restrict_annulus(grid, f, R1, R2));
            return std::pow(lebesgue_norm(ph, p), p) < kDegenerate;
        };
        const SpectralField u =
            restrict_annulus(grid, draw(spec, grid, P, i, degenerate, seed), R1, R2);
        const PhysicalField up = inverse_transform(u);
        const PhysicalField lap = inverse_transform(apply_laplacian(u));
        // rhs = -1/(p-1) int (Lap u) . |u|^{p-2} u dx
        double rhs = 0.0;
        const std::size_t N = grid.points();
        for (std::size_t idx = 0; idx < N; ++idx) {
            double m2 = 0.0, dot = 0.0;
            for (int c = 0; c < 3; ++c) {
                const double uc = up.values[c * N + idx];
                m2 += uc * uc;
                dot += lap.values[c * N + idx] * uc;
            }
            rhs += std::pow(m2, 0.5 * (p - 2.0)) * dot;
        }
        rhs *= -grid.cell_volume() / (p - 1.0);
        const double ip = std::pow(lebesgue_norm(up, p), p);
        return rhs / (R1 * R1 / (p * p) * ip);
    };
}

RatioFn interpolation_ratio(FieldEnsembleSpec spec, Grid grid, DyadicPartition P,
                            double s1, double s2, double theta, double p, double r) {
    return [=](int i, std::uint64_t* seed) {
        const SpectralField f = draw(spec, grid, P, i, never_degenerate, seed);
        const double n1 = besov(f, s1, p, r, P);
        const double n2 = besov(f, s2, p, r, P);
        const double nm = besov(f, theta * s1 + (1.0 - theta) * s2, p, r, P);
        const double denom = std::pow(n1, theta) * std::pow(n2, 1.0 - theta);
        return denom < kDegenerate ? kInf : nm / denom;
    };
}

RatioFn product_ratio(FieldEnsembleSpec spec_u, FieldEnsembleSpec spec_v, Grid grid,
                      DyadicPartition P, double s1, double s2, double p) {
    return [=](int i, std::uint64_t* seed) {
        const SpectralField u = draw(spec_u, grid, P, i, l2_degenerate, seed);
        const SpectralField w = draw(spec_v, grid, P, i, l2_degenerate, nullptr);
        const double nu = besov(u, s1, p, 1.0, P);
        const double nv = besov(w, s2, p, 1.0, P);
        if (nu * nv < kDegenerate) return kInf;
        const SpectralField uv = dealiased_product(u, w);
        return besov(uv, s1 + s2 - 3.0 / p, p, 1.0, P) / (nu * nv);
    };
}

RatioFn algebra_ratio(FieldEnsembleSpec spec_f, FieldEnsembleSpec spec_g, Grid grid,
                      DyadicPartition P, double s, double p, double r) {
    return [=](int i, std::uint64_t* seed) {
        const SpectralField f = draw(spec_f, grid, P, i, l2_degenerate, seed);
        const SpectralField g = draw(spec_g, grid, P, i, l2_degenerate, nullptr);
        const double rhs = linf_norm(f) * besov(g, s, p, r, P) +
                           linf_norm(g) * besov(f, s, p, r, P);
        if (rhs < kDegenerate) return kInf;
        return besov(dealiased_product(f, g), s, p, r, P) / rhs;
    };
}

RatioFn commutator_basic_ratio(FieldEnsembleSpec spec_a, FieldEnsembleSpec spec_b,
                               Grid grid, DyadicPartition P, int j, double p,
                               double q, double r) {
    return [=](int i, std::uint64_t* seed) {
        const SpectralField a = draw(spec_a, grid, P, i, l2_degenerate, seed);
        const SpectralField b = draw(spec_b, grid, P, i, l2_degenerate, nullptr);
        const double rhs =
            std::ldexp(1.0, -j) * grad_lp(a, p) * lebesgue_norm(inverse_transform(b), q);
        if (rhs < kDegenerate) return kInf;
        const SpectralField comm = block_commutator(a, b, j, P);
        return lebesgue_norm(inverse_transform(comm), r) / rhs;
    };
}

RatioFn commutator_lemma4_ratio(FieldEnsembleSpec spec_a, FieldEnsembleSpec spec_b,
                                Grid grid, DyadicPartition P, double s, double rho) {
    return [=](int i, std::uint64_t* seed) {
        const SpectralField a = draw(spec_a, grid, P, i, l2_degenerate, seed);
        const SpectralField b = draw(spec_b, grid, P, i, l2_degenerate, nullptr);
        // [block_j, b]a = block_j(ba) - b block_j(a); b's padded transform is
        // shared across j.
        const FixedFactor fb(b);
        const SpectralField ba = fb.times(a);
        double lhs = 0.0;
        for (int j = P.j_min; j <= P.j_max; ++j) {
            const SpectralField comm =
                dyadic_block(ba, j, P) - fb.times(dyadic_block(a, j, P));
            lhs += std::pow(2.0, j * s) * l2_norm(comm);
        }
        const double rhs =
            besov(a, s - 2.0 / rho, 2.0, 1.0, P) * besov(b, 2.0 / rho, kInf, kInf, P) +
            besov(b, s + 1.0 - 2.0 / rho, 2.0, 1.0, P) * besov(a, 2.0 / rho, kInf, kInf, P);
        if (rhs < kDegenerate) return kInf;
        return lhs / rhs;
    };
}

RatioFn moser_ratio(FieldEnsembleSpec spec_f, FieldEnsembleSpec spec_g, Grid grid,
                    DyadicPartition P, int m, std::array<int, 3> alpha) {
    return [=](int i, std::uint64_t* seed) {
        const SpectralField f = draw(spec_f, grid, P, i, l2_degenerate, seed);
        const SpectralField g = draw(spec_g, grid, P, i, l2_degenerate, nullptr);
        const SpectralField fg = dealiased_product(f, g);
        const SpectralField lhs_field =
            apply_derivative(fg, alpha) - dealiased_product(f, apply_derivative(g, alpha));
        const double lhs = l2_norm(lhs_field);
        const double rhs = grad_linf(f) * sobolev_norm(g, double(m - 1), true).value +
                           linf_norm(g) * sobolev_norm(f, double(m), true).value;
        if (rhs < kDegenerate) return kInf;
        return lhs / rhs;
    };
}

RatioFn composition_ratio(FieldEnsembleSpec spec, Grid grid, DyadicPartition P,
                          double s) {
    return [=](int i, std::uint64_t* seed) {
        const SpectralField u = draw(spec, grid, P, i, l2_degenerate, seed);
        const double nu = besov(u, s, 2.0, 1.0, P);
        const double li = linf_norm(u);
        if (nu * li * li < kDegenerate) return kInf;
        return besov(pointwise_cubic(u), s, 2.0, 1.0, P) / (nu * li * li);
    };
}

RatioFn heat_smoothing_ratio(FieldEnsembleSpec spec, Grid grid, DyadicPartition P,
                             double m, double s, double T, int time_steps) {
    const double dt = T / time_steps;
    return [=](int i, std::uint64_t* seed) {
        const SpectralField u0 = draw(spec, grid, P, i, l2_degenerate, seed);
        const double denom = besov(u0, s + 2.0, 2.0, 1.0, P);
        if (denom < kDegenerate) return kInf;
        // Trapezoidal L^m_T quadrature of the smoothed Besov norm.
        double integral = 0.0;
        double prev = std::pow(besov(u0, s + 2.0 + 2.0 / m, 2.0, 1.0, P), m);
        for (int step = 1; step <= time_steps; ++step) {
            const double t = step * dt;
            const double cur =
                std::pow(besov(heat_propagate(u0, t), s + 2.0 + 2.0 / m, 2.0, 1.0, P), m);
            integral += 0.5 * (prev + cur) * dt;
            prev = cur;
        }
        return std::pow(integral, 1.0 / m) / denom;
    };
}

}  // namespace

std::string InequalityVerdict::to_json_line() const {
    std::ostringstream os;
    os << "{\"name\":\"" << name << "\",\"samples\":" << samples
       << ",\"fitted_constant\":" << fmt(fitted_constant)
       << ",\"worst_sample_seed\":" << worst_sample_seed
       << ",\"passed\":" << (passed ? "true" : "false") << ",\"parameters\":{";
    bool first = true;
    for (const auto& [k, val] : parameters) {
        if (!first) os << ",";
        first = false;
        os << "\"" << k << "\":" << fmt(val);
    }
    os << "},\"spec\":[";
    for (std::size_t i = 0; i < spec_json.size(); ++i) {
        if (i) os << ",";
        os << spec_json[i];
    }
    os << "]}";
    return os.str();
}

InequalityVerdict verify_bernstein(const FieldEnsembleSpec& spec, const Grid& grid,
                                   const DyadicPartition& P, double p, int j) {
    const double R1 = std::ldexp(3.0 / 4.0, j);
    const double R2 = std::ldexp(8.0 / 3.0, j);
    const RatioFn c0_of = bernstein_constant(spec, grid, P, p, j);

    InequalityVerdict v;
    v.name = "bernstein";
    v.samples = spec.count;
    v.fitted_constant = kInf;
    v.passed = true;
    for (int i = 0; i < spec.count; ++i) {
        std::uint64_t seed = 0;
        const double c0 = c0_of(i, &seed);
        if (!std::isfinite(c0) || c0 <= 0.0) v.passed = false;
        if (c0 < v.fitted_constant) {
            v.fitted_constant = c0;
            v.worst_sample_seed = seed;
        }
    }
    if (!std::isfinite(v.fitted_constant)) v.passed = false;
    v.parameters = {{"p", p}, {"j", double(j)}, {"R1", R1}, {"R2", R2}};
    v.spec_json = {spec.to_json()};
    return v;
}

InequalityVerdict verify_interpolation(const FieldEnsembleSpec& spec, const Grid& grid,
                                       const DyadicPartition& P, double s1, double s2,
                                       double theta, double p, double r) {
    InequalityVerdict v =
        max_ratio_verdict("interpolation", spec.count,
                          interpolation_ratio(spec, grid, P, s1, s2, theta, p, r));
    v.parameters = {{"s1", s1}, {"s2", s2}, {"theta", theta}, {"p", p}, {"r", r}};
    v.spec_json = {spec.to_json()};
    return v;
}

InequalityVerdict verify_product(const FieldEnsembleSpec& spec_u,
                                 const FieldEnsembleSpec& spec_v, const Grid& grid,
                                 const DyadicPartition& P, double s1, double s2,
                                 double p) {
    InequalityVerdict v =
        max_ratio_verdict("product", spec_u.count,
                          product_ratio(spec_u, spec_v, grid, P, s1, s2, p));
    v.parameters = {{"s1", s1}, {"s2", s2}, {"p", p}};
    v.spec_json = {spec_u.to_json(), spec_v.to_json()};
    return v;
}

InequalityVerdict verify_algebra(const FieldEnsembleSpec& spec_f,
                                 const FieldEnsembleSpec& spec_g, const Grid& grid,
                                 const DyadicPartition& P, double s, double p, double r) {
    InequalityVerdict v = max_ratio_verdict(
        "algebra", spec_f.count, algebra_ratio(spec_f, spec_g, grid, P, s, p, r));
    v.parameters = {{"s", s}, {"p", p}, {"r", r}};
    v.spec_json = {spec_f.to_json(), spec_g.to_json()};
    return v;
}

InequalityVerdict verify_commutator_basic(const FieldEnsembleSpec& spec_a,
                                          const FieldEnsembleSpec& spec_b,
                                          const Grid& grid, const DyadicPartition& P,
                                          int j, double p, double q, double r) {
    InequalityVerdict v = max_ratio_verdict(
        "commutator-basic", spec_a.count,
        commutator_basic_ratio(spec_a, spec_b, grid, P, j, p, q, r));
    v.parameters = {{"j", double(j)}, {"p", p}, {"q", q}, {"r", r}};
    v.spec_json = {spec_a.to_json(), spec_b.to_json()};
    return v;
}

InequalityVerdict verify_commutator_lemma4(const FieldEnsembleSpec& spec_a,
                                           const FieldEnsembleSpec& spec_b,
                                           const Grid& grid, const DyadicPartition& P,
                                           double s, double rho) {
    InequalityVerdict v = max_ratio_verdict(
        "commutator-lemma4", spec_a.count,
        commutator_lemma4_ratio(spec_a, spec_b, grid, P, s, rho));
    v.parameters = {{"s", s}, {"rho", rho}};
    v.spec_json = {spec_a.to_json(), spec_b.to_json()};
    return v;
}

InequalityVerdict verify_moser_commutator(const FieldEnsembleSpec& spec_f,
                                          const FieldEnsembleSpec& spec_g,
                                          const Grid& grid, const DyadicPartition& P,
                                          int m, const std::array<int, 3>& alpha) {
    InequalityVerdict v = max_ratio_verdict(
        "moser", spec_f.count, moser_ratio(spec_f, spec_g, grid, P, m, alpha));
    v.parameters = {{"m", double(m)},
                    {"alpha1", double(alpha[0])},
                    {"alpha2", double(alpha[1])},
                    {"alpha3", double(alpha[2])}};
    v.spec_json = {spec_f.to_json(), spec_g.to_json()};
    return v;
}

InequalityVerdict verify_composition(const FieldEnsembleSpec& spec, const Grid& grid,
                                     const DyadicPartition& P, double s) {
    InequalityVerdict v = max_ratio_verdict("composition", spec.count,
                                            composition_ratio(spec, grid, P, s));
    v.parameters = {{"s", s}};
    v.spec_json = {spec.to_json()};
    return v;
}

InequalityVerdict verify_heat_smoothing(const FieldEnsembleSpec& spec, const Grid& grid,
                                        const DyadicPartition& P, double m, double s,
                                        double T, int time_steps) {
    InequalityVerdict v =
        max_ratio_verdict("heat-smoothing", spec.count,
                          heat_smoothing_ratio(spec, grid, P, m, s, T, time_steps));
    v.parameters = {{"m", m}, {"s", s}, {"T", T}, {"time_steps", double(time_steps)}};
    v.spec_json = {spec.to_json()};
    return v;
}

namespace {

// Spread of fitted constants across a j-family (locality under dyadic scaling).
InequalityVerdict cross_j_verdict(const std::string& name,
                                  const std::vector<InequalityVerdict>& family) {
    InequalityVerdict v;
    v.name = name;
    double lo = kInf, hi = 0.0;
    bool all_passed = true;
    for (const auto& f : family) {
        v.samples += f.samples;
        lo = std::min(lo, f.fitted_constant);
        hi = std::max(hi, f.fitted_constant);
        all_passed = all_passed && f.passed;
    }
    v.fitted_constant = lo > 0.0 ? hi / lo : kInf;
    v.parameters = {{"min_fitted", lo}, {"max_fitted", hi}};
    v.passed = all_passed && std::isfinite(v.fitted_constant) && v.fitted_constant < 10.0;
    return v;
}

FieldEnsembleSpec power_law(int count, std::uint64_t seed, int components,
                            double alpha = 2.0) {
    FieldEnsembleSpec s;
    s.count = count;
    s.kind = FieldEnsembleSpec::Kind::PowerLaw;
    s.alpha = alpha;
    s.seed = seed;
    s.components = components;
    return s;
}

FieldEnsembleSpec single_block(int count, std::uint64_t seed, int j, int components) {
    FieldEnsembleSpec s;
    s.count = count;
    s.kind = FieldEnsembleSpec::Kind::SingleBlock;
    s.j = j;
    s.seed = seed;
    s.components = components;
    return s;
}

// The commutator-basic family shares one sample sweep across all j: the
// draws, the gradient/Lebesgue base, and a's padded transform are
// j-independent, so only the blocked products vary inside the j loop.
std::vector<InequalityVerdict> commutator_basic_family(
    const Grid& grid, const DyadicPartition& P, int samples, std::uint64_t seed,
    int j_lo, int j_hi, double p, double q, double r) {
    const FieldEnsembleSpec sa = power_law(2 * samples, seed, 1);
    const FieldEnsembleSpec sb = power_law(2 * samples, seed + 1, 1);
    struct Track {
        double fit = 0.0, fit2 = 0.0;
        std::uint64_t seed = 0;
        bool ok = true;
    };
    std::vector<Track> tr(j_hi - j_lo + 1);

    for (int i = 0; i < 2 * samples; ++i) {
        std::uint64_t sd = 0;
        const SpectralField a = draw(sa, grid, P, i, l2_degenerate, &sd);
        const SpectralField b = draw(sb, grid, P, i, l2_degenerate, nullptr);
        const double base = grad_lp(a, p) * lebesgue_norm(inverse_transform(b), q);
        const FixedFactor fa(a);
        const SpectralField ab = fa.times(b);
        for (int j = j_lo; j <= j_hi; ++j) {
            const double rhs = std::ldexp(1.0, -j) * base;
            double ratio;
            if (rhs < kDegenerate) {
                ratio = kInf;
            } else {
                const SpectralField comm =
                    dyadic_block(ab, j, P) - fa.times(dyadic_block(b, j, P));
                ratio = lebesgue_norm(inverse_transform(comm), r) / rhs;
            }
            Track& t = tr[j - j_lo];
            if (!std::isfinite(ratio)) t.ok = false;
            if (i < samples && ratio > t.fit) {
                t.fit = ratio;
                t.seed = sd;
            }
            if (ratio > t.fit2) t.fit2 = ratio;
        }
    }

    std::vector<InequalityVerdict> fam;
    for (int j = j_lo; j <= j_hi; ++j) {
        const Track& t = tr[j - j_lo];
        InequalityVerdict v;
        v.name = "commutator-basic";
        v.samples = samples;
        v.fitted_constant = t.fit;
        v.worst_sample_seed = t.seed;
        const double change =
            std::abs(t.fit2 - t.fit) / std::max(std::abs(t.fit), kDegenerate);
        v.passed = t.ok && std::isfinite(t.fit) && std::isfinite(t.fit2) &&
                   change < 0.25;
        v.parameters = {{"j", double(j)},
                        {"p", p},
                        {"q", q},
                        {"r", r},
                        {"fitted_doubled", t.fit2},
                        {"doubling_change", change}};
        v.spec_json = {sa.to_json(), sb.to_json()};
        fam.push_back(std::move(v));
    }
    return fam;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "bernstein",      "interpolation",     "product",
        "algebra",        "commutator-basic",  "commutator-lemma4",
        "moser",          "composition",       "heat-smoothing"};
    return names;
}

std::vector<InequalityVerdict> run_suite(const std::string& suite, const Grid& grid,
                                         const DyadicPartition& P, int samples,
                                         std::uint64_t seed) {
    if (suite == "all") {
        std::vector<InequalityVerdict> all;
        for (const auto& name : suite_names()) {
            auto part = run_suite(name, grid, P, samples, seed);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }

    std::vector<InequalityVerdict> out;
    const int j_lo = P.j_min + 1, j_hi = P.j_max - 1;

    if (suite == "bernstein") {
        for (double p : {2.0, 4.0}) {
            std::vector<InequalityVerdict> fam;
            for (int j = j_lo; j <= j_hi; ++j) {
                const FieldEnsembleSpec spec = single_block(2 * samples, seed + j, j, 3);
                InequalityVerdict v =
                    doubled_min_ratio("bernstein", samples,
                                      bernstein_constant(spec, grid, P, p, j));
                v.parameters["p"] = p;
                v.parameters["j"] = double(j);
                v.parameters["R1"] = std::ldexp(3.0 / 4.0, j);
                v.parameters["R2"] = std::ldexp(8.0 / 3.0, j);
                v.spec_json = {spec.to_json()};
                fam.push_back(std::move(v));
                out.push_back(fam.back());
            }
            InequalityVerdict cj = cross_j_verdict("bernstein-crossj", fam);
            cj.parameters["p"] = p;
            out.push_back(cj);
        }
    } else if (suite == "interpolation") {
        const FieldEnsembleSpec spec = power_law(2 * samples, seed, 3);
        InequalityVerdict v =
            doubled_max_ratio("interpolation", samples,
                              interpolation_ratio(spec, grid, P, 1.5, 3.5, 0.5, 2.0, 1.0));
        v.parameters.insert({{"s1", 1.5}, {"s2", 3.5}, {"theta", 0.5}, {"p", 2.0}, {"r", 1.0}});
        v.spec_json = {spec.to_json()};
        out.push_back(std::move(v));
    } else if (suite == "product") {
        const FieldEnsembleSpec su = power_law(2 * samples, seed, 3);
        const FieldEnsembleSpec sv = power_law(2 * samples, seed + 1, 3);
        InequalityVerdict v = doubled_max_ratio(
            "product", samples, product_ratio(su, sv, grid, P, 1.5, 1.5, 2.0));
        v.parameters.insert({{"s1", 1.5}, {"s2", 1.5}, {"p", 2.0}});
        v.spec_json = {su.to_json(), sv.to_json()};
        out.push_back(std::move(v));
    } else if (suite == "algebra") {
        const FieldEnsembleSpec sf = power_law(2 * samples, seed, 3);
        const FieldEnsembleSpec sg = power_law(2 * samples, seed + 1, 3);
        InequalityVerdict v = doubled_max_ratio(
            "algebra", samples, algebra_ratio(sf, sg, grid, P, 1.5, 2.0, 1.0));
        v.parameters.insert({{"s", 1.5}, {"p", 2.0}, {"r", 1.0}});
        v.spec_json = {sf.to_json(), sg.to_json()};
        out.push_back(std::move(v));
    } else if (suite == "commutator-basic") {
        std::vector<InequalityVerdict> fam = commutator_basic_family(
            grid, P, samples, seed, j_lo, j_hi, kInf, 2.0, 2.0);
        for (const auto& v : fam) out.push_back(v);
        out.push_back(cross_j_verdict("commutator-basic-crossj", fam));
    } else if (suite == "commutator-lemma4") {
        const FieldEnsembleSpec sa = power_law(2 * samples, seed, 1);
        const FieldEnsembleSpec sb = power_law(2 * samples, seed + 1, 1);
        InequalityVerdict v = doubled_max_ratio(
            "commutator-lemma4", samples,
            commutator_lemma4_ratio(sa, sb, grid, P, 2.5, 4.0));
        v.parameters.insert({{"s", 2.5}, {"rho", 4.0}});
        v.spec_json = {sa.to_json(), sb.to_json()};
        out.push_back(std::move(v));
    } else if (suite == "moser") {
        const FieldEnsembleSpec sf = power_law(2 * samples, seed, 1);
        const FieldEnsembleSpec sg = power_law(2 * samples, seed + 1, 1);
        InequalityVerdict v = doubled_max_ratio(
            "moser", samples, moser_ratio(sf, sg, grid, P, 2, {2, 0, 0}));
        v.parameters.insert(
            {{"m", 2.0}, {"alpha1", 2.0}, {"alpha2", 0.0}, {"alpha3", 0.0}});
        v.spec_json = {sf.to_json(), sg.to_json()};
        out.push_back(std::move(v));
    } else if (suite == "composition") {
        const FieldEnsembleSpec spec = power_law(2 * samples, seed, 3);
        InequalityVerdict v = doubled_max_ratio("composition", samples,
                                                composition_ratio(spec, grid, P, 1.5));
        v.parameters.insert({{"s", 1.5}});
        v.spec_json = {spec.to_json()};
        out.push_back(std::move(v));
    } else if (suite == "heat-smoothing") {
        const FieldEnsembleSpec spec = power_law(2 * samples, seed, 3);
        InequalityVerdict v = doubled_max_ratio(
            "heat-smoothing", samples,
            heat_smoothing_ratio(spec, grid, P, 1.0, -0.5, 1.0, 16));
        v.parameters.insert(
            {{"m", 1.0}, {"s", -0.5}, {"T", 1.0}, {"time_steps", 16.0}});
        v.spec_json = {spec.to_json()};
        out.push_back(std::move(v));
    } else {
        std::string valid = "all";
        for (const auto& n : suite_names()) valid += ", " + n;
        throw ConfigError("unknown verifier suite \"" + suite + "\"; valid: " + valid);
    }
    return out;
}

}  // namespace llb
