#include "llb/norms.hpp"

#include <cmath>
#include <sstream>

#include "llb/errors.hpp"
#include "llb/fft.hpp"

namespace llb {

namespace {

std::string fmt17(double v) {
    std::ostringstream os;
    if (v == kInf) return "\"inf\"";
    os.precision(17);
    os << v;
    return os.str();
}

// L^p norm of one spectral block without leaving spectral space when p = 2.
double block_lp(const SpectralField& w, double p) {
    if (p == 2.0) return l2_norm(w);
    return lebesgue_norm(inverse_transform(w), p);
}

}  // namespace

std::string NormReport::to_json() const {
    std::ostringstream os;
    os << "{\"value\":" << fmt17(value) << ",\"kind\":\"" << kind << "\""
       << ",\"s\":" << fmt17(params.s) << ",\"p\":" << fmt17(params.p)
       << ",\"r\":" << fmt17(params.r)
       << ",\"homogeneous\":" << (params.homogeneous ? "true" : "false")
       << ",\"per_block\":[";
    for (std::size_t i = 0; i < per_block.size(); ++i) {
        if (i) os << ",";
        os << "[" << per_block[i].first << "," << fmt17(per_block[i].second) << "]";
    }
    os << "]}";
    return os.str();
}

NormReport besov_norm(const SpectralField& f, const BesovParams& params,
                      const DyadicPartition& P) {
    if (params.p != 2.0 && !f.real_valued)
        throw NonRealOutput("besov_norm: p != 2 requires a real-flagged field");
    NormReport rep;
    rep.kind = "besov";
    rep.params = params;
    if (params.p == 2.0) {
        // Plancherel lets every block norm come from one coefficient pass.
        const std::vector<double> bl = dyadic_block_l2(f, P);
        for (int j = P.j_min; j <= P.j_max; ++j)
            rep.per_block.emplace_back(
                j, std::pow(2.0, j * params.s) * bl[j - P.j_min]);
    } else {
        for (int j = P.j_min; j <= P.j_max; ++j) {
            const SpectralField w = dyadic_block(f, j, P);
            const double bn = block_lp(w, params.p);
            rep.per_block.emplace_back(j, std::pow(2.0, j * params.s) * bn);
        }
    }
    double agg = 0.0;
    if (params.r == kInf) {
        for (const auto& [j, v] : rep.per_block) agg = std::max(agg, v);
    } else {
        for (const auto& [j, v] : rep.per_block) agg += std::pow(v, params.r);
        agg = std::pow(agg, 1.0 / params.r);
    }
    if (!params.homogeneous) {
        // On the torus the chi-block holds only the mean mode.
        const Grid& g = f.grid;
        double m2 = 0.0;
        for (int c = 0; c < 3; ++c) m2 += std::norm(f.at(c, 0, 0, 0));
        const double mean_mag = std::sqrt(m2);
        const double low =
            params.p == kInf ? mean_mag : mean_mag * std::pow(g.volume(), 1.0 / params.p);
        if (params.r == kInf)
            agg = std::max(agg, low);
        else
            agg = std::pow(std::pow(agg, params.r) + std::pow(low, params.r),
                           1.0 / params.r);
    }
    rep.value = agg;
    return rep;
}

double besov(const SpectralField& f, double s, double p, double r,
             const DyadicPartition& P) {
    return besov_norm(f, BesovParams{s, p, r, true}, P).value;
}

NormReport sobolev_norm(const SpectralField& f, double s, bool homogeneous) {
    const Grid& g = f.grid;
    if (homogeneous && s < 0.0) {
        for (int c = 0; c < 3; ++c)
            if (std::abs(f.at(c, 0, 0, 0)) != 0.0)
                throw std::invalid_argument(
                    "sobolev_norm: homogeneous s < 0 requires zero mean");
    }
    double sum = 0.0;
    for (int c = 0; c < 3; ++c) {
        const cplx* a = f.component(c);
        for (int i1 = 0; i1 < g.n; ++i1)
            for (int i2 = 0; i2 < g.n; ++i2)
                for (int i3 = 0; i3 < g.n; ++i3) {
                    const double k2 = g.k_squared(i1, i2, i3);
                    double w;
                    if (homogeneous)
                        w = k2 > 0.0 ? std::pow(k2, s) : (s == 0.0 ? 1.0 : 0.0);
                    else
                        w = std::pow(1.0 + k2, s);
                    sum += w * std::norm(a[g.index(i1, i2, i3)]);
                }
    }
    NormReport rep;
    rep.kind = "sobolev";
    rep.params = BesovParams{s, 2.0, 2.0, homogeneous};
    rep.value = std::sqrt(sum * g.volume());
    return rep;
}

double lebesgue_norm(const PhysicalField& f, double p) {
    const std::size_t N = f.grid.points();
    const double* a = f.component(0);
    const double* b = f.component(1);
    const double* c = f.component(2);
    if (p == kInf) {
        double m = 0.0;
        for (std::size_t i = 0; i < N; ++i)
            m = std::max(m, std::sqrt(a[i] * a[i] + b[i] * b[i] + c[i] * c[i]));
        return m;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double mag = std::sqrt(a[i] * a[i] + b[i] * b[i] + c[i] * c[i]);
        sum += std::pow(mag, p);
    }
    return std::pow(sum * f.grid.cell_volume(), 1.0 / p);
}

}  // namespace llb
