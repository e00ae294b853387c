#include "llb/operators.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "llb/errors.hpp"

namespace llb {

namespace {

// Semigroup multipliers exp(-(|k|^2 + damping) t) cached per (grid, t,
// damping): a time stepper reapplies the same handful of factors every
// step, and the exp() sweep dominates large grids.  The cache is cleared
// when it grows past a bound (verifier sweeps use many distinct times).
// |k|^2 per storage slot, cached per grid: every dense multiplier pass
// (Laplacian, semigroup, cutoffs) reads it linearly instead of recomputing
// wavenumbers mode by mode.
std::shared_ptr<const std::vector<double>> k2_table(const Grid& g) {
    using Key = std::pair<int, double>;
    static std::mutex mu;
    static std::map<Key, std::shared_ptr<const std::vector<double>>> cache;
    const Key key{g.n, g.box_length};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto w = std::make_shared<std::vector<double>>(g.points());
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2)
            for (int i3 = 0; i3 < g.n; ++i3)
                (*w)[g.index(i1, i2, i3)] = g.k_squared(i1, i2, i3);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(key, std::move(w)).first->second;
}

std::shared_ptr<const std::vector<double>> heat_multipliers(const Grid& g, double t,
                                                            double damping) {
    using Key = std::tuple<int, double, double, double>;
    static std::mutex mu;
    static std::map<Key, std::shared_ptr<const std::vector<double>>> cache;
    const Key key{g.n, g.box_length, t, damping};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const auto k2 = k2_table(g);
    auto w = std::make_shared<std::vector<double>>(g.points());
    for (std::size_t i = 0; i < g.points(); ++i)
        (*w)[i] = std::exp(-((*k2)[i] + damping) * t);
    std::lock_guard<std::mutex> lock(mu);
    if (cache.size() > 64) cache.clear();
    return cache.emplace(key, std::move(w)).first->second;
}

}  // namespace

SpectralField apply_laplacian(const SpectralField& F) {
    const Grid& g = F.grid;
    const auto k2 = k2_table(g);
    SpectralField out = F;
    for (int c = 0; c < 3; ++c) {
        cplx* a = out.component(c);
        for (std::size_t i = 0; i < g.points(); ++i) a[i] *= -(*k2)[i];
    }
    return out;
}

SpectralField heat_propagate(const SpectralField& F, double t, double damping) {
    if (t == 0.0) return F;
    const Grid& g = F.grid;
    const auto w = heat_multipliers(g, t, damping);
    SpectralField out = F;
    for (int c = 0; c < 3; ++c) {
        cplx* a = out.component(c);
        for (std::size_t i = 0; i < g.points(); ++i) a[i] *= (*w)[i];
    }
    return out;
}

SpectralField spectral_cutoff(const SpectralField& F, double n) {
    const Grid& g = F.grid;
    const auto k2 = k2_table(g);
    SpectralField out = F;
    const double lo2 = 1.0 / (n * n), hi2 = n * n;
    for (int c = 0; c < 3; ++c) {
        cplx* a = out.component(c);
        for (std::size_t i = 0; i < g.points(); ++i)
            if ((*k2)[i] < lo2 || (*k2)[i] > hi2) a[i] = cplx(0.0, 0.0);
    }
    return out;
}

double cutoff_residual(const SpectralField& F, double n) {
    const Grid& g = F.grid;
    const auto k2 = k2_table(g);
    const double lo2 = 1.0 / (n * n), hi2 = n * n;
    double outside = 0.0, total = 0.0;
    for (int c = 0; c < 3; ++c) {
        const cplx* a = F.component(c);
        for (std::size_t i = 0; i < g.points(); ++i) {
            const double m = std::norm(a[i]);
            total += m;
            if ((*k2)[i] < lo2 || (*k2)[i] > hi2) outside += m;
        }
    }
    return total > 0.0 ? std::sqrt(outside / total) : 0.0;
}

SpectralField apply_derivative(const SpectralField& F, const std::array<int, 3>& alpha) {
    const Grid& g = F.grid;
    SpectralField out = F;
    for (int c = 0; c < 3; ++c) {
        cplx* a = out.component(c);
        for (int i1 = 0; i1 < g.n; ++i1)
            for (int i2 = 0; i2 < g.n; ++i2)
                for (int i3 = 0; i3 < g.n; ++i3) {
                    cplx m(1.0, 0.0);
                    const double k[3] = {g.wavenumber(i1), g.wavenumber(i2),
                                         g.wavenumber(i3)};
                    for (int ax = 0; ax < 3; ++ax)
                        for (int r = 0; r < alpha[ax]; ++r) m *= cplx(0.0, k[ax]);
                    a[g.index(i1, i2, i3)] *= m;
                }
    }
    return out;
}

int next_fast_size(int m) {
    if (m < 8) m = 8;
    if (m % 2 != 0) ++m;
    for (;; m += 2) {
        int r = m;
        for (int f : {2, 3, 5, 7})
            while (r % f == 0) r /= f;
        if (r == 1) return m;
    }
}

namespace {

// Copy the band |mode|_inf <= band from an n-cube into an M-cube (zero-padded).
void pad_cube(const Grid& g, const cplx* src, int M, int band, cplx* dst) {
    std::fill(dst, dst + static_cast<std::size_t>(M) * M * M, cplx(0.0, 0.0));
    auto midx = [M](int m1, int m2, int m3) {
        const int j1 = m1 >= 0 ? m1 : M + m1;
        const int j2 = m2 >= 0 ? m2 : M + m2;
        const int j3 = m3 >= 0 ? m3 : M + m3;
        return (static_cast<std::size_t>(j1) * M + j2) * M + j3;
    };
    const int b = std::min(band, g.n / 2 - 1);
    for (int m1 = -b; m1 <= b; ++m1) {
        const int i1 = m1 >= 0 ? m1 : g.n + m1;
        for (int m2 = -b; m2 <= b; ++m2) {
            const int i2 = m2 >= 0 ? m2 : g.n + m2;
            for (int m3 = -b; m3 <= b; ++m3) {
                const int i3 = m3 >= 0 ? m3 : g.n + m3;
                dst[midx(m1, m2, m3)] = src[g.index(i1, i2, i3)];
            }
        }
    }
}

// Truncate an M-cube spectrum back to the n-cube, keeping |mode|_inf <= band.
void truncate_cube(int M, const cplx* src, const Grid& g, int band, cplx* dst) {
    std::fill(dst, dst + g.points(), cplx(0.0, 0.0));
    auto midx = [M](int m1, int m2, int m3) {
        const int j1 = m1 >= 0 ? m1 : M + m1;
        const int j2 = m2 >= 0 ? m2 : M + m2;
        const int j3 = m3 >= 0 ? m3 : M + m3;
        return (static_cast<std::size_t>(j1) * M + j2) * M + j3;
    };
    const int b = std::min({band, g.n / 2 - 1, M / 2 - 1});
    for (int m1 = -b; m1 <= b; ++m1) {
        const int i1 = m1 >= 0 ? m1 : g.n + m1;
        for (int m2 = -b; m2 <= b; ++m2) {
            const int i2 = m2 >= 0 ? m2 : g.n + m2;
            for (int m3 = -b; m3 <= b; ++m3) {
                const int i3 = m3 >= 0 ? m3 : g.n + m3;
                dst[g.index(i1, i2, i3)] = src[midx(m1, m2, m3)];
            }
        }
    }
}

struct PaddedWorkspace {
    int M;
    std::size_t NM;
    std::vector<std::vector<double>> phys;   // one 3*NM block per input field
    std::vector<cplx> buf_in, buf_out;

    PaddedWorkspace(const Grid& g, const std::vector<const SpectralField*>& in,
                    int M_, double imag_tol = 1e-10)
        : M(M_), NM(static_cast<std::size_t>(M_) * M_ * M_),
          buf_in(NM), buf_out(NM) {
        phys.resize(in.size(), std::vector<double>(3 * NM));
        // Fields are band-limited by contract, so clamping to the padded
        // grid's own band never drops live modes.
        const int band = std::min(g.n / 2 - 1, M / 2 - 1);
        for (std::size_t f = 0; f < in.size(); ++f) {
            for (int c = 0; c < 3; ++c) {
                bool zero = true;
                for (std::size_t i = 0; i < g.points() && zero; ++i)
                    if (in[f]->component(c)[i] != cplx{}) zero = false;
                if (zero) continue;   // zero components skip the transform
                pad_cube(g, in[f]->component(c), M, band, buf_in.data());
                fft3_backward(M, buf_in.data(), buf_out.data());
                double* dst = phys[f].data() + c * NM;
                double worst = 0.0;
                double scale = 1.0;   // residue is judged relative to the data size
                for (std::size_t i = 0; i < NM; ++i) {
                    dst[i] = buf_out[i].real();
                    worst = std::max(worst, std::abs(buf_out[i].imag()));
                    scale = std::max(scale, std::abs(dst[i]));
                }
                if (in[f]->real_valued && worst > imag_tol * scale)
                    throw NonRealOutput("dealiased product: imaginary residue " +
                                        std::to_string(worst));
            }
        }
    }

    // Transform one physical component back and accumulate into `dst` on the n-grid.
    void to_spectral(const Grid& g, const double* src, int out_band, cplx* dst) {
        bool zero = true;
        for (std::size_t i = 0; i < NM && zero; ++i)
            if (src[i] != 0.0) zero = false;
        if (zero) {
            std::fill(dst, dst + g.points(), cplx(0.0, 0.0));
            return;
        }
        const double scale = 1.0 / static_cast<double>(NM);
        for (std::size_t i = 0; i < NM; ++i) buf_in[i] = cplx(src[i], 0.0);
        fft3_forward(M, buf_in.data(), buf_out.data());
        for (std::size_t i = 0; i < NM; ++i) buf_out[i] *= scale;
        truncate_cube(M, buf_out.data(), g, out_band, dst);
    }
};

int product_grid_size(const Grid& g, int degree, int in_band, int out_band) {
    if (in_band < 0) in_band = g.n / 2 - 1;
    if (out_band < 0) out_band = g.n / 2 - 1;
    return next_fast_size(degree * in_band + out_band + 1);
}

}  // namespace

SpectralField dealiased_map(const std::vector<const SpectralField*>& inputs,
                            PointwiseCombiner combine, int degree,
                            int in_band, int out_band) {
    const Grid& g = inputs.at(0)->grid;
    if (out_band < 0) out_band = g.n / 2 - 1;
    const int M = product_grid_size(g, degree, in_band, out_band);
    PaddedWorkspace ws(g, inputs, M);

    std::vector<double> out_phys(3 * ws.NM);
    std::vector<const double*> vals(inputs.size());
    std::vector<double> point(3 * inputs.size());
    for (std::size_t i = 0; i < ws.NM; ++i) {
        for (std::size_t f = 0; f < inputs.size(); ++f) {
            for (int c = 0; c < 3; ++c)
                point[3 * f + c] = ws.phys[f][c * ws.NM + i];
            vals[f] = point.data() + 3 * f;
        }
        double o[3];
        combine(vals.data(), o);
        for (int c = 0; c < 3; ++c) out_phys[c * ws.NM + i] = o[c];
    }

    SpectralField result(g, true);
    for (int c = 0; c < 3; ++c)
        ws.to_spectral(g, out_phys.data() + c * ws.NM, out_band, result.component(c));
    return result;
}

SpectralField dealiased_product(const SpectralField& u, const SpectralField& v,
                                int in_band, int out_band) {
    const Grid& g = u.grid;
    if (out_band < 0) out_band = g.n / 2 - 1;
    const int M = product_grid_size(g, 2, in_band, out_band);
    PaddedWorkspace ws(g, {&u, &v}, M);
    std::vector<double> out_phys(3 * ws.NM);
    const double* a = ws.phys[0].data();
    const double* b = ws.phys[1].data();
    for (std::size_t i = 0; i < 3 * ws.NM; ++i) out_phys[i] = a[i] * b[i];
    SpectralField result(g, true);
    for (int c = 0; c < 3; ++c)
        ws.to_spectral(g, out_phys.data() + c * ws.NM, out_band, result.component(c));
    return result;
}

struct FixedFactor::Impl {
    Grid grid;
    int M;
    int out_band;
    PaddedWorkspace ws;

    Impl(const SpectralField& u, int M_, int out_band_)
        : grid(u.grid), M(M_), out_band(out_band_), ws(u.grid, {&u}, M_) {}
};

FixedFactor::FixedFactor(const SpectralField& u, int in_band, int out_band) {
    const Grid& g = u.grid;
    if (out_band < 0) out_band = g.n / 2 - 1;
    impl = std::make_unique<Impl>(u, product_grid_size(g, 2, in_band, out_band),
                                  out_band);
}

FixedFactor::~FixedFactor() = default;

SpectralField FixedFactor::times(const SpectralField& v) const {
    const Grid& g = impl->grid;
    PaddedWorkspace wv(g, {&v}, impl->M);
    std::vector<double> out_phys(3 * wv.NM);
    const double* a = impl->ws.phys[0].data();
    const double* b = wv.phys[0].data();
    for (std::size_t i = 0; i < 3 * wv.NM; ++i) out_phys[i] = a[i] * b[i];
    SpectralField result(g, true);
    for (int c = 0; c < 3; ++c)
        wv.to_spectral(g, out_phys.data() + c * wv.NM, impl->out_band,
                       result.component(c));
    return result;
}

SpectralField pointwise_cross_with_laplacian(const SpectralField& u,
                                             int in_band, int out_band) {
    const Grid& g = u.grid;
    if (out_band < 0) out_band = g.n / 2 - 1;
    const int M = product_grid_size(g, 2, in_band, out_band);
    const SpectralField lap = apply_laplacian(u);
    PaddedWorkspace ws(g, {&u, &lap}, M);
    std::vector<double> out_phys(3 * ws.NM);
    const double* a0 = ws.phys[0].data();
    const double* a1 = a0 + ws.NM;
    const double* a2 = a1 + ws.NM;
    const double* b0 = ws.phys[1].data();
    const double* b1 = b0 + ws.NM;
    const double* b2 = b1 + ws.NM;
    for (std::size_t i = 0; i < ws.NM; ++i) {
        out_phys[i] = a1[i] * b2[i] - a2[i] * b1[i];
        out_phys[ws.NM + i] = a2[i] * b0[i] - a0[i] * b2[i];
        out_phys[2 * ws.NM + i] = a0[i] * b1[i] - a1[i] * b0[i];
    }
    SpectralField result(g, true);
    for (int c = 0; c < 3; ++c)
        ws.to_spectral(g, out_phys.data() + c * ws.NM, out_band, result.component(c));
    return result;
}

SpectralField pointwise_cubic(const SpectralField& u, int in_band, int out_band) {
    const Grid& g = u.grid;
    if (out_band < 0) out_band = g.n / 2 - 1;
    const int M = product_grid_size(g, 3, in_band, out_band);
    PaddedWorkspace ws(g, {&u}, M);
    std::vector<double> out_phys(3 * ws.NM);
    const double* a0 = ws.phys[0].data();
    const double* a1 = a0 + ws.NM;
    const double* a2 = a1 + ws.NM;
    for (std::size_t i = 0; i < ws.NM; ++i) {
        const double m2 = a0[i] * a0[i] + a1[i] * a1[i] + a2[i] * a2[i];
        out_phys[i] = m2 * a0[i];
        out_phys[ws.NM + i] = m2 * a1[i];
        out_phys[2 * ws.NM + i] = m2 * a2[i];
    }
    SpectralField result(g, true);
    for (int c = 0; c < 3; ++c)
        ws.to_spectral(g, out_phys.data() + c * ws.NM, out_band, result.component(c));
    return result;
}

std::pair<SpectralField, SpectralField> llb_nonlinearity(const SpectralField& u,
                                                         int in_band, int out_band) {
    const Grid& g = u.grid;
    if (out_band < 0) out_band = g.n / 2 - 1;
    const int M = product_grid_size(g, 3, in_band, out_band);
    const SpectralField lap = apply_laplacian(u);
    PaddedWorkspace ws(g, {&u, &lap}, M);

    std::vector<double> cross_phys(3 * ws.NM), cubic_phys(3 * ws.NM);
    const double* a0 = ws.phys[0].data();
    const double* a1 = a0 + ws.NM;
    const double* a2 = a1 + ws.NM;
    const double* b0 = ws.phys[1].data();
    const double* b1 = b0 + ws.NM;
    const double* b2 = b1 + ws.NM;
    for (std::size_t i = 0; i < ws.NM; ++i) {
        cross_phys[i] = a1[i] * b2[i] - a2[i] * b1[i];
        cross_phys[ws.NM + i] = a2[i] * b0[i] - a0[i] * b2[i];
        cross_phys[2 * ws.NM + i] = a0[i] * b1[i] - a1[i] * b0[i];
        const double m2 = a0[i] * a0[i] + a1[i] * a1[i] + a2[i] * a2[i];
        cubic_phys[i] = m2 * a0[i];
        cubic_phys[ws.NM + i] = m2 * a1[i];
        cubic_phys[2 * ws.NM + i] = m2 * a2[i];
    }

    SpectralField cross(g, true), cubic(g, true);
    for (int c = 0; c < 3; ++c) {
        ws.to_spectral(g, cross_phys.data() + c * ws.NM, out_band, cross.component(c));
        ws.to_spectral(g, cubic_phys.data() + c * ws.NM, out_band, cubic.component(c));
    }
    return {std::move(cross), std::move(cubic)};
}

}  // namespace llb
