#include "llb/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "llb/errors.hpp"

namespace llb {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    int alignment = 0;   // fftw_alignment_of of the planning buffers
};

std::mutex plan_mutex;
std::map<int, PlanPair>& plan_cache() {
    static std::map<int, PlanPair> cache;
    return cache;
}

// Plans are created once per cube size with FFTW_ESTIMATE on fftw-aligned
// buffers (deterministic plan choice, SIMD codelets enabled).  Buffers whose
// alignment does not match the plan are routed through aligned scratch.
PlanPair& plans_for(int n) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto& cache = plan_cache();
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    const std::size_t N = static_cast<std::size_t>(n) * n * n;
    fftw_complex* a = fftw_alloc_complex(N);
    fftw_complex* b = fftw_alloc_complex(N);
    PlanPair p;
    p.fwd = fftw_plan_dft_3d(n, n, n, a, b, FFTW_FORWARD, FFTW_ESTIMATE);
    p.bwd = fftw_plan_dft_3d(n, n, n, a, b, FFTW_BACKWARD, FFTW_ESTIMATE);
    p.alignment = fftw_alignment_of(reinterpret_cast<double*>(a));
    fftw_free(a);
    fftw_free(b);
    return cache.emplace(n, p).first->second;
}

// Per-thread aligned scratch, reused across calls of the same size.
struct Scratch {
    std::size_t cap = 0;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;

    void ensure(std::size_t N) {
        if (cap >= N) return;
        fftw_free(in);
        fftw_free(out);
        in = fftw_alloc_complex(N);
        out = fftw_alloc_complex(N);
        cap = N;
    }
    ~Scratch() {
        fftw_free(in);
        fftw_free(out);
    }
};

void execute(fftw_plan plan, int plan_align, int n, const cplx* in, cplx* out) {
    const std::size_t N = static_cast<std::size_t>(n) * n * n;
    auto* fin = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in));
    auto* fout = reinterpret_cast<fftw_complex*>(out);
    if (fftw_alignment_of(reinterpret_cast<double*>(fin)) == plan_align &&
        fftw_alignment_of(reinterpret_cast<double*>(fout)) == plan_align) {
        fftw_execute_dft(plan, fin, fout);
        return;
    }
    thread_local Scratch scratch;
    scratch.ensure(N);
    std::copy(reinterpret_cast<const double*>(in),
              reinterpret_cast<const double*>(in) + 2 * N,
              reinterpret_cast<double*>(scratch.in));
    fftw_execute_dft(plan, scratch.in, scratch.out);
    std::copy(reinterpret_cast<const double*>(scratch.out),
              reinterpret_cast<const double*>(scratch.out) + 2 * N,
              reinterpret_cast<double*>(out));
}

template <typename T>
bool all_zero(const T* a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] != T{}) return false;
    return true;
}

}  // namespace

void fft3_forward(int n, const cplx* in, cplx* out) {
    const PlanPair& p = plans_for(n);
    execute(p.fwd, p.alignment, n, in, out);
}

void fft3_backward(int n, const cplx* in, cplx* out) {
    const PlanPair& p = plans_for(n);
    execute(p.bwd, p.alignment, n, in, out);
}

SpectralField forward_transform(const PhysicalField& f) {
    const Grid& g = f.grid;
    const std::size_t N = g.points();
    SpectralField F(g, true);
    std::vector<cplx> buf(N);
    const double scale = 1.0 / static_cast<double>(N);
    for (int c = 0; c < 3; ++c) {
        const double* src = f.component(c);
        if (all_zero(src, N)) continue;   // zero components skip the transform
        for (std::size_t i = 0; i < N; ++i) buf[i] = cplx(src[i], 0.0);
        fft3_forward(g.n, buf.data(), F.component(c));
        cplx* dst = F.component(c);
        for (std::size_t i = 0; i < N; ++i) dst[i] *= scale;
    }
    return F;
}

PhysicalField inverse_transform(const SpectralField& F, double imag_tol) {
    const Grid& g = F.grid;
    const std::size_t N = g.points();
    PhysicalField f(g);
    std::vector<cplx> buf(N);
    double worst_imag = 0.0;
    for (int c = 0; c < 3; ++c) {
        if (all_zero(F.component(c), N)) continue;
        fft3_backward(g.n, F.component(c), buf.data());
        double* dst = f.component(c);
        for (std::size_t i = 0; i < N; ++i) {
            dst[i] = buf[i].real();
            const double im = std::abs(buf[i].imag());
            if (im > worst_imag) worst_imag = im;
        }
    }
    if (F.real_valued && worst_imag > imag_tol)
        throw NonRealOutput("inverse_transform: imaginary residue " +
                            std::to_string(worst_imag) + " exceeds tolerance on a real-flagged field");
    return f;
}

bool SpectralField::finite() const {
    for (const cplx& z : coeffs)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

void SpectralField::symmetrize() {
    const int n = grid.n;
    for (int c = 0; c < 3; ++c) {
        cplx* a = component(c);
        for (int i1 = 0; i1 < n; ++i1) {
            const int m1 = (n - i1) % n;
            for (int i2 = 0; i2 < n; ++i2) {
                const int m2 = (n - i2) % n;
                for (int i3 = 0; i3 < n; ++i3) {
                    const int m3 = (n - i3) % n;
                    const std::size_t idx = grid.index(i1, i2, i3);
                    const std::size_t mir = grid.index(m1, m2, m3);
                    if (mir < idx) continue;
                    const cplx z = a[idx], w = a[mir];
                    const cplx avg = 0.5 * (z + std::conj(w));
                    a[idx] = avg;
                    a[mir] = std::conj(avg);
                }
            }
        }
    }
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
    return *this;
}
SpectralField& SpectralField::operator-=(const SpectralField& o) {
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
    return *this;
}
SpectralField& SpectralField::operator*=(double a) {
    for (cplx& z : coeffs) z *= a;
    return *this;
}

double inner_product(const PhysicalField& u, const PhysicalField& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) s += u.values[i] * v.values[i];
    return s * u.grid.cell_volume();
}

double inner_product(const SpectralField& u, const SpectralField& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.coeffs.size(); ++i)
        s += (u.coeffs[i] * std::conj(v.coeffs[i])).real();
    return s * u.grid.volume();
}

double l2_norm(const SpectralField& u) {
    double s = 0.0;
    for (const cplx& z : u.coeffs) s += std::norm(z);
    return std::sqrt(s * u.grid.volume());
}

double max_abs(const SpectralField& u) {
    double m = 0.0;
    for (const cplx& z : u.coeffs) m = std::max(m, std::abs(z));
    return m;
}

}  // namespace llb
