#include "ksns/transforms.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace ksns {
namespace {

struct Plans {
    fftw_plan c2r = nullptr;     // halfcomplex -> real along x1, all x2 columns
    fftw_plan r2c = nullptr;     // real -> halfcomplex along x1, all x2 columns
    fftw_plan cos_inv = nullptr; // DCT-III on one interleaved (re,im) row
    fftw_plan cos_fwd = nullptr; // DCT-II
    fftw_plan sin_inv = nullptr; // DST-III
    fftw_plan sin_fwd = nullptr; // DST-II
};

// FFTW planning is not thread-safe; plans are created once per grid size
// under a lock and executed with the new-array interface afterwards.
Plans& plans_for(const Grid& g) {
    static std::map<std::pair<int, int>, Plans> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto [it, inserted] = cache.try_emplace({g.n1, g.n2});
    Plans& p = it->second;
    if (!inserted) return p;

    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const int n1 = g.n1, n2 = g.n2, n1k = g.n1k();

    std::vector<double> real_buf(static_cast<size_t>(n1) * n2);
    std::vector<fftw_complex> cplx_buf(static_cast<size_t>(n1k) * n2);
    std::vector<double> row_in(2 * n2), row_out(2 * n2);

    p.c2r = fftw_plan_many_dft_c2r(1, &n1, n2, cplx_buf.data(), nullptr, n2, 1,
                                   real_buf.data(), nullptr, n2, 1, flags);
    p.r2c = fftw_plan_many_dft_r2c(1, &n1, n2, real_buf.data(), nullptr, n2, 1,
                                   cplx_buf.data(), nullptr, n2, 1, flags);

    fftw_r2r_kind kind;
    auto row_plan = [&](fftw_r2r_kind k) {
        kind = k;
        return fftw_plan_many_r2r(1, &n2, 2, row_in.data(), nullptr, 2, 1,
                                  row_out.data(), nullptr, 2, 1, &kind, flags);
    };
    p.cos_inv = row_plan(FFTW_REDFT01);
    p.cos_fwd = row_plan(FFTW_REDFT10);
    p.sin_inv = row_plan(FFTW_RODFT01);
    p.sin_fwd = row_plan(FFTW_RODFT10);
    return p;
}

}  // namespace

std::vector<double> to_physical(const SpectralField& f) {
    const Grid& g = f.grid();
    const int n1 = g.n1, n2 = g.n2, n1k = g.n1k();
    Plans& p = plans_for(g);

    // Stage 1: synthesize along x2 for each k1 row.
    std::vector<double> row_in(2 * n2), row_out(2 * n2);
    std::vector<fftw_complex> half(static_cast<size_t>(n1k) * n2);
    for (int k1 = 0; k1 < n1k; ++k1) {
        if (f.tag() == BasisTag::CosY) {
            // values = X_0 + 2 sum_{k>=1} X_k cos(k x_j)  (REDFT01)
            for (int j = 0; j < n2; ++j) {
                const complex c = f.at(k1, j);
                const double s = (j == 0) ? 1.0 : 0.5;
                row_in[2 * j] = s * c.real();
                row_in[2 * j + 1] = s * c.imag();
            }
            fftw_execute_r2r(p.cos_inv, row_in.data(), row_out.data());
        } else {
            // values = 2 sum_{k<=n2-1} X_{k-1} sin(k x_j) + (-1)^j X_{n2-1}  (RODFT01)
            for (int j = 0; j < n2; ++j) {
                const complex c = f.at(k1, j);
                const double s = (j == n2 - 1) ? 1.0 : 0.5;
                row_in[2 * j] = s * c.real();
                row_in[2 * j + 1] = s * c.imag();
            }
            fftw_execute_r2r(p.sin_inv, row_in.data(), row_out.data());
        }
        // Stage 2 input with the node phase e^{i k1 x1_i} = (-1)^{k1} e^{2 pi i k1 i/n1}.
        const double phase = (k1 % 2 == 0) ? 1.0 : -1.0;
        for (int j = 0; j < n2; ++j) {
            double re = phase * row_out[2 * j];
            double im = phase * row_out[2 * j + 1];
            if (k1 == n1 / 2) { re *= 2.0; im = 0.0; }  // Nyquist synthesized as 2 Re(c e^{ikx})
            half[static_cast<size_t>(k1) * n2 + j][0] = re;
            half[static_cast<size_t>(k1) * n2 + j][1] = im;
        }
    }

    std::vector<double> values(static_cast<size_t>(n1) * n2);
    fftw_execute_dft_c2r(p.c2r, half.data(), values.data());
    return values;
}

SpectralField to_spectral(std::span<const double> values, const Grid& grid, BasisTag tag) {
    const int n1 = grid.n1, n2 = grid.n2, n1k = grid.n1k();
    if (values.size() != static_cast<size_t>(n1) * n2)
        throw std::invalid_argument("to_spectral: values shape mismatch");
    Plans& p = plans_for(grid);

    std::vector<double> work(values.begin(), values.end());  // r2c destroys input
    std::vector<fftw_complex> half(static_cast<size_t>(n1k) * n2);
    fftw_execute_dft_r2c(p.r2c, work.data(), half.data());

    SpectralField f(grid, tag);
    std::vector<double> row_in(2 * n2), row_out(2 * n2);
    for (int k1 = 0; k1 < n1k; ++k1) {
        const double phase = (k1 % 2 == 0) ? 1.0 : -1.0;
        const double s1 = (k1 == n1 / 2) ? phase / (2.0 * n1) : phase / n1;
        for (int j = 0; j < n2; ++j) {
            row_in[2 * j] = s1 * half[static_cast<size_t>(k1) * n2 + j][0];
            row_in[2 * j + 1] = (k1 == n1 / 2) ? 0.0 : s1 * half[static_cast<size_t>(k1) * n2 + j][1];
        }
        if (tag == BasisTag::CosY) {
            fftw_execute_r2r(p.cos_fwd, row_in.data(), row_out.data());
            for (int j = 0; j < n2; ++j) {
                const double s2 = (j == 0) ? 1.0 / (2.0 * n2) : 1.0 / n2;
                f.at(k1, j) = complex{s2 * row_out[2 * j], s2 * row_out[2 * j + 1]};
            }
        } else {
            fftw_execute_r2r(p.sin_fwd, row_in.data(), row_out.data());
            for (int j = 0; j < n2; ++j) {
                const double s2 = (j == n2 - 1) ? 1.0 / (2.0 * n2) : 1.0 / n2;
                f.at(k1, j) = complex{s2 * row_out[2 * j], s2 * row_out[2 * j + 1]};
            }
        }
    }
    return f;
}

}  // namespace ksns
