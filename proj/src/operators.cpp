#include "ksns/operators.hpp"

#include <map>
#include <mutex>

#include "ksns/transforms.hpp"

namespace ksns {

SpectralField ddx1(const SpectralField& f) {
    SpectralField out(f.grid(), f.tag());
    const int n2 = f.n2(), nyq = f.grid().n1 / 2;
    for (int k1 = 0; k1 < f.n1k(); ++k1) {
        if (k1 == 0 || k1 == nyq) continue;
        const complex ik{0.0, static_cast<double>(k1)};
        for (int j = 0; j < n2; ++j) out.at(k1, j) = ik * f.at(k1, j);
    }
    return out;
}

SpectralField ddx2(const SpectralField& f) {
    const int n2 = f.n2();
    if (f.tag() == BasisTag::CosY) {
        SpectralField out(f.grid(), BasisTag::SinY);
        // cos(k x2) -> -k sin(k x2), k = 1..n2-1; sine slot k = n2 stays 0
        for (int k1 = 0; k1 < f.n1k(); ++k1)
            for (int k2 = 1; k2 <= n2 - 1; ++k2)
                out.coef(k1, k2) = -static_cast<double>(k2) * f.coef(k1, k2);
        return out;
    }
    SpectralField out(f.grid(), BasisTag::CosY);
    // sin(k x2) -> k cos(k x2), k = 1..n2-1; the k = n2 mode has no cosine slot
    for (int k1 = 0; k1 < f.n1k(); ++k1)
        for (int k2 = 1; k2 <= n2 - 1; ++k2)
            out.coef(k1, k2) = static_cast<double>(k2) * f.coef(k1, k2);
    return out;
}

SpectralField laplacian(const SpectralField& f) {
    SpectralField out(f.grid(), f.tag());
    for (int k1 = 0; k1 < f.n1k(); ++k1)
        for (int j = 0; j < f.n2(); ++j) {
            const int k2 = f.k2_of(j);
            out.at(k1, j) = -static_cast<double>(k1 * k1 + k2 * k2) * f.at(k1, j);
        }
    return out;
}

SpectralField inv_laplace_neumann(const SpectralField& f) {
    if (f.tag() != BasisTag::CosY)
        throw std::invalid_argument("inv_laplace_neumann: requires CosY field");
    SpectralField out(f.grid(), BasisTag::CosY);
    for (int k1 = 0; k1 < f.n1k(); ++k1)
        for (int k2 = 0; k2 < f.n2(); ++k2) {
            if (k1 == 0 && k2 == 0) continue;  // mean annihilated
            out.coef(k1, k2) = f.coef(k1, k2) / static_cast<double>(k1 * k1 + k2 * k2);
        }
    return out;
}

SpectralField inv_laplace_dirichlet(const SpectralField& f, int power) {
    if (f.tag() != BasisTag::SinY)
        throw std::invalid_argument("inv_laplace_dirichlet: requires SinY field");
    if (power != 1 && power != 2)
        throw std::invalid_argument("inv_laplace_dirichlet: power must be 1 or 2");
    SpectralField out(f.grid(), BasisTag::SinY);
    for (int k1 = 0; k1 < f.n1k(); ++k1)
        for (int k2 = 1; k2 <= f.grid().n2; ++k2) {
            double ev = static_cast<double>(k1 * k1 + k2 * k2);
            if (power == 2) ev *= ev;
            out.coef(k1, k2) = f.coef(k1, k2) / ev;
        }
    return out;
}

namespace {

// Dense change-of-basis matrix, cached per n2. Row k (sine, 1..n2),
// column m (cosine, 0..n2-1).
const std::vector<double>& cos_to_sin_matrix(int n2) {
    static std::map<int, std::vector<double>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto [it, inserted] = cache.try_emplace(n2);
    if (!inserted) return it->second;
    auto& s = it->second;
    s.assign(static_cast<size_t>(n2) * n2, 0.0);
    for (int k = 1; k <= n2; ++k)
        for (int m = 0; m < n2; ++m) {
            if (k == m) continue;
            const double parity = ((k + m) % 2 == 0) ? 0.0 : 2.0;
            s[static_cast<size_t>(k - 1) * n2 + m] =
                (2.0 / pi) * k * parity / (static_cast<double>(k) * k - static_cast<double>(m) * m);
        }
    return s;
}

}  // namespace

SpectralField cos_to_sin(const SpectralField& f) {
    if (f.tag() != BasisTag::CosY)
        throw std::invalid_argument("cos_to_sin: requires CosY field");
    const int n2 = f.n2();
    const auto& s = cos_to_sin_matrix(n2);
    SpectralField out(f.grid(), BasisTag::SinY);
    for (int k1 = 0; k1 < f.n1k(); ++k1)
        for (int k = 1; k <= n2; ++k) {
            complex acc{0.0, 0.0};
            const double* row = &s[static_cast<size_t>(k - 1) * n2];
            for (int m = 0; m < n2; ++m) acc += row[m] * f.at(k1, m);
            out.coef(k1, k) = acc;
        }
    return out;
}

bool in_dealias_band(const Grid& g, int k1, int k2) {
    return 3 * k1 <= g.n1 && 3 * k2 <= 2 * g.n2;
}

SpectralField dealias(const SpectralField& f) {
    SpectralField out = f;
    for (int k1 = 0; k1 < f.n1k(); ++k1)
        for (int j = 0; j < f.n2(); ++j)
            if (!in_dealias_band(f.grid(), k1, f.k2_of(j))) out.at(k1, j) = complex{0.0, 0.0};
    return out;
}

namespace {

// Zero-extension onto the doubled grid. Inputs are dealiased, so the coarse
// Nyquist column is empty and a plain coefficient copy is exact.
SpectralField zero_pad_2x(const SpectralField& f, const Grid& fine) {
    SpectralField out(fine, f.tag());
    for (int k1 = 0; k1 < f.n1k(); ++k1)
        for (int j = 0; j < f.n2(); ++j) out.coef(k1, f.k2_of(j)) = f.at(k1, j);
    return out;
}

}  // namespace

SpectralField multiply(const SpectralField& f, const SpectralField& g) {
    if (f.grid() != g.grid()) throw std::invalid_argument("multiply: grid mismatch");
    const BasisTag out_tag = (f.tag() == g.tag()) ? BasisTag::CosY : BasisTag::SinY;
    // The product of two band-limited factors holds twice the band; forming
    // it on the doubled grid keeps the transform alias-free even when the
    // band edge sits exactly at 2/3 of the coarse grid.
    const Grid fine(2 * f.grid().n1, 2 * f.grid().n2);
    const auto fv = to_physical(zero_pad_2x(dealias(f), fine));
    const auto gv = to_physical(zero_pad_2x(dealias(g), fine));
    std::vector<double> prod(fv.size());
    for (size_t i = 0; i < fv.size(); ++i) prod[i] = fv[i] * gv[i];
    const SpectralField fine_prod = to_spectral(prod, fine, out_tag);
    SpectralField out(f.grid(), out_tag);
    for (int k1 = 0; k1 < out.n1k(); ++k1)
        for (int j = 0; j < out.n2(); ++j) out.at(k1, j) = fine_prod.coef(k1, out.k2_of(j));
    return dealias(out);
}

}  // namespace ksns
