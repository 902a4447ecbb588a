#pragma once

// Grids, trigonometric bases and coefficient storage for the periodic
// channel Omega = [-pi,pi) x [0,pi].
//
// Scalars live in one of two bases on a shared collocation grid:
//   CosY:  e^{i k1 x1} cos(k2 x2),  k2 = 0..n2-1   (Neumann parity in x2)
//   SinY:  e^{i k1 x1} sin(k2 x2),  k2 = 1..n2     (Dirichlet parity in x2)
// x2 collocation uses midpoint nodes x2_j = pi (j+1/2)/n2 so both parities
// share one physical grid. k1 storage is conjugate-reduced (real fields).

#include <complex>
#include <cstddef>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ksns {

using complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

enum class BasisTag { CosY, SinY };

struct Grid {
    int n1 = 0;  // Fourier points in x1 (even)
    int n2 = 0;  // collocation points in x2

    Grid() = default;
    Grid(int n1_, int n2_) : n1(n1_), n2(n2_) {
        if (n1 < 4 || n1 % 2 != 0) throw std::invalid_argument("Grid: n1 must be even and >= 4");
        if (n2 < 4) throw std::invalid_argument("Grid: n2 must be >= 4");
    }

    int n1k() const { return n1 / 2 + 1; }  // retained k1 modes 0..n1/2
    double dx1() const { return 2.0 * pi / n1; }
    double dx2() const { return pi / n2; }
    double x1(int i) const { return -pi + 2.0 * pi * i / n1; }
    double x2(int j) const { return pi * (j + 0.5) / n2; }

    std::vector<double> x1_nodes() const {
        std::vector<double> v(n1);
        for (int i = 0; i < n1; ++i) v[i] = x1(i);
        return v;
    }
    std::vector<double> x2_nodes() const {
        std::vector<double> v(n2);
        for (int j = 0; j < n2; ++j) v[j] = x2(j);
        return v;
    }

    bool operator==(const Grid& o) const { return n1 == o.n1 && n2 == o.n2; }
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

// Coefficient array of a real scalar field. Storage is k1-major:
// index (k1, j) -> k1 * n2 + j, with k1 = 0..n1/2 and j the basis index
// (CosY: k2 = j; SinY: k2 = j + 1).
class SpectralField {
  public:
    SpectralField() = default;
    SpectralField(const Grid& grid, BasisTag tag)
        : grid_(grid), tag_(tag), c_(static_cast<size_t>(grid.n1k()) * grid.n2, complex{0.0, 0.0}) {}

    const Grid& grid() const { return grid_; }
    BasisTag tag() const { return tag_; }
    int n1k() const { return grid_.n1k(); }
    int n2() const { return grid_.n2; }

    int k2_min() const { return tag_ == BasisTag::CosY ? 0 : 1; }
    int k2_max() const { return tag_ == BasisTag::CosY ? grid_.n2 - 1 : grid_.n2; }
    int k2_of(int j) const { return tag_ == BasisTag::CosY ? j : j + 1; }

    // raw basis-index access
    complex& at(int k1, int j) { return c_[static_cast<size_t>(k1) * grid_.n2 + j]; }
    const complex& at(int k1, int j) const { return c_[static_cast<size_t>(k1) * grid_.n2 + j]; }

    // wavenumber access
    complex& coef(int k1, int k2) { return at(k1, k2 - k2_min()); }
    const complex& coef(int k1, int k2) const { return at(k1, k2 - k2_min()); }

    std::vector<complex>& data() { return c_; }
    const std::vector<complex>& data() const { return c_; }

    bool is_finite() const {
        for (const auto& z : c_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    SpectralField& operator+=(const SpectralField& o) {
        check_compatible(o);
        for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        check_compatible(o);
        for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    SpectralField& operator*=(double a) {
        for (auto& z : c_) z *= a;
        return *this;
    }
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double a, SpectralField f) { return f *= a; }

  private:
    void check_compatible(const SpectralField& o) const {
        if (grid_ != o.grid_ || tag_ != o.tag_)
            throw std::invalid_argument("SpectralField: grid/tag mismatch");
    }

    Grid grid_{};
    BasisTag tag_ = BasisTag::CosY;
    std::vector<complex> c_;
};

// Parseval weight of a stored mode: integral of the squared basis function
// over Omega, with the factor for the implicit conjugate k1 partner.
inline double parseval_weight(const SpectralField& f, int k1, int j) {
    const double w1 = 2.0 * pi * (k1 == 0 ? 1.0 : 2.0);
    const double w2 = (f.tag() == BasisTag::CosY && j == 0) ? pi : pi / 2.0;
    return w1 * w2;
}

// Direct summation of the truncated series at an arbitrary point. O(N^2)
// per call; meant for boundary checks and oracles, not bulk evaluation.
inline double eval_point(const SpectralField& f, double x1, double x2) {
    double acc = 0.0;
    for (int k1 = 0; k1 < f.n1k(); ++k1) {
        const double fac = (k1 == 0) ? 1.0 : 2.0;
        const complex e1 = std::polar(1.0, k1 * x1);
        for (int j = 0; j < f.n2(); ++j) {
            const int k2 = f.k2_of(j);
            const double b = (f.tag() == BasisTag::CosY) ? std::cos(k2 * x2) : std::sin(k2 * x2);
            acc += fac * (f.at(k1, j) * e1).real() * b;
        }
    }
    return acc;
}

}  // namespace ksns
