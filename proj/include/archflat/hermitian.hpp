#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace archflat {

using cplx = std::complex<double>;

/// Dense n x n complex matrix, row-major. Hermitian when built through add_pair().
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(std::size_t n) : n_(n), a_(n * n) {}

    std::size_t size() const { return n_; }
    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    /// Adds z at (i, j) and conj(z) at (j, i).
    void add_pair(std::size_t i, std::size_t j, cplx z)
    {
        (*this)(i, j) += z;
        (*this)(j, i) += std::conj(z);
    }

    /// max |H - H^*| entrywise.
    double hermiticity_defect() const
    {
        double d = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return d;
    }

    static HermitianMatrix identity(std::size_t n)
    {
        HermitianMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

private:
    std::size_t n_ = 0;
    std::vector<cplx> a_;
};

/// All eigenvalues of a Hermitian matrix in ascending order.
///
/// Cyclic Jacobi on the complex matrix: each off-diagonal pivot is first made
/// real by a diagonal phase, then annihilated by a real plane rotation.
inline std::vector<double> eigenvalues(HermitianMatrix a)
{
    const std::size_t n = a.size();
    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a(i, j));
        return s;
    };
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale += std::norm(a(i, j));

    for (int sweep = 0; sweep < 64; ++sweep) {
        if (off_norm() <= 1e-34 * scale) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double r = std::abs(a(p, q));
                if (r == 0.0) continue;
                const cplx ph = a(p, q) / r;
                for (std::size_t k = 0; k < n; ++k) {
                    a(k, q) *= std::conj(ph);
                    a(q, k) *= ph;
                }
                a(q, q) = a(q, q).real();
                a(p, q) = r;
                a(q, p) = r;

                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double app = a(p, p).real() - t * r;
                const double aqq = a(q, q).real() + t * r;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const cplx kp = a(k, p), kq = a(k, q);
                    a(k, p) = c * kp - s * kq;
                    a(k, q) = s * kp + c * kq;
                    a(p, k) = std::conj(a(k, p));
                    a(q, k) = std::conj(a(k, q));
                }
                a(p, p) = app;
                a(q, q) = aqq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i).real();
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace archflat
