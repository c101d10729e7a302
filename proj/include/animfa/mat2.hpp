#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace animfa {

/// Dense 2x2 real matrix, row major.
struct Mat2 {
    double m11 = 0.0, m12 = 0.0;
    double m21 = 0.0, m22 = 0.0;

    double trace() const { return m11 + m22; }
    double det() const { return m11 * m22 - m12 * m21; }

    Mat2 transpose() const { return {m11, m21, m12, m22}; }

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    std::array<double, 2> apply(double x, double y) const {
        return {m11 * x + m12 * y, m21 * x + m22 * y};
    }

    double max_abs() const {
        return std::max(std::max(std::fabs(m11), std::fabs(m12)),
                        std::max(std::fabs(m21), std::fabs(m22)));
    }

    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
                a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
    }

    friend Mat2 operator+(const Mat2& a, const Mat2& b) {
        return {a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22};
    }

    friend Mat2 operator-(const Mat2& a, const Mat2& b) {
        return {a.m11 - b.m11, a.m12 - b.m12, a.m21 - b.m21, a.m22 - b.m22};
    }
};

/// Eigenvalues from the characteristic polynomial, ordered by ascending real
/// part. A discriminant within -1e-12 of zero counts as zero, so
/// near-degenerate pairs come out real (degenerate node, not a spiral).
inline std::array<std::complex<double>, 2> eigenvalues(const Mat2& j) {
    const double tr = j.trace();
    const double disc = tr * tr - 4.0 * j.det();
    if (disc < -1e-12) {
        const double im = std::sqrt(-disc) / 2.0;
        return {std::complex<double>(tr / 2.0, -im), std::complex<double>(tr / 2.0, im)};
    }
    const double s = std::sqrt(std::max(disc, 0.0));
    return {std::complex<double>((tr - s) / 2.0, 0.0),
            std::complex<double>((tr + s) / 2.0, 0.0)};
}

}  // namespace animfa
