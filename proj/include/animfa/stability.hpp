#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string_view>

#include "animfa/equilibria.hpp"
#include "animfa/mat2.hpp"
#include "animfa/model.hpp"
#include "animfa/responses.hpp"

namespace animfa {

enum class Classification {
    stable_node,
    unstable_node,
    stable_spiral,
    unstable_spiral,
    saddle,
    undetermined
};

inline std::string_view to_string(Classification c) {
    switch (c) {
        case Classification::stable_node: return "stable_node";
        case Classification::unstable_node: return "unstable_node";
        case Classification::stable_spiral: return "stable_spiral";
        case Classification::unstable_spiral: return "unstable_spiral";
        case Classification::saddle: return "saddle";
        case Classification::undetermined: return "undetermined";
    }
    return "?";
}

struct StabilityReport {
    Mat2 jacobian;
    std::array<std::complex<double>, 2> eigenvalues;
    Classification classification = Classification::undetermined;
    double trace = 0.0;
    double determinant = 0.0;
};

namespace detail {

inline constexpr double kZeroEigTol = 1e-9;   // |Re lambda| below this is undetermined
inline constexpr double kSaddleDetTol = 1e-9;
inline constexpr double kSpiralDiscTol = 1e-12;

}  // namespace detail

/// Jacobian of the vector field at a state:
///   [ -1 + tau (1-2y) z                      tau y (1-y)            ]
///   [ -zeta z fbr'(y) + xi (1-z) fcr'(y)     -zeta fbr(y) - xi fcr(y) ]
inline Mat2 jacobian(const ModelParams& p, const FunctionalResponsePair& fr, const State& s) {
    const double y = s.y();
    const double z = s.z();
    return {-1.0 + p.tau * (1.0 - 2.0 * y) * z,
            p.tau * y * (1.0 - y),
            -p.zeta * z * fr.fbr.deriv(y) + p.xi * (1.0 - z) * fr.fcr.deriv(y),
            -p.zeta * fr.fbr(y) - p.xi * fr.fcr(y)};
}

namespace detail {

/// Shared classification rule on the characteristic-polynomial data.
/// Tolerances: saddle when det < -1e-9 (checked first), undetermined when
/// some |Re lambda| < 1e-9, spiral when the discriminant < -1e-12; an
/// exactly zero discriminant reports a (degenerate) node. A real pair of
/// opposite signs that is not a tolerance-certified saddle also reports
/// undetermined.
inline Classification classify_eigenstructure(
    double trace, double det, const std::array<std::complex<double>, 2>& eig) {
    const double disc = trace * trace - 4.0 * det;
    const double re1 = eig[0].real();
    const double re2 = eig[1].real();
    if (det < -kSaddleDetTol) return Classification::saddle;
    if (std::min(std::fabs(re1), std::fabs(re2)) < kZeroEigTol)
        return Classification::undetermined;
    if (disc < -kSpiralDiscTol)
        return trace < 0.0 ? Classification::stable_spiral : Classification::unstable_spiral;
    if (re1 < 0.0 && re2 < 0.0) return Classification::stable_node;
    if (re1 > 0.0 && re2 > 0.0) return Classification::unstable_node;
    return Classification::undetermined;
}

}  // namespace detail

inline StabilityReport classify(const Mat2& j) {
    StabilityReport rep;
    rep.jacobian = j;
    rep.trace = j.trace();
    rep.determinant = j.det();
    rep.eigenvalues = eigenvalues(j);
    rep.classification =
        detail::classify_eigenstructure(rep.trace, rep.determinant, rep.eigenvalues);
    return rep;
}

inline StabilityReport classify(const ModelParams& p, const FunctionalResponsePair& fr,
                                const Equilibrium& eq) {
    return classify(jacobian(p, fr, State(eq.y, eq.z_is_free ? 0.0 : eq.z)));
}

/// DFE linear stability by the four-case sign analysis of fbr(0), fcr(0).
/// The DFE Jacobian is lower triangular, so the eigenvalues are the closed
/// forms lambda1 = -1 + tau z0 and lambda2 = -zeta fbr(0) - xi fcr(0).
struct DfeCaseReport {
    int case_id = 0;  // 1: both zero, 2: fbr0=0<fcr0, 3: fcr0=0<fbr0, 4: both positive
    double z0 = 0.0;
    StabilityReport report;
};

/// z0_if_free fixes the link density used for reporting in case 1, where the
/// DFE z is a free variable (the verdict there is undetermined regardless,
/// because lambda2 = 0).
inline DfeCaseReport dfe_case_analysis(const ModelParams& p, const FunctionalResponsePair& fr,
                                       double z0_if_free = 0.0) {
    const double fbr0 = fr.fbr(0.0);
    const double fcr0 = fr.fcr(0.0);

    DfeCaseReport out;
    if (fbr0 == 0.0 && fcr0 == 0.0) {
        out.case_id = 1;
        out.z0 = z0_if_free;
    } else if (fbr0 == 0.0) {
        out.case_id = 2;
        out.z0 = 1.0;
    } else if (fcr0 == 0.0) {
        out.case_id = 3;
        out.z0 = 0.0;
    } else {
        out.case_id = 4;
        out.z0 = fcr0 / (p.omega * fbr0 + fcr0);
    }

    const double lambda1 = -1.0 + p.tau * out.z0;
    const double lambda2 = -p.zeta * fbr0 - p.xi * fcr0;

    // the verdict goes through the same rule as classify(), so the two
    // routes always agree: case 1 is undetermined (lambda2 = 0), case 3 a
    // stable node, and cases 2/4 flip from stable node to saddle where
    // lambda1 = -1 + tau z0 crosses zero
    StabilityReport& rep = out.report;
    rep.jacobian = jacobian(p, fr, State(0.0, out.z0));
    rep.eigenvalues = {std::complex<double>(std::min(lambda1, lambda2), 0.0),
                       std::complex<double>(std::max(lambda1, lambda2), 0.0)};
    rep.trace = lambda1 + lambda2;
    rep.determinant = lambda1 * lambda2;
    rep.classification =
        detail::classify_eigenstructure(rep.trace, rep.determinant, rep.eigenvalues);
    return out;
}

/// Dulac-rescaled divergence with weight 1/(yz):
///   F(y,z) = -tau - xi fcr(y) / (y z^2),
/// strictly negative on (0,1)^2, which rules out periodic orbits.
inline double bendixson_dulac_F(const ModelParams& p, const FunctionalResponsePair& fr,
                                double y, double z) {
    return -p.tau - p.xi * fr.fcr(y) / (y * z * z);
}

struct DulacCertificate {
    double max_F = 0.0;
    bool holds = false;
};

/// Numerical certificate on the interior grid {i/(grid_n+1)}^2, i = 1..grid_n.
/// F diverges to -inf at the y and z axes, so interior sampling suffices.
inline DulacCertificate bendixson_dulac_certificate(const ModelParams& p,
                                                    const FunctionalResponsePair& fr,
                                                    int grid_n) {
    if (grid_n < 2) throw std::invalid_argument("grid_n must be >= 2");
    double max_F = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= grid_n; ++i) {
        const double y = static_cast<double>(i) / (grid_n + 1);
        for (int k = 1; k <= grid_n; ++k) {
            const double z = static_cast<double>(k) / (grid_n + 1);
            max_F = std::max(max_F, bendixson_dulac_F(p, fr, y, z));
        }
    }
    return {max_F, max_F < 0.0};
}

}  // namespace animfa
