#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "animfa/dynamics.hpp"
#include "animfa/equilibria.hpp"
#include "animfa/mat2.hpp"
#include "animfa/model.hpp"
#include "animfa/rk45.hpp"
#include "animfa/stability.hpp"

namespace animfa {

struct NotHurwitzError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotSaddleError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Quadratic Lyapunov region around a stable equilibrium: the sublevel set
/// {(u - center)^T P (u - center) <= c_star} intersected with the unit
/// square, with P solving P J + J^T P = -I at the center.
struct RegionOfAttraction {
    Mat2 P;
    double c_star = 0.0;
    State center;
};

struct Separatrix {
    std::vector<std::array<double, 2>> polyline;  // through the saddle, inside [0,1]^2
    Equilibrium saddle;
};

/// Unique symmetric solution of P J + J^T P = -I for a Hurwitz J, via the
/// 3x3 linear system in (P11, P12, P22).
inline Mat2 solve_lyapunov_2x2(const Mat2& j) {
    const auto eig = eigenvalues(j);
    if (!(eig[0].real() < -detail::kZeroEigTol && eig[1].real() < -detail::kZeroEigTol))
        throw NotHurwitzError("Jacobian is not Hurwitz");

    // rows: (1,1), (1,2), (2,2) entries of PJ + J^T P = -I
    double a[3][4] = {
        {2.0 * j.m11, 2.0 * j.m21, 0.0, -1.0},
        {j.m12, j.m11 + j.m22, j.m21, 0.0},
        {0.0, 2.0 * j.m12, 2.0 * j.m22, -1.0},
    };
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        if (a[col][col] == 0.0) throw NotHurwitzError("singular Lyapunov system");
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
        }
    }
    const double p11 = a[0][3] / a[0][0];
    const double p12 = a[1][3] / a[1][1];
    const double p22 = a[2][3] / a[2][2];
    return {p11, p12, p12, p22};
}

namespace detail {

struct SymEigen {
    double mu1 = 0.0, mu2 = 0.0;          // mu1 >= mu2
    std::array<double, 2> v1{}, v2{};     // orthonormal axes
};

inline SymEigen sym_eigen(const Mat2& sym) {
    const double mid = 0.5 * (sym.m11 + sym.m22);
    const double half = 0.5 * (sym.m11 - sym.m22);
    const double rad = std::hypot(half, sym.m12);
    SymEigen e;
    e.mu1 = mid + rad;
    e.mu2 = mid - rad;
    std::array<double, 2> va{sym.m12, e.mu1 - sym.m11};
    std::array<double, 2> vb{e.mu1 - sym.m22, sym.m12};
    auto& v = std::hypot(va[0], va[1]) >= std::hypot(vb[0], vb[1]) ? va : vb;
    double n = std::hypot(v[0], v[1]);
    if (n == 0.0) {
        v = {1.0, 0.0};
        n = 1.0;
    }
    e.v1 = {v[0] / n, v[1] / n};
    e.v2 = {-e.v1[1], e.v1[0]};
    return e;
}

inline bool in_unit_square(const std::array<double, 2>& u) {
    return u[0] >= 0.0 && u[0] <= 1.0 && u[1] >= 0.0 && u[1] <= 1.0;
}

}  // namespace detail

/// Lyapunov-decrease certificate for one level c: dV/dt = 2 (u-center)^T P f(u)
/// must be negative at every boundary sample of {V = c} that lies in the unit
/// square. Samples outside the square are skipped; a level whose boundary
/// misses the square entirely does not certify.
inline bool roa_level_certified(const ModelParams& p, const FunctionalResponsePair& fr,
                                const Mat2& P, const State& center, double c,
                                int boundary_samples = 720) {
    const auto e = detail::sym_eigen(P);
    if (!(e.mu2 > 0.0)) return false;
    const double a1 = std::sqrt(c / e.mu1);
    const double a2 = std::sqrt(c / e.mu2);
    int kept = 0;
    for (int k = 0; k < boundary_samples; ++k) {
        const double th = 2.0 * std::numbers::pi * k / boundary_samples;
        const double w1 = a1 * std::cos(th);
        const double w2 = a2 * std::sin(th);
        const std::array<double, 2> d{w1 * e.v1[0] + w2 * e.v2[0],
                                      w1 * e.v1[1] + w2 * e.v2[1]};
        const std::array<double, 2> u{center.y() + d[0], center.z() + d[1]};
        if (!detail::in_unit_square(u)) continue;
        ++kept;
        const auto f = vector_field(p, fr, u[0], u[1]);
        const auto grad = P.apply(d[0], d[1]);  // grad V / 2
        if (2.0 * (grad[0] * f[0] + grad[1] * f[1]) >= 0.0) return false;
    }
    return kept > 0;
}

/// Estimated region of attraction around a locally stable equilibrium:
/// V(u) = (u-center)^T P (u-center) with c_star the largest certifiable level,
/// found by bisection (relative width 1e-4) between 0 and the level at which
/// the sublevel set swallows the whole unit square.
inline RegionOfAttraction estimate_roa(const ModelParams& p, const FunctionalResponsePair& fr,
                                       const Equilibrium& eq, int boundary_samples = 720) {
    if (eq.z_is_free) throw NotHurwitzError("free link density at the equilibrium");
    const State center(eq.y, eq.z);
    const Mat2 J = jacobian(p, fr, center);
    const Mat2 P = solve_lyapunov_2x2(J);

    double c_max = 0.0;
    for (const double cy : {0.0, 1.0})
        for (const double cz : {0.0, 1.0}) {
            const double dy = cy - center.y();
            const double dz = cz - center.z();
            const auto g = P.apply(dy, dz);
            c_max = std::max(c_max, dy * g[0] + dz * g[1]);
        }

    double lo = 0.0, hi = c_max;
    if (roa_level_certified(p, fr, P, center, c_max, boundary_samples)) {
        lo = c_max;
    } else {
        for (int it = 0; it < 200 && hi - lo > 1e-4 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (roa_level_certified(p, fr, P, center, mid, boundary_samples))
                lo = mid;
            else
                hi = mid;
        }
    }
    return {P, lo, center};
}

inline double roa_level(const RegionOfAttraction& roa, double y, double z) {
    const double dy = y - roa.center.y();
    const double dz = z - roa.center.z();
    const auto g = roa.P.apply(dy, dz);
    return dy * g[0] + dz * g[1];
}

/// Stable manifold of a saddle, traced by reverse-time integration from
/// center +- 1e-6 v_s (v_s the unit stable eigenvector) until the orbit
/// leaves the unit square or exceeds arc length 10. Both branches are
/// concatenated through the saddle.
inline Separatrix separatrix(const ModelParams& p, const FunctionalResponsePair& fr,
                             const Equilibrium& saddle_eq) {
    const State center(saddle_eq.y, saddle_eq.z_is_free ? 0.0 : saddle_eq.z);
    const Mat2 J = jacobian(p, fr, center);
    if (J.det() >= -detail::kSaddleDetTol)
        throw NotSaddleError("equilibrium is not a saddle (det J >= -1e-9)");

    const auto eig = eigenvalues(J);
    const double lam_s = eig[0].real();  // ascending order: the stable one
    std::array<double, 2> va{J.m12, lam_s - J.m11};
    std::array<double, 2> vb{lam_s - J.m22, J.m21};
    auto v = std::hypot(va[0], va[1]) >= std::hypot(vb[0], vb[1]) ? va : vb;
    const double n = std::hypot(v[0], v[1]);
    v = {v[0] / n, v[1] / n};

    auto rhs = [&p, &fr](double, const std::array<double, 2>& u) {
        auto f = vector_field(p, fr, u[0], u[1]);
        return std::array<double, 2>{-f[0], -f[1]};
    };
    using Stepper = Dopri5<2, decltype(rhs)>;

    auto trace_branch = [&](double dir) {
        std::vector<std::array<double, 2>> pts;
        std::array<double, 2> u0{center.y() + dir * 1e-6 * v[0],
                                 center.z() + dir * 1e-6 * v[1]};
        if (!detail::in_unit_square(u0)) return pts;
        pts.push_back(u0);

        Stepper stepper(rhs, {1e-10, 1e-12, 0.0});
        stepper.start(0.0, u0);
        double arc = 0.0;
        for (long step = 0; step < 200000 && arc < 10.0; ++step) {
            if (stepper.advance(1e9) == Stepper::Outcome::underflow) break;
            // resample the step densely enough for a smooth polyline
            const double span = stepper.t() - stepper.t_prev();
            const auto& a = stepper.state_prev();
            const auto& b = stepper.state();
            const int nseg = std::max(
                1, static_cast<int>(std::ceil(std::hypot(b[0] - a[0], b[1] - a[1]) / 0.005)));
            double t_in = stepper.t_prev();
            bool exited = false;
            for (int j = 1; j <= nseg; ++j) {
                const double tj = stepper.t_prev() + span * j / nseg;
                auto uj = j == nseg ? b : stepper.dense(tj);
                if (!detail::in_unit_square(uj)) {
                    // bisect the crossing time and land on the square edge
                    double t_out = tj;
                    while (t_out - t_in > 1e-12) {
                        const double tm = 0.5 * (t_in + t_out);
                        if (detail::in_unit_square(stepper.dense(tm)))
                            t_in = tm;
                        else
                            t_out = tm;
                    }
                    auto edge = stepper.dense(t_in);
                    edge[0] = std::clamp(edge[0], 0.0, 1.0);
                    edge[1] = std::clamp(edge[1], 0.0, 1.0);
                    arc += std::hypot(edge[0] - pts.back()[0], edge[1] - pts.back()[1]);
                    pts.push_back(edge);
                    exited = true;
                    break;
                }
                arc += std::hypot(uj[0] - pts.back()[0], uj[1] - pts.back()[1]);
                pts.push_back(uj);
                t_in = tj;
                if (arc >= 10.0) break;
            }
            if (exited) break;
            const auto f = stepper.deriv();
            if (std::max(std::fabs(f[0]), std::fabs(f[1])) < 1e-12) break;  // reverse equilibrium
        }
        return pts;
    };

    const auto minus = trace_branch(-1.0);
    const auto plus = trace_branch(1.0);

    Separatrix sep;
    sep.saddle = saddle_eq;
    sep.polyline.reserve(minus.size() + plus.size() + 1);
    for (auto it = minus.rbegin(); it != minus.rend(); ++it) sep.polyline.push_back(*it);
    sep.polyline.push_back({center.y(), center.z()});
    for (const auto& pt : plus) sep.polyline.push_back(pt);
    return sep;
}

/// True when `point` lies on the same side of the separatrix as `reference`,
/// decided by the crossing parity of the straight segment between them.
inline bool separatrix_same_side(const Separatrix& sep, std::array<double, 2> point,
                                 std::array<double, 2> reference) {
    auto orient = [](const std::array<double, 2>& a, const std::array<double, 2>& b,
                     const std::array<double, 2>& c) {
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    };
    int crossings = 0;
    for (std::size_t i = 0; i + 1 < sep.polyline.size(); ++i) {
        const auto& a = sep.polyline[i];
        const auto& b = sep.polyline[i + 1];
        const double o1 = orient(point, reference, a);
        const double o2 = orient(point, reference, b);
        const double o3 = orient(a, b, point);
        const double o4 = orient(a, b, reference);
        if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0))) ++crossings;
    }
    return crossings % 2 == 0;
}

}  // namespace animfa
