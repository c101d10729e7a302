#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "animfa/model.hpp"
#include "animfa/responses.hpp"

namespace animfa {

enum class EquilibriumKind { dfe, endemic };

/// A fixed point of the planar system. For endemic equilibria
/// z = 1/(tau (1-y)); for the disease-free equilibrium y = 0 exactly and z
/// may be a free variable (when fbr(0) = fcr(0) = 0, any z is stationary).
struct Equilibrium {
    double y = 0.0;
    double z = 0.0;
    bool z_is_free = false;
    EquilibriumKind kind = EquilibriumKind::dfe;
    std::optional<double> r0;  // basic reproduction number at these params, when defined
    int multiplicity = 1;      // 2 for a tangential (double) root of h
};

/// h(y) = omega fbr(y) + (1 - tau (1-y)) fcr(y). Interior zeros of h are the
/// endemic equilibria.
inline double h_function(const ModelParams& p, const FunctionalResponsePair& fr, double y) {
    return p.omega * fr.fbr(y) + (1.0 - p.tau * (1.0 - y)) * fr.fcr(y);
}

inline double h_derivative(const ModelParams& p, const FunctionalResponsePair& fr, double y) {
    return p.omega * fr.fbr.deriv(y) + p.tau * fr.fcr(y) +
           (1.0 - p.tau * (1.0 - y)) * fr.fcr.deriv(y);
}

/// R0 = tau fcr(0) / (omega fbr(0) + fcr(0)), from the next-generation
/// splitting of the prevalence equation linearized at the DFE. Undefined
/// (nullopt) when fcr(0) = 0: the disease-free network never regrows links,
/// and the splitting does not apply.
inline std::optional<double> r0(const ModelParams& p, const FunctionalResponsePair& fr) {
    const double fcr0 = fr.fcr(0.0);
    if (!(fcr0 > 0.0)) return std::nullopt;
    return p.tau * fcr0 / (p.omega * fr.fbr(0.0) + fcr0);
}

/// Threshold where the two endemic equilibria of the aid pair are born:
/// 2 tau / (omega + 2 + sqrt(8 omega)).
inline double r0_aid(const ModelParams& p) {
    return 2.0 * p.tau / (p.omega + 2.0 + std::sqrt(8.0 * p.omega));
}

/// Disease-free equilibrium: y = 0 with z = fcr(0)/(omega fbr(0) + fcr(0)),
/// or z free when both responses vanish at 0.
inline Equilibrium dfe(const ModelParams& p, const FunctionalResponsePair& fr) {
    const double fbr0 = fr.fbr(0.0);
    const double fcr0 = fr.fcr(0.0);
    Equilibrium eq;
    eq.kind = EquilibriumKind::dfe;
    eq.y = 0.0;
    eq.r0 = r0(p, fr);
    if (fbr0 == 0.0 && fcr0 == 0.0) {
        eq.z_is_free = true;
        eq.z = std::numeric_limits<double>::quiet_NaN();
    } else {
        eq.z = fcr0 / (p.omega * fbr0 + fcr0);
    }
    return eq;
}

namespace detail {

inline constexpr int kEeGridIntervals = 10001;   // fixed; roots closer than ~2e-4 may merge
inline constexpr double kEeBisectWidth = 1e-13;
inline constexpr double kZFeasTol = 1e-10;       // keeps the boundary case z = 1
inline constexpr double kTangentialHTol = 1e-10; // accept a refined minimum as a double root
// Grid-level gate for candidate minima: at a genuine fold the sampled |h| is
// curvature * (grid spacing)^2, far above the acceptance tolerance.
inline constexpr double kTangentialGridGate = 1e-6;
inline constexpr double kNewtonDerivMin = 1e-8;

/// Pair an interior root y of h with its link density; rejects y outside
/// (0,1) and roots whose z would leave (0, 1 + 1e-10]. z is clamped onto the
/// boundary z = 1 when within tolerance.
inline std::optional<Equilibrium> endemic_from_y(const ModelParams& p, double y,
                                                 int multiplicity = 1) {
    if (!(y > 0.0 && y < 1.0)) return std::nullopt;
    const double denom = p.tau * (1.0 - y);
    if (denom < 1.0 - kZFeasTol) return std::nullopt;
    double z = 1.0 / denom;
    if (z > 1.0) z = 1.0;
    Equilibrium eq;
    eq.y = y;
    eq.z = z;
    eq.kind = EquilibriumKind::endemic;
    eq.multiplicity = multiplicity;
    return eq;
}

}  // namespace detail

/// All endemic equilibria, by sign-change bracketing of h on a uniform grid
/// of 10001 intervals followed by bisection to interval width 1e-13 (plus a
/// few Newton steps where h' is not degenerate). Tangential (even) roots are
/// additionally sought at interior local minima of |h| below 1e-10 and are
/// reported once with multiplicity 2. Sorted ascending in y.
inline std::vector<Equilibrium> endemic_equilibria(const ModelParams& p,
                                                   const FunctionalResponsePair& fr) {
    const int n = detail::kEeGridIntervals;
    const auto h = [&](double y) { return h_function(p, fr, y); };
    const auto hp = [&](double y) { return h_derivative(p, fr, y); };

    std::vector<double> hv(n + 1);
    for (int i = 0; i <= n; ++i) hv[i] = h(static_cast<double>(i) / n);

    struct Root { double y; int mult; };
    std::vector<Root> roots;

    auto bisect = [&](double a, double b, double ha) {
        // invariant: sign change inside [a,b]
        while (b - a > detail::kEeBisectWidth) {
            const double m = 0.5 * (a + b);
            const double hm = h(m);
            if (hm == 0.0) return m;
            if ((ha < 0.0) != (hm < 0.0)) {
                b = m;
            } else {
                a = m;
                ha = hm;
            }
        }
        return 0.5 * (a + b);
    };

    auto polish = [&](double y) {
        for (int it = 0; it < 5; ++it) {
            const double d = hp(y);
            if (std::fabs(d) <= detail::kNewtonDerivMin) break;
            const double step = h(y) / d;
            const double y_next = y - step;
            if (!(y_next > 0.0 && y_next < 1.0) || std::fabs(step) > 1e-4) break;
            y = y_next;
            if (std::fabs(step) < 1e-16) break;
        }
        return y;
    };

    // simple roots: sign changes across grid intervals
    for (int i = 0; i < n; ++i) {
        const double a = static_cast<double>(i) / n;
        const double b = static_cast<double>(i + 1) / n;
        if (hv[i] == 0.0) {
            if (i > 0) {
                // exact zero on an interior grid point; treat as tangential if
                // the neighbours do not straddle zero
                const int mult = (hv[i - 1] < 0.0) == (hv[i + 1] < 0.0) ? 2 : 1;
                roots.push_back({a, mult});
            }
            continue;
        }
        if ((hv[i] < 0.0) != (hv[i + 1] < 0.0) && hv[i + 1] != 0.0)
            roots.push_back({polish(bisect(a, b, hv[i])), 1});
    }

    // tangential roots: interior local minima of |h|, refined on h' and
    // accepted when the refined minimum is below tolerance; candidates close
    // to a found root (within two grid cells) are skipped
    for (int i = 1; i < n; ++i) {
        const double ah = std::fabs(hv[i]);
        if (ah >= detail::kTangentialGridGate) continue;
        if (ah > std::fabs(hv[i - 1]) || ah > std::fabs(hv[i + 1])) continue;
        const double y_i = static_cast<double>(i) / n;
        bool near_known = false;
        for (const auto& r : roots)
            if (std::fabs(r.y - y_i) < 2.0 / n) near_known = true;
        if (near_known) continue;

        // refine on h', which crosses zero at an extremum of h
        double a = static_cast<double>(i - 1) / n;
        double b = static_cast<double>(i + 1) / n;
        double y_star = y_i;
        const double da = hp(a);
        const double db = hp(b);
        if ((da < 0.0) != (db < 0.0)) {
            double lo = a, hi = b, dlo = da;
            while (hi - lo > detail::kEeBisectWidth) {
                const double m = 0.5 * (lo + hi);
                const double dm = hp(m);
                if ((dlo < 0.0) != (dm < 0.0)) {
                    hi = m;
                } else {
                    lo = m;
                    dlo = dm;
                }
            }
            y_star = 0.5 * (lo + hi);
        }
        if (std::fabs(h(y_star)) < detail::kTangentialHTol) roots.push_back({y_star, 2});
    }

    std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return a.y < b.y; });

    std::vector<Equilibrium> out;
    for (const auto& r : roots) {
        if (!out.empty() && r.y - out.back().y < 1e-9) continue;  // merged duplicates
        if (auto eq = detail::endemic_from_y(p, r.y, r.mult)) out.push_back(*eq);
    }
    return out;
}

/// Closed-form endemic equilibria for the four built-in pairs; the oracle
/// counterpart of endemic_equilibria. Returns only equilibria inside
/// (0,1) x (0,1].
inline std::vector<Equilibrium> closed_form_ee(BuiltinModel m, const ModelParams& p) {
    std::vector<Equilibrium> out;
    auto push = [&](double y) {
        if (auto eq = detail::endemic_from_y(p, y)) out.push_back(*eq);
    };
    switch (m) {
        case BuiltinModel::rlad:
            push(1.0 - (1.0 + p.omega) / p.tau);
            break;
        case BuiltinModel::linear_break:
            push((p.tau - 1.0) / (p.tau + p.omega));
            break;
        case BuiltinModel::asis: {
            const double s = (1.0 - 2.0 * p.omega) / (2.0 * p.tau);
            push(1.0 - s - std::sqrt(s * s + 2.0 * p.omega / p.tau));
            break;
        }
        case BuiltinModel::aid: {
            const double b = 2.0 * p.tau + p.omega - 2.0;
            const double disc = b * b - 8.0 * p.tau * p.omega;
            if (disc < 0.0) break;
            const double r = std::sqrt(disc);
            push((b - r) / (4.0 * p.tau));
            if (r > 0.0) push((b + r) / (4.0 * p.tau));
            break;
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Equilibrium& a, const Equilibrium& b) { return a.y < b.y; });
    return out;
}

}  // namespace animfa
