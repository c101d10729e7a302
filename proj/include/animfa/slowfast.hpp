#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "animfa/dynamics.hpp"
#include "animfa/model.hpp"
#include "animfa/responses.hpp"
#include "animfa/rk45.hpp"

namespace animfa {

/// Parameters of the two-timescale system in which the network evolves a
/// factor epsilon slower than the disease: zeta -> zeta*eps, xi -> xi*eps in
/// the link equation, everything else unchanged.
struct SlowFastParams {
    ModelParams base;
    double epsilon;

    SlowFastParams(ModelParams base_, double epsilon_) : base(base_), epsilon(epsilon_) {
        if (!(epsilon > 0.0 && epsilon < 1.0))
            throw std::invalid_argument("epsilon must lie in (0,1)");
    }

    ModelParams scaled() const {
        return ModelParams(base.tau, base.omega, base.zeta * epsilon, base.xi * epsilon);
    }
};

/// Fast subsystem (epsilon -> 0 in the fast time chart): the prevalence
/// equation with frozen link density.
inline std::array<double, 2> layer_field(const SlowFastParams& p, const State& s) {
    const double y = s.y();
    return {-y + p.base.tau * y * (1.0 - y) * s.z(), 0.0};
}

enum class ManifoldBranch { trivial, endemic };
enum class BranchStability { attracting, repelling, nonhyperbolic };

/// Point of the critical manifold: the y = 0 line (eigenvalue tau z - 1) or
/// the branch y = (tau z - 1)/(tau z) (eigenvalue 1 - tau z), with the fast
/// linearization's stability tag.
struct CriticalManifoldPoint {
    ManifoldBranch branch = ManifoldBranch::trivial;
    double z = 0.0;
    double y = 0.0;
    double eigenvalue = 0.0;
    BranchStability stability = BranchStability::nonhyperbolic;
};

namespace detail {

inline BranchStability branch_stability(double lambda) {
    if (std::fabs(lambda) < 1e-9) return BranchStability::nonhyperbolic;
    return lambda < 0.0 ? BranchStability::attracting : BranchStability::repelling;
}

}  // namespace detail

/// Both branches over a z grid; the endemic branch exists only where
/// tau z >= 1 and meets the trivial branch at the exchange point (0, 1/tau).
inline std::vector<CriticalManifoldPoint> critical_manifold(const SlowFastParams& p,
                                                            const std::vector<double>& z_grid) {
    std::vector<CriticalManifoldPoint> out;
    const double tau = p.base.tau;
    for (const double z : z_grid) {
        const double lam0 = tau * z - 1.0;
        out.push_back({ManifoldBranch::trivial, z, 0.0, lam0, detail::branch_stability(lam0)});
        if (tau * z >= 1.0) {
            const double y = (tau * z - 1.0) / (tau * z);
            out.push_back(
                {ManifoldBranch::endemic, z, y, -lam0, detail::branch_stability(-lam0)});
        }
    }
    return out;
}

/// Slow flow dz/ds on a branch of the critical manifold (slow time chart,
/// the epsilon already divided out).
inline double reduced_field(const SlowFastParams& p, const FunctionalResponsePair& fr,
                            ManifoldBranch branch, double z) {
    const ModelParams& b = p.base;
    double y = 0.0;
    if (branch == ManifoldBranch::endemic) {
        if (!(b.tau * z > 1.0))
            throw std::domain_error("endemic branch needs tau z > 1");
        y = (b.tau * z - 1.0) / (b.tau * z);
    }
    return -b.zeta * z * fr.fbr(y) + b.xi * (1.0 - z) * fr.fcr(y);
}

/// Exit point of the delayed loss of stability along y = 0: the unique
/// z_out in (1/tau, 1) balancing the accumulated fast eigenvalue,
///   integral_{z_in}^{z_out} (tau z - 1)/(1 - z) dz = 0,
/// solved through the closed-form antiderivative
///   G(z) = -tau z - (tau - 1) ln(1 - z)
/// by bisection on (1/tau, 1 - 1e-12) to width 1e-12. Requires tau > 1 and
/// an entry on the attracting part, 0 <= z_in < 1/tau.
inline double entry_exit(double tau, double z_in) {
    if (!(tau > 1.0)) throw std::domain_error("entry-exit map needs tau > 1");
    if (!(z_in >= 0.0 && z_in < 1.0 / tau))
        throw std::domain_error("z_in must lie in [0, 1/tau)");

    const auto G = [tau](double z) { return -tau * z - (tau - 1.0) * std::log1p(-z); };
    const double target = G(z_in);

    double lo = 1.0 / tau;           // G minimal here, G(lo) <= target
    double hi = 1.0 - 1e-12;         // G diverges to +inf as z -> 1
    if (G(hi) < target) return hi;   // exit indistinguishable from 1 at double precision
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (G(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// A slow-fast trajectory plus the measured entry/exit of the slab
/// y < y_thresh: entry_z is the link density at the first downward crossing
/// with z < 1/tau, exit_z at the next upward crossing (both located on the
/// dense output by bisection to time accuracy 1e-10).
struct SlowFastRun {
    Trajectory trajectory;
    std::optional<double> entry_z;
    std::optional<double> exit_z;
};

inline SlowFastRun simulate_slowfast(const SlowFastParams& p, const FunctionalResponsePair& fr,
                                     const State& s0, IntegratorConfig cfg,
                                     double y_thresh = 1e-3) {
    detail::validate(cfg);
    // small-epsilon runs need relative control on the exponentially small
    // prevalence, and steps short enough for the crossing scan
    cfg.atol = std::min(cfg.atol, 1e-30);
    cfg.max_step = cfg.max_step > 0.0 ? std::min(cfg.max_step, 1.0) : 1.0;

    const ModelParams scaled = p.scaled();
    const double z_exchange = 1.0 / p.base.tau;

    auto rhs = [&scaled, &fr](double, const std::array<double, 2>& u) {
        return vector_field(scaled, fr, u[0], u[1]);
    };
    using Stepper = Dopri5<2, decltype(rhs)>;
    Stepper stepper(rhs, {cfg.rtol, cfg.atol, cfg.max_step});
    stepper.start(0.0, {s0.y(), s0.z()});

    SlowFastRun run;
    Trajectory& traj = run.trajectory;
    auto emit = [&traj](double t, const std::array<double, 2>& u) {
        if (!traj.samples.empty() && t <= traj.samples.back().t) return;
        traj.samples.push_back({t, u[0], u[1]});
    };

    bool inside = false;
    if (s0.y() <= y_thresh && s0.z() < z_exchange) {
        inside = true;
        run.entry_z = s0.z();
    }

    // locate crossings of y = y_thresh inside one accepted step
    auto scan_step = [&]() {
        if (run.exit_z) return;
        constexpr int kScan = 16;
        const double t0 = stepper.t_prev();
        const double t1 = stepper.t();
        double f_prev = stepper.state_prev()[0] - y_thresh;
        double t_prev_pt = t0;
        for (int j = 1; j <= kScan; ++j) {
            const double tj = t0 + (t1 - t0) * j / kScan;
            const auto uj = j == kScan ? stepper.state() : stepper.dense(tj);
            const double fj = uj[0] - y_thresh;
            if ((f_prev > 0.0) != (fj > 0.0)) {
                double ta = t_prev_pt, tb = tj;
                const bool downward = f_prev > 0.0;
                while (tb - ta > 1e-10) {
                    const double tm = 0.5 * (ta + tb);
                    const bool above = stepper.dense(tm)[0] - y_thresh > 0.0;
                    if (above == downward)
                        ta = tm;
                    else
                        tb = tm;
                }
                const auto uc = stepper.dense(0.5 * (ta + tb));
                if (downward && !inside) {
                    inside = true;
                    if (!run.entry_z && uc[1] < z_exchange) run.entry_z = uc[1];
                } else if (!downward && inside) {
                    inside = false;
                    if (run.entry_z && !run.exit_z) {
                        run.exit_z = uc[1];
                        return;
                    }
                }
            }
            f_prev = fj;
            t_prev_pt = tj;
        }
    };

    emit(0.0, {s0.y(), s0.z()});
    if (detail::inf_norm(stepper.deriv()) < cfg.convergence_eps) {
        traj.terminal = Terminal::converged;
        traj.converged_to = detail::equilibrium_at(scaled, s0.y(), s0.z());
        return run;
    }

    for (;;) {
        const auto outcome = stepper.advance(cfg.t_end);
        if (outcome == Stepper::Outcome::underflow) {
            traj.terminal = Terminal::step_failure;
            emit(stepper.t(), stepper.state());
            return run;
        }
        scan_step();

        std::array<double, 2> u = stepper.state();
        if (int c = detail::clamp_square(u)) {
            traj.clamp_events += c;
            stepper.override_state(u);
        }
        emit(stepper.t(), u);

        if (detail::inf_norm(stepper.deriv()) < cfg.convergence_eps) {
            traj.terminal = Terminal::converged;
            traj.converged_to = detail::equilibrium_at(scaled, u[0], u[1]);
            return run;
        }
        if (outcome == Stepper::Outcome::reached_target) {
            traj.terminal = Terminal::reached_t_end;
            return run;
        }
    }
}

}  // namespace animfa
