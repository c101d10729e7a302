#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "animfa/equilibria.hpp"
#include "animfa/model.hpp"
#include "animfa/responses.hpp"
#include "animfa/rk45.hpp"

namespace animfa {

struct IntegratorConfig {
    double rtol = 1e-8;
    double atol = 1e-10;
    double max_step = 0.0;  // 0 = uncapped
    double t_end = 100.0;
    // Convergence is declared on the sup norm of the vector field. Near an
    // equilibrium the accepted-step noise floor is about
    // |J| (atol + rtol |state|); pick rtol/atol below convergence_eps / |J|
    // when early termination matters.
    double convergence_eps = 1e-10;
    std::vector<double> sample_times;  // empty: record every accepted step
};

enum class Terminal { reached_t_end, converged, step_failure };

struct TrajectorySample {
    double t, y, z;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;  // strictly increasing in t
    Terminal terminal = Terminal::reached_t_end;
    std::optional<Equilibrium> converged_to;
    long clamp_events = 0;
};

namespace detail {

inline constexpr double kClampWindow = 1e-12;

inline int clamp_square(std::array<double, 2>& u) {
    int clamped = 0;
    for (double& v : u) {
        if (v < 0.0 && v >= -kClampWindow) {
            v = 0.0;
            ++clamped;
        } else if (v > 1.0 && v <= 1.0 + kClampWindow) {
            v = 1.0;
            ++clamped;
        }
    }
    return clamped;
}

inline double inf_norm(const std::array<double, 2>& u) {
    return std::max(std::fabs(u[0]), std::fabs(u[1]));
}

inline void validate(const IntegratorConfig& cfg) {
    if (!(cfg.rtol > 0.0) || !(cfg.atol > 0.0))
        throw std::invalid_argument("rtol and atol must be positive");
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
    if (cfg.convergence_eps < 0.0)
        throw std::invalid_argument("convergence_eps must be non-negative");
}

/// Equilibrium nearest to a converged final state. The prevalence decides
/// the kind; an endemic point gets its link density from the steady-state
/// relation so the value satisfies the Equilibrium contract.
inline Equilibrium equilibrium_at(const ModelParams& p, double y, double z) {
    Equilibrium eq;
    if (y <= 1e-6) {
        eq.kind = EquilibriumKind::dfe;
        eq.y = 0.0;
        eq.z = z;
    } else {
        eq.kind = EquilibriumKind::endemic;
        eq.y = y;
        eq.z = std::min(1.0 / (p.tau * (1.0 - y)), 1.0);
    }
    return eq;
}

}  // namespace detail

/// Integrate the planar system from s0 over [0, t_end]. Dense output is
/// evaluated at cfg.sample_times when given (sorted, deduplicated, clipped to
/// the realized time span); otherwise every accepted step is recorded. The
/// run terminates early as `converged` once the sup norm of the vector field
/// drops below convergence_eps, and as `step_failure` if the step size
/// underflows below 1e-14. States within 1e-12 of the boundary of the unit
/// square are clamped onto it; clamp events are counted.
inline Trajectory integrate(const ModelParams& p, const FunctionalResponsePair& fr,
                            const State& s0, const IntegratorConfig& cfg) {
    detail::validate(cfg);

    auto rhs = [&p, &fr](double, const std::array<double, 2>& u) {
        return vector_field(p, fr, u[0], u[1]);
    };
    using Stepper = Dopri5<2, decltype(rhs)>;
    Stepper stepper(rhs, {cfg.rtol, cfg.atol, cfg.max_step});
    stepper.start(0.0, {s0.y(), s0.z()});

    std::vector<double> times = cfg.sample_times;
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    const bool record_steps = times.empty();
    std::size_t next = 0;

    Trajectory traj;
    auto emit = [&traj](double t, const std::array<double, 2>& u) {
        if (!traj.samples.empty() && t <= traj.samples.back().t) return;
        traj.samples.push_back({t, u[0], u[1]});
    };

    const std::array<double, 2> u0{s0.y(), s0.z()};
    if (record_steps) {
        emit(0.0, u0);
    } else {
        while (next < times.size() && times[next] <= 0.0) {
            if (times[next] == 0.0) emit(0.0, u0);
            ++next;
        }
    }

    if (detail::inf_norm(stepper.deriv()) < cfg.convergence_eps) {
        traj.terminal = Terminal::converged;
        emit(0.0, u0);
        traj.converged_to = detail::equilibrium_at(p, u0[0], u0[1]);
        return traj;
    }

    for (;;) {
        const auto outcome = stepper.advance(cfg.t_end);
        if (outcome == Stepper::Outcome::underflow) {
            traj.terminal = Terminal::step_failure;
            emit(stepper.t(), stepper.state());
            return traj;
        }

        if (!record_steps) {
            while (next < times.size() && times[next] <= stepper.t()) {
                emit(times[next], stepper.dense(times[next]));
                ++next;
            }
        }

        std::array<double, 2> u = stepper.state();
        if (int c = detail::clamp_square(u)) {
            traj.clamp_events += c;
            stepper.override_state(u);
        }
        if (record_steps) emit(stepper.t(), u);

        if (detail::inf_norm(stepper.deriv()) < cfg.convergence_eps) {
            traj.terminal = Terminal::converged;
            emit(stepper.t(), u);
            traj.converged_to = detail::equilibrium_at(p, u[0], u[1]);
            return traj;
        }
        if (outcome == Stepper::Outcome::reached_target) {
            traj.terminal = Terminal::reached_t_end;
            emit(stepper.t(), u);
            return traj;
        }
    }
}

/// Exact prevalence of the constant-link-density reduction z = 1/(1+omega):
/// the logistic y(t) = y_inf / (1 + exp(-K (t - t0))) with
///   y_inf = 1 - (1+omega)/tau,   K = tau/(1+omega) - 1,
///   t0 = ln(y_inf/y0 - 1) / K  (the epidemic peak).
/// Requires tau > 1 + omega (so y_inf > 0) and y0 in (0, y_inf).
inline double logistic_solution(const ModelParams& p, double y0, double t) {
    const double y_inf = 1.0 - (1.0 + p.omega) / p.tau;
    if (!(y_inf > 0.0))
        throw std::domain_error("logistic solution needs tau > 1 + omega");
    if (!(y0 > 0.0 && y0 < y_inf))
        throw std::domain_error("y0 must lie in (0, y_inf)");
    const double growth = p.tau / (1.0 + p.omega) - 1.0;
    const double t0 = std::log(y_inf / y0 - 1.0) / growth;
    return y_inf / (1.0 + std::exp(-growth * (t - t0)));
}

/// The equilibrium (from a candidate list) within 1e-6 of the trajectory's
/// final state, or nullopt. For a free-z DFE only the prevalence distance
/// counts.
inline std::optional<Equilibrium> detect_convergence_target(
    const Trajectory& traj, const std::vector<Equilibrium>& eqs) {
    if (traj.terminal == Terminal::step_failure)
        throw std::invalid_argument("trajectory ended in step failure");
    if (traj.samples.empty()) return std::nullopt;
    const auto& last = traj.samples.back();
    std::optional<Equilibrium> best;
    double best_d = 1e-6;
    for (const auto& eq : eqs) {
        const double d = eq.z_is_free
                             ? std::fabs(last.y - eq.y)
                             : std::hypot(last.y - eq.y, last.z - eq.z);
        if (d <= best_d) {
            best_d = d;
            best = eq;
        }
    }
    return best;
}

}  // namespace animfa
