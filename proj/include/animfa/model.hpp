#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "animfa/responses.hpp"

namespace animfa {

/// Dimensional process rates (1/time). All strictly positive.
struct RawRates {
    double beta;   // infection
    double delta;  // curing
    double zeta;   // link-breaking
    double xi;     // link-creation

    RawRates(double beta_, double delta_, double zeta_, double xi_)
        : beta(beta_), delta(delta_), zeta(zeta_), xi(xi_) {
        if (!(beta > 0.0 && delta > 0.0 && zeta > 0.0 && xi > 0.0))
            throw std::invalid_argument("all raw rates must be strictly positive");
    }
};

/// Nondimensional parameters after rescaling time by the curing rate.
/// omega = zeta/xi is stored redundantly because every closed form uses it;
/// consistency is enforced to 1e-12.
struct ModelParams {
    double tau;    // effective infection rate beta/delta
    double omega;  // effective link-breaking rate zeta/xi
    double zeta;   // scaled link-breaking rate
    double xi;     // scaled link-creation rate

    ModelParams(double tau_, double zeta_, double xi_)
        : ModelParams(tau_, zeta_ / xi_, zeta_, xi_) {}

    ModelParams(double tau_, double omega_, double zeta_, double xi_)
        : tau(tau_), omega(omega_), zeta(zeta_), xi(xi_) {
        if (!(tau > 0.0 && zeta > 0.0 && xi > 0.0))
            throw std::invalid_argument("tau, zeta, xi must be strictly positive");
        if (std::fabs(omega - zeta / xi) > 1e-12 * std::max(1.0, std::fabs(omega)))
            throw std::invalid_argument("omega inconsistent with zeta/xi");
    }

    /// Params from (tau, omega) alone, realized as zeta = omega, xi = 1.
    static ModelParams from_omega(double tau_, double omega_) {
        return ModelParams(tau_, omega_, omega_, 1.0);
    }
};

inline ModelParams nondimensionalize(const RawRates& raw) {
    return ModelParams(raw.beta / raw.delta, raw.zeta / raw.delta, raw.xi / raw.delta);
}

/// A point of the feasible square: prevalence y and link density z, both in
/// [0,1]. Inputs within 1e-12 of the square are clamped to the boundary
/// (integrators produce boundary-grazing values); anything farther outside is
/// rejected.
class State {
public:
    State(double y, double z) : y_(clamp01(y, "y")), z_(clamp01(z, "z")) {}

    double y() const { return y_; }
    double z() const { return z_; }

private:
    static double clamp01(double v, const char* name) {
        if (v < 0.0) {
            if (v < -1e-12)
                throw std::domain_error(std::string(name) + " = " + std::to_string(v) +
                                        " outside [0,1]");
            return 0.0;
        }
        if (v > 1.0) {
            if (v > 1.0 + 1e-12)
                throw std::domain_error(std::string(name) + " = " + std::to_string(v) +
                                        " outside [0,1]");
            return 1.0;
        }
        return v;
    }

    double y_, z_;
};

/// Right-hand side of the planar prevalence/link-density system:
///   dy/dt = -y + tau y (1-y) z
///   dz/dt = -zeta z fbr(y) + xi (1-z) fcr(y)
/// Pure function of its inputs; repeated calls are bit-identical.
inline std::array<double, 2> vector_field(const ModelParams& p,
                                          const FunctionalResponsePair& fr,
                                          double y, double z) {
    return {-y + p.tau * y * (1.0 - y) * z,
            -p.zeta * z * fr.fbr(y) + p.xi * (1.0 - z) * fr.fcr(y)};
}

inline std::array<double, 2> vector_field(const ModelParams& p,
                                          const FunctionalResponsePair& fr,
                                          const State& s) {
    return vector_field(p, fr, s.y(), s.z());
}

}  // namespace animfa
