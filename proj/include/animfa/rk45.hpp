#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

namespace animfa {

/// Embedded Dormand-Prince 5(4) stepper with PI (Lund-stabilized) step-size
/// control, first-same-as-last stage reuse, and the quartic continuous
/// extension for dense output. Coefficients are the classical published
/// values. The RHS is any callable
///   std::array<double,N> rhs(double t, const std::array<double,N>& y).
template <std::size_t N, class RHS>
class Dopri5 {
public:
    using Vec = std::array<double, N>;

    struct Options {
        double rtol = 1e-8;
        double atol = 1e-10;
        double max_step = 0.0;  // 0 = uncapped
    };

    enum class Outcome { advanced, reached_target, underflow };

    Dopri5(RHS rhs, Options opt) : rhs_(std::move(rhs)), opt_(opt) {
        if (!(opt_.rtol > 0.0) || !(opt_.atol > 0.0))
            throw std::invalid_argument("tolerances must be positive");
    }

    void start(double t0, const Vec& y0) {
        t_ = t_prev_ = t0;
        y_ = y_prev_ = y0;
        k1_ = rhs_(t0, y0);
        ++evals_;
        h_ = 0.0;
        facold_ = 1e-4;
        rejected_last_ = false;
    }

    /// Take one accepted step, never past t_target (assumed > current t).
    /// Steps below 1e-14, or too small to advance t at all, report underflow.
    Outcome advance(double t_target) {
        if (h_ == 0.0) h_ = initial_step(t_target);
        for (;;) {
            double h = h_;
            if (!(h >= kMinStep) || t_ + h == t_) return Outcome::underflow;
            bool last = false;
            if (t_ + 1.01 * h >= t_target) {
                h = t_target - t_;
                last = true;
            }

            Vec k2, k3, k4, k5, k6, k7, u, y_new;
            for (std::size_t i = 0; i < N; ++i) u[i] = y_[i] + h * a21 * k1_[i];
            k2 = rhs_(t_ + c2 * h, u);
            for (std::size_t i = 0; i < N; ++i)
                u[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2[i]);
            k3 = rhs_(t_ + c3 * h, u);
            for (std::size_t i = 0; i < N; ++i)
                u[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2[i] + a43 * k3[i]);
            k4 = rhs_(t_ + c4 * h, u);
            for (std::size_t i = 0; i < N; ++i)
                u[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            k5 = rhs_(t_ + c5 * h, u);
            for (std::size_t i = 0; i < N; ++i)
                u[i] = y_[i] +
                       h * (a61 * k1_[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            k6 = rhs_(t_ + h, u);
            for (std::size_t i = 0; i < N; ++i)
                y_new[i] = y_[i] +
                           h * (a71 * k1_[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                                a76 * k6[i]);
            k7 = rhs_(t_ + h, y_new);
            evals_ += 6;

            double err = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double ee =
                    h * (e1 * k1_[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                         e7 * k7[i]);
                const double sk =
                    opt_.atol + opt_.rtol * std::max(std::fabs(y_[i]), std::fabs(y_new[i]));
                const double q = ee / sk;
                err += q * q;
            }
            err = std::sqrt(err / static_cast<double>(N));

            const double fac11 = std::pow(err, 0.2 - kBeta * 0.75);
            if (err <= 1.0) {
                // Lund stabilization against the previous accepted error
                double fac = fac11 / std::pow(facold_, kBeta);
                fac = std::max(1.0 / kFacMax, std::min(1.0 / kFacMin, fac / kSafe));
                double h_new = h / fac;
                facold_ = std::max(err, 1e-4);
                if (rejected_last_) h_new = std::min(h_new, h);
                if (opt_.max_step > 0.0) h_new = std::min(h_new, opt_.max_step);

                // continuous extension coefficients over [t, t+h]
                for (std::size_t i = 0; i < N; ++i) {
                    const double ydiff = y_new[i] - y_[i];
                    const double bspl = h * k1_[i] - ydiff;
                    r1_[i] = y_[i];
                    r2_[i] = ydiff;
                    r3_[i] = bspl;
                    r4_[i] = ydiff - h * k7[i] - bspl;
                    r5_[i] = h * (d1 * k1_[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                  d6 * k6[i] + d7 * k7[i]);
                }
                t_prev_ = t_;
                y_prev_ = y_;
                t_ = last ? t_target : t_ + h;
                y_ = y_new;
                k1_ = k7;  // FSAL
                h_ = h_new;
                rejected_last_ = false;
                ++accepted_;
                return last ? Outcome::reached_target : Outcome::advanced;
            }
            h_ = h / std::min(1.0 / kFacMin, fac11 / kSafe);
            rejected_last_ = true;
            ++rejected_;
        }
    }

    double t() const { return t_; }
    double t_prev() const { return t_prev_; }
    const Vec& state() const { return y_; }
    const Vec& state_prev() const { return y_prev_; }
    /// f at the current point (FSAL stage; stale by the clamp width after
    /// override_state, which is below the error-control resolution).
    const Vec& deriv() const { return k1_; }

    /// Dense evaluation on the last accepted step, t in [t_prev, t].
    Vec dense(double t) const {
        const double th = (t - t_prev_) / (t_ - t_prev_);
        const double th1 = 1.0 - th;
        Vec out;
        for (std::size_t i = 0; i < N; ++i)
            out[i] = r1_[i] + th * (r2_[i] + th1 * (r3_[i] + th * (r4_[i] + th1 * r5_[i])));
        return out;
    }

    /// Replace the current state (boundary clamping hook).
    void override_state(const Vec& y) { y_ = y; }

    long accepted_steps() const { return accepted_; }
    long rejected_steps() const { return rejected_; }
    long rhs_evaluations() const { return evals_; }

private:
    double initial_step(double t_target) {
        const double span = t_target - t_;
        double h_max = span;
        if (opt_.max_step > 0.0) h_max = std::min(h_max, opt_.max_step);

        double dnf = 0.0, dny = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk = opt_.atol + opt_.rtol * std::fabs(y_[i]);
            double q = k1_[i] / sk;
            dnf += q * q;
            q = y_[i] / sk;
            dny += q * q;
        }
        double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
        h = std::min(h, h_max);

        Vec u;
        for (std::size_t i = 0; i < N; ++i) u[i] = y_[i] + h * k1_[i];
        const Vec k2 = rhs_(t_ + h, u);
        ++evals_;
        double der2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk = opt_.atol + opt_.rtol * std::fabs(y_[i]);
            const double q = (k2[i] - k1_[i]) / sk;
            der2 += q * q;
        }
        der2 = std::sqrt(der2) / h;

        const double der12 = std::max(der2, std::sqrt(dnf));
        const double h1 =
            der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
        return std::min(std::min(100.0 * h, h1), h_max);
    }

    static constexpr double kSafe = 0.9;
    static constexpr double kFacMin = 0.2;
    static constexpr double kFacMax = 10.0;
    static constexpr double kBeta = 0.04;
    static constexpr double kMinStep = 1e-14;

    static constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9.0;
    static constexpr double a21 = 0.2;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                            a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    static constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                            a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    RHS rhs_;
    Options opt_;
    double t_ = 0.0, t_prev_ = 0.0;
    Vec y_{}, y_prev_{}, k1_{};
    Vec r1_{}, r2_{}, r3_{}, r4_{}, r5_{};
    double h_ = 0.0;
    double facold_ = 1e-4;
    bool rejected_last_ = false;
    long accepted_ = 0, rejected_ = 0, evals_ = 0;
};

}  // namespace animfa
