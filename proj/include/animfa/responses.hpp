#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace animfa {

struct NegativityError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct BothZeroError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline constexpr int kNonnegGridPoints = 1001;
inline constexpr double kNonnegTol = -1e-12;
inline constexpr int kDerivGridPoints = 101;
inline constexpr double kDerivFdStep = 1e-6;
inline constexpr double kDerivTol = 1e-6;

// Horner evaluation; coefficients in ascending degree.
inline double polyval(const std::vector<double>& coeffs, double y) {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * y + coeffs[i];
    return acc;
}

inline std::vector<double> polyder(const std::vector<double>& coeffs) {
    if (coeffs.size() <= 1) return {0.0};
    std::vector<double> d(coeffs.size() - 1);
    for (std::size_t i = 1; i < coeffs.size(); ++i)
        d[i - 1] = coeffs[i] * static_cast<double>(i);
    return d;
}

inline std::string poly_label(const std::vector<double>& coeffs) {
    std::string s = "poly[";
    char buf[32];
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%g", coeffs[i]);
        if (i) s += ',';
        s += buf;
    }
    s += ']';
    return s;
}

}  // namespace detail

/// One link-process response f(y): a non-negative function of the prevalence
/// on [0,1] together with its analytic derivative. Non-negativity is
/// certified by dense grid sampling at construction (1001 points, tolerance
/// -1e-12); the derivative is cross-checked against central differences
/// (h = 1e-6) on a coarser grid. Immutable after construction.
class FunctionalResponse {
public:
    FunctionalResponse(std::function<double(double)> eval,
                       std::function<double(double)> deriv,
                       std::string description)
        : eval_(std::move(eval)),
          deriv_(std::move(deriv)),
          description_(std::move(description)) {
        if (!eval_ || !deriv_)
            throw std::invalid_argument("functional response needs eval and deriv");
        check_nonnegative();
        check_derivative();
    }

    double eval(double y) const { return eval_(y); }
    double operator()(double y) const { return eval_(y); }
    double deriv(double y) const { return deriv_(y); }
    const std::string& description() const { return description_; }

    /// Largest |f| seen on the construction grid; 0 means identically zero.
    double grid_max_abs() const { return grid_max_abs_; }

private:
    void check_nonnegative() {
        const int n = detail::kNonnegGridPoints;
        for (int i = 0; i < n; ++i) {
            const double y = static_cast<double>(i) / (n - 1);
            const double v = eval_(y);
            if (v < detail::kNonnegTol)
                throw NegativityError("response '" + description_ +
                                      "' is negative on [0,1] (f(" +
                                      std::to_string(y) + ") = " + std::to_string(v) + ")");
            grid_max_abs_ = std::max(grid_max_abs_, std::fabs(v));
        }
    }

    void check_derivative() {
        const int n = detail::kDerivGridPoints;
        const double h = detail::kDerivFdStep;
        for (int i = 0; i < n; ++i) {
            const double y = static_cast<double>(i) / (n - 1);
            const double fd = (eval_(y + h) - eval_(y - h)) / (2.0 * h);
            if (std::fabs(fd - deriv_(y)) > detail::kDerivTol)
                throw std::invalid_argument("response '" + description_ +
                                            "': derivative disagrees with central "
                                            "differences near y = " + std::to_string(y));
        }
    }

    std::function<double(double)> eval_;
    std::function<double(double)> deriv_;
    std::string description_;
    double grid_max_abs_ = 0.0;
};

/// Link-breaking plus link-creation responses. At least one of the two must
/// be non-trivial on [0,1]; a pair that is identically zero freezes the link
/// density and is rejected.
struct FunctionalResponsePair {
    FunctionalResponse fbr;  // link-breaking
    FunctionalResponse fcr;  // link-creation

    FunctionalResponsePair(FunctionalResponse fbr_, FunctionalResponse fcr_)
        : fbr(std::move(fbr_)), fcr(std::move(fcr_)) {
        if (fbr.grid_max_abs() <= 1e-12 && fcr.grid_max_abs() <= 1e-12)
            throw BothZeroError("fbr and fcr are both identically zero on [0,1]");
    }
};

/// Response from polynomial coefficients (ascending degree). The derivative
/// is the exact coefficient-wise one.
inline FunctionalResponse polynomial_response(std::vector<double> coeffs,
                                              std::string description = "") {
    if (coeffs.empty())
        throw std::invalid_argument("empty polynomial coefficient list");
    if (description.empty()) description = detail::poly_label(coeffs);
    auto dcoeffs = detail::polyder(coeffs);
    return FunctionalResponse(
        [c = std::move(coeffs)](double y) { return detail::polyval(c, y); },
        [d = std::move(dcoeffs)](double y) { return detail::polyval(d, y); },
        std::move(description));
}

inline FunctionalResponsePair from_polynomial(const std::vector<double>& fbr_coeffs,
                                              const std::vector<double>& fcr_coeffs) {
    return FunctionalResponsePair(polynomial_response(fbr_coeffs),
                                  polynomial_response(fcr_coeffs));
}

enum class BuiltinModel { rlad, linear_break, asis, aid };

inline std::string_view to_string(BuiltinModel m) {
    switch (m) {
        case BuiltinModel::rlad: return "rlad";
        case BuiltinModel::linear_break: return "linear_break";
        case BuiltinModel::asis: return "asis";
        case BuiltinModel::aid: return "aid";
    }
    return "?";
}

inline std::optional<BuiltinModel> builtin_from_string(std::string_view name) {
    if (name == "rlad") return BuiltinModel::rlad;
    if (name == "linear_break") return BuiltinModel::linear_break;
    if (name == "asis") return BuiltinModel::asis;
    if (name == "aid") return BuiltinModel::aid;
    return std::nullopt;
}

/// The four built-in response pairs:
///   rlad          fbr = 1,        fcr = 1          (links ignore the disease)
///   linear_break  fbr = y,        fcr = 1
///   asis          fbr = 2y(1-y),  fcr = (1-y)^2
///   aid           fbr = (1-y)^2,  fcr = 2y(1-y)
inline FunctionalResponsePair builtin(BuiltinModel m) {
    switch (m) {
        case BuiltinModel::rlad:
            return {polynomial_response({1.0}, "1"), polynomial_response({1.0}, "1")};
        case BuiltinModel::linear_break:
            return {polynomial_response({0.0, 1.0}, "y"), polynomial_response({1.0}, "1")};
        case BuiltinModel::asis:
            return {polynomial_response({0.0, 2.0, -2.0}, "2y(1-y)"),
                    polynomial_response({1.0, -2.0, 1.0}, "(1-y)^2")};
        case BuiltinModel::aid:
            return {polynomial_response({1.0, -2.0, 1.0}, "(1-y)^2"),
                    polynomial_response({0.0, 2.0, -2.0}, "2y(1-y)")};
    }
    throw std::invalid_argument("unknown builtin model");
}

}  // namespace animfa
