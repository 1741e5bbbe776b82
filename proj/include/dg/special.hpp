#pragma once

#include <cmath>

namespace dg {

/// log(cosh(x)), overflow-free.
inline double log_cosh(double x) {
    const double ax = std::abs(x);
    return ax + std::log1p(std::exp(-2.0 * ax)) - 0.6931471805599453094;
}

/// cosh(x)/cosh(y), overflow-free for any arguments.
inline double cosh_ratio(double x, double y) {
    return std::exp(log_cosh(x) - log_cosh(y));
}

inline double sech(double x) {
    return 1.0 / std::cosh(x);
}

/// cosh(x) sech(y) * (tanh(x) - tanh(y)) == sinh(x - y) / cosh(y)^2,
/// evaluated without catastrophic cancellation or overflow.
inline double tanh_gap_core(double x, double y) {
    const double s = x - y;
    if (s == 0.0) return 0.0;
    const double as = std::abs(s);
    const double mag = 0.5 * (1.0 - std::exp(-2.0 * as)) *
                       std::exp(as - 2.0 * log_cosh(y));
    return s > 0.0 ? mag : -mag;
}

}  // namespace dg
