#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace incadapt {

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2_sq(std::span<const double> a) { return dot(a, a); }

inline double norm2(std::span<const double> a) { return std::sqrt(norm2_sq(a)); }

inline double norm_inf(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

/// y = a + s*b, elementwise.
inline Vec axpy(const Vec& a, double s, const Vec& b) {
    Vec y(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) y[i] = a[i] + s * b[i];
    return y;
}

inline Vec scaled(const Vec& a, double s) {
    Vec y(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) y[i] = s * a[i];
    return y;
}

inline bool all_finite(std::span<const double> a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

inline int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

}  // namespace incadapt
