#pragma once

#include <cstddef>
#include <vector>

#include "core/vec.hpp"

namespace incadapt {

/// Ring buffer of estimate samples at integrator grid points, spanning one
/// adaptation interval tau plus an interpolation margin.
///
/// Queries are exact at grid times and interpolated in between. Times before
/// the first sample ever appended return the initial setting. The adaptation
/// recursion propagates kinks at multiples of tau from the start-up interval,
/// so interpolation stencils are clamped to one tau-segment and never span a
/// segment boundary.
class EstimateHistory {
public:
    /// tau must be a positive integer multiple of the grid step h.
    EstimateHistory(Vec theta0, double tau, double h);

    /// Appends the grid sample at time t; t must advance by exactly h
    /// (the very first append fixes the grid origin).
    void append(double t, Vec value);

    /// One-sided reads at the recursion breakpoints (multiples of tau from
    /// the first sample): `right` is the stored, post-update value; `left`
    /// extrapolates the previous segment, which is what a stage evaluated at
    /// the right endpoint of a step must see.
    enum class Side { right, left };

    /// Estimate at time t: initial setting before the first sample, stored
    /// value at grid times, piecewise-polynomial interpolation off-grid.
    /// Throws HistoryError when t falls below the retained span (but after
    /// the first sample) or beyond the newest sample.
    Vec query(double t, Side side = Side::right) const;

    const Vec& initial() const { return theta0_; }
    double tau() const { return tau_; }
    double step() const { return h_; }
    int steps_per_tau() const { return m_; }
    std::size_t size() const { return count_; }
    bool empty() const { return count_ == 0; }
    double newest_time() const;
    double oldest_time() const;

private:
    const Vec& at(std::size_t logical) const;  // 0 = oldest retained
    Vec extrapolate_left(long long boundary) const;
    Vec lagrange(long long global0, double frac, long long lo_min, long long hi_max) const;
    Vec lagrange_at(double x, long long lo, long long hi) const;  // x in global grid units

    Vec theta0_;
    double tau_;
    double h_;
    int m_;                 // tau / h
    std::size_t capacity_;  // m + 4: one tau window plus the interpolation stencils
    std::vector<Vec> ring_;
    std::vector<double> times_;
    std::size_t head_ = 0;   // index of oldest retained
    std::size_t count_ = 0;
    double first_time_ = 0.0;
    long long appended_ = 0;  // total appends, for segment bookkeeping
};

}  // namespace incadapt
