#include "core/history.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace incadapt {

namespace {
constexpr double kGridFuzz = 1e-6;  // fraction of h

int tau_multiple(double tau, double h) {
    if (!(tau > 0.0) || !(h > 0.0))
        throw ConfigError("estimate history requires tau > 0 and h > 0");
    const double ratio = tau / h;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-6 * std::max(1.0, ratio))
        throw ConfigError("tau must be a positive integer multiple of the step h (tau=" +
                          std::to_string(tau) + ", h=" + std::to_string(h) + ")");
    return static_cast<int>(rounded);
}
}  // namespace

EstimateHistory::EstimateHistory(Vec theta0, double tau, double h)
    : theta0_(std::move(theta0)),
      tau_(tau),
      h_(h),
      m_(tau_multiple(tau, h)),
      capacity_(static_cast<std::size_t>(m_) + 4),
      ring_(capacity_),
      times_(capacity_, 0.0) {}

double EstimateHistory::newest_time() const {
    return times_[(head_ + count_ - 1) % capacity_];
}

double EstimateHistory::oldest_time() const { return times_[head_]; }

const Vec& EstimateHistory::at(std::size_t logical) const {
    return ring_[(head_ + logical) % capacity_];
}

void EstimateHistory::append(double t, Vec value) {
    if (value.size() != theta0_.size())
        throw ConfigError("estimate sample has wrong dimension");
    if (count_ == 0) {
        first_time_ = t;
    } else {
        const double expected = newest_time() + h_;
        if (std::abs(t - expected) > kGridFuzz * h_)
            throw ConfigError("estimate history appends must advance by exactly one step");
    }
    if (count_ < capacity_) {
        const std::size_t slot = (head_ + count_) % capacity_;
        ring_[slot] = std::move(value);
        times_[slot] = t;
        ++count_;
    } else {
        ring_[head_] = std::move(value);
        times_[head_] = t;
        head_ = (head_ + 1) % capacity_;
    }
    ++appended_;
}

Vec EstimateHistory::query(double t, Side side) const {
    const double fuzz = kGridFuzz * h_;
    if (count_ == 0 || t < first_time_ - fuzz) return theta0_;
    if (side == Side::left && t <= first_time_ + fuzz) return theta0_;

    const double oldest = oldest_time();
    const double newest = newest_time();
    if (t < oldest - fuzz)
        throw HistoryError("history underflow: query at t=" + std::to_string(t) +
                           " is older than the retained span starting at " + std::to_string(oldest));
    if (t > newest + fuzz)
        throw HistoryError("history query at t=" + std::to_string(t) +
                           " is ahead of the newest sample at " + std::to_string(newest));

    const double r = (t - oldest) / h_;
    const auto i0 = static_cast<long long>(std::floor(r + fuzz));
    const double frac = r - static_cast<double>(i0);
    const auto last = static_cast<long long>(count_) - 1;
    if (std::abs(frac) <= fuzz || i0 >= last) {
        const auto idx = std::min(i0, last);
        const long long global_idx = appended_ - static_cast<long long>(count_) + idx;
        if (side == Side::left && global_idx % m_ == 0 && global_idx > 0)
            return extrapolate_left(global_idx);
        return at(static_cast<std::size_t>(idx));
    }

    // Global grid index of the bracketing sample, counted from the first
    // sample ever appended. The recursion restarts every m steps; the sample
    // at a segment's right boundary already belongs to the next smooth piece,
    // so the stencil stays inside [seg, seg + m - 1] and the last interval of
    // each segment is covered by extrapolation.
    const long long global0 = appended_ - static_cast<long long>(count_) +
                              static_cast<long long>(i0);
    const long long seg_lo = (global0 / m_) * m_;
    const long long seg_hi = seg_lo + m_ - 1;

    const long long base = appended_ - static_cast<long long>(count_);
    const long long lo_min = std::max(seg_lo, base);
    const long long hi_max = std::min(seg_hi, appended_ - 1);
    return lagrange(global0, frac, lo_min, hi_max);
}

Vec EstimateHistory::extrapolate_left(long long boundary) const {
    const long long base = appended_ - static_cast<long long>(count_);
    if (boundary - 1 < base)  // previous segment discarded; stored value is all we have
        return at(static_cast<std::size_t>(boundary - base));
    const long long hi = boundary - 1;
    const long long lo = std::max({boundary - m_, base, hi - 3});
    return lagrange_at(static_cast<double>(boundary), lo, hi);
}

Vec EstimateHistory::lagrange(long long global0, double frac, long long lo_min,
                              long long hi_max) const {
    long long lo = global0 - 1;
    long long hi = global0 + 2;
    if (lo < lo_min) lo = lo_min;
    if (hi > hi_max) hi = hi_max;
    // keep up to 4 points by widening the unclamped side; when the segment
    // ends at global0 this degrades to one-sided extrapolation, never to a
    // stencil that crosses the recursion restart
    if (hi - lo < 3) {
        lo = std::max(lo_min, hi - 3);
        hi = std::min(hi_max, lo + 3);
    }
    return lagrange_at(static_cast<double>(global0) + frac, lo, hi);
}

Vec EstimateHistory::lagrange_at(double x, long long lo, long long hi) const {
    const long long base = appended_ - static_cast<long long>(count_);
    Vec out(theta0_.size(), 0.0);
    for (long long j = lo; j <= hi; ++j) {
        double weight = 1.0;
        for (long long k = lo; k <= hi; ++k) {
            if (k == j) continue;
            weight *= (x - static_cast<double>(k)) / static_cast<double>(j - k);
        }
        const Vec& sample = at(static_cast<std::size_t>(j - base));
        for (std::size_t c = 0; c < out.size(); ++c) out[c] += weight * sample[c];
    }
    return out;
}

}  // namespace incadapt
