#include "hrvtraj/spline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hrvtraj {

IntervalVector::IntervalVector(std::vector<double> h) : h_(std::move(h)) {
    for (std::size_t i = 0; i < h_.size(); ++i) {
        if (!(h_[i] > 0.0) || !std::isfinite(h_[i])) {
            throw std::invalid_argument("interval h[" + std::to_string(i) +
                                        "] must be positive and finite, got " +
                                        std::to_string(h_[i]));
        }
    }
}

double IntervalVector::total() const noexcept {
    return std::accumulate(h_.begin(), h_.end(), 0.0);
}

KnotVector::KnotVector(std::vector<double> knots, int degree)
    : knots_(std::move(knots)), degree_(degree) {
    if (degree_ < 0) throw std::invalid_argument("negative spline degree");
    if (knots_.size() < static_cast<std::size_t>(2 * degree_ + 2)) {
        throw std::invalid_argument("knot vector too short for degree " +
                                    std::to_string(degree_));
    }
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
        if (!(knots_[i] <= knots_[i + 1])) {
            throw std::invalid_argument("knot vector decreases at index " + std::to_string(i));
        }
    }
}

KnotVector KnotVector::clamped(const IntervalVector& h, int degree) {
    std::vector<double> knots;
    knots.reserve(h.size() + 1 + 2 * static_cast<std::size_t>(degree));
    knots.assign(static_cast<std::size_t>(degree) + 1, 0.0);
    double acc = 0.0;
    for (std::size_t l = 0; l < h.size(); ++l) {
        acc += h[l];
        if (l + 1 < h.size()) knots.push_back(acc);
    }
    // The terminal knot is the exact sum, copied rather than recomputed.
    double tf = h.total();
    knots.insert(knots.end(), static_cast<std::size_t>(degree) + 1, tf);
    return KnotVector(std::move(knots), degree);
}

KnotVector KnotVector::derivative(int d) const {
    if (d < 0 || d > degree_) throw std::invalid_argument("derivative order out of range");
    std::vector<double> k(knots_.begin() + d, knots_.end() - d);
    return KnotVector(std::move(k), degree_ - d);
}

std::size_t KnotVector::find_span(double t) const {
    const std::size_t n = basis_count();
    const std::size_t lo = static_cast<std::size_t>(degree_);
    if (t >= knots_[n]) {
        // Closure at the domain end: last non-empty span.
        std::size_t i = n - 1;
        while (i > lo && knots_[i] >= knots_[i + 1]) --i;
        return i;
    }
    if (t <= knots_[lo]) {
        std::size_t i = lo;
        while (i + 1 < n && knots_[i] >= knots_[i + 1]) ++i;
        return i;
    }
    auto it = std::upper_bound(knots_.begin() + lo, knots_.begin() + n + 1, t);
    return static_cast<std::size_t>(it - knots_.begin()) - 1;
}

double basis(std::size_t k, int degree, double t, const KnotVector& knots) {
    if (degree < 0) {
        throw std::invalid_argument("negative basis degree");
    }
    const std::size_t m = knots.size() - 1;
    const auto p = static_cast<std::size_t>(degree);
    if (k + p + 1 > m) {
        throw std::invalid_argument("basis index " + std::to_string(k) + " out of range");
    }
    if (t < knots.front() || t > knots.back() || std::isnan(t)) {
        throw std::invalid_argument("basis evaluated outside the knot range");
    }

    // Index of the zeroth-degree span holding t, closed at the last knot.
    std::size_t span;
    if (t >= knots.back()) {
        span = m - 1;
        while (span > 0 && knots[span] >= knots[span + 1]) --span;
    } else {
        auto v = knots.values();
        span = static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), t) - v.begin()) - 1;
    }
    if (span < k || span > k + p) return 0.0;

    std::vector<double> n(p + 1, 0.0);
    n[span - k] = 1.0;
    for (std::size_t q = 1; q <= p; ++q) {
        for (std::size_t j = 0; j + q <= p; ++j) {
            const std::size_t i = k + j;
            double value = 0.0;
            const double d1 = knots[i + q] - knots[i];
            if (d1 > 0.0 && n[j] != 0.0) value += (t - knots[i]) / d1 * n[j];
            const double d2 = knots[i + q + 1] - knots[i + 1];
            if (d2 > 0.0 && n[j + 1] != 0.0) value += (knots[i + q + 1] - t) / d2 * n[j + 1];
            n[j] = value;
        }
    }
    return n[0];
}

std::vector<double> nonzero_basis(std::size_t span, double t, const KnotVector& knots) {
    const auto p = static_cast<std::size_t>(knots.degree());
    std::vector<double> out(p + 1, 0.0), left(p + 1, 0.0), right(p + 1, 0.0);
    out[0] = 1.0;
    for (std::size_t j = 1; j <= p; ++j) {
        left[j] = t - knots[span + 1 - j];
        right[j] = knots[span + j] - t;
        double saved = 0.0;
        for (std::size_t r = 0; r < j; ++r) {
            const double denom = right[r + 1] + left[j - r];
            const double tmp = denom != 0.0 ? out[r] / denom : 0.0;
            out[r] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        out[j] = saved;
    }
    return out;
}

std::vector<double> derivative_control_points(std::span<const double> cp,
                                              const KnotVector& knots, int d) {
    if (d < 0 || d > knots.degree()) {
        throw std::invalid_argument("derivative order " + std::to_string(d) +
                                    " exceeds spline degree " + std::to_string(knots.degree()));
    }
    if (cp.size() != knots.basis_count()) {
        throw std::invalid_argument("control point count does not match knot vector");
    }
    std::vector<double> cur(cp.begin(), cp.end());
    for (int r = 1; r <= d; ++r) {
        const int q = knots.degree() - r + 1;  // degree before this step
        std::vector<double> next(cur.size() - 1);
        for (std::size_t k = 0; k < next.size(); ++k) {
            // Knots of the current curve are the original ones shifted by r-1.
            const double span = knots[k + static_cast<std::size_t>(q + r)] -
                                knots[k + static_cast<std::size_t>(r)];
            next[k] = span > 0.0 ? q * (cur[k + 1] - cur[k]) / span : 0.0;
        }
        cur = std::move(next);
    }
    return cur;
}

std::vector<std::vector<double>> derivative_operator(const KnotVector& knots, int d) {
    const std::size_t n = knots.basis_count();
    std::vector<std::vector<double>> op(n - static_cast<std::size_t>(d), std::vector<double>(n, 0.0));
    std::vector<double> unit(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        unit[c] = 1.0;
        auto col = derivative_control_points(unit, knots, d);
        for (std::size_t r = 0; r < col.size(); ++r) op[r][c] = col[r];
        unit[c] = 0.0;
    }
    return op;
}

SplineCurve::SplineCurve(KnotVector knots, std::vector<double> control_points)
    : knots_(std::move(knots)), cp_(std::move(control_points)) {
    if (cp_.size() != knots_.basis_count()) {
        throw std::invalid_argument("expected " + std::to_string(knots_.basis_count()) +
                                    " control points, got " + std::to_string(cp_.size()));
    }
}

double SplineCurve::evaluate(double t) const {
    if (!(t >= start() && t <= end())) {
        throw std::invalid_argument("t=" + std::to_string(t) + " outside spline domain [" +
                                    std::to_string(start()) + ", " + std::to_string(end()) + "]");
    }
    const auto p = static_cast<std::size_t>(degree());
    const std::size_t span = knots_.find_span(t);
    // de Boor on the p+1 active control points.
    std::vector<double> d(cp_.begin() + static_cast<std::ptrdiff_t>(span - p),
                          cp_.begin() + static_cast<std::ptrdiff_t>(span + 1));
    for (std::size_t r = 1; r <= p; ++r) {
        for (std::size_t j = p; j >= r; --j) {
            const std::size_t i = span - p + j;
            const double denom = knots_[i + p + 1 - r] - knots_[i];
            const double alpha = denom > 0.0 ? (t - knots_[i]) / denom : 0.0;
            d[j] = (1.0 - alpha) * d[j - 1] + alpha * d[j];
        }
    }
    return d[p];
}

SplineCurve SplineCurve::derivative(int d) const {
    if (d == 0) return *this;
    return SplineCurve(knots_.derivative(d), derivative_control_points(cp_, knots_, d));
}

double SplineCurve::evaluate_derivative(double t, int d) const {
    return derivative(d).evaluate(t);
}

std::vector<TrajectorySample> sample_trajectory(std::span<const SplineCurve> curves,
                                                double rate_hz) {
    if (!(rate_hz > 0.0)) throw std::invalid_argument("sampling rate must be positive");
    if (curves.empty()) return {};
    const double tf = curves.front().end();
    std::vector<SplineCurve> vel, acc, jerk;
    for (const auto& c : curves) {
        if (c.end() != tf || c.start() != curves.front().start()) {
            throw std::invalid_argument("curves do not share one time domain");
        }
        vel.push_back(c.derivative(1));
        acc.push_back(c.derivative(2));
        jerk.push_back(c.derivative(3));
    }

    std::vector<double> times;
    const double t0 = curves.front().start();
    const auto steps = static_cast<std::size_t>(std::floor((tf - t0) * rate_hz + 1e-9));
    for (std::size_t i = 0; i <= steps; ++i) {
        times.push_back(std::min(t0 + static_cast<double>(i) / rate_hz, tf));
    }
    if (times.back() < tf) {
        if (tf - times.back() < 1e-9 / rate_hz) times.back() = tf;
        else times.push_back(tf);
    }

    std::vector<TrajectorySample> rows;
    rows.reserve(times.size());
    for (double t : times) {
        TrajectorySample s;
        s.t = t;
        for (std::size_t j = 0; j < curves.size(); ++j) {
            s.position.push_back(curves[j].evaluate(t));
            s.velocity.push_back(vel[j].evaluate(t));
            s.acceleration.push_back(acc[j].evaluate(t));
            s.jerk.push_back(jerk[j].evaluate(t));
        }
        rows.push_back(std::move(s));
    }
    return rows;
}

}  // namespace hrvtraj
