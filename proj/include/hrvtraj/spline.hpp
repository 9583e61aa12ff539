#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hrvtraj {

inline constexpr int kQuinticDegree = 5;

/// Positive time spacings between consecutive interpolation points.
class IntervalVector {
public:
    IntervalVector() = default;
    /// Throws std::invalid_argument if any spacing is not strictly positive.
    explicit IntervalVector(std::vector<double> h);

    std::size_t size() const noexcept { return h_.size(); }
    double operator[](std::size_t i) const { return h_[i]; }
    std::span<const double> values() const noexcept { return h_; }
    double total() const noexcept;

    bool operator==(const IntervalVector&) const = default;

private:
    std::vector<double> h_;
};

/// Non-decreasing knot sequence with its spline degree.
class KnotVector {
public:
    KnotVector() = default;
    /// Throws std::invalid_argument if the knots decrease or are too few for
    /// the degree.
    KnotVector(std::vector<double> knots, int degree);

    /// Clamped knots: degree+1 zeros, the running sums of h, and the final
    /// sum repeated degree+1 times. Length is h.size() + 1 + 2*degree.
    static KnotVector clamped(const IntervalVector& h, int degree = kQuinticDegree);

    int degree() const noexcept { return degree_; }
    std::size_t size() const noexcept { return knots_.size(); }
    double operator[](std::size_t i) const { return knots_[i]; }
    std::span<const double> values() const noexcept { return knots_; }
    double front() const { return knots_.front(); }
    double back() const { return knots_.back(); }

    /// Number of basis functions (control points) this knot vector carries.
    std::size_t basis_count() const noexcept { return knots_.size() - degree_ - 1; }

    /// Knot vector of the d-th derivative curve (d knots dropped per end,
    /// degree lowered by d).
    KnotVector derivative(int d) const;

    /// Span index i with knots[i] <= t < knots[i+1], restricted to
    /// [degree, basis_count()-1]. At t == back() the last non-empty span is
    /// returned.
    std::size_t find_span(double t) const;

private:
    std::vector<double> knots_;
    int degree_ = 0;
};

/// N_{k,p}(t) for the zero-based basis index k using the triangular Cox-de
/// Boor table; 0/0 terms count as 0. The half-open span convention is closed
/// at the last knot. Throws std::invalid_argument for k or t out of range.
double basis(std::size_t k, int degree, double t, const KnotVector& knots);

/// All degree+1 non-zero basis values at t, for basis indices
/// span-degree .. span.
std::vector<double> nonzero_basis(std::size_t span, double t, const KnotVector& knots);

/// Control points of the d-th derivative curve. Returns cp.size() - d values.
/// Zero knot differences contribute a zero point.
std::vector<double> derivative_control_points(std::span<const double> cp,
                                              const KnotVector& knots, int d);

/// Linear map from position control points to d-th derivative control
/// points, row-major, (n-d) x n.
std::vector<std::vector<double>> derivative_operator(const KnotVector& knots, int d);

/// Scalar B-spline curve.
class SplineCurve {
public:
    SplineCurve() = default;
    SplineCurve(KnotVector knots, std::vector<double> control_points);

    int degree() const noexcept { return knots_.degree(); }
    const KnotVector& knots() const noexcept { return knots_; }
    std::span<const double> control_points() const noexcept { return cp_; }
    double start() const { return knots_.front(); }
    double end() const { return knots_.back(); }

    /// Throws std::invalid_argument outside [start(), end()].
    double evaluate(double t) const;
    double evaluate_derivative(double t, int d) const;

    /// The d-th derivative as a spline of degree p-d.
    SplineCurve derivative(int d) const;

private:
    KnotVector knots_;
    std::vector<double> cp_;
};

/// One time sample of a multi-joint trajectory.
struct TrajectorySample {
    double t = 0.0;
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> acceleration;
    std::vector<double> jerk;
};

/// Samples q, q', q'', q''' of every curve at t = i/rate, always ending with
/// a row at the common end time. Curves must share their time domain.
std::vector<TrajectorySample> sample_trajectory(std::span<const SplineCurve> curves,
                                                double rate_hz);

}  // namespace hrvtraj
