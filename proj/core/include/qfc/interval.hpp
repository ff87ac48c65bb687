#ifndef QFC_INTERVAL_HPP
#define QFC_INTERVAL_HPP

#include <cmath>
#include <string>
#include <vector>

#include "qfc/errors.hpp"
#include "qfc/qform.hpp"

namespace qfc {

/// Closed interval [a, b]. Membership is closed on both ends; boundary ties at
/// float-exact differences are included (measure-zero, cannot move the limit).
struct Interval {
    double a;
    double b;

    Interval(double a_, double b_) : a(a_), b(b_) {
        if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
            throw DomainError("interval requires finite a < b");
    }

    bool contains(double x) const { return a <= x && x <= b; }
    double length() const { return b - a; }
    /// I^eps = [a - eps, b + eps]; eps may be negative (shrink).
    Interval widen(double eps) const { return Interval(a - eps, b + eps); }
    bool shrink_is_empty(double eps) const { return !(a + eps < b - eps); }
    Interval negate() const { return Interval(-b, -a); }
    Interval scaled(double c) const { return c > 0 ? Interval(c * a, c * b) : Interval(c * b, c * a); }
};

enum class Ball { Euclidean, Max };

inline const char* ball_name(Ball b) { return b == Ball::Euclidean ? "euclidean" : "max"; }

/// The tuple (Q, n, I_1..I_{n-1}, ball norm) defining the correlation region:
/// n-tuples of d-vectors with consecutive Q-value differences in the intervals
/// and joint norm at most T.
struct CorrelationSpec {
    QuadraticForm form;
    int n;
    std::vector<Interval> intervals;
    Ball ball;

    CorrelationSpec(QuadraticForm f, int n_, std::vector<Interval> ivals, Ball b,
                    bool experiment_mode = false)
        : form(std::move(f)), n(n_), intervals(std::move(ivals)), ball(b) {
        if (n < 2 || n > form.dim())
            throw DomainError("need 2 <= n <= d");
        if (experiment_mode && n < 3)
            throw DomainError("experiment runs require n >= 3");
        if (static_cast<int>(intervals.size()) != n - 1)
            throw DomainError("need exactly n-1 intervals");
    }

    int dim() const { return form.dim(); }
    std::string fingerprint() const;
};

}  // namespace qfc

#endif
