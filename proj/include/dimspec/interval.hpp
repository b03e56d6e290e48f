#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "dimspec/errors.hpp"

namespace dimspec {

// Directed-rounding helpers. Instead of switching the FPU rounding mode we
// take one ulp step outward after every elementary operation; for log/exp,
// which libm only promises to faithful-rounding accuracy, we pad two ulps.
namespace rnd {

inline double down(double x) {
    return std::nextafter(x, -std::numeric_limits<double>::infinity());
}
inline double up(double x) {
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}

inline double add_down(double a, double b) { return down(a + b); }
inline double add_up(double a, double b) { return up(a + b); }
inline double sub_down(double a, double b) { return down(a - b); }
inline double sub_up(double a, double b) { return up(a - b); }
inline double mul_down(double a, double b) { return down(a * b); }
inline double mul_up(double a, double b) { return up(a * b); }
inline double div_down(double a, double b) { return down(a / b); }
inline double div_up(double a, double b) { return up(a / b); }

inline double log_down(double x) { return down(down(std::log(x))); }
inline double log_up(double x) { return up(up(std::log(x))); }
inline double exp_down(double x) { return down(down(std::exp(x))); }
inline double exp_up(double x) { return up(up(std::exp(x))); }

}  // namespace rnd

// Closed interval [lo, hi] with outward-rounded arithmetic. All enclosure
// claims made by the library reduce to endpoint computations through this
// type (or through the rnd:: helpers directly on hot paths).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double l, double h) : lo(l), hi(h) {
        if (!(l <= h)) throw InternalError("interval endpoints out of order");
    }

    static Interval point(double x) { return Interval(x, x); }
    static Interval hull(const Interval& a, const Interval& b) {
        return Interval(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
    }

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool intersects(const Interval& other) const {
        return lo <= other.hi && other.lo <= hi;
    }

    friend Interval operator+(const Interval& a, const Interval& b) {
        return Interval(rnd::add_down(a.lo, b.lo), rnd::add_up(a.hi, b.hi));
    }
    friend Interval operator-(const Interval& a, const Interval& b) {
        return Interval(rnd::sub_down(a.lo, b.hi), rnd::sub_up(a.hi, b.lo));
    }
    friend Interval operator*(const Interval& a, const Interval& b) {
        const double cands_lo[4] = {rnd::mul_down(a.lo, b.lo), rnd::mul_down(a.lo, b.hi),
                                    rnd::mul_down(a.hi, b.lo), rnd::mul_down(a.hi, b.hi)};
        const double cands_hi[4] = {rnd::mul_up(a.lo, b.lo), rnd::mul_up(a.lo, b.hi),
                                    rnd::mul_up(a.hi, b.lo), rnd::mul_up(a.hi, b.hi)};
        return Interval(*std::min_element(cands_lo, cands_lo + 4),
                        *std::max_element(cands_hi, cands_hi + 4));
    }
    // Division requires 0 outside the divisor.
    friend Interval operator/(const Interval& a, const Interval& b) {
        if (b.lo <= 0.0 && b.hi >= 0.0)
            throw InternalError("interval division by an interval containing 0");
        const double cands_lo[4] = {rnd::div_down(a.lo, b.lo), rnd::div_down(a.lo, b.hi),
                                    rnd::div_down(a.hi, b.lo), rnd::div_down(a.hi, b.hi)};
        const double cands_hi[4] = {rnd::div_up(a.lo, b.lo), rnd::div_up(a.lo, b.hi),
                                    rnd::div_up(a.hi, b.lo), rnd::div_up(a.hi, b.hi)};
        return Interval(*std::min_element(cands_lo, cands_lo + 4),
                        *std::max_element(cands_hi, cands_hi + 4));
    }
};

// log of a strictly positive interval.
inline Interval ilog(const Interval& x) {
    if (x.lo <= 0.0) throw InternalError("ilog of non-positive interval");
    return Interval(rnd::log_down(x.lo), rnd::log_up(x.hi));
}

inline Interval iexp(const Interval& x) {
    return Interval(rnd::exp_down(x.lo), rnd::exp_up(x.hi));
}

// x^t for x > 0 and scalar t, via exp(t log x).
inline Interval ipow(const Interval& x, double t) {
    if (t == 0.0) return Interval::point(1.0);
    return iexp(ilog(x) * Interval::point(t));
}

// |x|, assuming nothing about sign.
inline Interval iabs(const Interval& x) {
    if (x.lo >= 0.0) return x;
    if (x.hi <= 0.0) return Interval(-x.hi, -x.lo);
    return Interval(0.0, std::max(-x.lo, x.hi));
}

}  // namespace dimspec
