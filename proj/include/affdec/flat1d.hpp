#pragma once

#include "affdec/poly.hpp"

#include <vector>

namespace affdec {

struct Interval {
    double a = 0, b = 0;
    /// Set on intervals produced by merging; they are no longer δ-flat.
    bool stop = false;
    double defect = 0;

    double length() const { return b - a; }
};

struct IntervalPartition {
    double delta = 0;
    std::vector<Interval> intervals;
    int bisections = 0;
    int merges = 0;
};

/// Certified upper bound of sup_{x,y∈[a,b]} |P(x) − P(y) − P'(y)(x − y)|.
double flatness_defect(const Poly1& p, double a, double b, double tol = 0);

/// Recursive bisection of [lo,hi] until every interval has defect ≤ δ.
/// Requires ‖P‖ ≤ 1; δ ≥ 1 yields the single interval.
IntervalPartition flat_partition(const Poly1& p, double delta, double lo = -2.0, double hi = 2.0);

/// Greedy left-to-right merge so that every interval has length ≥ w_min.
IntervalPartition merge_to_min_width(const IntervalPartition& part, double w_min);

}  // namespace affdec
