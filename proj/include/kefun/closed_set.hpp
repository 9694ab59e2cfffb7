#pragma once

#include <vector>

#include "kefun/ext_real.hpp"

namespace kefun {

/// Interval of the real line with independent open/closed ends.
struct Interval {
    ExtReal lo = ExtReal::neg_inf();
    ExtReal hi = ExtReal::pos_inf();
    bool lo_closed = false;
    bool hi_closed = false;

    static Interval closed(ExtReal a, ExtReal b) { return {a, b, true, true}; }
    static Interval open(ExtReal a, ExtReal b) { return {a, b, false, false}; }
    /// (a, b]
    static Interval left_open(ExtReal a, ExtReal b) { return {a, b, false, true}; }
    /// [a, b)
    static Interval right_open(ExtReal a, ExtReal b) { return {a, b, true, false}; }
    static Interval whole() { return {}; }

    [[nodiscard]] bool contains(double x) const;
};

/// Closed segment [lo, hi]; a point when lo == hi.
struct Segment {
    ExtReal lo;
    ExtReal hi;
    [[nodiscard]] bool is_point() const { return lo == hi; }
    friend bool operator==(const Segment&, const Segment&) = default;
};

/// Finite union of closed segments, kept sorted and disjoint.
class ClosedSet {
public:
    ClosedSet() = default;

    static ClosedSet point(double x);
    static ClosedSet segment(ExtReal lo, ExtReal hi);
    static ClosedSet whole_line();
    /// Sorted, merged union of arbitrary segments (empty ones dropped).
    static ClosedSet from_segments(std::vector<Segment> segs);

    void add(Segment s);
    void add(const ClosedSet& other);
    /// Merges segments whose gap is at most tol.
    void coalesce(double tol);

    [[nodiscard]] const std::vector<Segment>& segments() const { return segs_; }
    [[nodiscard]] bool empty() const { return segs_.empty(); }
    [[nodiscard]] ExtReal inf() const;
    [[nodiscard]] ExtReal sup() const;
    [[nodiscard]] bool contains(double x, double eps = 0.0) const;
    [[nodiscard]] double distance(double x) const;
    [[nodiscard]] bool has_nondegenerate_segment() const;
    /// Every point of *this lies within eps of other.
    [[nodiscard]] bool is_subset_of(const ClosedSet& other, double eps) const;
    /// Restriction to [lo, hi] (segments are clipped).
    [[nodiscard]] ClosedSet clipped(double lo, double hi) const;

    friend bool operator==(const ClosedSet&, const ClosedSet&) = default;

private:
    std::vector<Segment> segs_;
};

}  // namespace kefun
