#include "kefun/closed_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kefun {

bool Interval::contains(double x) const {
    const ExtReal v(x);
    const bool above = lo_closed ? (lo <= v) : (lo < v);
    const bool below = hi_closed ? (v <= hi) : (v < hi);
    return above && below;
}

ClosedSet ClosedSet::point(double x) {
    ClosedSet s;
    s.add(Segment{x, x});
    return s;
}

ClosedSet ClosedSet::segment(ExtReal lo, ExtReal hi) {
    ClosedSet s;
    s.add(Segment{lo, hi});
    return s;
}

ClosedSet ClosedSet::whole_line() { return segment(ExtReal::neg_inf(), ExtReal::pos_inf()); }

ClosedSet ClosedSet::from_segments(std::vector<Segment> segs) {
    std::erase_if(segs, [](const Segment& s) { return s.hi < s.lo; });
    std::sort(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
    ClosedSet out;
    for (const Segment& seg : segs) {
        if (!out.segs_.empty() && seg.lo <= out.segs_.back().hi) {
            out.segs_.back().hi = max(out.segs_.back().hi, seg.hi);
        } else {
            out.segs_.push_back(seg);
        }
    }
    return out;
}

void ClosedSet::add(Segment s) {
    std::vector<Segment> all = segs_;
    all.push_back(s);
    *this = from_segments(std::move(all));
}

void ClosedSet::add(const ClosedSet& other) {
    std::vector<Segment> all = segs_;
    all.insert(all.end(), other.segs_.begin(), other.segs_.end());
    *this = from_segments(std::move(all));
}

void ClosedSet::coalesce(double tol) {
    std::vector<Segment> merged;
    for (const Segment& seg : segs_) {
        if (!merged.empty() && merged.back().hi.is_finite() && seg.lo.is_finite() &&
            seg.lo.value() - merged.back().hi.value() <= tol) {
            merged.back().hi = max(merged.back().hi, seg.hi);
        } else {
            merged.push_back(seg);
        }
    }
    segs_ = std::move(merged);
}

ExtReal ClosedSet::inf() const { return segs_.empty() ? ExtReal::pos_inf() : segs_.front().lo; }

ExtReal ClosedSet::sup() const { return segs_.empty() ? ExtReal::neg_inf() : segs_.back().hi; }

double ClosedSet::distance(double x) const {
    double best = std::numeric_limits<double>::infinity();
    const ExtReal v(x);
    // binary search for the first segment whose hi >= x
    auto it = std::lower_bound(segs_.begin(), segs_.end(), v,
                               [](const Segment& s, const ExtReal& val) { return s.hi < val; });
    if (it != segs_.end()) {
        if (it->lo <= v) return 0.0;
        best = std::min(best, it->lo.value() - x);
    }
    if (it != segs_.begin()) {
        const Segment& prev = *std::prev(it);
        best = std::min(best, x - prev.hi.value());
    }
    return best;
}

bool ClosedSet::contains(double x, double eps) const { return distance(x) <= eps; }

bool ClosedSet::has_nondegenerate_segment() const {
    return std::any_of(segs_.begin(), segs_.end(), [](const Segment& s) { return s.lo < s.hi; });
}

bool ClosedSet::is_subset_of(const ClosedSet& other, double eps) const {
    // each segment of *this must sit inside one eps-fattened segment of other
    for (const Segment& s : segs_) {
        bool inside = false;
        for (const Segment& o : other.segs_) {
            const ExtReal lo = o.lo.is_finite() ? ExtReal(o.lo.value() - eps) : o.lo;
            const ExtReal hi = o.hi.is_finite() ? ExtReal(o.hi.value() + eps) : o.hi;
            if (lo <= s.lo && s.hi <= hi) {
                inside = true;
                break;
            }
        }
        if (!inside) return false;
    }
    return true;
}

ClosedSet ClosedSet::clipped(double lo, double hi) const {
    ClosedSet out;
    for (const Segment& s : segs_) {
        const ExtReal a = max(s.lo, ExtReal(lo));
        const ExtReal b = min(s.hi, ExtReal(hi));
        if (a <= b) out.segs_.push_back(Segment{a, b});
    }
    return out;
}

}  // namespace kefun
