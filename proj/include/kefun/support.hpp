#pragma once

#include <memory>
#include <string>

#include "kefun/closed_set.hpp"
#include "kefun/levy_model.hpp"
#include "kefun/verdict.hpp"

namespace kefun {

enum class SupportShape { Point, ClosedInterval, HalfLine, FullLine, PointPlusHalfLine, SemigroupClosure, UnionOfIntervals };
enum class SupportRelation { Equal, Superset };

std::string to_string(SupportShape s);
std::string to_string(SupportRelation r);
SupportShape support_shape_from_string(const std::string& s);

/// Closed support of a law, as an explicit closed set or as the closure
///   { sum_{j<=n} (prod_{k<=j} a_k) b_j : ln a_k in Xi, b_j in G, n >= 0 }
/// with Xi itself a descriptor and G a closed set of generators.
struct SupportDescriptor {
    SupportShape shape = SupportShape::Point;
    SupportRelation relation = SupportRelation::Equal;
    ClosedSet set;  ///< geometry of every shape except SemigroupClosure
    std::shared_ptr<const SupportDescriptor> log_factors;  ///< Xi, semigroup shape only
    ClosedSet generators;                                   ///< G, semigroup shape only
    /// Extra information attached to a semigroup result (a superset or an equal simpler form).
    std::shared_ptr<const SupportDescriptor> refinement;
    Trail trail;

    static SupportDescriptor zero();
    static SupportDescriptor interval(double lo, double hi);
    static SupportDescriptor half_line_up(double from);
    static SupportDescriptor half_line_down(double to);
    static SupportDescriptor full_line();
    /// {0} together with [from, inf) (up) or (-inf, from] (down).
    static SupportDescriptor point_plus_half_line(double from, bool up);
    static SupportDescriptor union_of(ClosedSet set);
    static SupportDescriptor semigroup(SupportDescriptor log_factors, ClosedSet generators);

    [[nodiscard]] bool is_semigroup() const { return shape == SupportShape::SemigroupClosure; }
    [[nodiscard]] std::string str() const;
    /// Same shape and geometry (trail and refinement ignored).
    [[nodiscard]] bool same_geometry(const SupportDescriptor& other) const;
};

struct EnumerationOptions {
    int depth = 6;
    double resolution = 1e-3;
    std::size_t max_segments = 200000;
};

/// Explicit closed set agreeing with the descriptor on [lo, hi]. Semigroup
/// closures are unrolled `depth` times and points closer than `resolution`
/// are merged. Throws EnumerationOverflow past max_segments.
ClosedSet enumerate_support(const SupportDescriptor& d, double lo, double hi, const EnumerationOptions& opt = {});

/// Support of the killed functional int_0^tau e^{-xi_{s-}} d eta_s, tau ~ Exp(q).
SupportDescriptor classify_support(const ProcessSpec& xi, const ProcessSpec& eta, double q);

/// Xi = supp(-xi_T) for an independent exponential time T, in the cases the
/// support classification needs (xi = 0 and xi compound Poisson with 0 outside supp nu).
SupportDescriptor log_factor_support(const ProcessSpec& xi);

}  // namespace kefun
