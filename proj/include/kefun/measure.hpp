#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "kefun/closed_set.hpp"
#include "kefun/exact_number.hpp"
#include "kefun/ext_real.hpp"

namespace kefun {

struct Atom {
    double location = 0.0;
    double mass = 0.0;
    std::optional<ExactNumber> exact;  ///< exact tag of the location, if known
};

/// Finitely many point masses away from zero.
struct Atoms {
    std::vector<Atom> atoms;
};

enum class DensityFamily { Constant, Power };

/// Density coef * |x|^exponent on the open interval (lo, hi); 0 is not interior.
struct DensityPiece {
    ExtReal lo;
    ExtReal hi;
    DensityFamily family = DensityFamily::Constant;
    double coef = 0.0;
    double exponent = 0.0;  ///< always 0 for the constant family

    static DensityPiece constant(ExtReal lo, ExtReal hi, double c);
    static DensityPiece power(ExtReal lo, ExtReal hi, double c, double p);
    [[nodiscard]] ExtReal total_mass() const;
};

/// Density c_plus x^(-1-alpha) on (0, cutoff) and c_minus |x|^(-1-alpha) on (-cutoff, 0).
struct StablePiece {
    double alpha = 1.0;
    double c_plus = 0.0;
    double c_minus = 0.0;
    double cutoff = 1.0;
};

/// Countable atoms at sign * 2^(-growth^n), n >= 1, with mass |x|^(-alpha).
/// Purely atomic yet of infinite total mass; the singular example of the
/// killed continuity results uses this shape.
struct LacunaryAtoms {
    double alpha = 0.5;
    int growth = 3;
    int sign = 1;

    /// Atoms with |x| representable as a positive double, ordered by decreasing |x|.
    /// Masses are returned through log2 to avoid overflow.
    struct Term {
        double location;
        double log2_abs;  ///< log2 |location|
    };
    [[nodiscard]] std::vector<Term> terms() const;
};

using MeasureComponent = std::variant<Atoms, DensityPiece, StablePiece, LacunaryAtoms>;

/// Absolutely continuous piece in normal form: density coef * |x|^exponent
/// for |x| in (near, far) on one side of the origin.
struct PowerSegment {
    int side = 1;
    ExtReal near;
    ExtReal far;
    double coef = 0.0;
    double exponent = 0.0;
};

/// Behaviour of the measure at the origin, enough to decide the small-ball
/// growth conditions symbolically.
struct SmallJumpIndex {
    std::optional<double> min_exponent;  ///< smallest exponent among pieces touching 0
    double coef_at_min = 0.0;            ///< sum of coefficients attaining it (both sides)
    bool lacunary = false;
};

/// Levy measure as a finite list of catalog components.
class LevyMeasure {
public:
    LevyMeasure() = default;
    explicit LevyMeasure(std::vector<MeasureComponent> components);

    [[nodiscard]] const std::vector<MeasureComponent>& components() const { return parts_; }
    [[nodiscard]] bool is_zero() const { return parts_.empty(); }

    [[nodiscard]] ExtReal mass(const Interval& set) const;
    [[nodiscard]] ExtReal total_mass() const { return mass(Interval::whole()); }
    [[nodiscard]] ExtReal positive_mass() const;
    [[nodiscard]] ExtReal negative_mass() const;
    /// Integral of |x| over {|x| <= eps}.
    [[nodiscard]] ExtReal abs_moment(double eps) const;
    /// Integral of x^2 over {|x| <= eps}.
    [[nodiscard]] ExtReal second_moment(double eps) const;
    /// Integral of |x|^k over the set.
    [[nodiscard]] ExtReal power_moment(const Interval& set, double k) const;
    /// Integral of x over the set; throws SpecError when it is not absolutely convergent.
    [[nodiscard]] double signed_moment(const Interval& set) const;
    [[nodiscard]] ClosedSet support() const;
    [[nodiscard]] bool zero_in_support() const;
    [[nodiscard]] ExtReal ac_mass() const;

    [[nodiscard]] std::vector<PowerSegment> power_segments() const;
    /// All finitely listed atoms (lacunary atoms excluded), merged by location.
    [[nodiscard]] std::vector<Atom> finite_atoms() const;
    [[nodiscard]] std::vector<LacunaryAtoms> lacunary_parts() const;
    [[nodiscard]] SmallJumpIndex small_jump_index() const;

private:
    std::vector<MeasureComponent> parts_;
};

/// Integral of u^q over (a, b) with 0 <= a <= b <= inf.
ExtReal power_integral(double q, ExtReal a, ExtReal b);

}  // namespace kefun
