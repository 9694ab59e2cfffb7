#pragma once

#include <cstddef>

#include "kefun/char_exponent.hpp"
#include "kefun/integrand.hpp"
#include "kefun/levy_model.hpp"

namespace kefun {

struct TransformOptions {
    /// Allow tabulating image measures that leave the catalog.
    bool tabulate = true;
    int cells_per_decade = 512;
};

struct TransformResult {
    LevyTriplet triplet;
    std::size_t tabulated_cells = 0;  ///< constant-density cells emitted by tabulation
    int cells_per_decade = 0;
};

/// Triplet of int_0^t f(s) d eta_s.
TransformResult transform_triplet_detailed(const IntegrandFunction& f, ExtReal t, const LevyTriplet& eta,
                                           const TransformOptions& opt = {});

inline LevyTriplet transform_triplet(const IntegrandFunction& f, ExtReal t, const LevyTriplet& eta,
                                     const TransformOptions& opt = {}) {
    return transform_triplet_detailed(f, t, eta, opt).triplet;
}

/// Exponent of int_0^t f dEta as s-quadrature of Psi_eta(f(s) z).
CharExponent transform_exponent(const IntegrandFunction& f, ExtReal t, const LevyTriplet& eta);

}  // namespace kefun
