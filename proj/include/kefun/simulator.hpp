#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "kefun/levy_model.hpp"
#include "kefun/rng.hpp"

namespace kefun {

enum class SmallJumpPolicy { Drop, GaussianMatch };

std::string to_string(SmallJumpPolicy p);
SmallJumpPolicy small_jump_policy_from_string(const std::string& s);

struct SimulationParams {
    double grid_step = 0.01;          ///< Brownian grid step h, used only for diffusive xi
    double small_jump_cutoff = 1e-3;  ///< jumps below this size are not simulated individually
    SmallJumpPolicy small_jumps = SmallJumpPolicy::GaussianMatch;
    bool force_grid = false;          ///< put xi on the grid even when it has no Gaussian part
    double tail_tol = 1e-6;           ///< unkilled: stop once the tail bound falls below this
    double initial_horizon = 1.0;
    double max_horizon = 4096.0;

    /// Throws ParameterError on non-positive step, cutoff, tolerance or horizons.
    void validate() const;
};

/// Simulation view of a Levy process: X_t = linear_drift * t + sqrt(gaussian_rate) W_t
/// + (jumps of a finite measure). With GaussianMatch, gaussian_rate includes the
/// variance of the compensated jumps below the cutoff.
class JumpModel {
public:
    JumpModel(const LevyTriplet& triplet, const SimulationParams& params);

    [[nodiscard]] double linear_drift() const { return drift_; }
    [[nodiscard]] double gaussian_rate() const { return gaussian_rate_; }
    /// Total rate of the simulated jumps.
    [[nodiscard]] double jump_rate() const { return rate_; }
    /// Variance rate of the jumps below the cutoff (dropped or Gaussian-matched).
    [[nodiscard]] double small_jump_variance() const { return small_variance_; }
    /// True when every jump is simulated exactly (finite activity).
    [[nodiscard]] bool exact_jumps() const { return exact_; }
    /// Rate-weighted mean absolute size of the simulated jumps (0 if none).
    [[nodiscard]] double mean_abs_jump_rate() const { return abs_rate_; }

    /// Draws one jump size from the normalised simulated jump measure.
    double sample_size(RngStream& rng) const;

private:
    struct Piece {
        double cumulative = 0.0;  ///< running mass including this piece
        bool atom = false;
        double location = 0.0;  ///< atom location
        int side = 1;
        double near = 0.0;
        double far = 0.0;  ///< +inf allowed
        double exponent = 0.0;
    };
    std::vector<Piece> pieces_;
    double drift_ = 0.0;
    double gaussian_rate_ = 0.0;
    double rate_ = 0.0;
    double small_variance_ = 0.0;
    double abs_rate_ = 0.0;
    bool exact_ = true;
};

enum class JumpSource { Xi, Eta, Killing };

struct JumpEvent {
    double time = 0.0;
    double size = 0.0;
    JumpSource source = JumpSource::Xi;
};

/// One simulated path on [0, horizon].
///
/// The continuous part (drift plus Gaussian part) is stored at grid nodes k*h,
/// k = 0..ceil(horizon/h); between nodes it is a Brownian bridge, sampled on
/// demand from the `bridges` stream (one child per cell). Without a grid the
/// continuous part is linear_drift * t exactly.
/// Generation is prefix-stable: a longer horizon from the same stream
/// reproduces the shorter path on the common interval.
struct PathRealization {
    double horizon = 0.0;
    double linear_drift = 0.0;
    double gaussian_rate = 0.0;
    double grid_step = 0.0;  ///< 0 when no grid is materialised
    std::vector<double> grid_values;
    std::vector<JumpEvent> jumps;  ///< strictly increasing times in (0, horizon]
    double killing_time = std::numeric_limits<double>::infinity();
    RngStream bridges{0, 0};
    RngStream noise{0, 0};  ///< conditional-Gaussian draws of integrals against this path

    [[nodiscard]] bool has_grid() const { return grid_step > 0.0; }
    /// Continuous part at t; off-grid values use the bridge mean (display only).
    [[nodiscard]] double continuous_value(double t) const;
    /// Right-continuous path value; +inf at and after the killing time.
    [[nodiscard]] double value(double t) const;
    [[nodiscard]] std::size_t jump_count() const { return jumps.size(); }
};

/// Simulates one path. Grid nodes are stored only when `gaussian_grid` is set and
/// the process has a Gaussian part (or params.force_grid).
PathRealization simulate_path(const ProcessSpec& spec, double horizon, RngStream rng, const SimulationParams& params = {},
                              JumpSource source = JumpSource::Xi, bool gaussian_grid = true);

/// int_lo^hi e^{-kappa xi_{s-}} d eta_s over (lo, hi], plus xi at hi.
/// The Gaussian part of eta enters conditionally on xi, exactly when xi has
/// no Gaussian part and through bridge-averaged cell integrals otherwise.
struct PathIntegral {
    double value = 0.0;
    double xi_at_hi = 0.0;
};
PathIntegral integrate_against(const PathRealization& xi, const PathRealization& eta, double lo, double hi,
                               double kappa = 1.0);

/// int_0^tau e^{-xi_{s-}} d eta_s with tau ~ Exp(q).
double killed_functional_sample(const ProcessSpec& xi, const ProcessSpec& eta, double q, RngStream rng,
                                const SimulationParams& params = {});

/// Same functional through the killed process (xi sent to +inf at tau) integrated
/// past tau; equals killed_functional_sample pathwise.
double killed_functional_sample_cemetery(const ProcessSpec& xi, const ProcessSpec& eta, double q, RngStream rng,
                                         const SimulationParams& params = {});

/// int_0^t e^{-xi_{s-}} d eta_s.
double fixed_t_functional_sample(const ProcessSpec& xi, const ProcessSpec& eta, double t, RngStream rng,
                                 const SimulationParams& params = {});

/// Killed generalised Ornstein-Uhlenbeck step over time t for each start value:
///   X_t = e^{-xi_t} X_0 1{N(t)=0} + e^{-xi_t} int_{T(t)+}^t e^{xi_{s-}} d eta_s,
/// with N Poisson of rate q and T(t) its last jump time before t (0 if none).
/// Element i uses rng.child(i).
std::vector<double> gou_step(std::span<const double> x0, const ProcessSpec& xi, const ProcessSpec& eta, double q,
                             double t, RngStream rng, const SimulationParams& params = {}, int workers = 1);

struct UnkilledSample {
    double value = 0.0;
    double tail_bound = 0.0;
    double horizon = 0.0;
};

/// int_0^inf e^{-xi_{s-}} d eta_s, doubling the horizon until
/// e^{-xi_T} * scale < tail_tol. Throws HorizonExceeded past params.max_horizon.
/// The scale is a heuristic size of the remaining integral, not a proven bound.
UnkilledSample unkilled_functional_sample(const ProcessSpec& xi, const ProcessSpec& eta, RngStream rng,
                                          const SimulationParams& params = {});

enum class FunctionalKind { Killed, Unkilled, FixedHorizon };

std::string to_string(FunctionalKind k);

/// A batch of samples with what is needed to reproduce it.
struct SampleBatch {
    std::vector<double> values;
    std::string scenario_id;
    std::uint64_t seed = 0;
    FunctionalKind kind = FunctionalKind::Killed;
    double rate = 0.0;     ///< q for killed batches
    double horizon = 0.0;  ///< t for fixed-horizon batches
    SimulationParams params;
};

/// n samples, sample i drawn from RngStream(seed, i); identical for any worker count.
SampleBatch sample_batch(const ProcessSpec& xi, const ProcessSpec& eta, FunctionalKind kind, double rate_or_horizon,
                         std::size_t n, std::uint64_t seed, const SimulationParams& params = {}, int workers = 1,
                         std::string scenario_id = {});

/// KS distance between an input batch and its image under gou_step.
double fixed_point_residual(std::span<const double> input, const ProcessSpec& xi, const ProcessSpec& eta, double q,
                            double t, RngStream rng, const SimulationParams& params = {}, int workers = 1);

/// Draws n killed samples (rng.child(0)), steps them (rng.child(1)) and returns the KS distance.
double fixed_point_residual(const ProcessSpec& xi, const ProcessSpec& eta, double q, double t, std::size_t n,
                            RngStream rng, const SimulationParams& params = {}, int workers = 1);

}  // namespace kefun
