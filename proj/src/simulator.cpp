#include "kefun/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "kefun/errors.hpp"
#include "kefun/parallel.hpp"
#include "kefun/stats.hpp"

namespace kefun {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double finite_or_throw(ExtReal v, const char* what) {
    if (!v.is_finite()) throw ParameterError(std::string("simulation: infinite ") + what);
    return v.value();
}

/// Conditional mean of int_0^L exp(-c X_s) ds for a bridge of variance rate v
/// from x0 to x1 (a straight line when v = 0).
double cell_integral(double c, double x0, double x1, double v, double len) {
    if (len <= 0.0) return 0.0;
    if (std::isinf(x0) || std::isinf(x1)) {
        if (c > 0.0 && x0 == kInf && x1 == kInf) return 0.0;
        throw ParameterError("simulation: path value left the representable range");
    }
    const double d = x1 - x0;
    if (v == 0.0) {
        const double z = -c * d;
        const double phi = z == 0.0 ? 1.0 : std::expm1(z) / z;
        return len * std::exp(-c * x0) * phi;
    }
    static constexpr std::array<double, 5> node{0.0, 0.5384693101056831, -0.5384693101056831, 0.9061798459386640,
                                                -0.9061798459386640};
    static constexpr std::array<double, 5> weight{0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                                  0.2369268850561891, 0.2369268850561891};
    const double curvature = 0.5 * c * c * v * len;
    double s = 0.0;
    for (std::size_t i = 0; i < node.size(); ++i) {
        const double u = 0.5 * (1.0 + node[i]);
        s += weight[i] * std::exp(-c * (x0 + d * u) + curvature * u * (1.0 - u));
    }
    return 0.5 * len * s;
}

/// Walks the continuous part of xi forward, sampling bridge values between grid nodes.
class ContinuousCursor {
public:
    explicit ContinuousCursor(const PathRealization& p) : path_(p) {}

    [[nodiscard]] double time() const { return t_; }
    [[nodiscard]] double value() const { return x_; }
    [[nodiscard]] double next_node() const {
        return path_.has_grid() ? static_cast<double>(cell_ + 1) * path_.grid_step : kInf;
    }

    void advance(double to) {
        if (!path_.has_grid()) {
            t_ = to;
            x_ = path_.linear_drift * to;
            return;
        }
        const double node = next_node();
        if (to >= node) {
            t_ = node;
            x_ = path_.grid_values.at(cell_ + 1);
            ++cell_;
            return;
        }
        if (to <= t_) return;
        if (bridge_cell_ != cell_) {
            bridge_ = path_.bridges.child(cell_);
            bridge_cell_ = cell_;
        }
        const double end_value = path_.grid_values.at(cell_ + 1);
        const double frac = (to - t_) / (node - t_);
        const double var = path_.gaussian_rate * (to - t_) * (node - to) / (node - t_);
        x_ = x_ + frac * (end_value - x_) + std::sqrt(var) * bridge_.normal();
        t_ = to;
    }

private:
    const PathRealization& path_;
    double t_ = 0.0;
    double x_ = 0.0;
    std::size_t cell_ = 0;
    std::size_t bridge_cell_ = static_cast<std::size_t>(-1);
    RngStream bridge_{0, 0};
};

void check_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(std::string(what) + " must be positive and finite");
}

/// Arrival times of a rate-q Poisson process on (0, t]: count and last time.
std::pair<std::uint64_t, double> poisson_arrivals(double q, double t, RngStream rng) {
    std::uint64_t count = 0;
    double last = 0.0;
    if (q <= 0.0) return {0, 0.0};
    double s = rng.exponential(q);
    while (s <= t) {
        ++count;
        last = s;
        s += rng.exponential(q);
    }
    return {count, last};
}

double tail_scale(const ProcessSpec& eta, const SimulationParams& params) {
    const JumpModel m(eta.triplet, params);
    return std::abs(m.linear_drift()) + std::sqrt(m.gaussian_rate()) + m.mean_abs_jump_rate();
}

}  // namespace

std::string to_string(SmallJumpPolicy p) { return p == SmallJumpPolicy::Drop ? "drop" : "gaussian-match"; }

SmallJumpPolicy small_jump_policy_from_string(const std::string& s) {
    if (s == "drop") return SmallJumpPolicy::Drop;
    if (s == "gaussian-match") return SmallJumpPolicy::GaussianMatch;
    throw SpecError("small-jump policy must be 'drop' or 'gaussian-match', got '" + s + "'");
}

std::string to_string(FunctionalKind k) {
    switch (k) {
        case FunctionalKind::Killed: return "killed";
        case FunctionalKind::Unkilled: return "unkilled";
        case FunctionalKind::FixedHorizon: return "fixed_t";
    }
    return "killed";
}

void SimulationParams::validate() const {
    check_positive(grid_step, "grid_step");
    check_positive(small_jump_cutoff, "small_jump_cutoff");
    check_positive(tail_tol, "tail_tol");
    check_positive(initial_horizon, "initial_horizon");
    check_positive(max_horizon, "max_horizon");
    if (max_horizon < initial_horizon) throw ParameterError("max_horizon must be at least initial_horizon");
}

JumpModel::JumpModel(const LevyTriplet& triplet, const SimulationParams& params) {
    const LevyMeasure& nu = triplet.measure();
    exact_ = nu.total_mass().is_finite();
    const double cutoff = params.small_jump_cutoff;
    if (!exact_ && !(cutoff > 0.0)) throw ParameterError("small-jump cutoff must be positive for infinite activity");

    double compensator = 0.0;  // int x nu(dx) over simulated jumps in [-1, 1]
    auto add_atom = [&](double location, double mass) {
        if (mass <= 0.0) return;
        Piece p;
        p.atom = true;
        p.location = location;
        rate_ += mass;
        p.cumulative = rate_;
        pieces_.push_back(p);
        abs_rate_ += std::abs(location) * mass;
        if (std::abs(location) <= 1.0) compensator += location * mass;
    };

    for (const Atom& a : nu.finite_atoms()) add_atom(a.location, a.mass);
    for (const LacunaryAtoms& lac : nu.lacunary_parts()) {
        for (const LacunaryAtoms::Term& term : lac.terms()) {
            if (std::abs(term.location) >= cutoff) {
                add_atom(term.location, std::exp2(-lac.alpha * term.log2_abs));
            } else {
                small_variance_ += std::exp2((2.0 - lac.alpha) * term.log2_abs);
            }
        }
    }
    for (const PowerSegment& seg : nu.power_segments()) {
        double near = seg.near.value();
        const double p = seg.exponent;
        if (near == 0.0 && p <= -1.0) {
            const ExtReal small_end = min(seg.far, ExtReal(cutoff));
            small_variance_ += seg.coef * finite_or_throw(power_integral(p + 2.0, 0.0, small_end), "small-jump variance");
            near = cutoff;
        }
        if (!(ExtReal(near) < seg.far)) continue;
        const double mass = seg.coef * finite_or_throw(power_integral(p, near, seg.far), "jump rate");
        if (mass <= 0.0) continue;
        Piece piece;
        piece.side = seg.side;
        piece.near = near;
        piece.far = seg.far.is_finite() ? seg.far.value() : kInf;
        piece.exponent = p;
        rate_ += mass;
        piece.cumulative = rate_;
        pieces_.push_back(piece);
        if (near < 1.0) {
            const double inner = seg.coef * finite_or_throw(power_integral(p + 1.0, near, min(seg.far, ExtReal(1.0))), "moment");
            compensator += seg.side * inner;
            abs_rate_ += inner;
        }
        if (ExtReal(1.0) < seg.far) abs_rate_ += seg.coef * finite_or_throw(power_integral(p, std::max(near, 1.0), seg.far), "jump rate");
    }

    const std::optional<double> drift = triplet.drift();
    drift_ = (exact_ && drift) ? *drift : triplet.gamma() - compensator;
    gaussian_rate_ = triplet.sigma2() + (params.small_jumps == SmallJumpPolicy::GaussianMatch ? small_variance_ : 0.0);
}

double JumpModel::sample_size(RngStream& rng) const {
    const double u = rng.uniform() * rate_;
    const double v = rng.uniform();
    auto it = std::lower_bound(pieces_.begin(), pieces_.end(), u,
                               [](const Piece& p, double x) { return p.cumulative < x; });
    if (it == pieces_.end()) it = std::prev(pieces_.end());
    const Piece& p = *it;
    if (p.atom) return p.location;
    const double r = p.exponent + 1.0;
    double x = 0.0;
    if (std::abs(r) < 1e-12) {
        x = p.near * std::exp(v * std::log(p.far / p.near));
    } else {
        const double lo = p.near == 0.0 ? 0.0 : std::pow(p.near, r);
        const double hi = std::isinf(p.far) ? 0.0 : std::pow(p.far, r);
        x = std::pow(lo + v * (hi - lo), 1.0 / r);
    }
    return p.side * x;
}

double PathRealization::continuous_value(double t) const {
    if (!has_grid()) return linear_drift * t;
    const double pos = t / grid_step;
    const auto k = static_cast<std::size_t>(std::floor(pos));
    if (k + 1 >= grid_values.size()) return grid_values.back();
    const double frac = pos - static_cast<double>(k);
    return grid_values[k] + frac * (grid_values[k + 1] - grid_values[k]);
}

double PathRealization::value(double t) const {
    if (t >= killing_time) return kInf;
    double x = continuous_value(t);
    for (const JumpEvent& j : jumps) {
        if (j.time > t) break;
        if (j.source != JumpSource::Killing) x += j.size;
    }
    return x;
}

PathRealization simulate_path(const ProcessSpec& spec, double horizon, RngStream rng, const SimulationParams& params,
                              JumpSource source, bool gaussian_grid) {
    check_positive(horizon, "horizon");
    const JumpModel model(spec.triplet, params);
    PathRealization path;
    path.horizon = horizon;
    path.linear_drift = model.linear_drift();
    path.gaussian_rate = model.gaussian_rate();
    path.bridges = rng.child(3);
    path.noise = rng.child(4);

    if (model.jump_rate() > 0.0) {
        RngStream times = rng.child(0);
        RngStream sizes = rng.child(1);
        double t = times.exponential(model.jump_rate());
        while (t <= horizon) {
            path.jumps.push_back({t, model.sample_size(sizes), source});
            t += times.exponential(model.jump_rate());
        }
    }

    const bool diffusive = path.gaussian_rate > 0.0;
    if (gaussian_grid && (diffusive || params.force_grid)) {
        check_positive(params.grid_step, "grid step");
        const double h = params.grid_step;
        const auto cells = static_cast<std::size_t>(std::ceil(horizon / h));
        path.grid_step = h;
        path.grid_values.resize(cells + 1, 0.0);
        RngStream gauss = rng.child(2);
        const double scale = std::sqrt(path.gaussian_rate * h);
        double noise = 0.0;
        for (std::size_t k = 1; k <= cells; ++k) {
            if (diffusive) noise += scale * gauss.normal();
            // drift part kept exact at every node
            path.grid_values[k] = path.linear_drift * (static_cast<double>(k) * h) + noise;
        }
    }
    return path;
}

PathIntegral integrate_against(const PathRealization& xi, const PathRealization& eta, double lo, double hi,
                               double kappa) {
    if (xi.gaussian_rate > 0.0 && !xi.has_grid())
        throw std::logic_error("integrate_against: a diffusive integrator path needs its grid");
    if (hi > xi.horizon || hi > eta.horizon) throw std::logic_error("integrate_against: range beyond the simulated horizon");

    const double eta_drift = eta.linear_drift;
    const double eta_gauss = eta.gaussian_rate;
    const double bridge_rate = xi.has_grid() ? xi.gaussian_rate : 0.0;

    ContinuousCursor cursor(xi);
    std::size_t ix = 0;
    std::size_t ie = 0;
    double level = 0.0;  // accumulated xi jumps
    double from_jumps = 0.0;
    double from_drift = 0.0;
    double variance = 0.0;

    while (true) {
        double next = hi;
        if (cursor.time() < lo) next = std::min(next, lo);
        if (ix < xi.jumps.size()) next = std::min(next, xi.jumps[ix].time);
        if (ie < eta.jumps.size()) next = std::min(next, eta.jumps[ie].time);
        next = std::min(next, cursor.next_node());

        const double t0 = cursor.time();
        const double x0 = level + cursor.value();
        cursor.advance(next);
        const double x1 = level + cursor.value();
        if (t0 >= lo && next > t0) {
            const double len = next - t0;
            if (eta_drift != 0.0) from_drift += eta_drift * cell_integral(kappa, x0, x1, bridge_rate, len);
            if (eta_gauss > 0.0) variance += eta_gauss * cell_integral(2.0 * kappa, x0, x1, bridge_rate, len);
        }
        // eta jumps see xi_{s-}: apply them before xi jumps at the same time
        while (ie < eta.jumps.size() && eta.jumps[ie].time <= next) {
            if (eta.jumps[ie].time > lo) from_jumps += std::exp(-kappa * x1) * eta.jumps[ie].size;
            ++ie;
        }
        while (ix < xi.jumps.size() && xi.jumps[ix].time <= next) {
            level += xi.jumps[ix].source == JumpSource::Killing ? kInf : xi.jumps[ix].size;
            ++ix;
        }
        if (next >= hi) break;
    }

    PathIntegral out;
    out.value = from_jumps + from_drift;
    if (variance > 0.0) {
        RngStream noise = eta.noise;
        out.value += std::sqrt(variance) * noise.normal();
    }
    out.xi_at_hi = level + cursor.value();
    return out;
}

double killed_functional_sample(const ProcessSpec& xi, const ProcessSpec& eta, double q, RngStream rng,
                                const SimulationParams& params) {
    check_positive(q, "killing rate q");
    const double tau = rng.child(0).exponential(q);
    if (eta.triplet.measure().is_zero() && eta.triplet.sigma2() == 0.0 && eta.triplet.gamma() == 0.0) return 0.0;
    const PathRealization xp = simulate_path(xi, tau, rng.child(1), params, JumpSource::Xi, true);
    const PathRealization ep = simulate_path(eta, tau, rng.child(2), params, JumpSource::Eta, false);
    return integrate_against(xp, ep, 0.0, tau).value;
}

double killed_functional_sample_cemetery(const ProcessSpec& xi, const ProcessSpec& eta, double q, RngStream rng,
                                         const SimulationParams& params) {
    check_positive(q, "killing rate q");
    const double tau = rng.child(0).exponential(q);
    if (eta.triplet.measure().is_zero() && eta.triplet.sigma2() == 0.0 && eta.triplet.gamma() == 0.0) return 0.0;
    const double horizon = tau + 1.0;
    PathRealization xp = simulate_path(xi, horizon, rng.child(1), params, JumpSource::Xi, true);
    const PathRealization ep = simulate_path(eta, horizon, rng.child(2), params, JumpSource::Eta, false);
    xp.killing_time = tau;
    const auto pos = std::upper_bound(xp.jumps.begin(), xp.jumps.end(), tau,
                                      [](double t, const JumpEvent& j) { return t < j.time; });
    xp.jumps.insert(pos, JumpEvent{tau, kInf, JumpSource::Killing});
    return integrate_against(xp, ep, 0.0, horizon).value;
}

double fixed_t_functional_sample(const ProcessSpec& xi, const ProcessSpec& eta, double t, RngStream rng,
                                 const SimulationParams& params) {
    check_positive(t, "horizon t");
    const PathRealization xp = simulate_path(xi, t, rng.child(1), params, JumpSource::Xi, true);
    const PathRealization ep = simulate_path(eta, t, rng.child(2), params, JumpSource::Eta, false);
    return integrate_against(xp, ep, 0.0, t).value;
}

std::vector<double> gou_step(std::span<const double> x0, const ProcessSpec& xi, const ProcessSpec& eta, double q,
                             double t, RngStream rng, const SimulationParams& params, int workers) {
    check_positive(t, "step length t");
    if (q < 0.0 || !std::isfinite(q)) throw ParameterError("killing rate q must be non-negative and finite");
    std::vector<double> out(x0.size());
    parallel_for(x0.size(), workers, [&](std::size_t i) {
        const RngStream s = rng.child(i);
        const auto [count, last] = poisson_arrivals(q, t, s.child(3));
        const PathRealization xp = simulate_path(xi, t, s.child(1), params, JumpSource::Xi, true);
        const PathRealization ep = simulate_path(eta, t, s.child(2), params, JumpSource::Eta, false);
        const PathIntegral r = integrate_against(xp, ep, last, t, -1.0);
        const double decay = std::exp(-r.xi_at_hi);
        const double carried = count == 0 ? decay * x0[i] : 0.0;
        out[i] = carried + decay * r.value;
    });
    return out;
}

UnkilledSample unkilled_functional_sample(const ProcessSpec& xi, const ProcessSpec& eta, RngStream rng,
                                          const SimulationParams& params) {
    params.validate();
    const double scale = tail_scale(eta, params);
    if (scale == 0.0) return {0.0, 0.0, 0.0};
    double horizon = params.initial_horizon;
    while (true) {
        const PathRealization xp = simulate_path(xi, horizon, rng.child(1), params, JumpSource::Xi, true);
        const PathRealization ep = simulate_path(eta, horizon, rng.child(2), params, JumpSource::Eta, false);
        const PathIntegral r = integrate_against(xp, ep, 0.0, horizon);
        const double bound = std::exp(-r.xi_at_hi) * scale;
        if (bound < params.tail_tol) return {r.value, bound, horizon};
        if (horizon >= params.max_horizon)
            throw HorizonExceeded("unkilled integral: tail bound " + std::to_string(bound) + " above tolerance at horizon " +
                                  std::to_string(horizon));
        horizon = std::min(2.0 * horizon, params.max_horizon);
    }
}

SampleBatch sample_batch(const ProcessSpec& xi, const ProcessSpec& eta, FunctionalKind kind, double rate_or_horizon,
                         std::size_t n, std::uint64_t seed, const SimulationParams& params, int workers,
                         std::string scenario_id) {
    SampleBatch batch;
    batch.values.resize(n);
    batch.scenario_id = std::move(scenario_id);
    batch.seed = seed;
    batch.kind = kind;
    batch.params = params;
    if (kind == FunctionalKind::Killed) batch.rate = rate_or_horizon;
    if (kind == FunctionalKind::FixedHorizon) batch.horizon = rate_or_horizon;
    parallel_for(n, workers, [&](std::size_t i) {
        const RngStream s(seed, i);
        switch (kind) {
            case FunctionalKind::Killed: batch.values[i] = killed_functional_sample(xi, eta, rate_or_horizon, s, params); break;
            case FunctionalKind::FixedHorizon: batch.values[i] = fixed_t_functional_sample(xi, eta, rate_or_horizon, s, params); break;
            case FunctionalKind::Unkilled: batch.values[i] = unkilled_functional_sample(xi, eta, s, params).value; break;
        }
    });
    return batch;
}

double fixed_point_residual(std::span<const double> input, const ProcessSpec& xi, const ProcessSpec& eta, double q,
                            double t, RngStream rng, const SimulationParams& params, int workers) {
    if (t < 0.0) throw ParameterError("step length t must be non-negative");
    if (t == 0.0) return 0.0;
    const std::vector<double> output = gou_step(input, xi, eta, q, t, rng, params, workers);
    return ks_statistic(input, output);
}

double fixed_point_residual(const ProcessSpec& xi, const ProcessSpec& eta, double q, double t, std::size_t n,
                            RngStream rng, const SimulationParams& params, int workers) {
    if (t < 0.0) throw ParameterError("step length t must be non-negative");
    if (t == 0.0) return 0.0;
    std::vector<double> input(n);
    const RngStream source = rng.child(0);
    parallel_for(n, workers, [&](std::size_t i) { input[i] = killed_functional_sample(xi, eta, q, source.child(i), params); });
    return fixed_point_residual(input, xi, eta, q, t, rng.child(1), params, workers);
}

}  // namespace kefun
