#include "twoscale/sde_sim.hpp"

#include <algorithm>
#include <limits>

namespace twoscale {

Trajectory::Trajectory(std::size_t dimension, double dt, double t0, std::uint64_t seed, std::string model_tag,
                       std::vector<double> data)
    : dimension_(dimension), dt_(dt), t0_(t0), seed_(seed), model_tag_(std::move(model_tag)), data_(std::move(data)) {
    if (dimension_ == 0) throw ShapeError("trajectory dimension must be positive");
    if (data_.empty() || data_.size() % dimension_ != 0) {
        throw ShapeError("trajectory buffer must hold a whole, non-zero number of states");
    }
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw ConfigError("trajectory dt must be positive");
    if (!std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); })) {
        throw ConfigError("trajectory contains non-finite states");
    }
}

void SimConfig::validate(bool multiscale) const {
    if (!(epsilon > 0.0) || !(epsilon <= 1.0)) throw ConfigError("epsilon must lie in (0, 1]");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be finite and >= 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon must be positive");
    if (!(burn_in >= 0.0) || !std::isfinite(burn_in)) throw ConfigError("burn_in must be >= 0");
    if (multiscale && dt > default_dt(epsilon) * (1.0 + 1e-9)) {
        throw ConfigError("dt must not exceed epsilon^2 / 10 for the multiscale model");
    }
    if (horizon_steps() == 0) throw ConfigError("horizon is shorter than one step");
}

//---------------------------------------------------------------------------//

EulerMaruyama::EulerMaruyama(const TwoScalePotential& pot, const SimConfig& cfg, std::span<const double> x0)
    : pot_(pot),
      dt_(cfg.dt),
      inv_epsilon_(1.0 / cfg.epsilon),
      multiscale_(true),
      noise_(cfg.seed, cfg.stream),
      x_(x0.begin(), x0.end()),
      work_(pot.dimension()),
      xi_(pot.dimension()) {
    if (x0.size() != pot.dimension()) throw ShapeError("initial state does not match the model dimension");
    if (!std::all_of(x_.begin(), x_.end(), [](double v) { return std::isfinite(v); })) {
        throw ConfigError("initial state must be finite");
    }
}

EulerMaruyama EulerMaruyama::multiscale(const TwoScalePotential& pot, const SimConfig& cfg,
                                        std::span<const double> x0) {
    cfg.validate(pot.has_fast_part());
    EulerMaruyama em(pot, cfg, x0);
    em.noise_scale_.assign(pot.dimension(), std::sqrt(2.0 * cfg.sigma * cfg.dt));
    return em;
}

EulerMaruyama EulerMaruyama::homogenized(const HomogenizedCoefficients& coeffs, const TwoScalePotential& pot,
                                         const SimConfig& cfg, std::span<const double> x0) {
    cfg.validate(false);
    if (coeffs.drift.size() != pot.drift_parameter_count() || coeffs.Sigma.size() != pot.dimension()) {
        throw ShapeError("homogenized coefficients do not match the model family");
    }
    EulerMaruyama em(pot, cfg, x0);
    em.multiscale_ = false;
    em.theta_ = coeffs.drift_values();
    em.features_.resize(pot.drift_parameter_count() * pot.dimension());
    for (double s : coeffs.Sigma) {
        if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("homogenized Sigma must be finite and >= 0");
        em.noise_scale_.push_back(std::sqrt(2.0 * s * cfg.dt));
    }
    return em;
}

void EulerMaruyama::advance() {
    const std::size_t d = x_.size();
    noise_.fill(step_, xi_);
    if (multiscale_) {
        pot_.grad_slow(x_, work_);
        for (std::size_t i = 0; i < d; ++i) {
            const double fast = pot_.fast()[i].derivative(x_[i] * inv_epsilon_) * inv_epsilon_;
            x_[i] += -(work_[i] + fast) * dt_ + noise_scale_[i] * xi_[i];
        }
    } else {
        pot_.drift_features(x_, features_);
        std::fill(work_.begin(), work_.end(), 0.0);
        for (std::size_t k = 0; k < theta_.size(); ++k) {
            for (std::size_t i = 0; i < d; ++i) work_[i] += theta_[k] * features_[k * d + i];
        }
        for (std::size_t i = 0; i < d; ++i) x_[i] += work_[i] * dt_ + noise_scale_[i] * xi_[i];
    }
    ++step_;
    for (double v : x_) {
        if (!std::isfinite(v) || std::abs(v) > kBlowUpThreshold) {
            throw BlowUpError("integration blew up at step " + std::to_string(step_), step_);
        }
    }
}

//---------------------------------------------------------------------------//

namespace {
Trajectory materialize(EulerMaruyama& em, const SimConfig& cfg, const TwoScalePotential& pot, std::string tag) {
    std::vector<double> data;
    data.reserve((cfg.horizon_steps() + 1) * pot.dimension());
    run(em, cfg, [&](std::span<const double> x) { data.insert(data.end(), x.begin(), x.end()); });
    const double t0 = static_cast<double>(cfg.burn_in_steps()) * cfg.dt;
    return Trajectory(pot.dimension(), cfg.dt, t0, cfg.seed, std::move(tag), std::move(data));
}
}  // namespace

Trajectory simulate_multiscale(const TwoScalePotential& pot, const SimConfig& cfg, std::span<const double> x0) {
    auto em = EulerMaruyama::multiscale(pot, cfg, x0);
    return materialize(em, cfg, pot, pot.tag());
}

Trajectory simulate_homogenized(const HomogenizedCoefficients& coeffs, const TwoScalePotential& pot,
                                const SimConfig& cfg, std::span<const double> x0) {
    auto em = EulerMaruyama::homogenized(coeffs, pot, cfg, x0);
    return materialize(em, cfg, pot, pot.tag() + "/homogenized");
}

double invariant_burn_in(const TwoScalePotential& pot, double sigma) {
    const auto coeffs = homogenized_coeffs(pot, sigma);
    const double k_min = *std::min_element(coeffs.K.begin(), coeffs.K.end());
    const double stiffness = pot.stiffness();
    if (!(stiffness > 0.0)) return 100.0;
    return 20.0 / (stiffness * k_min);
}

std::vector<double> sample_invariant(const TwoScalePotential& pot, double epsilon, double sigma, std::uint64_t seed) {
    if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
    SimConfig cfg;
    cfg.epsilon = epsilon;
    cfg.sigma = sigma;
    cfg.dt = SimConfig::default_dt(epsilon);
    cfg.horizon = invariant_burn_in(pot, sigma);
    cfg.burn_in = 0.0;
    cfg.seed = seed;
    const std::vector<double> origin(pot.dimension(), 0.0);
    auto em = EulerMaruyama::multiscale(pot, cfg, origin);
    const std::size_t steps = cfg.horizon_steps();
    for (std::size_t k = 0; k < steps; ++k) em.advance();
    return {em.state().begin(), em.state().end()};
}

Trajectory subsample(const Trajectory& traj, std::size_t stride) {
    if (stride == 0) throw ConfigError("stride must be >= 1");
    const std::size_t count = (traj.size() - 1) / stride + 1;
    if (count < 2) {
        throw InsufficientDataError("stride " + std::to_string(stride) + " leaves fewer than 2 of " +
                                    std::to_string(traj.size()) + " states");
    }
    const std::size_t d = traj.dimension();
    std::vector<double> data;
    data.reserve(count * d);
    for (std::size_t n = 0; n < count; ++n) {
        const auto x = traj.state(n * stride);
        data.insert(data.end(), x.begin(), x.end());
    }
    return Trajectory(d, traj.dt() * static_cast<double>(stride), traj.t0(), traj.seed(), traj.model_tag(),
                      std::move(data));
}

}  // namespace twoscale
