#include "twoscale/estimators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "twoscale/error.hpp"

namespace twoscale {

std::string_view to_string(EstimatorId id) noexcept {
    switch (id) {
        case EstimatorId::QvSigma: return "qv_sigma";
        case EstimatorId::MleDrift: return "mle_drift";
        case EstimatorId::GibbsDrift: return "gibbs_drift";
    }
    return "unknown";
}

EstimatorId parse_estimator(std::string_view name) {
    if (name == "qv_sigma") return EstimatorId::QvSigma;
    if (name == "mle_drift") return EstimatorId::MleDrift;
    if (name == "gibbs_drift") return EstimatorId::GibbsDrift;
    throw ConfigError("unknown estimator '" + std::string(name) + "'");
}

double EstimateRecord::value(std::string_view name) const {
    for (const auto& v : values) {
        if (v.name == name) return v.value;
    }
    throw std::out_of_range("estimate has no value named '" + std::string(name) + "'");
}

//---------------------------------------------------------------------------//

PathStatistics::PathStatistics(std::size_t dimension, double delta)
    : dim_(dimension), delta_(delta), prev_(dimension), increment_(dimension), qv_(dimension * dimension, 0.0) {
    if (dim_ == 0) throw ShapeError("dimension must be positive");
    if (!(delta_ > 0.0) || !std::isfinite(delta_)) throw ConfigError("observation interval must be positive");
}

PathStatistics::PathStatistics(const TwoScalePotential& pot, double delta) : PathStatistics(pot.dimension(), delta) {
    pot_ = pot;
    params_ = pot.drift_parameter_count();
    features_.resize(params_ * dim_);
    gram_.assign(params_ * params_, 0.0);
    rhs_.assign(params_, 0.0);
}

void PathStatistics::observe(std::span<const double> x) {
    if (x.size() != dim_) throw ShapeError("observation does not match the dimension");
    const bool scalar = pot_ && pot_->has_scalar_drift();
    if (!started_) {
        std::copy(x.begin(), x.end(), prev_.begin());
        if (scalar) first_basis_value_ = last_basis_value_ = pot_->basis_value(x[0]);
        started_ = true;
        return;
    }

    for (std::size_t i = 0; i < dim_; ++i) increment_[i] = x[i] - prev_[i];
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) qv_[i * dim_ + j] += increment_[i] * increment_[j];
    }

    if (pot_) {
        pot_->drift_features(prev_, features_);
        for (std::size_t k = 0; k < params_; ++k) {
            const double* phi_k = &features_[k * dim_];
            double r = 0.0;
            for (std::size_t i = 0; i < dim_; ++i) r += phi_k[i] * increment_[i];
            rhs_[k] += r;
            for (std::size_t l = 0; l < params_; ++l) {
                const double* phi_l = &features_[l * dim_];
                double g = 0.0;
                for (std::size_t i = 0; i < dim_; ++i) g += phi_k[i] * phi_l[i];
                gram_[k * params_ + l] += g * delta_;
            }
        }
        if (scalar) {
            const double grad = pot_->basis_derivative(prev_[0]);
            sum_grad_sq_ += grad * grad;
            sum_grad_dx_ += grad * increment_[0];
            sum_laplacian_ += pot_->basis_laplacian(prev_[0]);
            last_basis_value_ = pot_->basis_value(x[0]);
        }
    }

    std::copy(x.begin(), x.end(), prev_.begin());
    ++n_;
}

void PathStatistics::require_increments() const {
    if (n_ < 1) throw InsufficientDataError("estimator needs at least 2 observations");
}

void PathStatistics::require_model() const {
    if (!pot_) throw ConfigError("drift estimators need a model");
}

void PathStatistics::require_scalar_drift() const {
    require_model();
    if (!pot_->has_scalar_drift()) {
        throw UnsupportedModelError("estimator is only defined for one-parameter models, not '" + pot_->tag() + "'");
    }
}

EstimateRecord PathStatistics::qv_sigma() const {
    require_increments();
    const double total_time = static_cast<double>(n_) * delta_;
    double trace = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) trace += qv_[i * dim_ + i];

    EstimateRecord rec{EstimatorId::QvSigma, {}, n_, delta_, {}};
    rec.values.push_back({"sigma", trace / (2.0 * total_time * static_cast<double>(dim_))});
    if (dim_ >= 2) {
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = 0; j < dim_; ++j) {
                rec.values.push_back({"sigma" + std::to_string(i + 1) + std::to_string(j + 1),
                                      qv_[i * dim_ + j] / (2.0 * total_time)});
            }
        }
    }
    return rec;
}

double PathStatistics::mle_scalar() const {
    const double denom = sum_grad_sq_ * delta_;
    if (!(denom > 0.0)) throw DegenerateRegressionError("likelihood drift estimator: sum |grad V|^2 is zero");
    return -sum_grad_dx_ / denom;
}

EstimateRecord PathStatistics::mle_drift() const {
    require_model();
    require_increments();
    const auto params = pot_->drift_parameters();
    EstimateRecord rec{EstimatorId::MleDrift, {}, n_, delta_, {}};

    if (pot_->has_scalar_drift()) {
        rec.values.push_back({params[0].name, mle_scalar()});
        return rec;
    }

    const auto p = static_cast<Eigen::Index>(params_);
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> gram(gram_.data(),
                                                                                                          p, p);
    const Eigen::Map<const Eigen::VectorXd> rhs(rhs_.data(), p);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    const double largest = eig.eigenvalues().maxCoeff();
    const double smallest = eig.eigenvalues().minCoeff();
    if (!(largest > 0.0) || !(smallest > 1e-13 * largest)) {
        throw DegenerateRegressionError("likelihood drift estimator: normal equations are singular");
    }
    const Eigen::VectorXd theta = gram.ldlt().solve(rhs);
    for (std::size_t k = 0; k < params_; ++k) rec.values.push_back({params[k].name, theta[static_cast<Eigen::Index>(k)]});
    return rec;
}

EstimateRecord PathStatistics::gibbs_drift(double sigma_hat) const {
    require_scalar_drift();
    require_increments();
    if (!(sigma_hat > 0.0) || !std::isfinite(sigma_hat)) throw ConfigError("sigma_hat must be positive");
    if (!(sum_grad_sq_ > 0.0)) throw DegenerateRegressionError("Gibbs drift estimator: sum |grad V|^2 is zero");
    const auto params = pot_->drift_parameters();
    EstimateRecord rec{EstimatorId::GibbsDrift, {}, n_, delta_, {}};
    rec.values.push_back({params[0].name, sigma_hat * sum_laplacian_ / sum_grad_sq_});
    return rec;
}

EquivalenceGap PathStatistics::equivalence_gap(double sigma_hat) const {
    const double tilde = gibbs_drift(sigma_hat).values[0].value;
    const double hat = mle_scalar();
    return {std::abs(tilde - hat), (first_basis_value_ - last_basis_value_) / (sum_grad_sq_ * delta_)};
}

//---------------------------------------------------------------------------//

MultiStrideStatistics::MultiStrideStatistics(const TwoScalePotential& pot, double dt,
                                             std::span<const std::size_t> strides)
    : strides_(strides.begin(), strides.end()) {
    stats_.reserve(strides_.size());
    for (std::size_t s : strides_) {
        if (s == 0) throw ConfigError("stride must be >= 1");
        stats_.emplace_back(pot, dt * static_cast<double>(s));
    }
}

void MultiStrideStatistics::observe(std::span<const double> x) {
    for (std::size_t i = 0; i < strides_.size(); ++i) {
        if (index_ % strides_[i] == 0) stats_[i].observe(x);
    }
    ++index_;
}

//---------------------------------------------------------------------------//

namespace {

EstimateContext context_of(const Trajectory& traj) {
    EstimateContext ctx;
    ctx.dt = traj.dt();
    ctx.seed = traj.seed();
    ctx.model_tag = traj.model_tag();
    return ctx;
}

template <class Stats>
Stats fold(const Trajectory& traj, Stats stats) {
    for (std::size_t n = 0; n < traj.size(); ++n) stats.observe(traj.state(n));
    return stats;
}

}  // namespace

EstimateRecord qv_sigma(const Trajectory& traj) {
    if (traj.size() < 2) throw InsufficientDataError("qv_sigma needs at least 2 states");
    auto rec = fold(traj, PathStatistics(traj.dimension(), traj.dt())).qv_sigma();
    rec.context = context_of(traj);
    return rec;
}

EstimateRecord mle_drift(const Trajectory& traj, const TwoScalePotential& pot) {
    if (traj.dimension() != pot.dimension()) throw ShapeError("trajectory and model dimensions differ");
    if (traj.size() < 2) throw InsufficientDataError("mle_drift needs at least 2 states");
    auto rec = fold(traj, PathStatistics(pot, traj.dt())).mle_drift();
    rec.context = context_of(traj);
    return rec;
}

EstimateRecord gibbs_drift(const Trajectory& traj, const TwoScalePotential& pot, double sigma_hat) {
    if (traj.dimension() != pot.dimension()) throw ShapeError("trajectory and model dimensions differ");
    if (!pot.has_scalar_drift()) {
        throw UnsupportedModelError("gibbs_drift is only defined for one-parameter models, not '" + pot.tag() + "'");
    }
    if (traj.size() < 2) throw InsufficientDataError("gibbs_drift needs at least 2 states");
    auto rec = fold(traj, PathStatistics(pot, traj.dt())).gibbs_drift(sigma_hat);
    rec.context = context_of(traj);
    return rec;
}

EquivalenceGap estimator_equivalence_gap(const Trajectory& traj, const TwoScalePotential& pot, double sigma_hat) {
    if (traj.dimension() != pot.dimension()) throw ShapeError("trajectory and model dimensions differ");
    if (!pot.has_scalar_drift()) {
        throw UnsupportedModelError("equivalence gap is only defined for one-parameter models");
    }
    if (traj.size() < 2) throw InsufficientDataError("equivalence gap needs at least 2 states");
    return fold(traj, PathStatistics(pot, traj.dt())).equivalence_gap(sigma_hat);
}

}  // namespace twoscale
