#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twoscale/potentials.hpp"
#include "twoscale/sde_sim.hpp"

namespace twoscale {

enum class EstimatorId { QvSigma, MleDrift, GibbsDrift };

std::string_view to_string(EstimatorId id) noexcept;
/// Parses "qv_sigma", "mle_drift" or "gibbs_drift".
EstimatorId parse_estimator(std::string_view name);

struct NamedValue {
    std::string name;
    double value;
};

/// Experiment coordinates attached to an estimate.
struct EstimateContext {
    double epsilon = std::numeric_limits<double>::quiet_NaN();
    double sigma = std::numeric_limits<double>::quiet_NaN();
    double dt = std::numeric_limits<double>::quiet_NaN();
    std::size_t stride = 1;
    std::uint64_t seed = 0;
    std::string model_tag;
};

struct EstimateRecord {
    EstimatorId estimator;
    std::vector<NamedValue> values;
    std::size_t n_obs;
    double delta;
    EstimateContext context;

    /// Value by name; throws std::out_of_range when absent.
    double value(std::string_view name) const;
};

/// Difference between the Gibbs-structure and likelihood drift estimates.
struct EquivalenceGap {
    /// |A_tilde - A_hat|
    double gap;
    /// (U(x_0) - U(x_N)) / (sum |U'(x_n)|^2 delta), with U the unit-parameter basis potential.
    double boundary_term;
};

//---------------------------------------------------------------------------//
/*!
 * Sufficient statistics of a discretely observed path, accumulated one
 * observation at a time.
 *
 * Every estimator is a closed-form function of these sums, so a path can be
 * streamed through observe() without being stored. The stochastic integral is
 * discretized at the left endpoint.
 */
class PathStatistics {
  public:
    /// Quadratic variation only.
    PathStatistics(std::size_t dimension, double delta);
    /// Quadratic variation and drift regression for the given model.
    PathStatistics(const TwoScalePotential& pot, double delta);

    void observe(std::span<const double> x);

    std::size_t n_obs() const noexcept { return n_; }
    double delta() const noexcept { return delta_; }

    EstimateRecord qv_sigma() const;
    EstimateRecord mle_drift() const;
    EstimateRecord gibbs_drift(double sigma_hat) const;
    EquivalenceGap equivalence_gap(double sigma_hat) const;

  private:
    void require_increments() const;
    void require_model() const;
    void require_scalar_drift() const;
    double mle_scalar() const;

    std::optional<TwoScalePotential> pot_;
    std::size_t dim_;
    std::size_t params_ = 0;
    double delta_;
    std::size_t n_ = 0;
    bool started_ = false;

    std::vector<double> prev_;
    std::vector<double> increment_;
    std::vector<double> features_;

    std::vector<double> qv_;    // d x d, sum of dx (x) dx
    std::vector<double> gram_;  // p x p, sum of <phi_k, phi_l> delta
    std::vector<double> rhs_;   // p, sum of <phi_k, dx>

    // Unit-parameter basis sums for scalar-drift models.
    double sum_grad_sq_ = 0.0;
    double sum_grad_dx_ = 0.0;
    double sum_laplacian_ = 0.0;
    double first_basis_value_ = 0.0;
    double last_basis_value_ = 0.0;
};

/*!
 * Statistics for several strides of the same path at once: observation k of
 * the underlying sequence is fed to every stride s with k % s == 0.
 */
class MultiStrideStatistics {
  public:
    MultiStrideStatistics(const TwoScalePotential& pot, double dt, std::span<const std::size_t> strides);

    void observe(std::span<const double> x);

    std::size_t count() const noexcept { return stats_.size(); }
    std::size_t stride(std::size_t i) const noexcept { return strides_[i]; }
    const PathStatistics& at(std::size_t i) const noexcept { return stats_[i]; }

  private:
    std::vector<std::size_t> strides_;
    std::vector<PathStatistics> stats_;
    std::uint64_t index_ = 0;
};

//---------------------------------------------------------------------------//
// Estimators on materialized trajectories; delta is traj.dt().
//---------------------------------------------------------------------------//

/*!
 * Quadratic-variation diffusion estimate.
 *
 * Scalar value "sigma" = sum |dx|^2 / (2 N delta d). For d >= 2 the full
 * tensor sum dx (x) dx / (2 N delta) is added as "sigma11", "sigma12", ...
 */
EstimateRecord qv_sigma(const Trajectory& traj);

/*!
 * Likelihood drift estimate. One-parameter models use the closed form
 * -sum <U'(x_n), dx_n> / (sum |U'(x_n)|^2 delta); multi-parameter models solve
 * the least-squares normal equations of dx_n ~ drift(x_n) delta.
 */
EstimateRecord mle_drift(const Trajectory& traj, const TwoScalePotential& pot);

/// A_tilde = sigma_hat sum U''(x_n) / sum |U'(x_n)|^2, one-parameter models only.
EstimateRecord gibbs_drift(const Trajectory& traj, const TwoScalePotential& pot, double sigma_hat);

EquivalenceGap estimator_equivalence_gap(const Trajectory& traj, const TwoScalePotential& pot, double sigma_hat);

}  // namespace twoscale
