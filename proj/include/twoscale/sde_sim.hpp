#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "twoscale/error.hpp"
#include "twoscale/homogenize.hpp"
#include "twoscale/potentials.hpp"
#include "twoscale/random.hpp"

namespace twoscale {

//---------------------------------------------------------------------------//
/*!
 * Uniformly spaced sample path; state n is at time t0 + n * dt.
 *
 * States are stored row-major in a flat buffer.
 */
class Trajectory {
  public:
    Trajectory(std::size_t dimension, double dt, double t0, std::uint64_t seed, std::string model_tag,
               std::vector<double> data);

    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return data_.size() / dimension_; }
    double dt() const noexcept { return dt_; }
    double t0() const noexcept { return t0_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const std::string& model_tag() const noexcept { return model_tag_; }

    std::span<const double> state(std::size_t n) const noexcept { return {data_.data() + n * dimension_, dimension_}; }
    std::span<const double> data() const noexcept { return data_; }

  private:
    std::size_t dimension_;
    double dt_;
    double t0_;
    std::uint64_t seed_;
    std::string model_tag_;
    std::vector<double> data_;
};

/// Parameters of one Euler-Maruyama run.
struct SimConfig {
    double epsilon = 0.1;
    /// Temperature; zero gives a deterministic run.
    double sigma = 0.5;
    double dt = 1e-3;
    double horizon = 1.0;
    double burn_in = 0.0;
    std::uint64_t seed = 0;
    /// Independent noise stream for the same seed (path index).
    std::uint64_t stream = 0;

    /// Default integration step epsilon^2 / 10.
    static double default_dt(double epsilon) { return epsilon * epsilon / 10.0; }

    /// Throws ConfigError; the dt <= epsilon^2/10 rule applies only to multiscale runs.
    void validate(bool multiscale) const;

    std::size_t burn_in_steps() const { return static_cast<std::size_t>(std::llround(burn_in / dt)); }
    std::size_t horizon_steps() const { return static_cast<std::size_t>(std::llround(horizon / dt)); }
};

/// States with any |x_i| beyond this are reported as a blow-up.
inline constexpr double kBlowUpThreshold = 1e8;

//---------------------------------------------------------------------------//
/*!
 * Euler-Maruyama integrator state for the multiscale or homogenized SDE.
 *
 * Multiscale:  x += -[grad V(x) + grad p(x/eps)/eps] dt + sqrt(2 sigma dt) xi
 * Homogenized: x += sum_k theta_k phi_k(x) dt + sqrt(2 Sigma_i dt) xi_i
 *
 * Noise for step k comes from NormalStream(seed, stream) at index k, counted
 * from the start of the burn-in.
 */
class EulerMaruyama {
  public:
    static EulerMaruyama multiscale(const TwoScalePotential& pot, const SimConfig& cfg, std::span<const double> x0);
    static EulerMaruyama homogenized(const HomogenizedCoefficients& coeffs, const TwoScalePotential& pot,
                                     const SimConfig& cfg, std::span<const double> x0);

    /// Advance one step; throws BlowUpError on a non-finite or runaway state.
    void advance();

    std::span<const double> state() const noexcept { return x_; }
    std::uint64_t step_index() const noexcept { return step_; }

  private:
    EulerMaruyama(const TwoScalePotential& pot, const SimConfig& cfg, std::span<const double> x0);

    TwoScalePotential pot_;
    double dt_;
    double inv_epsilon_;
    bool multiscale_;
    NormalStream noise_;
    std::vector<double> theta_;
    std::vector<double> noise_scale_;
    std::vector<double> x_;
    std::vector<double> work_;
    std::vector<double> features_;
    std::vector<double> xi_;
    std::uint64_t step_ = 0;
};

/*!
 * Run the integrator through burn-in and then over the horizon, passing every
 * retained state (horizon_steps + 1 of them, starting at t = burn_in) to sink.
 * Nothing is materialized; sink(std::span<const double>) sees a transient view.
 */
template <class Sink>
void run(EulerMaruyama& em, const SimConfig& cfg, Sink&& sink) {
    const std::size_t burn = cfg.burn_in_steps();
    const std::size_t steps = cfg.horizon_steps();
    for (std::size_t k = 0; k < burn; ++k) em.advance();
    sink(em.state());
    for (std::size_t k = 0; k < steps; ++k) {
        em.advance();
        sink(em.state());
    }
}

Trajectory simulate_multiscale(const TwoScalePotential& pot, const SimConfig& cfg, std::span<const double> x0);

Trajectory simulate_homogenized(const HomogenizedCoefficients& coeffs, const TwoScalePotential& pot,
                                const SimConfig& cfg, std::span<const double> x0);

/// Burn-in horizon 20 / (stiffness * min K) used by sample_invariant.
double invariant_burn_in(const TwoScalePotential& pot, double sigma);

/// Approximate draw from the multiscale Gibbs measure: run from 0 for the burn-in horizon.
std::vector<double> sample_invariant(const TwoScalePotential& pot, double epsilon, double sigma, std::uint64_t seed);

/// Keep states 0, stride, 2 stride, ...; dt is multiplied by stride.
Trajectory subsample(const Trajectory& traj, std::size_t stride);

}  // namespace twoscale
