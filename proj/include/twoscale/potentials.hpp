#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace twoscale {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

//---------------------------------------------------------------------------//
// Large-scale (slow) potentials. Parameters live inside the potential, so
// grad_slow returns the full gradient, e.g. alpha * x for Quadratic1D.
//---------------------------------------------------------------------------//

/// V(x) = alpha x^2 / 2
struct Quadratic1D {
    double alpha = 1.0;
};

/// V(x) = -alpha x^2 / 2 + beta x^4 / 4
struct Bistable1D {
    double alpha = 1.0;
    double beta = 1.0;
};

/// V(x) = alpha x^degree / degree, degree in {4, 6}
struct Monomial1D {
    double alpha = 1.0;
    int degree = 4;
};

/// V(x) = x^T B x / 2 with B symmetric positive-definite, stored row-major.
struct Quadratic2D {
    std::array<double, 4> B{2.0, 2.0, 2.0, 3.0};
};

using SlowPotential = std::variant<Quadratic1D, Bistable1D, Monomial1D, Quadratic2D>;

//---------------------------------------------------------------------------//
/*!
 * One-dimensional periodic fluctuation potential p(y).
 *
 * Cosine is p(y) = a cos(y) and always has period 2 pi. Zero carries an
 * arbitrary period so the quadrature code can be exercised on other cells.
 */
class PeriodicPotential {
  public:
    enum class Kind { Zero, Cosine };

    static PeriodicPotential zero(double period = kTwoPi);
    static PeriodicPotential cosine(double amplitude);

    Kind kind() const noexcept { return kind_; }
    double amplitude() const noexcept { return amplitude_; }
    double period() const noexcept { return period_; }
    bool is_zero() const noexcept { return kind_ == Kind::Zero || amplitude_ == 0.0; }

    double value(double y) const noexcept;
    double derivative(double y) const noexcept;
    double second_derivative(double y) const noexcept;

  private:
    PeriodicPotential(Kind kind, double amplitude, double period);

    Kind kind_;
    double amplitude_;
    double period_;
};

/// A named drift parameter, e.g. {"alpha", 1.0} or {"B12", 2.0}.
struct DriftParameter {
    std::string name;
    double value;
};

//---------------------------------------------------------------------------//
/*!
 * Two-scale potential V(x) + p(x / epsilon) with separable fast part.
 *
 * The slow drift -grad V is linear in the model parameters theta:
 * -grad V(x) = sum_k theta_k phi_k(x). drift_features() exposes the phi_k,
 * which the drift estimators regress on and the homogenized integrator uses
 * with K-scaled theta.
 */
class TwoScalePotential {
  public:
    TwoScalePotential(SlowPotential slow, std::vector<PeriodicPotential> fast, double offset = 0.0);

    std::size_t dimension() const noexcept { return dimension_; }
    const SlowPotential& slow() const noexcept { return slow_; }
    std::span<const PeriodicPotential> fast() const noexcept { return fast_; }
    bool has_fast_part() const noexcept;

    /// Catalog tag: "ou", "bistable", "monomial4", "monomial6" or "quad2d".
    std::string tag() const;

    double slow_value(std::span<const double> x) const;
    void grad_slow(std::span<const double> x, std::span<double> out) const;
    std::vector<double> grad_slow(std::span<const double> x) const;
    double laplacian_slow(std::span<const double> x) const;

    /// Sum of the per-axis periodic potentials, y taken modulo the period.
    double fast_value(std::span<const double> y) const;
    void grad_fast(std::span<const double> y, std::span<double> out) const;
    std::vector<double> grad_fast(std::span<const double> y) const;

    // Linear drift parameterization.
    std::vector<DriftParameter> drift_parameters() const;
    std::size_t drift_parameter_count() const noexcept;
    /// Writes phi_k(x) for every parameter k; out is (count x dimension), row-major.
    void drift_features(std::span<const double> x, std::span<double> out) const;

    /// True for ou, monomial4 and monomial6: V = alpha * U with a unit-parameter basis U.
    bool has_scalar_drift() const noexcept;
    /// Unit-parameter basis U (alpha = 1, no offset). Only for scalar-drift models.
    double basis_value(double x) const;
    double basis_derivative(double x) const;
    double basis_laplacian(double x) const;

    /// Smallest curvature scale of the slow part; alpha or the smallest eigenvalue of B.
    double stiffness() const noexcept;

  private:
    void check_shape(std::span<const double> x) const;

    SlowPotential slow_;
    std::vector<PeriodicPotential> fast_;
    double offset_;
    std::size_t dimension_;
};

/// String-addressable description of a catalog model, as used by the harness.
struct ModelSpec {
    std::string tag = "ou";
    double alpha = 1.0;
    double beta = 2.0;
    std::array<double, 4> B{2.0, 2.0, 2.0, 3.0};
    std::string fast = "cosine";
    /// One amplitude per axis; a single value is broadcast.
    std::vector<double> amplitudes{1.0};
};

TwoScalePotential make_potential(const ModelSpec& spec);

}  // namespace twoscale
