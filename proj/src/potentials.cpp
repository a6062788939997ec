#include "twoscale/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twoscale/error.hpp"

namespace twoscale {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t slow_dimension(const SlowPotential& slow) {
    return std::holds_alternative<Quadratic2D>(slow) ? 2 : 1;
}

void validate_slow(const SlowPotential& slow) {
    std::visit(Overloaded{
                   [](const Quadratic1D& m) {
                       if (!std::isfinite(m.alpha)) throw ConfigError("ou: alpha must be finite");
                   },
                   [](const Bistable1D& m) {
                       if (!std::isfinite(m.alpha) || !std::isfinite(m.beta)) {
                           throw ConfigError("bistable: alpha and beta must be finite");
                       }
                   },
                   [](const Monomial1D& m) {
                       if (!std::isfinite(m.alpha)) throw ConfigError("monomial: alpha must be finite");
                       if (m.degree != 4 && m.degree != 6) throw ConfigError("monomial: degree must be 4 or 6");
                   },
                   [](const Quadratic2D& m) {
                       for (double b : m.B) {
                           if (!std::isfinite(b)) throw ConfigError("quad2d: B must be finite");
                       }
                       const double scale = std::max({std::abs(m.B[0]), std::abs(m.B[1]), std::abs(m.B[3]), 1.0});
                       if (std::abs(m.B[1] - m.B[2]) > 1e-12 * scale) throw ConfigError("quad2d: B must be symmetric");
                       // Sylvester's criterion for a 2x2 matrix.
                       const double det = m.B[0] * m.B[3] - m.B[1] * m.B[2];
                       if (!(m.B[0] > 0.0) || !(det > 0.0)) throw ConfigError("quad2d: B must be positive-definite");
                   },
               },
               slow);
}

double reduce_mod(double y, double period) {
    double r = std::fmod(y, period);
    return r < 0.0 ? r + period : r;
}

}  // namespace

//---------------------------------------------------------------------------//
// PeriodicPotential
//---------------------------------------------------------------------------//

PeriodicPotential::PeriodicPotential(Kind kind, double amplitude, double period)
    : kind_(kind), amplitude_(amplitude), period_(period) {
    if (!(period_ > 0.0) || !std::isfinite(period_)) throw ConfigError("periodic potential: period must be > 0");
    if (!std::isfinite(amplitude_)) throw ConfigError("periodic potential: amplitude must be finite");
}

PeriodicPotential PeriodicPotential::zero(double period) { return PeriodicPotential(Kind::Zero, 0.0, period); }

PeriodicPotential PeriodicPotential::cosine(double amplitude) {
    return PeriodicPotential(Kind::Cosine, amplitude, kTwoPi);
}

double PeriodicPotential::value(double y) const noexcept {
    return kind_ == Kind::Cosine ? amplitude_ * std::cos(y) : 0.0;
}

double PeriodicPotential::derivative(double y) const noexcept {
    return kind_ == Kind::Cosine ? -amplitude_ * std::sin(y) : 0.0;
}

double PeriodicPotential::second_derivative(double y) const noexcept {
    return kind_ == Kind::Cosine ? -amplitude_ * std::cos(y) : 0.0;
}

//---------------------------------------------------------------------------//
// TwoScalePotential
//---------------------------------------------------------------------------//

TwoScalePotential::TwoScalePotential(SlowPotential slow, std::vector<PeriodicPotential> fast, double offset)
    : slow_(slow), fast_(std::move(fast)), offset_(offset), dimension_(slow_dimension(slow)) {
    validate_slow(slow_);
    if (fast_.size() != dimension_) {
        throw ShapeError("fast part needs one periodic potential per axis (" + std::to_string(dimension_) +
                         "), got " + std::to_string(fast_.size()));
    }
    if (!std::isfinite(offset_)) throw ConfigError("potential offset must be finite");
}

bool TwoScalePotential::has_fast_part() const noexcept {
    return std::any_of(fast_.begin(), fast_.end(), [](const PeriodicPotential& p) { return !p.is_zero(); });
}

std::string TwoScalePotential::tag() const {
    return std::visit(Overloaded{
                          [](const Quadratic1D&) -> std::string { return "ou"; },
                          [](const Bistable1D&) -> std::string { return "bistable"; },
                          [](const Monomial1D& m) -> std::string { return m.degree == 4 ? "monomial4" : "monomial6"; },
                          [](const Quadratic2D&) -> std::string { return "quad2d"; },
                      },
                      slow_);
}

void TwoScalePotential::check_shape(std::span<const double> x) const {
    if (x.size() != dimension_) {
        throw ShapeError("state has length " + std::to_string(x.size()) + ", model dimension is " +
                         std::to_string(dimension_));
    }
}

double TwoScalePotential::slow_value(std::span<const double> x) const {
    check_shape(x);
    const double v = std::visit(Overloaded{
                                    [&](const Quadratic1D& m) { return 0.5 * m.alpha * x[0] * x[0]; },
                                    [&](const Bistable1D& m) {
                                        const double x2 = x[0] * x[0];
                                        return -0.5 * m.alpha * x2 + 0.25 * m.beta * x2 * x2;
                                    },
                                    [&](const Monomial1D& m) { return m.alpha * std::pow(x[0], m.degree) / m.degree; },
                                    [&](const Quadratic2D& m) {
                                        return 0.5 * (m.B[0] * x[0] * x[0] + (m.B[1] + m.B[2]) * x[0] * x[1] +
                                                      m.B[3] * x[1] * x[1]);
                                    },
                                },
                                slow_);
    return v + offset_;
}

void TwoScalePotential::grad_slow(std::span<const double> x, std::span<double> out) const {
    check_shape(x);
    check_shape(out);
    std::visit(Overloaded{
                   [&](const Quadratic1D& m) { out[0] = m.alpha * x[0]; },
                   [&](const Bistable1D& m) { out[0] = -m.alpha * x[0] + m.beta * x[0] * x[0] * x[0]; },
                   [&](const Monomial1D& m) {
                       const double x2 = x[0] * x[0];
                       out[0] = m.alpha * x[0] * (m.degree == 4 ? x2 : x2 * x2);
                   },
                   [&](const Quadratic2D& m) {
                       out[0] = m.B[0] * x[0] + m.B[1] * x[1];
                       out[1] = m.B[2] * x[0] + m.B[3] * x[1];
                   },
               },
               slow_);
}

std::vector<double> TwoScalePotential::grad_slow(std::span<const double> x) const {
    std::vector<double> out(dimension_);
    grad_slow(x, out);
    return out;
}

double TwoScalePotential::laplacian_slow(std::span<const double> x) const {
    check_shape(x);
    return std::visit(Overloaded{
                          [&](const Quadratic1D& m) { return m.alpha; },
                          [&](const Bistable1D& m) { return -m.alpha + 3.0 * m.beta * x[0] * x[0]; },
                          [&](const Monomial1D& m) {
                              const double x2 = x[0] * x[0];
                              return m.degree == 4 ? 3.0 * m.alpha * x2 : 5.0 * m.alpha * x2 * x2;
                          },
                          [&](const Quadratic2D& m) { return m.B[0] + m.B[3]; },
                      },
                      slow_);
}

double TwoScalePotential::fast_value(std::span<const double> y) const {
    check_shape(y);
    double v = 0.0;
    for (std::size_t i = 0; i < dimension_; ++i) v += fast_[i].value(reduce_mod(y[i], fast_[i].period()));
    return v;
}

void TwoScalePotential::grad_fast(std::span<const double> y, std::span<double> out) const {
    check_shape(y);
    check_shape(out);
    for (std::size_t i = 0; i < dimension_; ++i) out[i] = fast_[i].derivative(y[i]);
}

std::vector<double> TwoScalePotential::grad_fast(std::span<const double> y) const {
    std::vector<double> out(dimension_);
    grad_fast(y, out);
    return out;
}

std::vector<DriftParameter> TwoScalePotential::drift_parameters() const {
    return std::visit(Overloaded{
                          [](const Quadratic1D& m) { return std::vector<DriftParameter>{{"alpha", m.alpha}}; },
                          [](const Bistable1D& m) {
                              return std::vector<DriftParameter>{{"alpha", m.alpha}, {"beta", m.beta}};
                          },
                          [](const Monomial1D& m) { return std::vector<DriftParameter>{{"alpha", m.alpha}}; },
                          [](const Quadratic2D& m) {
                              return std::vector<DriftParameter>{
                                  {"B11", m.B[0]}, {"B12", m.B[1]}, {"B21", m.B[2]}, {"B22", m.B[3]}};
                          },
                      },
                      slow_);
}

std::size_t TwoScalePotential::drift_parameter_count() const noexcept {
    return std::visit(Overloaded{
                          [](const Quadratic1D&) -> std::size_t { return 1; },
                          [](const Bistable1D&) -> std::size_t { return 2; },
                          [](const Monomial1D&) -> std::size_t { return 1; },
                          [](const Quadratic2D&) -> std::size_t { return 4; },
                      },
                      slow_);
}

void TwoScalePotential::drift_features(std::span<const double> x, std::span<double> out) const {
    check_shape(x);
    if (out.size() != drift_parameter_count() * dimension_) throw ShapeError("drift feature buffer has wrong size");
    std::visit(Overloaded{
                   [&](const Quadratic1D&) { out[0] = -x[0]; },
                   [&](const Bistable1D&) {
                       out[0] = x[0];
                       out[1] = -x[0] * x[0] * x[0];
                   },
                   [&](const Monomial1D& m) {
                       const double x2 = x[0] * x[0];
                       out[0] = -x[0] * (m.degree == 4 ? x2 : x2 * x2);
                   },
                   [&](const Quadratic2D&) {
                       // theta = (B11, B12, B21, B22); drift_i = -sum_j B_ij x_j
                       out[0] = -x[0];
                       out[1] = 0.0;
                       out[2] = -x[1];
                       out[3] = 0.0;
                       out[4] = 0.0;
                       out[5] = -x[0];
                       out[6] = 0.0;
                       out[7] = -x[1];
                   },
               },
               slow_);
}

bool TwoScalePotential::has_scalar_drift() const noexcept {
    return std::holds_alternative<Quadratic1D>(slow_) || std::holds_alternative<Monomial1D>(slow_);
}

namespace {
int basis_degree(const SlowPotential& slow) {
    if (const auto* m = std::get_if<Monomial1D>(&slow)) return m->degree;
    if (std::holds_alternative<Quadratic1D>(slow)) return 2;
    throw UnsupportedModelError("model has no single-parameter drift basis");
}
}  // namespace

double TwoScalePotential::basis_value(double x) const {
    const int n = basis_degree(slow_);
    return std::pow(x, n) / n;
}

double TwoScalePotential::basis_derivative(double x) const {
    const int n = basis_degree(slow_);
    const double x2 = x * x;
    switch (n) {
        case 2: return x;
        case 4: return x * x2;
        default: return x * x2 * x2;
    }
}

double TwoScalePotential::basis_laplacian(double x) const {
    const int n = basis_degree(slow_);
    const double x2 = x * x;
    switch (n) {
        case 2: return 1.0;
        case 4: return 3.0 * x2;
        default: return 5.0 * x2 * x2;
    }
}

double TwoScalePotential::stiffness() const noexcept {
    return std::visit(Overloaded{
                          [](const Quadratic1D& m) { return m.alpha; },
                          [](const Bistable1D& m) { return m.alpha; },
                          [](const Monomial1D& m) { return m.alpha; },
                          [](const Quadratic2D& m) {
                              const double mean = 0.5 * (m.B[0] + m.B[3]);
                              const double det = m.B[0] * m.B[3] - m.B[1] * m.B[2];
                              return mean - std::sqrt(std::max(mean * mean - det, 0.0));
                          },
                      },
                      slow_);
}

//---------------------------------------------------------------------------//

TwoScalePotential make_potential(const ModelSpec& spec) {
    SlowPotential slow;
    if (spec.tag == "ou") {
        slow = Quadratic1D{spec.alpha};
    } else if (spec.tag == "bistable") {
        slow = Bistable1D{spec.alpha, spec.beta};
    } else if (spec.tag == "monomial4") {
        slow = Monomial1D{spec.alpha, 4};
    } else if (spec.tag == "monomial6") {
        slow = Monomial1D{spec.alpha, 6};
    } else if (spec.tag == "quad2d") {
        slow = Quadratic2D{spec.B};
    } else {
        throw ConfigError("unknown model tag '" + spec.tag + "'");
    }

    const std::size_t dim = slow_dimension(slow);
    std::vector<PeriodicPotential> fast;
    fast.reserve(dim);
    if (spec.fast == "zero") {
        fast.assign(dim, PeriodicPotential::zero());
    } else if (spec.fast == "cosine") {
        if (spec.amplitudes.size() != 1 && spec.amplitudes.size() != dim) {
            throw ConfigError("cosine fast part needs 1 or " + std::to_string(dim) + " amplitudes");
        }
        for (std::size_t i = 0; i < dim; ++i) {
            fast.push_back(PeriodicPotential::cosine(spec.amplitudes.size() == 1 ? spec.amplitudes[0]
                                                                                 : spec.amplitudes[i]));
        }
    } else {
        throw ConfigError("unknown fast potential '" + spec.fast + "'");
    }
    return TwoScalePotential(slow, std::move(fast));
}

}  // namespace twoscale
