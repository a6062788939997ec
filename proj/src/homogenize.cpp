#include "twoscale/homogenize.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>

#include "twoscale/error.hpp"

namespace twoscale {
namespace {

void check_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be positive and finite");
}

/*!
 * log of the periodic trapezoid rule for int_0^L exp(g(y)) dy on n nodes.
 * The maximum exponent is factored out before exponentiating.
 */
template <class Exponent>
double log_trapezoid(Exponent&& g, double period, std::size_t n) {
    const double h = period / static_cast<double>(n);
    std::vector<double> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = g(h * static_cast<double>(i));
    const double m = *std::max_element(e.begin(), e.end());
    double sum = 0.0;
    for (double v : e) sum += std::exp(v - m);
    return m + std::log(h * sum);
}

bool converged(double log_old, double log_new, double tol) { return std::abs(std::expm1(log_new - log_old)) < tol; }

}  // namespace

void QuadratureConfig::validate() const {
    if (nodes < 16 || (nodes & (nodes - 1)) != 0) throw ConfigError("quadrature nodes must be a power of two >= 16");
    if (!(refinement_tol > 0.0)) throw ConfigError("quadrature refinement_tol must be > 0");
    if (max_nodes < nodes) throw ConfigError("quadrature node budget is smaller than the initial node count");
}

PartitionIntegrals partition_integrals(const PeriodicPotential& fast, double sigma, const QuadratureConfig& quad) {
    check_sigma(sigma);
    quad.validate();
    const double L = fast.period();
    auto minus = [&](double y) { return -fast.value(y) / sigma; };
    auto plus = [&](double y) { return fast.value(y) / sigma; };

    std::size_t n = quad.nodes;
    double log_z = log_trapezoid(minus, L, n);
    double log_zh = log_trapezoid(plus, L, n);
    double log_z_prev = std::nan("");
    while (true) {
        const std::size_t n2 = 2 * n;
        if (n2 > quad.max_nodes) {
            throw QuadratureError("partition integrals did not converge within " + std::to_string(quad.max_nodes) +
                                      " nodes",
                                  std::exp(log_z_prev), std::exp(log_z));
        }
        const double log_z2 = log_trapezoid(minus, L, n2);
        const double log_zh2 = log_trapezoid(plus, L, n2);
        const bool done = converged(log_z, log_z2, quad.refinement_tol) && converged(log_zh, log_zh2, quad.refinement_tol);
        log_z_prev = log_z;
        log_z = log_z2;
        log_zh = log_zh2;
        n = n2;
        if (done) break;
    }
    return {std::exp(log_z), std::exp(log_zh), log_z, log_zh, n};
}

double effective_K_1d(const PeriodicPotential& fast, double sigma, const QuadratureConfig& quad) {
    const auto z = partition_integrals(fast, sigma, quad);
    const double L = fast.period();
    return std::exp(2.0 * std::log(L) - z.log_Z - z.log_Z_hat);
}

double effective_K_via_cell(const PeriodicPotential& fast, double sigma, const QuadratureConfig& quad) {
    const auto z = partition_integrals(fast, sigma, quad);
    const double L = fast.period();
    // log[(1 + phi')^2 rho] = 2 (log L + p/sigma - log Z_hat) - p/sigma - log Z
    auto integrand = [&](double y) {
        const double s = fast.value(y) / sigma;
        return 2.0 * (std::log(L) + s - z.log_Z_hat) - s - z.log_Z;
    };
    std::size_t n = z.nodes;
    double log_k = log_trapezoid(integrand, L, n);
    double log_k_prev = std::nan("");
    while (true) {
        const std::size_t n2 = 2 * n;
        if (n2 > quad.max_nodes) {
            throw QuadratureError("cell-problem integral did not converge", std::exp(log_k_prev), std::exp(log_k));
        }
        const double log_k2 = log_trapezoid(integrand, L, n2);
        const bool done = converged(log_k, log_k2, quad.refinement_tol);
        log_k_prev = log_k;
        log_k = log_k2;
        n = n2;
        if (done) break;
    }
    return std::exp(log_k);
}

std::vector<double> HomogenizedCoefficients::drift_values() const {
    std::vector<double> v;
    v.reserve(drift.size());
    for (const auto& p : drift) v.push_back(p.value);
    return v;
}

HomogenizedCoefficients homogenized_coeffs(const TwoScalePotential& pot, double sigma, const QuadratureConfig& quad) {
    check_sigma(sigma);
    HomogenizedCoefficients out;
    for (const auto& fast : pot.fast()) {
        const double k = effective_K_1d(fast, sigma, quad);
        out.K.push_back(k);
        out.Sigma.push_back(sigma * k);
    }

    out.drift = pot.drift_parameters();
    if (std::holds_alternative<Quadratic2D>(pot.slow())) {
        // Row i of the drift matrix is scaled by K_i.
        out.drift[0].value *= out.K[0];
        out.drift[1].value *= out.K[0];
        out.drift[2].value *= out.K[1];
        out.drift[3].value *= out.K[1];
    } else {
        for (auto& p : out.drift) p.value *= out.K[0];
    }
    return out;
}

}  // namespace twoscale
