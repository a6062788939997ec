#pragma once

#include <cstddef>
#include <vector>

#include "twoscale/potentials.hpp"

namespace twoscale {

/// Equispaced periodic quadrature with node doubling.
struct QuadratureConfig {
    std::size_t nodes = 64;
    double refinement_tol = 1e-13;
    std::size_t max_nodes = std::size_t{1} << 20;

    void validate() const;
};

/// Z = int_0^L exp(-p/sigma) dy and Z_hat = int_0^L exp(p/sigma) dy.
struct PartitionIntegrals {
    double Z;
    double Z_hat;
    /// Logarithms are kept separately; Z and Z_hat overflow for small sigma.
    double log_Z;
    double log_Z_hat;
    /// Node count at which both integrals converged.
    std::size_t nodes;
};

PartitionIntegrals partition_integrals(const PeriodicPotential& fast, double sigma, const QuadratureConfig& quad = {});

/// Depletion factor K = L^2 / (Z Z_hat).
double effective_K_1d(const PeriodicPotential& fast, double sigma, const QuadratureConfig& quad = {});

/*!
 * Depletion factor from the one-dimensional cell problem,
 * K = int (1 + phi'(y))^2 mu(dy), with 1 + phi' = L exp(p/sigma) / Z_hat and
 * mu(dy) = exp(-p/sigma) dy / Z. Evaluated by its own quadrature pass; used to
 * cross-check effective_K_1d.
 */
double effective_K_via_cell(const PeriodicPotential& fast, double sigma, const QuadratureConfig& quad = {});

/*!
 * Homogenized coefficients of a catalog model.
 *
 * drift holds the K-scaled model parameters in the order of
 * TwoScalePotential::drift_parameters(): A = alpha K for scalar models,
 * (A, B) = K (alpha, beta) for the bistable model, and the row-scaled matrix
 * K B = (K_1 B11, K_1 B12, K_2 B21, K_2 B22) for quad2d. Off-diagonal
 * depletion is exactly zero by separability and is not stored.
 */
struct HomogenizedCoefficients {
    std::vector<double> K;
    std::vector<DriftParameter> drift;
    std::vector<double> Sigma;

    std::vector<double> drift_values() const;
};

HomogenizedCoefficients homogenized_coeffs(const TwoScalePotential& pot, double sigma,
                                           const QuadratureConfig& quad = {});

}  // namespace twoscale
