#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twoscale/config.hpp"
#include "twoscale/estimators.hpp"
#include "twoscale/potentials.hpp"
#include "twoscale/sde_sim.hpp"

namespace twoscale {

/// Model section shared by every config file: model.tag, model.alpha, model.beta,
/// model.B (four entries, row-major), model.fast, model.amplitudes.
ModelSpec model_from_config(const KeyValueConfig& cfg);

//---------------------------------------------------------------------------//
/*!
 * Parameter sweep over (epsilon, sigma, repetition, stride).
 *
 * Config keys (defaults in parentheses):
 *   sweep.epsilons, sweep.sigmas, sweep.strides   comma lists, required
 *   sweep.dt          (auto = epsilon^2/10)
 *   sweep.horizon     (2000)
 *   sweep.burn_in     (100)
 *   sweep.repetitions (4)
 *   sweep.seed        (1)
 *   sweep.estimators  (qv_sigma,mle_drift,gibbs_drift)
 *   output.path       (optional)
 */
struct SweepConfig {
    ModelSpec model;
    std::vector<double> epsilons;
    std::vector<double> sigmas;
    std::vector<std::size_t> strides;
    /// Explicit integration step; empty means epsilon^2 / 10.
    std::optional<double> dt;
    double horizon = 2000.0;
    double burn_in = 100.0;
    std::size_t repetitions = 4;
    std::uint64_t seed = 1;
    std::vector<EstimatorId> estimators{EstimatorId::QvSigma, EstimatorId::MleDrift, EstimatorId::GibbsDrift};
    std::string output;

    static SweepConfig from_config(const KeyValueConfig& cfg);
    void validate() const;
    double dt_for(double epsilon) const;
    /// Seed of the path simulated for one (epsilon, sigma, repetition) cell.
    std::uint64_t cell_seed(std::size_t epsilon_index, std::size_t sigma_index, std::size_t repetition) const;
};

/// One line of sweep output. Error rows carry a status other than "ok".
struct SweepRow {
    std::string model;
    double epsilon;
    double sigma;
    double dt;
    std::size_t stride;
    double delta;
    std::string estimator;
    std::string param;
    double value;
    double target_hom;
    double target_raw;
    std::size_t rep;
    std::uint64_t seed;
    std::size_t n_obs;
    std::string status;

    bool operator==(const SweepRow&) const = default;
};

/*!
 * Simulate one multiscale path per (epsilon, sigma, repetition) and apply
 * every applicable estimator at every stride of that same path. Cells run on
 * `workers` threads; output order is (epsilon, sigma, repetition, stride,
 * estimator) independent of the schedule.
 */
std::vector<SweepRow> run_sweep(const SweepConfig& cfg, std::size_t workers = 1);

/// run_sweep restricted to stride 1 (no subsampling); rejects any other stride list.
std::vector<SweepRow> run_bias_experiment(const SweepConfig& cfg, std::size_t workers = 1);

inline constexpr const char* kSweepCsvHeader =
    "model,epsilon,sigma,dt,stride,delta,estimator,param,value,target_hom,target_raw,rep,seed,n_obs,status";

void write_csv(std::ostream& out, std::span<const SweepRow> rows);
/// Writes the CSV to path; throws FileError on failure.
void emit_csv(std::span<const SweepRow> rows, const std::string& path);
std::vector<SweepRow> parse_csv(std::istream& in);

/// Stride whose estimate is closest to the homogenized target on one curve.
struct OptimalStride {
    std::string model;
    double epsilon;
    double sigma;
    std::size_t rep;
    std::string estimator;
    std::string param;
    std::size_t stride;
    double delta;
    double value;
    double target_hom;
};

/// One entry per (model, epsilon, sigma, rep, estimator, param) curve with ok rows.
std::vector<OptimalStride> optimal_strides(std::span<const SweepRow> rows);

/// Mean over repetitions at one point of a curve.
struct CurvePoint {
    std::string model;
    double epsilon;
    double sigma;
    std::size_t stride;
    double delta;
    std::string estimator;
    std::string param;
    double mean;
    /// Standard error of the mean; zero when only one repetition is present.
    double std_error;
    std::size_t count;
    double target_hom;
    double target_raw;
};

/// Average ok rows over repetitions, keeping the sweep's row order.
std::vector<CurvePoint> average_over_repetitions(std::span<const SweepRow> rows);

//---------------------------------------------------------------------------//
/*!
 * Single simulation run for the `simulate` subcommand.
 *
 * Config keys: model.* as above; sim.kind (multiscale | homogenized),
 * sim.epsilon, sim.sigma, sim.dt (auto), sim.horizon, sim.burn_in (0),
 * sim.seed (1), sim.x0 (origin, comma list).
 */
struct SimulateConfig {
    ModelSpec model;
    bool homogenized = false;
    SimConfig sim;
    std::vector<double> x0;

    static SimulateConfig from_config(const KeyValueConfig& cfg);
};

Trajectory run_simulation(const SimulateConfig& cfg);

}  // namespace twoscale
