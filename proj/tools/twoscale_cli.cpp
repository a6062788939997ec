// Command-line front end: coeffs, simulate, estimate, sweep.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "twoscale/config.hpp"
#include "twoscale/error.hpp"
#include "twoscale/estimators.hpp"
#include "twoscale/harness.hpp"
#include "twoscale/homogenize.hpp"
#include "twoscale/potentials.hpp"
#include "twoscale/sde_sim.hpp"
#include "twoscale/trajectory_io.hpp"

namespace {

using namespace twoscale;

std::string g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct ModelOptions {
    std::string tag = "ou";
    double alpha = 1.0;
    double beta = 2.0;
    std::string B = "2,2,2,3";
    std::string fast = "cosine";
    std::string amplitudes = "1";

    void add_to(CLI::App& app) {
        app.add_option("--model", tag, "ou | bistable | monomial4 | monomial6 | quad2d")->required();
        app.add_option("--alpha", alpha, "slow-potential alpha");
        app.add_option("--beta", beta, "bistable beta");
        app.add_option("--B", B, "quad2d matrix, row-major comma list");
        app.add_option("--fast", fast, "zero | cosine");
        app.add_option("--amplitudes", amplitudes, "cosine amplitude per axis, comma list");
    }

    ModelSpec spec() const {
        ModelSpec m;
        m.tag = tag;
        m.alpha = alpha;
        m.beta = beta;
        const auto b = split_list(B);
        if (b.size() != 4) throw ConfigError("--B needs 4 entries");
        for (std::size_t i = 0; i < 4; ++i) m.B[i] = parse_double(b[i]);
        m.fast = fast;
        m.amplitudes.clear();
        for (const auto& a : split_list(amplitudes)) m.amplitudes.push_back(parse_double(a));
        return m;
    }
};

void print_coeffs(const ModelSpec& spec, double sigma) {
    const auto pot = make_potential(spec);
    const auto c = homogenized_coeffs(pot, sigma);
    const std::size_t d = pot.dimension();
    // Drift parameters per axis: A (and B) in 1D, row i of K B for quad2d.
    const std::size_t per_axis = c.drift.size() / d;
    std::cout << "axis,K,Sigma";
    if (d == 1) {
        std::cout << (per_axis == 1 ? ",A" : ",A,B");
    } else {
        for (std::size_t k = 0; k < per_axis; ++k) std::cout << ",KB_" << k + 1;
    }
    std::cout << '\n';
    for (std::size_t i = 0; i < d; ++i) {
        std::cout << i + 1 << ',' << g12(c.K[i]) << ',' << g12(c.Sigma[i]);
        for (std::size_t k = 0; k < per_axis; ++k) std::cout << ',' << g12(c.drift[i * per_axis + k].value);
        std::cout << '\n';
    }
}

void run_estimate(const std::string& traj_path, const std::string& model_tag, const std::string& strides_text,
                  const std::string& estimators_text, const std::string& out_path) {
    const auto file = read_trajectory(traj_path);
    const auto& traj = file.trajectory;
    ModelSpec spec;
    spec.tag = model_tag.empty() ? traj.model_tag() : model_tag;
    if (auto slash = spec.tag.find('/'); slash != std::string::npos) spec.tag.resize(slash);
    // Only the drift basis of the model matters for estimation.
    spec.fast = "zero";
    const auto pot = make_potential(spec);
    if (pot.dimension() != traj.dimension()) throw ShapeError("trajectory dimension does not match --model");

    std::vector<std::size_t> strides;
    for (const auto& s : split_list(strides_text)) strides.push_back(parse_uint(s));
    std::vector<EstimatorId> estimators;
    for (const auto& e : split_list(estimators_text)) estimators.push_back(parse_estimator(e));

    std::ofstream out(out_path);
    if (!out) throw FileError("cannot open CSV for writing", out_path);
    out << "model,epsilon,sigma,dt,stride,delta,estimator,param,value,n_obs,seed,status\n";
    for (std::size_t stride : strides) {
        const auto sub = subsample(traj, stride);
        double sigma_hat = -1.0;
        for (EstimatorId id : estimators) {
            std::vector<NamedValue> values;
            std::size_t n_obs = sub.size() - 1;
            std::string status = "ok";
            try {
                EstimateRecord rec = id == EstimatorId::QvSigma    ? qv_sigma(sub)
                                     : id == EstimatorId::MleDrift ? mle_drift(sub, pot)
                                                                   : gibbs_drift(sub, pot,
                                                                                 sigma_hat > 0.0
                                                                                     ? sigma_hat
                                                                                     : qv_sigma(sub).value("sigma"));
                if (id == EstimatorId::QvSigma) sigma_hat = rec.value("sigma");
                values = rec.values;
                n_obs = rec.n_obs;
            } catch (const Error& e) {
                status = "error";
                values.push_back({"-", std::numeric_limits<double>::quiet_NaN()});
                std::cerr << "warning: " << to_string(id) << " at stride " << stride << ": " << e.what() << '\n';
            }
            for (const auto& v : values) {
                out << spec.tag << ',' << g12(file.meta.epsilon) << ',' << g12(file.meta.sigma) << ',' << g12(traj.dt())
                    << ',' << stride << ',' << g12(sub.dt()) << ',' << to_string(id) << ',' << v.name << ','
                    << g12(v.value) << ',' << n_obs << ',' << traj.seed() << ',' << status << '\n';
            }
        }
    }
    if (!out) throw FileError("write failed", out_path);
}

void run_sweep_command(const std::string& config_path, std::string out_path, std::size_t workers) {
    const auto cfg = SweepConfig::from_config(KeyValueConfig::load(config_path));
    if (out_path.empty()) out_path = cfg.output;
    if (out_path.empty()) throw ConfigError("no output path: pass --out or set output.path");
    const auto rows = run_sweep(cfg, workers);
    emit_csv(rows, out_path);

    std::cout << "wrote " << rows.size() << " rows to " << out_path << '\n';
    std::cout << "optimal strides (closest to the homogenized target):\n";
    for (const auto& o : optimal_strides(rows)) {
        std::cout << "  eps=" << g12(o.epsilon) << " sigma=" << g12(o.sigma) << " rep=" << o.rep << ' ' << o.estimator
                  << '/' << o.param << ": stride=" << o.stride << " delta=" << g12(o.delta) << " value=" << g12(o.value)
                  << " target=" << g12(o.target_hom) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-scale Langevin simulation, homogenization and subsampled estimation"};
    app.require_subcommand(1);

    auto* coeffs = app.add_subcommand("coeffs", "print homogenized coefficients");
    ModelOptions coeff_model;
    coeff_model.add_to(*coeffs);
    double sigma = 0.5;
    coeffs->add_option("--sigma", sigma, "temperature")->required();

    auto* simulate = app.add_subcommand("simulate", "simulate a trajectory from a config file");
    std::string sim_config;
    std::string sim_out;
    simulate->add_option("--config", sim_config)->required();
    simulate->add_option("--out", sim_out, "trajectory file (.bin for binary, CSV otherwise)")->required();

    auto* estimate = app.add_subcommand("estimate", "apply estimators to a trajectory file");
    std::string traj_path;
    std::string est_model;
    std::string strides = "1";
    std::string estimators = "qv_sigma,mle_drift";
    std::string est_out;
    estimate->add_option("--traj", traj_path)->required();
    estimate->add_option("--model", est_model, "model tag (defaults to the trajectory's)");
    estimate->add_option("--strides", strides, "comma list");
    estimate->add_option("--estimators", estimators, "qv_sigma,mle_drift,gibbs_drift");
    estimate->add_option("--out", est_out)->required();

    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep from a config file");
    std::string sweep_config;
    std::string sweep_out;
    std::size_t workers = 1;
    sweep->add_option("--config", sweep_config)->required();
    sweep->add_option("--out", sweep_out);
    sweep->add_option("--workers", workers)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*coeffs) {
            print_coeffs(coeff_model.spec(), sigma);
        } else if (*simulate) {
            const auto cfg = SimulateConfig::from_config(KeyValueConfig::load(sim_config));
            const auto traj = run_simulation(cfg);
            write_trajectory(sim_out, traj, {cfg.sim.epsilon, cfg.sim.sigma});
            std::cout << "wrote " << traj.size() << " states to " << sim_out << '\n';
        } else if (*estimate) {
            run_estimate(traj_path, est_model, strides, estimators, est_out);
        } else if (*sweep) {
            run_sweep_command(sweep_config, sweep_out, workers);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
