#include "twoscale/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "twoscale/error.hpp"
#include "twoscale/homogenize.hpp"

namespace twoscale {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

/// Short status code for a failed cell or estimate.
std::string status_of(const std::exception& e) {
    if (dynamic_cast<const BlowUpError*>(&e)) return "blowup";
    if (dynamic_cast<const DegenerateRegressionError*>(&e)) return "degenerate";
    if (dynamic_cast<const InsufficientDataError*>(&e)) return "insufficient_data";
    if (dynamic_cast<const UnsupportedModelError*>(&e)) return "unsupported";
    if (dynamic_cast<const QuadratureError*>(&e)) return "quadrature";
    return "error";
}

/// Names and targets of every value an estimator reports for a model.
struct ValueSlot {
    std::string param;
    double target_hom;
    double target_raw;
};

std::vector<ValueSlot> slots_for(EstimatorId id, const TwoScalePotential& pot, const HomogenizedCoefficients& coeffs,
                                 double sigma) {
    std::vector<ValueSlot> slots;
    const std::size_t d = pot.dimension();
    if (id == EstimatorId::QvSigma) {
        double mean_sigma = 0.0;
        for (double s : coeffs.Sigma) mean_sigma += s / static_cast<double>(d);
        slots.push_back({"sigma", mean_sigma, sigma});
        if (d >= 2) {
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    slots.push_back({"sigma" + std::to_string(i + 1) + std::to_string(j + 1),
                                     i == j ? coeffs.Sigma[i] : 0.0, i == j ? sigma : 0.0});
                }
            }
        }
        return slots;
    }
    const auto raw = pot.drift_parameters();
    for (std::size_t k = 0; k < raw.size(); ++k) slots.push_back({raw[k].name, coeffs.drift[k].value, raw[k].value});
    return slots;
}

std::vector<EstimatorId> applicable(const std::vector<EstimatorId>& requested, const TwoScalePotential& pot) {
    std::vector<EstimatorId> out;
    for (EstimatorId id : {EstimatorId::QvSigma, EstimatorId::MleDrift, EstimatorId::GibbsDrift}) {
        if (std::find(requested.begin(), requested.end(), id) == requested.end()) continue;
        if (id == EstimatorId::GibbsDrift && !pot.has_scalar_drift()) continue;
        out.push_back(id);
    }
    return out;
}

struct Cell {
    std::size_t epsilon_index;
    std::size_t sigma_index;
    std::size_t rep;
};

std::vector<SweepRow> run_cell(const SweepConfig& cfg, const TwoScalePotential& pot, const Cell& cell) {
    const double epsilon = cfg.epsilons[cell.epsilon_index];
    const double sigma = cfg.sigmas[cell.sigma_index];
    const double dt = cfg.dt_for(epsilon);
    const std::uint64_t seed = cfg.cell_seed(cell.epsilon_index, cell.sigma_index, cell.rep);
    const auto coeffs = homogenized_coeffs(pot, sigma);
    const auto estimators = applicable(cfg.estimators, pot);

    SimConfig sim;
    sim.epsilon = epsilon;
    sim.sigma = sigma;
    sim.dt = dt;
    sim.horizon = cfg.horizon;
    sim.burn_in = cfg.burn_in;
    sim.seed = seed;

    MultiStrideStatistics stats(pot, dt, cfg.strides);
    std::string cell_status = "ok";
    try {
        const std::vector<double> origin(pot.dimension(), 0.0);
        auto em = EulerMaruyama::multiscale(pot, sim, origin);
        run(em, sim, [&](std::span<const double> x) { stats.observe(x); });
    } catch (const Error& e) {
        cell_status = status_of(e);
    }

    std::vector<SweepRow> rows;
    for (std::size_t s = 0; s < stats.count(); ++s) {
        const auto& st = stats.at(s);
        const std::size_t stride = stats.stride(s);
        double sigma_hat = kNaN;
        if (cell_status == "ok") {
            try {
                sigma_hat = st.qv_sigma().value("sigma");
            } catch (const Error&) {
            }
        }
        for (EstimatorId id : estimators) {
            const auto slots = slots_for(id, pot, coeffs, sigma);
            std::vector<double> values(slots.size(), kNaN);
            std::string status = cell_status;
            if (status == "ok") {
                try {
                    EstimateRecord rec = id == EstimatorId::QvSigma    ? st.qv_sigma()
                                         : id == EstimatorId::MleDrift ? st.mle_drift()
                                                                       : st.gibbs_drift(sigma_hat);
                    for (std::size_t k = 0; k < slots.size(); ++k) values[k] = rec.value(slots[k].param);
                } catch (const Error& e) {
                    status = status_of(e);
                }
            }
            for (std::size_t k = 0; k < slots.size(); ++k) {
                rows.push_back({pot.tag(), epsilon, sigma, dt, stride, dt * static_cast<double>(stride),
                                std::string(to_string(id)), slots[k].param, values[k], slots[k].target_hom,
                                slots[k].target_raw, cell.rep, seed, st.n_obs(), status});
            }
        }
    }
    return rows;
}

std::string format_g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

//---------------------------------------------------------------------------//

ModelSpec model_from_config(const KeyValueConfig& cfg) {
    ModelSpec m;
    m.tag = cfg.get_string("model.tag", m.tag);
    m.alpha = cfg.get_double("model.alpha", m.alpha);
    m.beta = cfg.get_double("model.beta", m.beta);
    if (cfg.contains("model.B")) {
        const auto b = cfg.get_doubles("model.B");
        if (b.size() != 4) throw ConfigError("model.B needs 4 entries (row-major 2x2)");
        std::copy(b.begin(), b.end(), m.B.begin());
    }
    m.fast = cfg.get_string("model.fast", m.fast);
    if (cfg.contains("model.amplitudes")) m.amplitudes = cfg.get_doubles("model.amplitudes");
    return m;
}

namespace {
const std::set<std::string> kModelKeys{"model.tag", "model.alpha", "model.beta", "model.B", "model.fast",
                                       "model.amplitudes"};
}

SweepConfig SweepConfig::from_config(const KeyValueConfig& kv) {
    auto known = kModelKeys;
    known.insert({"sweep.epsilons", "sweep.sigmas", "sweep.strides", "sweep.dt", "sweep.horizon", "sweep.burn_in",
                  "sweep.repetitions", "sweep.seed", "sweep.estimators", "output.path"});
    kv.reject_unknown(known);

    SweepConfig cfg;
    cfg.model = model_from_config(kv);
    cfg.epsilons = kv.get_doubles("sweep.epsilons");
    cfg.sigmas = kv.get_doubles("sweep.sigmas");
    cfg.strides = kv.get_sizes("sweep.strides");
    if (kv.contains("sweep.dt") && kv.get_string("sweep.dt") != "auto") cfg.dt = kv.get_double("sweep.dt");
    cfg.horizon = kv.get_double("sweep.horizon", cfg.horizon);
    cfg.burn_in = kv.get_double("sweep.burn_in", cfg.burn_in);
    cfg.repetitions = kv.get_uint("sweep.repetitions", cfg.repetitions);
    cfg.seed = kv.get_uint("sweep.seed", cfg.seed);
    if (kv.contains("sweep.estimators")) {
        cfg.estimators.clear();
        for (const auto& name : kv.get_strings("sweep.estimators")) cfg.estimators.push_back(parse_estimator(name));
    }
    cfg.output = kv.get_string("output.path", "");
    cfg.validate();
    return cfg;
}

void SweepConfig::validate() const {
    make_potential(model);
    if (epsilons.empty() || sigmas.empty() || strides.empty()) {
        throw ConfigError("sweep needs non-empty epsilon, sigma and stride lists");
    }
    for (double e : epsilons) {
        if (!(e > 0.0) || !(e <= 1.0)) throw ConfigError("epsilon must lie in (0, 1]");
        if (dt && *dt > SimConfig::default_dt(e) * (1.0 + 1e-9)) {
            throw ConfigError("sweep.dt exceeds epsilon^2 / 10 for epsilon = " + format_g12(e));
        }
    }
    for (double s : sigmas) {
        if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("sigma must be positive");
    }
    for (std::size_t s : strides) {
        if (!is_power_of_two(s)) throw ConfigError("strides must be positive powers of two");
    }
    if (dt && !(*dt > 0.0)) throw ConfigError("sweep.dt must be positive");
    if (!(horizon > 0.0)) throw ConfigError("sweep.horizon must be positive");
    if (!(burn_in >= 0.0)) throw ConfigError("sweep.burn_in must be >= 0");
    if (repetitions < 1) throw ConfigError("sweep.repetitions must be >= 1");
    if (estimators.empty()) throw ConfigError("sweep needs at least one estimator");
}

double SweepConfig::dt_for(double epsilon) const { return dt ? *dt : SimConfig::default_dt(epsilon); }

std::uint64_t SweepConfig::cell_seed(std::size_t epsilon_index, std::size_t sigma_index, std::size_t repetition) const {
    const std::uint64_t coords[] = {epsilon_index, sigma_index, repetition};
    return derive_seed(seed, coords);
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg, std::size_t workers) {
    cfg.validate();
    const auto pot = make_potential(cfg.model);

    std::vector<Cell> cells;
    for (std::size_t e = 0; e < cfg.epsilons.size(); ++e) {
        for (std::size_t s = 0; s < cfg.sigmas.size(); ++s) {
            for (std::size_t r = 0; r < cfg.repetitions; ++r) cells.push_back({e, s, r});
        }
    }

    std::vector<std::vector<SweepRow>> results(cells.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                results[i] = run_cell(cfg, pot, cells[i]);
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };

    workers = std::clamp<std::size_t>(workers, 1, cells.size());
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<SweepRow> rows;
    for (auto& r : results) rows.insert(rows.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    return rows;
}

std::vector<SweepRow> run_bias_experiment(const SweepConfig& cfg, std::size_t workers) {
    if (cfg.strides != std::vector<std::size_t>{1}) throw ConfigError("bias experiment uses stride 1 only");
    return run_sweep(cfg, workers);
}

//---------------------------------------------------------------------------//

void write_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << kSweepCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.model << ',' << format_g12(r.epsilon) << ',' << format_g12(r.sigma) << ',' << format_g12(r.dt) << ','
            << r.stride << ',' << format_g12(r.delta) << ',' << r.estimator << ',' << r.param << ','
            << format_g12(r.value) << ',' << format_g12(r.target_hom) << ',' << format_g12(r.target_raw) << ','
            << r.rep << ',' << r.seed << ',' << r.n_obs << ',' << r.status << '\n';
    }
}

void emit_csv(std::span<const SweepRow> rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot open CSV for writing", path);
    write_csv(out, rows);
    out.flush();
    if (!out) throw FileError("write failed", path);
}

std::vector<SweepRow> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kSweepCsvHeader) throw ConfigError("not a sweep CSV (header mismatch)");
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) f.push_back(cell);
        if (f.size() != 15) throw ConfigError("sweep CSV row has " + std::to_string(f.size()) + " fields");
        rows.push_back({f[0], parse_double(f[1]), parse_double(f[2]), parse_double(f[3]), parse_uint(f[4]),
                        parse_double(f[5]), f[6], f[7], parse_double(f[8]), parse_double(f[9]), parse_double(f[10]),
                        parse_uint(f[11]), parse_uint(f[12]), parse_uint(f[13]), f[14]});
    }
    return rows;
}

//---------------------------------------------------------------------------//

std::vector<OptimalStride> optimal_strides(std::span<const SweepRow> rows) {
    using Key = std::tuple<std::string, double, double, std::size_t, std::string, std::string>;
    std::vector<Key> order;
    std::map<Key, OptimalStride> best;
    for (const auto& r : rows) {
        if (r.status != "ok") continue;
        const Key key{r.model, r.epsilon, r.sigma, r.rep, r.estimator, r.param};
        const OptimalStride candidate{r.model, r.epsilon, r.sigma, r.rep, r.estimator, r.param,
                                      r.stride, r.delta,   r.value, r.target_hom};
        auto it = best.find(key);
        if (it == best.end()) {
            order.push_back(key);
            best.emplace(key, candidate);
        } else if (std::abs(r.value - r.target_hom) < std::abs(it->second.value - it->second.target_hom)) {
            it->second = candidate;
        }
    }
    std::vector<OptimalStride> out;
    for (const auto& k : order) out.push_back(best.at(k));
    return out;
}

std::vector<CurvePoint> average_over_repetitions(std::span<const SweepRow> rows) {
    using Key = std::tuple<std::string, double, double, std::size_t, std::string, std::string>;
    struct Acc {
        CurvePoint point;
        double sum = 0.0;
        double sum_sq = 0.0;
    };
    std::vector<Key> order;
    std::map<Key, Acc> acc;
    for (const auto& r : rows) {
        if (r.status != "ok") continue;
        const Key key{r.model, r.epsilon, r.sigma, r.stride, r.estimator, r.param};
        auto [it, inserted] = acc.try_emplace(key);
        if (inserted) {
            order.push_back(key);
            it->second.point = {r.model, r.epsilon, r.sigma, r.stride, r.delta, r.estimator, r.param,
                                0.0,     0.0,       0,       r.target_hom, r.target_raw};
        }
        it->second.sum += r.value;
        it->second.sum_sq += r.value * r.value;
        ++it->second.point.count;
    }
    std::vector<CurvePoint> out;
    for (const auto& k : order) {
        auto& a = acc.at(k);
        const auto n = static_cast<double>(a.point.count);
        a.point.mean = a.sum / n;
        if (a.point.count > 1) {
            const double var = std::max(0.0, (a.sum_sq - n * a.point.mean * a.point.mean) / (n - 1.0));
            a.point.std_error = std::sqrt(var / n);
        }
        out.push_back(a.point);
    }
    return out;
}

//---------------------------------------------------------------------------//

SimulateConfig SimulateConfig::from_config(const KeyValueConfig& kv) {
    auto known = kModelKeys;
    known.insert({"sim.kind", "sim.epsilon", "sim.sigma", "sim.dt", "sim.horizon", "sim.burn_in", "sim.seed",
                  "sim.x0"});
    kv.reject_unknown(known);

    SimulateConfig cfg;
    cfg.model = model_from_config(kv);
    const auto kind = kv.get_string("sim.kind", "multiscale");
    if (kind != "multiscale" && kind != "homogenized") throw ConfigError("sim.kind must be multiscale or homogenized");
    cfg.homogenized = kind == "homogenized";
    cfg.sim.epsilon = kv.get_double("sim.epsilon");
    cfg.sim.sigma = kv.get_double("sim.sigma");
    const auto dt = kv.get_string("sim.dt", "auto");
    cfg.sim.dt = dt == "auto" ? SimConfig::default_dt(cfg.sim.epsilon) : parse_double(dt);
    cfg.sim.horizon = kv.get_double("sim.horizon");
    cfg.sim.burn_in = kv.get_double("sim.burn_in", 0.0);
    cfg.sim.seed = kv.get_uint("sim.seed", 1);
    const auto pot = make_potential(cfg.model);
    cfg.x0 = kv.contains("sim.x0") ? kv.get_doubles("sim.x0") : std::vector<double>(pot.dimension(), 0.0);
    return cfg;
}

Trajectory run_simulation(const SimulateConfig& cfg) {
    const auto pot = make_potential(cfg.model);
    if (cfg.homogenized) {
        if (!(cfg.sim.sigma > 0.0)) throw ConfigError("homogenized simulation needs sigma > 0");
        return simulate_homogenized(homogenized_coeffs(pot, cfg.sim.sigma), pot, cfg.sim, cfg.x0);
    }
    return simulate_multiscale(pot, cfg.sim, cfg.x0);
}

}  // namespace twoscale
