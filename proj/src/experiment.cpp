#include "mspe/experiment.hpp"
#include "mspe/errors.hpp"
#include "mspe/metrics.hpp"
#include "mspe/perm.hpp"
#include "mspe/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

namespace mspe::experiment {

namespace {

using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::Index;
using linalg::QuditLayout;

constexpr Index kStateBudget = Index(1) << 22;
constexpr Index kDenseBudget = 4096;

std::string loss_name(projected::LossLayout loss) {
    return loss == projected::LossLayout::Consecutive ? "consecutive" : "sparse";
}

projected::LossLayout loss_from_name(const std::string &name) {
    if (name == "consecutive")
        return projected::LossLayout::Consecutive;
    if (name == "sparse")
        return projected::LossLayout::Sparse;
    throw ArgumentError("config: unknown loss_layout '" + name + "'");
}

std::string basis_name(projected::MeasurementBasis basis) {
    return basis == projected::MeasurementBasis::HeisenbergWeylPairs
               ? "heisenberg-weyl-pairs"
               : "computational";
}

projected::MeasurementBasis basis_from_name(const std::string &name) {
    if (name == "heisenberg-weyl-pairs")
        return projected::MeasurementBasis::HeisenbergWeylPairs;
    if (name == "computational")
        return projected::MeasurementBasis::Computational;
    throw ArgumentError("config: unknown basis '" + name + "'");
}

std::string initial_name(InitialState s) {
    return s == InitialState::BellPairs ? "bell-pairs" : "zeros";
}

InitialState initial_from_name(const std::string &name) {
    if (name == "bell-pairs")
        return InitialState::BellPairs;
    if (name == "zeros")
        return InitialState::Zeros;
    throw ArgumentError("config: unknown initial_state '" + name + "'");
}

std::string reference_kind_name(ReferenceKind r) {
    switch (r) {
    case ReferenceKind::GhsAnalytic:
        return "ghs-analytic";
    case ReferenceKind::HaarAnalytic:
        return "haar-analytic";
    case ReferenceKind::CustomFile:
        return "custom-file";
    }
    throw ArgumentError("config: unknown reference ensemble");
}

ReferenceKind reference_kind_from_name(const std::string &name) {
    if (name == "ghs-analytic")
        return ReferenceKind::GhsAnalytic;
    if (name == "haar-analytic")
        return ReferenceKind::HaarAnalytic;
    if (name == "custom-file")
        return ReferenceKind::CustomFile;
    throw ArgumentError("config: unknown reference_ensemble '" + name + "'");
}

template <typename T>
std::vector<T> list_field(const nlohmann::json &j, const std::string &key) {
    std::vector<T> out;
    const auto &v = j.at(key);
    if (v.is_array())
        out = v.get<std::vector<T>>();
    else
        out.push_back(v.get<T>());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.empty())
        throw ArgumentError("config: '" + key + "' must not be empty");
    return out;
}

Index pow_checked(int d, int count) {
    Index dim = 1;
    for (int i = 0; i < count; ++i) {
        if (dim > std::numeric_limits<Index>::max() / d)
            return std::numeric_limits<Index>::max();
        dim *= d;
    }
    return dim;
}

// shortest round-trip decimal, deterministic across runs
std::string num(double v) { return nlohmann::json(v).dump(); }

void run_pool(long n_tasks, int threads, const std::function<void(long)> &task) {
    if (threads < 1)
        throw ArgumentError("thread count must be >= 1");
    if (threads == 1 || n_tasks <= 1) {
        for (long i = 0; i < n_tasks; ++i)
            task(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= n_tasks)
                return;
            try {
                task(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const long n_workers = std::min<long>(threads, n_tasks);
    for (long w = 0; w < n_workers; ++w)
        pool.emplace_back(worker);
    for (auto &th : pool)
        th.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

// Advances one realization's state along the ascending depth sweep without
// recomputing earlier layers.
struct Evolver {
    const ExperimentConfig &cfg;
    QuditLayout layout;
    const ComplexMatrix *u_step;
    ComplexVector state;
    circuits::CircuitSpec circ;
    long t_now = 0;

    Evolver(const ExperimentConfig &c, int n, long realization, const ComplexMatrix *step)
        : cfg(c), layout{n, c.d}, u_step(step) {
        if (cfg.model == Model::GlobalHaarState) {
            auto gen = rng::stream(cfg.seed, 0x6861617221ULL, static_cast<std::uint64_t>(n),
                                   static_cast<std::uint64_t>(realization));
            state = sampling::haar_state(layout.dim(), gen);
            return;
        }
        state = cfg.initial == InitialState::BellPairs
                    ? circuits::bell_pair_initial_state(n, cfg.d)
                    : circuits::computational_zero_state(n, cfg.d);
        circ.layout = layout;
        circ.seed = rng::mix(rng::mix(cfg.seed, static_cast<std::uint64_t>(n)),
                             static_cast<std::uint64_t>(realization));
        circ.kicked = cfg.kicked;
        switch (cfg.model) {
        case Model::DualUnitary:
            circ.source = circuits::GateSource::DualUnitaryRandom;
            break;
        case Model::LocalHaar:
            circ.source = circuits::GateSource::HaarRandom;
            break;
        case Model::KickedIsing:
            circ.source = circuits::GateSource::KickedIsing;
            break;
        default:
            break;
        }
    }

    void advance(long t) {
        if (t < t_now)
            throw ArgumentError("depth sweep must be ascending");
        if (t == t_now)
            return;
        if (cfg.model == Model::MixedFieldIsing) {
            for (long s = t_now; s < t; ++s)
                state = (*u_step) * state;
        } else if (cfg.model == Model::GlobalHaarState) {
            throw ArgumentError("global-haar-state has no depth axis");
        } else {
            circuits::brickwall_apply(state, circ, t_now, t - t_now);
        }
        t_now = t;
    }
};

void require_valid(const ExperimentConfig &config) {
    const auto errors = validate_config(config);
    if (errors.empty())
        return;
    std::string joined = "invalid config:";
    for (const auto &e : errors)
        joined += "\n  - " + e;
    throw ArgumentError(joined);
}

MomentTensor load_reference_moment(const ExperimentConfig &config, int k, Index rep_dim) {
    std::ifstream in(config.reference_file);
    if (!in)
        throw ArgumentError("cannot open reference file '" + config.reference_file + "'");
    nlohmann::json j;
    in >> j;
    const auto items = j.is_array() ? j : nlohmann::json::array({j});
    for (const auto &item : items) {
        MomentTensor m = item.get<MomentTensor>();
        if (m.k == k && m.per_replica_dim == rep_dim)
            return m;
    }
    throw ArgumentError("reference file '" + config.reference_file +
                        "' has no moment with k=" + std::to_string(k) +
                        " on dimension " + std::to_string(rep_dim));
}

MomentTensor reference_moment(const ExperimentConfig &config, int k) {
    const int n_keep = config.n_a + (config.reference ? 1 : 0);
    switch (config.reference_ensemble) {
    case ReferenceKind::GhsAnalytic:
        return perm::ghs_moment(n_keep, config.m, config.d, k);
    case ReferenceKind::HaarAnalytic:
        return perm::ghs_moment(n_keep, 0, config.d, k);
    case ReferenceKind::CustomFile:
        return load_reference_moment(config, k, pow_checked(config.d, n_keep));
    }
    throw ArgumentError("config: unknown reference ensemble");
}

struct MeanStderr {
    double mean = 0.0;
    double stderr_value = 0.0;
};

// ascending-order accumulation keeps the result independent of scheduling
MeanStderr reduce(const std::vector<double> &values) {
    const double n = static_cast<double>(values.size());
    double acc = 0.0;
    for (double v : values)
        acc += v;
    const double mean = acc / n;
    double var = 0.0;
    for (double v : values)
        var += (v - mean) * (v - mean);
    return {mean, std::sqrt(var / n / n)};
}

} // namespace

std::string model_name(Model m) {
    switch (m) {
    case Model::DualUnitary:
        return "dual-unitary";
    case Model::LocalHaar:
        return "local-haar";
    case Model::KickedIsing:
        return "kicked-ising";
    case Model::MixedFieldIsing:
        return "mixed-field-ising";
    case Model::GlobalHaarState:
        return "global-haar-state";
    }
    throw ArgumentError("config: unknown model");
}

Model model_from_name(const std::string &name) {
    if (name == "dual-unitary")
        return Model::DualUnitary;
    if (name == "local-haar")
        return Model::LocalHaar;
    if (name == "kicked-ising")
        return Model::KickedIsing;
    if (name == "mixed-field-ising")
        return Model::MixedFieldIsing;
    if (name == "global-haar-state")
        return Model::GlobalHaarState;
    throw ArgumentError("config: unknown model '" + name + "'");
}

ExperimentConfig config_from_json(const nlohmann::json &j) {
    static const std::vector<std::string> known = {
        "model",         "d",          "N",           "t",
        "N_A",           "m",          "loss_layout", "gap",
        "reference",     "basis",      "initial_state",
        "k",             "xi",         "reference_ensemble",
        "reference_file", "realizations", "seed",     "output",
        "time_step",     "kicked",     "probability_floor"};
    for (const auto &item : j.items())
        if (std::find(known.begin(), known.end(), item.key()) == known.end())
            throw ArgumentError("config: unknown key '" + item.key() + "'");

    ExperimentConfig c;
    c.model = model_from_name(j.at("model").get<std::string>());
    if (j.contains("d"))
        c.d = j.at("d").get<int>();
    if (j.contains("N"))
        c.n_values = list_field<int>(j, "N");
    if (j.contains("t"))
        c.t_values = list_field<long>(j, "t");
    if (j.contains("N_A"))
        c.n_a = j.at("N_A").get<int>();
    if (j.contains("m"))
        c.m = j.at("m").get<int>();
    if (j.contains("loss_layout"))
        c.loss = loss_from_name(j.at("loss_layout").get<std::string>());
    if (j.contains("gap"))
        c.gap = j.at("gap").get<int>();
    if (j.contains("reference"))
        c.reference = j.at("reference").get<bool>();
    if (j.contains("basis"))
        c.basis = basis_from_name(j.at("basis").get<std::string>());
    else
        c.basis = (c.model == Model::DualUnitary || c.model == Model::LocalHaar)
                      ? projected::MeasurementBasis::HeisenbergWeylPairs
                      : projected::MeasurementBasis::Computational;
    if (j.contains("initial_state"))
        c.initial = initial_from_name(j.at("initial_state").get<std::string>());
    else
        c.initial = (c.model == Model::DualUnitary || c.model == Model::LocalHaar)
                        ? InitialState::BellPairs
                        : InitialState::Zeros;
    if (j.contains("k"))
        c.k_values = list_field<int>(j, "k");
    if (j.contains("xi"))
        c.xi_values = list_field<double>(j, "xi");
    if (j.contains("reference_ensemble"))
        c.reference_ensemble =
            reference_kind_from_name(j.at("reference_ensemble").get<std::string>());
    if (j.contains("reference_file"))
        c.reference_file = j.at("reference_file").get<std::string>();
    if (j.contains("realizations"))
        c.n_realizations = j.at("realizations").get<long>();
    if (j.contains("seed"))
        c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output"))
        c.output = j.at("output").get<std::string>();
    if (j.contains("time_step"))
        c.time_step = j.at("time_step").get<double>();
    if (j.contains("kicked")) {
        const auto &kj = j.at("kicked");
        for (const auto &item : kj.items())
            if (item.key() != "h" && item.key() != "J" && item.key() != "g")
                throw ArgumentError("config: unknown key 'kicked." + item.key() + "'");
        c.kicked.h = kj.value("h", c.kicked.h);
        c.kicked.J = kj.value("J", c.kicked.J);
        c.kicked.g = kj.value("g", c.kicked.g);
    }
    if (j.contains("probability_floor"))
        c.probability_floor = j.at("probability_floor").get<double>();
    return c;
}

nlohmann::json config_to_json(const ExperimentConfig &c) {
    return nlohmann::json{
        {"model", model_name(c.model)},
        {"d", c.d},
        {"N", c.n_values},
        {"t", c.t_values},
        {"N_A", c.n_a},
        {"m", c.m},
        {"loss_layout", loss_name(c.loss)},
        {"gap", c.gap},
        {"reference", c.reference},
        {"basis", basis_name(c.basis)},
        {"initial_state", initial_name(c.initial)},
        {"k", c.k_values},
        {"xi", c.xi_values},
        {"reference_ensemble", reference_kind_name(c.reference_ensemble)},
        {"reference_file", c.reference_file},
        {"realizations", c.n_realizations},
        {"seed", c.seed},
        {"output", c.output},
        {"time_step", c.time_step},
        {"kicked",
         nlohmann::json{{"h", c.kicked.h}, {"J", c.kicked.J}, {"g", c.kicked.g}}},
        {"probability_floor", c.probability_floor}};
}

std::vector<std::string> validate_config(const ExperimentConfig &c) {
    std::vector<std::string> errors;
    const bool qubit_model = c.model == Model::DualUnitary || c.model == Model::KickedIsing ||
                             c.model == Model::MixedFieldIsing;
    if (c.d < 2)
        errors.push_back("d must be >= 2");
    if (qubit_model && c.d != 2)
        errors.push_back("model " + model_name(c.model) + " supports d = 2 only");
    if (c.n_a < 1)
        errors.push_back("N_A must be >= 1");
    if (c.m < 0)
        errors.push_back("m must be >= 0");
    if (c.gap < 0)
        errors.push_back("gap must be >= 0");
    if (c.n_realizations < 1)
        errors.push_back("realizations must be >= 1");
    if (c.output.empty())
        errors.push_back("output path must not be empty");
    if (c.reference_ensemble == ReferenceKind::CustomFile && c.reference_file.empty())
        errors.push_back("custom-file reference needs reference_file");
    if (c.probability_floor < 0.0 || c.probability_floor >= 1.0)
        errors.push_back("probability_floor must lie in [0, 1)");
    if (c.n_values.empty())
        errors.push_back("N sweep must not be empty");
    if (c.t_values.empty())
        errors.push_back("t sweep must not be empty");
    for (long t : c.t_values)
        if (t < 0)
            errors.push_back("t values must be >= 0");
    if (c.model == Model::GlobalHaarState &&
        (c.t_values.size() != 1 || c.t_values[0] != 0))
        errors.push_back("global-haar-state has no depth axis; set t = [0]");
    for (int k : c.k_values)
        if (k < 1)
            errors.push_back("k values must be >= 1");
    for (double xi : c.xi_values)
        if (!(xi >= 1.0))
            errors.push_back("xi values must be >= 1");
    if (c.d < 2 || c.n_a < 1 || c.m < 0)
        return errors; // the sweep checks below assume sane scalars

    const int n_keep = c.n_a + (c.reference ? 1 : 0);
    const Index keep_dim = pow_checked(c.d, n_keep);
    if (keep_dim > kDenseBudget)
        errors.push_back("kept subsystem d^" + std::to_string(n_keep) +
                         " exceeds the dense budget");
    for (int k : c.k_values) {
        if (k < 1)
            continue;
        Index dim = 1;
        bool ok = true;
        for (int r = 0; r < k; ++r) {
            if (dim > kDenseBudget / keep_dim) {
                ok = false;
                break;
            }
            dim *= keep_dim;
        }
        if (!ok)
            errors.push_back("k=" + std::to_string(k) + ": moment dimension d^" +
                             std::to_string(n_keep * k) + " exceeds the dense budget");
    }
    for (int n : c.n_values) {
        const std::string at = "N=" + std::to_string(n) + ": ";
        if (n < 1) {
            errors.push_back(at + "chain length must be >= 1");
            continue;
        }
        if (pow_checked(c.d, n) > kStateBudget) {
            errors.push_back(at + "state dimension exceeds the dense budget");
            continue;
        }
        if (c.model == Model::MixedFieldIsing && pow_checked(c.d, n) > kDenseBudget) {
            errors.push_back(at + "dense evolution operator exceeds the budget");
            continue;
        }
        if (c.model != Model::GlobalHaarState && c.initial == InitialState::BellPairs &&
            n % 2 != 0) {
            errors.push_back(at + "bell-pair initial state needs an even chain");
            continue;
        }
        if (c.m > n - c.n_a - (c.reference ? 1 : 0)) {
            errors.push_back(at + "lost sites exceed bath");
            continue;
        }
        try {
            const auto p = projected::make_partition(QuditLayout{n, c.d}, c.n_a, c.m,
                                                     c.loss, c.gap, c.reference, c.basis);
            const int n_meas = static_cast<int>(projected::measured_sites(p).size());
            if (pow_checked(c.d, n_meas) > (Index(1) << 24))
                errors.push_back(at + "retained outcome count exceeds the enumeration budget");
        } catch (const std::exception &e) {
            errors.push_back(at + e.what());
        }
    }
    return errors;
}

std::vector<DistanceRow> run_distance(const ExperimentConfig &config, int threads) {
    require_valid(config);
    const long n_t = static_cast<long>(config.t_values.size());
    const long n_k = static_cast<long>(config.k_values.size());
    const long n_xi = static_cast<long>(config.xi_values.size());
    const long per_real = n_t * n_k * n_xi;

    std::vector<MomentTensor> refs;
    for (int k : config.k_values)
        refs.push_back(reference_moment(config, k));

    std::vector<DistanceRow> rows;
    for (int n : config.n_values) {
        const QuditLayout layout{n, config.d};
        const auto partition = projected::make_partition(layout, config.n_a, config.m,
                                                         config.loss, config.gap,
                                                         config.reference, config.basis);
        ComplexMatrix u_step_store;
        const ComplexMatrix *u_step = nullptr;
        if (config.model == Model::MixedFieldIsing) {
            circuits::HamiltonianSpec hs;
            hs.layout = layout;
            u_step_store = circuits::hamiltonian_evolution_operator(hs, config.time_step);
            u_step = &u_step_store;
        }

        std::vector<std::vector<double>> deltas(
            static_cast<size_t>(config.n_realizations));
        run_pool(config.n_realizations, threads, [&](long r) {
            std::vector<double> out(static_cast<size_t>(per_real));
            Evolver ev(config, n, r, u_step);
            for (long ti = 0; ti < n_t; ++ti) {
                ev.advance(config.t_values[static_cast<size_t>(ti)]);
                const auto ens =
                    projected::build_mspe(ev.state, partition, config.probability_floor);
                for (long ki = 0; ki < n_k; ++ki) {
                    const auto mom =
                        projected::moment(ens, config.k_values[static_cast<size_t>(ki)]);
                    for (long xi_i = 0; xi_i < n_xi; ++xi_i) {
                        const auto report = metrics::ensemble_distance(
                            mom, refs[static_cast<size_t>(ki)],
                            config.xi_values[static_cast<size_t>(xi_i)]);
                        out[static_cast<size_t>((ti * n_k + ki) * n_xi + xi_i)] =
                            report.normalized;
                    }
                }
            }
            deltas[static_cast<size_t>(r)] = std::move(out);
        });

        for (long ti = 0; ti < n_t; ++ti)
            for (long ki = 0; ki < n_k; ++ki)
                for (long xi_i = 0; xi_i < n_xi; ++xi_i) {
                    std::vector<double> values;
                    values.reserve(static_cast<size_t>(config.n_realizations));
                    for (const auto &per : deltas)
                        values.push_back(per[static_cast<size_t>((ti * n_k + ki) * n_xi +
                                                                 xi_i)]);
                    const auto stat = reduce(values);
                    DistanceRow row;
                    row.model = model_name(config.model);
                    row.n = n;
                    row.d = config.d;
                    row.n_a = config.n_a;
                    row.m = config.m;
                    row.loss_layout = loss_name(config.loss);
                    row.basis = basis_name(config.basis);
                    row.t = config.t_values[static_cast<size_t>(ti)];
                    row.k = config.k_values[static_cast<size_t>(ki)];
                    row.xi = config.xi_values[static_cast<size_t>(xi_i)];
                    row.realizations = config.n_realizations;
                    row.delta_mean = stat.mean;
                    row.delta_stderr = stat.stderr_value;
                    rows.push_back(std::move(row));
                }
    }
    return rows;
}

std::vector<EntropyRow> run_entropy(const ExperimentConfig &config, int threads) {
    require_valid(config);
    if (!config.reference)
        throw ArgumentError("entropy runs need the reference qudit enabled");
    for (int k : config.k_values)
        if (k < 2)
            throw ArgumentError("entropy runs need k >= 2");
    const long n_t = static_cast<long>(config.t_values.size());
    const long n_k = static_cast<long>(config.k_values.size());

    std::vector<EntropyRow> rows;
    for (int n : config.n_values) {
        const QuditLayout layout{n, config.d};
        const auto partition = projected::make_partition(layout, config.n_a, config.m,
                                                         config.loss, config.gap,
                                                         config.reference, config.basis);
        ComplexMatrix u_step_store;
        const ComplexMatrix *u_step = nullptr;
        if (config.model == Model::MixedFieldIsing) {
            circuits::HamiltonianSpec hs;
            hs.layout = layout;
            u_step_store = circuits::hamiltonian_evolution_operator(hs, config.time_step);
            u_step = &u_step_store;
        }

        std::vector<std::vector<double>> entropies(
            static_cast<size_t>(config.n_realizations));
        run_pool(config.n_realizations, threads, [&](long r) {
            std::vector<double> out(static_cast<size_t>(n_t * n_k));
            Evolver ev(config, n, r, u_step);
            for (long ti = 0; ti < n_t; ++ti) {
                ev.advance(config.t_values[static_cast<size_t>(ti)]);
                const auto ens =
                    projected::build_mspe(ev.state, partition, config.probability_floor);
                for (long ki = 0; ki < n_k; ++ki)
                    out[static_cast<size_t>(ti * n_k + ki)] =
                        metrics::annealed_conditional_entropy(
                            ens, config.k_values[static_cast<size_t>(ki)]);
            }
            entropies[static_cast<size_t>(r)] = std::move(out);
        });

        for (long ti = 0; ti < n_t; ++ti)
            for (long ki = 0; ki < n_k; ++ki) {
                std::vector<double> values;
                values.reserve(static_cast<size_t>(config.n_realizations));
                for (const auto &per : entropies)
                    values.push_back(per[static_cast<size_t>(ti * n_k + ki)]);
                const auto stat = reduce(values);
                EntropyRow row;
                row.model = model_name(config.model);
                row.n = n;
                row.d = config.d;
                row.n_a = config.n_a;
                row.m = config.m;
                row.t = config.t_values[static_cast<size_t>(ti)];
                row.k = config.k_values[static_cast<size_t>(ki)];
                row.i_mean = stat.mean;
                row.i_stderr = stat.stderr_value;
                rows.push_back(std::move(row));
            }
    }
    return rows;
}

std::vector<SpectrumPoint> run_spectrum(const ExperimentConfig &config, int threads,
                                        int n_bins) {
    require_valid(config);
    const long n_t = static_cast<long>(config.t_values.size());

    std::vector<SpectrumPoint> points;
    for (int n : config.n_values) {
        const QuditLayout layout{n, config.d};
        const auto partition = projected::make_partition(layout, config.n_a, config.m,
                                                         config.loss, config.gap,
                                                         config.reference, config.basis);
        ComplexMatrix u_step_store;
        const ComplexMatrix *u_step = nullptr;
        if (config.model == Model::MixedFieldIsing) {
            circuits::HamiltonianSpec hs;
            hs.layout = layout;
            u_step_store = circuits::hamiltonian_evolution_operator(hs, config.time_step);
            u_step = &u_step_store;
        }

        std::vector<std::vector<std::vector<double>>> pools(
            static_cast<size_t>(config.n_realizations));
        run_pool(config.n_realizations, threads, [&](long r) {
            std::vector<std::vector<double>> out(static_cast<size_t>(n_t));
            Evolver ev(config, n, r, u_step);
            for (long ti = 0; ti < n_t; ++ti) {
                ev.advance(config.t_values[static_cast<size_t>(ti)]);
                const auto ens =
                    projected::build_mspe(ev.state, partition, config.probability_floor);
                const Index support =
                    std::min(ens.keep_dim(), ens.lost_dim()); // conditional-state rank cap
                auto &values = out[static_cast<size_t>(ti)];
                for (const auto &entry : ens.entries) {
                    const auto eig = linalg::herm_eig(entry.rho);
                    for (Index i = 0; i < support; ++i)
                        values.push_back(eig.values(i));
                }
            }
            pools[static_cast<size_t>(r)] = std::move(out);
        });

        for (long ti = 0; ti < n_t; ++ti) {
            std::vector<double> merged;
            for (const auto &per : pools)
                merged.insert(merged.end(), per[static_cast<size_t>(ti)].begin(),
                              per[static_cast<size_t>(ti)].end());
            SpectrumPoint point;
            point.n = n;
            point.t = config.t_values[static_cast<size_t>(ti)];
            point.realizations = config.n_realizations;
            point.histogram = sampling::histogram_from_values(merged, n_bins);
            points.push_back(std::move(point));
        }
    }
    return points;
}

std::string distance_csv(const std::vector<DistanceRow> &rows) {
    std::ostringstream out;
    out << "model,N,d,N_A,m,loss_layout,basis,t,k,xi,realizations,delta_mean,delta_stderr\n";
    for (const auto &r : rows)
        out << r.model << ',' << r.n << ',' << r.d << ',' << r.n_a << ',' << r.m << ','
            << r.loss_layout << ',' << r.basis << ',' << r.t << ',' << r.k << ','
            << num(r.xi) << ',' << r.realizations << ',' << num(r.delta_mean) << ','
            << num(r.delta_stderr) << '\n';
    return out.str();
}

std::string entropy_csv(const std::vector<EntropyRow> &rows) {
    std::ostringstream out;
    out << "model,N,d,N_A,m,t,k,I_mean,I_stderr\n";
    for (const auto &r : rows)
        out << r.model << ',' << r.n << ',' << r.d << ',' << r.n_a << ',' << r.m << ','
            << r.t << ',' << r.k << ',' << num(r.i_mean) << ',' << num(r.i_stderr)
            << '\n';
    return out.str();
}

std::string spectrum_summary_csv(const ExperimentConfig &config,
                                 const std::vector<SpectrumPoint> &points) {
    std::ostringstream out;
    out << "model,N,d,N_A,m,loss_layout,basis,t,realizations,pooled_count,mean,variance\n";
    for (const auto &p : points)
        out << model_name(config.model) << ',' << p.n << ',' << config.d << ','
            << config.n_a << ',' << config.m << ',' << loss_name(config.loss) << ','
            << basis_name(config.basis) << ',' << p.t << ',' << p.realizations << ','
            << p.histogram.total << ',' << num(p.histogram.mean) << ','
            << num(p.histogram.variance) << '\n';
    return out.str();
}

nlohmann::json metadata_json(const ExperimentConfig &config, const std::string &command,
                             int threads, double wall_seconds,
                             const std::vector<std::string> &outputs) {
    nlohmann::json small_k = nlohmann::json::object();
    for (int k : config.k_values)
        small_k[std::to_string(k)] = perm::deviation_small_k_regime(config.m, config.d, k);
    return nlohmann::json{{"command", command},
                          {"version", kVersion},
                          {"config", config_to_json(config)},
                          {"seed", config.seed},
                          {"threads", threads},
                          {"wall_time_seconds", wall_seconds},
                          {"entropy_units", nlohmann::json{{"log_d", std::log(config.d)}}},
                          {"small_k_regime", small_k},
                          {"outputs", outputs}};
}

} // namespace mspe::experiment
