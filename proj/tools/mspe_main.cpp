#include "mspe/errors.hpp"
#include "mspe/experiment.hpp"
#include "mspe/perm.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using mspe::experiment::ExperimentConfig;

struct CommonOpts {
    std::string config_path;
    std::string output;
    std::string seed_text;
    long realizations = 0;
    int threads = 1;
};

void add_common(CLI::App *cmd, CommonOpts &opts) {
    cmd->add_option("-c,--config", opts.config_path, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("-o,--output", opts.output, "override the output path prefix");
    cmd->add_option("-s,--seed", opts.seed_text, "override the base seed");
    cmd->add_option("-r,--realizations", opts.realizations,
                    "override the realization count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("-j,--threads", opts.threads, "worker threads for realizations")
        ->check(CLI::PositiveNumber);
}

ExperimentConfig load_config(const CommonOpts &opts) {
    std::ifstream in(opts.config_path);
    if (!in)
        throw mspe::ArgumentError("cannot open config '" + opts.config_path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw mspe::ArgumentError("config '" + opts.config_path +
                                  "' is not valid JSON: " + e.what());
    }
    auto config = mspe::experiment::config_from_json(j);
    // flag beats environment beats file
    if (const char *env = std::getenv("MSPE_SEED"); env && *env)
        config.seed = std::stoull(env);
    if (!opts.seed_text.empty())
        config.seed = std::stoull(opts.seed_text);
    if (!opts.output.empty())
        config.output = opts.output;
    if (opts.realizations > 0)
        config.n_realizations = opts.realizations;
    return config;
}

void write_file(const std::string &path, const std::string &body) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw mspe::ArgumentError("cannot write '" + path + "'");
    out << body;
}

void finish_run(const ExperimentConfig &config, const std::string &command, int threads,
                double wall_seconds, std::vector<std::string> outputs) {
    const std::string meta_path = config.output + "_meta.json";
    outputs.push_back(meta_path);
    const auto meta = mspe::experiment::metadata_json(config, command, threads,
                                                      wall_seconds, outputs);
    write_file(meta_path, meta.dump(2) + "\n");
    for (const auto &path : outputs)
        std::cout << "wrote " << path << "\n";
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

int run_distance_cmd(const CommonOpts &opts) {
    const auto config = load_config(opts);
    const auto start = std::chrono::steady_clock::now();
    const auto rows = mspe::experiment::run_distance(config, opts.threads);
    const std::string csv_path = config.output + "_distance.csv";
    write_file(csv_path, mspe::experiment::distance_csv(rows));
    finish_run(config, "distance", opts.threads, seconds_since(start), {csv_path});
    return 0;
}

int run_entropy_cmd(const CommonOpts &opts) {
    const auto config = load_config(opts);
    const auto start = std::chrono::steady_clock::now();
    const auto rows = mspe::experiment::run_entropy(config, opts.threads);
    const std::string csv_path = config.output + "_entropy.csv";
    write_file(csv_path, mspe::experiment::entropy_csv(rows));
    finish_run(config, "entropy", opts.threads, seconds_since(start), {csv_path});
    return 0;
}

int run_spectrum_cmd(const CommonOpts &opts, int bins) {
    const auto config = load_config(opts);
    const auto start = std::chrono::steady_clock::now();
    const auto points = mspe::experiment::run_spectrum(config, opts.threads, bins);
    std::vector<std::string> outputs;
    const std::string summary_path = config.output + "_spectrum.csv";
    write_file(summary_path, mspe::experiment::spectrum_summary_csv(config, points));
    outputs.push_back(summary_path);
    for (const auto &point : points) {
        const std::string path = config.output + "_spectrum_N" + std::to_string(point.n) +
                                 "_t" + std::to_string(point.t) + ".csv";
        write_file(path, mspe::sampling::histogram_csv(point.histogram));
        outputs.push_back(path);
    }
    finish_run(config, "spectrum", opts.threads, seconds_since(start), outputs);
    return 0;
}

int run_validate_cmd(const CommonOpts &opts) {
    const auto config = load_config(opts);
    const auto errors = mspe::experiment::validate_config(config);
    if (errors.empty()) {
        std::cout << "config ok\n";
        return 0;
    }
    for (const auto &e : errors)
        std::cerr << "config error: " << e << "\n";
    return 2;
}

struct AlphaOpts {
    std::string kind = "finite-t";
    int d = 2;
    int m = 2;
    int k = 2;
    long t = 4;
    int pairs = 1;
    std::string output;
};

int run_alpha_cmd(const AlphaOpts &opts) {
    mspe::perm::AlphaCoefficients alpha;
    if (opts.kind == "finite-t")
        alpha = mspe::perm::solve_alpha_finite_t(opts.t, opts.m, opts.d, opts.k);
    else if (opts.kind == "large-t")
        alpha = mspe::perm::alpha_large_t(opts.m, opts.d, opts.k);
    else if (opts.kind == "large-d")
        alpha = mspe::perm::alpha_large_d(opts.m, opts.d, opts.k);
    else if (opts.kind == "sparse")
        alpha = mspe::perm::sparse_alpha(opts.pairs, opts.d, opts.k);
    else
        throw mspe::ArgumentError("unknown alpha kind '" + opts.kind +
                                  "' (finite-t, large-t, large-d, sparse)");
    const auto j = mspe::perm::alpha_to_json(alpha);
    if (opts.output.empty())
        std::cout << j.dump(2) << "\n";
    else {
        write_file(opts.output, j.dump(2) + "\n");
        std::cout << "wrote " << opts.output << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"projected-ensemble laboratory for lossy monitored circuits"};
    app.require_subcommand(1);

    CommonOpts distance_opts, entropy_opts, spectrum_opts, validate_opts;
    int spectrum_bins = 64;
    AlphaOpts alpha_opts;

    auto *distance = app.add_subcommand(
        "distance", "sweep moment distances against a reference ensemble");
    add_common(distance, distance_opts);
    auto *entropy = app.add_subcommand(
        "entropy", "sweep the annealed conditional entropy of the reference qudit");
    add_common(entropy, entropy_opts);
    auto *spectrum =
        app.add_subcommand("spectrum", "pool conditional-state spectra into histograms");
    add_common(spectrum, spectrum_opts);
    spectrum->add_option("-b,--bins", spectrum_bins, "histogram bin count")
        ->check(CLI::PositiveNumber);
    auto *validate = app.add_subcommand("validate", "check a config without running it");
    add_common(validate, validate_opts);
    auto *alpha =
        app.add_subcommand("alpha", "emit replica coefficients for the reference moments");
    alpha->add_option("--kind", alpha_opts.kind,
                      "finite-t, large-t, large-d, or sparse");
    alpha->add_option("--d", alpha_opts.d, "local dimension")->check(CLI::PositiveNumber);
    alpha->add_option("--m", alpha_opts.m, "lost sites")->check(CLI::PositiveNumber);
    alpha->add_option("--k", alpha_opts.k, "moment order")->check(CLI::PositiveNumber);
    alpha->add_option("--t", alpha_opts.t, "circuit depth")->check(CLI::NonNegativeNumber);
    alpha->add_option("--pairs", alpha_opts.pairs, "lost cells in the sparse layout")
        ->check(CLI::PositiveNumber);
    alpha->add_option("-o,--output", alpha_opts.output, "write JSON here instead of stdout");

    try {
        app.parse(argc, argv);
        if (distance->parsed())
            return run_distance_cmd(distance_opts);
        if (entropy->parsed())
            return run_entropy_cmd(entropy_opts);
        if (spectrum->parsed())
            return run_spectrum_cmd(spectrum_opts, spectrum_bins);
        if (validate->parsed())
            return run_validate_cmd(validate_opts);
        if (alpha->parsed())
            return run_alpha_cmd(alpha_opts);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const mspe::ResourceError &e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const mspe::NumericError &e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    } catch (const mspe::ArgumentError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
