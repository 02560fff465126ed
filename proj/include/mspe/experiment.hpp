#pragma once

#include "mspe/circuits.hpp"
#include "mspe/projected.hpp"
#include "mspe/sampling.hpp"

#include <json.hpp>
#include <cstdint>
#include <string>
#include <vector>

namespace mspe::experiment {

inline constexpr const char *kVersion = "1.0.0";

enum class Model { DualUnitary, LocalHaar, KickedIsing, MixedFieldIsing, GlobalHaarState };
enum class ReferenceKind { GhsAnalytic, HaarAnalytic, CustomFile };
enum class InitialState { BellPairs, Zeros };

std::string model_name(Model m);
Model model_from_name(const std::string &name);

struct ExperimentConfig {
    Model model = Model::DualUnitary;
    int d = 2;
    std::vector<int> n_values = {8};  // chain lengths, ascending
    std::vector<long> t_values = {0}; // depths (layers or Floquet/Hamiltonian steps)
    int n_a = 1;
    int m = 0;
    projected::LossLayout loss = projected::LossLayout::Consecutive;
    int gap = 0;
    bool reference = false;
    projected::MeasurementBasis basis = projected::MeasurementBasis::HeisenbergWeylPairs;
    InitialState initial = InitialState::BellPairs;
    std::vector<int> k_values = {2};
    std::vector<double> xi_values = {1.0};
    ReferenceKind reference_ensemble = ReferenceKind::GhsAnalytic;
    std::string reference_file;
    long n_realizations = 1;
    std::uint64_t seed = 1;
    std::string output = "mspe_run";
    double time_step = 1.0; // physical time per depth unit (mixed-field-ising)
    circuits::KickedIsingParams kicked;
    double probability_floor = 0.0;
};

// Strict parse: unknown keys are errors, scalars may stand in for one-element
// lists, sweep lists are sorted and deduplicated.
ExperimentConfig config_from_json(const nlohmann::json &j);
nlohmann::json config_to_json(const ExperimentConfig &config);

// Structural and budget validation across the whole sweep lattice; returns the
// full list of problems instead of throwing.
std::vector<std::string> validate_config(const ExperimentConfig &config);

struct DistanceRow {
    std::string model;
    int n = 0;
    int d = 2;
    int n_a = 1;
    int m = 0;
    std::string loss_layout;
    std::string basis;
    long t = 0;
    int k = 1;
    double xi = 1.0;
    long realizations = 1;
    double delta_mean = 0.0;
    double delta_stderr = 0.0;
};

struct EntropyRow {
    std::string model;
    int n = 0;
    int d = 2;
    int n_a = 1;
    int m = 0;
    long t = 0;
    int k = 2;
    double i_mean = 0.0;
    double i_stderr = 0.0;
};

struct SpectrumPoint {
    int n = 0;
    long t = 0;
    long realizations = 1;
    sampling::Histogram histogram; // pooled over outcomes and realizations
};

// Normalized Schatten-xi distances between the simulated moment and the
// configured reference moment, averaged over realizations. Rows come out in
// ascending (N, t, k, xi) order regardless of the thread count.
std::vector<DistanceRow> run_distance(const ExperimentConfig &config, int threads = 1);

// Annealed conditional entropies (requires the reference qudit), rows in
// ascending (N, t, k) order.
std::vector<EntropyRow> run_entropy(const ExperimentConfig &config, int threads = 1);

// Conditional-state spectra pooled per sweep point. Each state contributes its
// top min(d^keep, d^lost) eigenvalues: the rest vanish identically because the
// conditional state's rank cannot exceed the traced-out dimension.
std::vector<SpectrumPoint> run_spectrum(const ExperimentConfig &config, int threads = 1,
                                        int n_bins = 64);

// model,N,d,N_A,m,loss_layout,basis,t,k,xi,realizations,delta_mean,delta_stderr
std::string distance_csv(const std::vector<DistanceRow> &rows);
// model,N,d,N_A,m,t,k,I_mean,I_stderr
std::string entropy_csv(const std::vector<EntropyRow> &rows);
// model,N,d,N_A,m,loss_layout,basis,t,realizations,pooled_count,mean,variance
std::string spectrum_summary_csv(const ExperimentConfig &config,
                                 const std::vector<SpectrumPoint> &points);

nlohmann::json metadata_json(const ExperimentConfig &config, const std::string &command,
                             int threads, double wall_seconds,
                             const std::vector<std::string> &outputs);

} // namespace mspe::experiment
