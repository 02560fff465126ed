#pragma once

#include "mspe/linalg.hpp"
#include "mspe/moment.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace mspe::sampling {

using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::Index;

ComplexVector haar_state(Index dim, std::mt19937_64 &gen);

// Reduction of a Haar state on n_a + m qudits to its first n_a sites.
ComplexMatrix sample_ghs(int n_a, int m, int d, std::mt19937_64 &gen);

struct SamplerSpec {
    enum class Kind { Ghs, Haar };
    Kind kind = Kind::Ghs;
    int n_a = 1;
    int m = 0; // ignored for Haar
    int d = 2;
};

ComplexMatrix draw(const SamplerSpec &spec, std::mt19937_64 &gen);

struct MCMoment {
    MomentTensor mean;
    Eigen::MatrixXd stderr_entries; // plug-in standard error per entry
    long n_samples = 0;
};

// Sample mean of rho^{(x)k}; sample i uses its own (seed, i) stream and the
// accumulation runs in ascending sample order, so results are reproducible.
MCMoment mc_moment(const SamplerSpec &spec, int k, long n_samples, std::uint64_t seed,
                   Index budget = 4096);

struct Histogram {
    int n_bins = 64;
    double lo = 0.0;
    double hi = 1.0;
    std::vector<long> counts;
    long total = 0;
    double mean = 0.0;
    double variance = 0.0;
};

// Uniform bins on [0, 1]. Values in [-1e-10, 0) clamp to 0 and values in
// (1, 1 + 1e-10] clamp to 1; anything further out is a numeric error.
Histogram histogram_from_values(const std::vector<double> &values, int n_bins = 64);

// Pools every eigenvalue of every state.
Histogram eigenvalue_histogram(const std::vector<ComplexMatrix> &states, int n_bins = 64);

std::string histogram_csv(const Histogram &h);

} // namespace mspe::sampling
