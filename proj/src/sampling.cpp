#include "mspe/sampling.hpp"
#include "mspe/errors.hpp"
#include "mspe/rng.hpp"

#include <cmath>
#include <sstream>

namespace mspe::sampling {

ComplexVector haar_state(Index dim, std::mt19937_64 &gen) {
    if (dim < 1)
        throw ArgumentError("haar_state: dim must be >= 1");
    ComplexVector psi(dim);
    for (Index i = 0; i < dim; ++i)
        psi(i) = rng::complex_gaussian(gen);
    const double norm = psi.norm();
    if (norm == 0.0)
        throw NumericError("haar_state: degenerate Gaussian draw");
    return psi / norm;
}

ComplexMatrix sample_ghs(int n_a, int m, int d, std::mt19937_64 &gen) {
    if (n_a < 1 || m < 0 || d < 2)
        throw ArgumentError("sample_ghs: need n_a >= 1, m >= 0, d >= 2");
    Index keep_dim = 1, lost_dim = 1;
    for (int i = 0; i < n_a; ++i)
        keep_dim *= d;
    for (int i = 0; i < m; ++i)
        lost_dim *= d;
    const ComplexVector psi = haar_state(keep_dim * lost_dim, gen);
    // Site 0 is the most significant digit, so the kept block is the row index.
    Eigen::Map<const Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>
        y(psi.data(), keep_dim, lost_dim);
    ComplexMatrix rho = y * y.adjoint();
    return 0.5 * (rho + rho.adjoint().eval());
}

ComplexMatrix draw(const SamplerSpec &spec, std::mt19937_64 &gen) {
    switch (spec.kind) {
    case SamplerSpec::Kind::Ghs:
        return sample_ghs(spec.n_a, spec.m, spec.d, gen);
    case SamplerSpec::Kind::Haar:
        return sample_ghs(spec.n_a, 0, spec.d, gen);
    }
    throw ArgumentError("draw: unknown sampler kind");
}

MCMoment mc_moment(const SamplerSpec &spec, int k, long n_samples, std::uint64_t seed,
                   Index budget) {
    if (k < 1 || n_samples < 1)
        throw ArgumentError("mc_moment: need k >= 1 and n_samples >= 1");
    Index rep_dim = 1;
    for (int i = 0; i < spec.n_a; ++i)
        rep_dim *= spec.d;
    Index dim = 1;
    for (int r = 0; r < k; ++r) {
        if (dim > budget / rep_dim)
            throw ResourceError("mc_moment: replica dimension exceeds dense budget");
        dim *= rep_dim;
    }

    ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
    Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(dim, dim);
    for (long i = 0; i < n_samples; ++i) {
        auto gen = rng::stream(seed, static_cast<std::uint64_t>(i));
        const ComplexMatrix rho = draw(spec, gen);
        ComplexMatrix term = rho;
        for (int r = 1; r < k; ++r)
            term = linalg::kron(term, rho);
        sum += term;
        sum_sq += term.cwiseAbs2();
    }

    const double n = static_cast<double>(n_samples);
    MCMoment out;
    out.mean = MomentTensor{k, rep_dim, sum / n};
    out.n_samples = n_samples;
    // Plug-in variance of each complex entry, combining both quadratures.
    out.stderr_entries =
        ((sum_sq / n - (sum / n).cwiseAbs2()).cwiseMax(0.0) / n).cwiseSqrt();
    return out;
}

Histogram histogram_from_values(const std::vector<double> &values, int n_bins) {
    if (n_bins < 1)
        throw ArgumentError("histogram_from_values: need n_bins >= 1");
    if (values.empty())
        throw ArgumentError("histogram_from_values: no values");
    Histogram h;
    h.n_bins = n_bins;
    h.counts.assign(static_cast<size_t>(n_bins), 0);
    double acc = 0.0, acc2 = 0.0;
    for (double v : values) {
        if (v < -1e-10 || v > 1.0 + 1e-10)
            throw NumericError("histogram_from_values: eigenvalue outside [0, 1]: " +
                               std::to_string(v));
        const double clamped = std::min(std::max(v, 0.0), 1.0);
        const int bin = std::min(static_cast<int>(clamped * n_bins), n_bins - 1);
        ++h.counts[static_cast<size_t>(bin)];
        ++h.total;
        acc += clamped;
        acc2 += clamped * clamped;
    }
    h.mean = acc / static_cast<double>(h.total);
    h.variance = acc2 / static_cast<double>(h.total) - h.mean * h.mean;
    return h;
}

Histogram eigenvalue_histogram(const std::vector<ComplexMatrix> &states, int n_bins) {
    std::vector<double> values;
    for (const auto &rho : states) {
        const auto eig = linalg::herm_eig(rho);
        for (Eigen::Index i = 0; i < eig.values.size(); ++i)
            values.push_back(eig.values(i));
    }
    return histogram_from_values(values, n_bins);
}

std::string histogram_csv(const Histogram &h) {
    std::ostringstream out;
    out << "bin_left,bin_right,count\n";
    const double width = (h.hi - h.lo) / h.n_bins;
    out.precision(12);
    for (int b = 0; b < h.n_bins; ++b)
        out << h.lo + b * width << ',' << h.lo + (b + 1) * width << ','
            << h.counts[static_cast<size_t>(b)] << '\n';
    return out.str();
}

} // namespace mspe::sampling
