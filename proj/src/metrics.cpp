#include "mspe/metrics.hpp"
#include "mspe/errors.hpp"

#include <cmath>

namespace mspe::metrics {

DistanceReport ensemble_distance(const MomentTensor &measured, const MomentTensor &reference,
                                 double xi) {
    if (measured.k != reference.k || measured.per_replica_dim != reference.per_replica_dim)
        throw ArgumentError("ensemble_distance: moments live on different replica spaces");
    DistanceReport report;
    report.xi = xi;
    report.raw = linalg::schatten_norm(measured.matrix - reference.matrix, xi);
    report.normalizer = linalg::schatten_norm(reference.matrix, xi);
    if (report.normalizer <= 0.0)
        throw NumericError("ensemble_distance: reference moment has zero norm");
    report.normalized = report.raw / report.normalizer;
    return report;
}

double renyi_entropy(const linalg::ComplexMatrix &rho, double k) {
    if (!(k >= 0.0) || k == 1.0)
        throw ArgumentError("renyi_entropy: order must be real, >= 0 and != 1");
    if (std::abs(rho.trace() - std::complex<double>(1.0, 0.0)) > 1e-8)
        throw ArgumentError("renyi_entropy: state must have unit trace");
    const auto eig = linalg::herm_eig(rho);
    if (eig.values.minCoeff() < -1e-10)
        throw NumericError("renyi_entropy: negative eigenvalue " +
                           std::to_string(eig.values.minCoeff()));
    if (k == 0.0) {
        long rank = 0;
        for (Eigen::Index i = 0; i < eig.values.size(); ++i)
            if (eig.values(i) > 1e-12)
                ++rank;
        return std::log(static_cast<double>(rank));
    }
    double acc = 0.0;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        const double lam = std::max(eig.values(i), 0.0);
        if (lam > 0.0)
            acc += std::pow(lam, k);
    }
    return std::log(acc) / (1.0 - k);
}

double annealed_conditional_entropy(const projected::MSPEnsemble &ensemble, int k) {
    if (k < 2)
        throw ArgumentError("annealed_conditional_entropy: need integer k >= 2");
    if (!ensemble.partition.reference)
        throw ArgumentError("annealed_conditional_entropy: ensemble lacks a reference qudit");
    const auto purities = projected::purity_averages(ensemble, {k});
    return -std::log(purities.keep[0] / purities.reduced_a[0]) /
           static_cast<double>(k - 1);
}

} // namespace mspe::metrics
