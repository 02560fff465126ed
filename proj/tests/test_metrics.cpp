#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mspe/errors.hpp"
#include "mspe/metrics.hpp"
#include "mspe/perm.hpp"
#include "mspe/projected.hpp"

#include <cmath>

using namespace mspe;
using linalg::ComplexMatrix;
using linalg::Index;

namespace {

MomentTensor diag_moment(std::initializer_list<double> vals) {
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(vals.size()),
                                          static_cast<Index>(vals.size()));
    Index i = 0;
    for (double v : vals)
        m(i, i) = v, ++i;
    return MomentTensor{1, static_cast<Index>(vals.size()), std::move(m)};
}

// hand-built ensemble on A = site 0, R = site 3, sites 1 and 2 lost
projected::MSPEnsemble synthetic_ensemble(const std::vector<ComplexMatrix> &states) {
    projected::MSPEnsemble ens;
    ens.partition.layout = linalg::QuditLayout{4, 2};
    ens.partition.n_a = 1;
    ens.partition.lost_sites = {1, 2};
    ens.partition.reference = true;
    const double p = 1.0 / static_cast<double>(states.size());
    int tag = 0;
    for (const auto &rho : states) {
        ens.entries.push_back({{tag++}, p, rho});
        ens.total_weight += p;
    }
    return ens;
}

} // namespace

TEST_CASE("ensemble distance hand values") {
    const MomentTensor measured = diag_moment({0.5, 0.5});
    const MomentTensor reference = diag_moment({1.0, 0.0});

    const auto trace_report = metrics::ensemble_distance(measured, reference, 1.0);
    CHECK(trace_report.xi == 1.0);
    CHECK(std::abs(trace_report.raw - 1.0) < 1e-12);
    CHECK(std::abs(trace_report.normalizer - 1.0) < 1e-12);
    CHECK(std::abs(trace_report.normalized - 1.0) < 1e-12);

    const auto frob_report = metrics::ensemble_distance(measured, reference, 2.0);
    CHECK(std::abs(frob_report.raw - std::sqrt(0.5)) < 1e-12);
    CHECK(std::abs(frob_report.normalized - std::sqrt(0.5)) < 1e-12);

    const auto self_report = metrics::ensemble_distance(reference, reference, 1.0);
    CHECK(self_report.raw == 0.0);
    CHECK(self_report.normalized == 0.0);

    const MomentTensor wide = diag_moment({0.25, 0.25, 0.25, 0.25});
    CHECK_THROWS_AS(metrics::ensemble_distance(measured, wide, 1.0), ArgumentError);
    CHECK_THROWS_AS(metrics::ensemble_distance(measured, reference, 0.5), ArgumentError);

    MomentTensor zero = diag_moment({0.0, 0.0});
    CHECK_THROWS_AS(metrics::ensemble_distance(measured, zero, 1.0), NumericError);

    const MomentTensor ghs = perm::ghs_moment(1, 1, 2, 2);
    const auto same = metrics::ensemble_distance(ghs, ghs, 1.0);
    CHECK(same.normalized < 1e-14);
}

TEST_CASE("renyi entropy") {
    ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
    rho(0, 0) = 0.75;
    rho(1, 1) = 0.25;
    CHECK(std::abs(metrics::renyi_entropy(rho, 2.0) + std::log(0.625)) < 1e-12);
    CHECK(std::abs(metrics::renyi_entropy(rho, 0.0) - std::log(2.0)) < 1e-12);
    CHECK(metrics::renyi_entropy(rho, 2.0) > metrics::renyi_entropy(rho, 3.0));

    ComplexMatrix pure = ComplexMatrix::Zero(2, 2);
    pure(0, 0) = 1.0;
    CHECK(std::abs(metrics::renyi_entropy(pure, 2.0)) < 1e-12);
    CHECK(std::abs(metrics::renyi_entropy(pure, 0.0)) < 1e-12);

    const ComplexMatrix mixed = ComplexMatrix::Identity(4, 4) / 4.0;
    CHECK(std::abs(metrics::renyi_entropy(mixed, 2.0) - std::log(4.0)) < 1e-12);
    CHECK(std::abs(metrics::renyi_entropy(mixed, 0.5) - std::log(4.0)) < 1e-12);

    CHECK_THROWS_AS(metrics::renyi_entropy(rho, 1.0), ArgumentError);
    CHECK_THROWS_AS(metrics::renyi_entropy(rho, -1.0), ArgumentError);
    ComplexMatrix off = ComplexMatrix::Zero(2, 2);
    off(0, 0) = 0.5;
    off(1, 1) = 0.25;
    CHECK_THROWS_AS(metrics::renyi_entropy(off, 2.0), ArgumentError);
    ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(metrics::renyi_entropy(neg, 2.0), NumericError);
}

TEST_CASE("annealed conditional entropy signs") {
    // maximally entangled conditional states: I = -log d
    const ComplexMatrix w = projected::heisenberg_weyl_basis(2);
    std::vector<ComplexMatrix> bells;
    for (Index c = 0; c < 4; ++c)
        bells.push_back(w.col(c) * w.col(c).adjoint());
    const auto tele = synthetic_ensemble(bells);
    CHECK(std::abs(metrics::annealed_conditional_entropy(tele, 2) + std::log(2.0)) < 1e-12);
    CHECK(std::abs(metrics::annealed_conditional_entropy(tele, 3) + std::log(2.0)) < 1e-12);

    // fully mixed conditional states: I = +log d
    const auto mixed = synthetic_ensemble({ComplexMatrix::Identity(4, 4) / 4.0});
    CHECK(std::abs(metrics::annealed_conditional_entropy(mixed, 2) - std::log(2.0)) < 1e-12);

    // product pure states: I = 0
    ComplexMatrix prod = ComplexMatrix::Zero(4, 4);
    prod(0, 0) = 1.0;
    const auto zero = synthetic_ensemble({prod});
    CHECK(std::abs(metrics::annealed_conditional_entropy(zero, 2)) < 1e-12);

    auto no_ref = synthetic_ensemble(bells);
    no_ref.partition.reference = false;
    CHECK_THROWS_AS(metrics::annealed_conditional_entropy(no_ref, 2), ArgumentError);
    CHECK_THROWS_AS(metrics::annealed_conditional_entropy(tele, 1), ArgumentError);
}
