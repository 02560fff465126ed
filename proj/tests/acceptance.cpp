// End-to-end acceptance checks: one pass/fail line each, nonzero exit if any
// fail. Tolerances are pinned inline next to each check.
#include "mspe/circuits.hpp"
#include "mspe/experiment.hpp"
#include "mspe/linalg.hpp"
#include "mspe/metrics.hpp"
#include "mspe/perm.hpp"
#include "mspe/projected.hpp"
#include "mspe/rng.hpp"
#include "mspe/sampling.hpp"

#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace mspe;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::QuditLayout;

namespace {

int failures = 0;

void run_criterion(int idx, const std::string &label,
                   const std::function<bool(std::ostringstream &)> &body) {
    std::ostringstream detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception &e) {
        detail << "threw: " << e.what();
    }
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << idx << ": " << label;
    const std::string text = detail.str();
    if (!text.empty())
        std::cout << " (" << text << ")";
    std::cout << "\n" << std::flush;
    if (!ok)
        ++failures;
}

// 1. Exact integer identity: the cycle-count generating sum over S_k equals the
// rising factorial D(D+1)...(D+k-1).
bool criterion_1(std::ostringstream &detail) {
    for (int k = 1; k <= 6; ++k)
        for (int bigd = 2; bigd <= 5; ++bigd) {
            perm::BigInt sum = 0;
            for (const auto &g : perm::enumerate_sym(k))
                sum += perm::ipow(bigd, static_cast<unsigned>(g.cycle_count()));
            const perm::BigInt expected = perm::rising_factorial(bigd, k);
            if (sum != expected) {
                detail << "k=" << k << " D=" << bigd << ": " << sum
                       << " != " << expected;
                return false;
            }
        }
    detail << "all k <= 6, D in {2..5} exact";
    return true;
}

// 2. The closed-form second moment of the lossy random-matrix ensemble matches
// a 10^4-sample Monte Carlo estimate entry by entry.
bool criterion_2(std::ostringstream &detail) {
    const auto ref = perm::ghs_moment(1, 1, 2, 2);
    sampling::SamplerSpec spec;
    spec.kind = sampling::SamplerSpec::Kind::Ghs;
    spec.n_a = 1;
    spec.m = 1;
    spec.d = 2;
    const long n = 10000;
    const auto mc = sampling::mc_moment(spec, 2, n, 20260814);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < ref.matrix.rows(); ++i)
        for (Eigen::Index j = 0; j < ref.matrix.cols(); ++j) {
            const double diff = std::abs(mc.mean.matrix(i, j) - ref.matrix(i, j));
            const double scale = 5.0 * mc.stderr_entries(i, j) + 1e-12;
            worst = std::max(worst, diff / scale);
        }
    if (worst > 1.0) {
        detail << "moment entry off by " << worst << " of the 5-sigma band";
        return false;
    }

    auto gen = rng::stream(20260814, 777);
    double sum = 0.0, sum_sq = 0.0;
    for (long i = 0; i < n; ++i) {
        const ComplexMatrix rho = sampling::sample_ghs(1, 1, 2, gen);
        const double p = (rho * rho).trace().real();
        sum += p;
        sum_sq += p * p;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / n);
    if (std::abs(mean - 0.8) > 3.0 * se) {
        detail << "purity " << mean << " vs 0.8, se " << se;
        return false;
    }
    detail << "moment within 5 se, purity " << mean << " within 3 se of 0.8";
    return true;
}

// 3. For every model the k = 1 moment of the built ensemble is the reduced
// density matrix of the full state on the kept sites.
bool criterion_3(std::ostringstream &detail) {
    struct Case {
        std::string name;
        ComplexVector state;
        QuditLayout layout;
        projected::Partition partition;
    };
    std::vector<Case> cases;

    {
        QuditLayout layout{8, 2};
        auto state = circuits::bell_pair_initial_state(8, 2);
        circuits::CircuitSpec spec;
        spec.layout = layout;
        spec.source = circuits::GateSource::DualUnitaryRandom;
        spec.seed = 11;
        circuits::brickwall_apply(state, spec, 0, 3);
        cases.push_back({"dual-unitary", state, layout,
                         projected::make_partition(
                             layout, 2, 2, projected::LossLayout::Consecutive, 0, false,
                             projected::MeasurementBasis::HeisenbergWeylPairs)});
    }
    {
        QuditLayout layout{8, 2};
        auto state = circuits::bell_pair_initial_state(8, 2);
        circuits::CircuitSpec spec;
        spec.layout = layout;
        spec.source = circuits::GateSource::HaarRandom;
        spec.seed = 12;
        circuits::brickwall_apply(state, spec, 0, 3);
        cases.push_back({"local-haar", state, layout,
                         projected::make_partition(
                             layout, 2, 2, projected::LossLayout::Consecutive, 0, false,
                             projected::MeasurementBasis::HeisenbergWeylPairs)});
    }
    {
        QuditLayout layout{7, 2};
        auto state = circuits::computational_zero_state(7, 2);
        circuits::CircuitSpec spec;
        spec.layout = layout;
        spec.source = circuits::GateSource::KickedIsing;
        spec.seed = 13;
        circuits::brickwall_apply(state, spec, 0, 4);
        cases.push_back({"kicked-ising", state, layout,
                         projected::make_partition(
                             layout, 2, 2, projected::LossLayout::Consecutive, 0, false,
                             projected::MeasurementBasis::Computational)});
    }
    {
        QuditLayout layout{6, 2};
        circuits::HamiltonianSpec hs;
        hs.layout = layout;
        auto state = circuits::hamiltonian_evolve(
            circuits::computational_zero_state(6, 2), hs, 2.0);
        cases.push_back({"mixed-field-ising", state, layout,
                         projected::make_partition(
                             layout, 2, 1, projected::LossLayout::Consecutive, 0, false,
                             projected::MeasurementBasis::Computational)});
    }
    {
        QuditLayout layout{7, 2};
        auto gen = rng::stream(14);
        auto state = sampling::haar_state(layout.dim(), gen);
        cases.push_back({"global-haar-state", state, layout,
                         projected::make_partition(
                             layout, 2, 2, projected::LossLayout::Consecutive, 0, true,
                             projected::MeasurementBasis::Computational)});
    }

    for (const auto &c : cases) {
        const auto ens = projected::build_mspe(c.state, c.partition);
        const auto m1 = projected::moment(ens, 1);
        const ComplexMatrix rho_full = c.state * c.state.adjoint();
        const ComplexMatrix reduced =
            linalg::partial_trace(rho_full, c.layout, projected::keep_sites(c.partition));
        const double err = (m1.matrix - reduced).cwiseAbs().maxCoeff();
        if (err > 1e-10) {
            detail << c.name << ": max entry error " << err;
            return false;
        }
    }
    detail << cases.size() << " models within 1e-10";
    return true;
}

// 4. Saturated second-moment deviation decreases strictly with chain length
// and is consistent with an exponential decay law.
bool criterion_4(std::ostringstream &detail) {
    nlohmann::json j{{"model", "local-haar"},
                     {"N", {6, 8, 10, 12, 14}},
                     {"t", {28, 30}},
                     {"N_A", 2},
                     {"m", 2},
                     {"k", 2},
                     {"xi", {1.0}},
                     {"realizations", 10},
                     {"seed", 42},
                     {"output", "x"}};
    const auto rows = experiment::run_distance(experiment::config_from_json(j));
    std::vector<double> saturated;
    const std::vector<int> ns = {6, 8, 10, 12, 14};
    for (int n : ns) {
        double acc = 0.0;
        int count = 0;
        for (const auto &r : rows)
            if (r.n == n) {
                acc += r.delta_mean;
                ++count;
            }
        saturated.push_back(acc / count);
    }
    for (size_t i = 1; i < saturated.size(); ++i)
        if (!(saturated[i] < saturated[i - 1])) {
            detail << "not decreasing at N=" << ns[i] << ": " << saturated[i - 1]
                   << " -> " << saturated[i];
            return false;
        }
    // least squares of log(delta) on N and its coefficient of determination
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const double n_pts = static_cast<double>(ns.size());
    for (size_t i = 0; i < ns.size(); ++i) {
        const double x = ns[i], y = std::log(saturated[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double slope = (n_pts * sxy - sx * sy) / (n_pts * sxx - sx * sx);
    const double r_num = n_pts * sxy - sx * sy;
    const double r2 = r_num * r_num / ((n_pts * sxx - sx * sx) * (n_pts * syy - sy * sy));
    if (!(r2 > 0.9)) {
        detail << "exponential fit R^2 = " << r2;
        return false;
    }
    detail << "deltas " << saturated.front() << " .. " << saturated.back()
           << ", slope " << slope << ", R^2 " << r2;
    return true;
}

// 5. Finite-depth replica coefficients converge to their limit exponentially,
// with the step ratio in the expected band.
bool criterion_5(std::ostringstream &detail) {
    const auto limit = perm::alpha_large_t(2, 2, 3);
    std::vector<double> errs;
    for (long t : {4L, 8L, 12L, 16L, 20L}) {
        const auto alpha = perm::solve_alpha_finite_t(t, 2, 2, 3);
        double worst = 0.0;
        for (size_t i = 0; i < alpha.values.size(); ++i)
            worst = std::max(worst, std::abs(alpha.values[i] - limit.values[i]));
        errs.push_back(worst);
    }
    for (size_t i = 1; i < errs.size(); ++i) {
        if (!(errs[i] < errs[i - 1])) {
            detail << "error not decreasing at step " << i;
            return false;
        }
        const double ratio = errs[i] / errs[i - 1];
        if (ratio < 1.0 / 32.0 || ratio > 1.0 / 8.0) {
            detail << "step ratio " << ratio << " outside [1/32, 1/8]";
            return false;
        }
    }
    detail << "max deviation " << errs.front() << " -> " << errs.back();
    return true;
}

// 6. Analytic conditional entropy: exact zero on the transition line, and the
// two phases approach -log 2 and +log 2 away from it.
bool criterion_6(std::ostringstream &detail) {
    const double log2 = std::log(2.0);
    for (int k : {2, 3, 4})
        for (int q : {1, 2}) {
            for (int n_a = 1; n_a <= 6; ++n_a) {
                const double i0 = perm::conditional_entropy_analytic(n_a, n_a, 2, k, q);
                if (std::abs(i0) >= 1e-12) {
                    detail << "N_A=m=" << n_a << " k=" << k << " q=" << q << ": " << i0;
                    return false;
                }
            }
            const double tele = perm::conditional_entropy_analytic(9, 3, 2, k, q);
            if (std::abs(tele + log2) > 0.15) {
                detail << "N_A=9 m=3 k=" << k << " q=" << q << ": " << tele;
                return false;
            }
            const double dec = perm::conditional_entropy_analytic(3, 9, 2, k, q);
            if (std::abs(dec - log2) > 0.15) {
                detail << "N_A=3 m=9 k=" << k << " q=" << q << ": " << dec;
                return false;
            }
        }
    detail << "zeros exact, both phases within 0.15 of +-log 2";
    return true;
}

// 7. Simulated conditional entropy sits on the transition at N_A = m and drops
// toward -log 2 in the lossless teleporting phase.
bool criterion_7(std::ostringstream &detail) {
    nlohmann::json balanced{{"model", "dual-unitary"},
                            {"N", 8},
                            {"t", 8},
                            {"N_A", 2},
                            {"m", 2},
                            {"reference", true},
                            {"k", 2},
                            {"realizations", 10},
                            {"seed", 71},
                            {"output", "x"}};
    const auto rows_a = experiment::run_entropy(experiment::config_from_json(balanced));
    if (std::abs(rows_a[0].i_mean) >= 0.15) {
        detail << "N_A=m=2: I = " << rows_a[0].i_mean;
        return false;
    }
    nlohmann::json lossless = balanced;
    lossless["N"] = 10;
    lossless["t"] = 10;
    lossless["N_A"] = 4;
    lossless["m"] = 0;
    lossless["seed"] = 72;
    const auto rows_b = experiment::run_entropy(experiment::config_from_json(lossless));
    if (!(rows_b[0].i_mean < -0.5)) {
        detail << "N_A=4 m=0: I = " << rows_b[0].i_mean;
        return false;
    }
    detail << "I(N_A=m=2) = " << rows_a[0].i_mean << ", I(N_A=4,m=0) = "
           << rows_b[0].i_mean;
    return true;
}

// 8. Pooled conditional-state spectra center on 1/d^m and sharpen with depth.
bool criterion_8(std::ostringstream &detail) {
    nlohmann::json j{{"model", "dual-unitary"},
                     {"N", 8},
                     {"t", {6, 12}},
                     {"N_A", 3},
                     {"m", 2},
                     {"k", 1},
                     {"realizations", 10},
                     {"seed", 81},
                     {"output", "x"}};
    const auto points =
        experiment::run_spectrum(experiment::config_from_json(j), 1, 64);
    if (points.size() != 2) {
        detail << "expected two depth points";
        return false;
    }
    for (const auto &p : points)
        if (std::abs(p.histogram.mean - 0.25) > 0.05) {
            detail << "t=" << p.t << " mean " << p.histogram.mean;
            return false;
        }
    if (!(points[1].histogram.variance < points[0].histogram.variance)) {
        detail << "variance " << points[0].histogram.variance << " -> "
               << points[1].histogram.variance << " did not shrink";
        return false;
    }
    detail << "means " << points[0].histogram.mean << ", " << points[1].histogram.mean
           << "; variance " << points[0].histogram.variance << " -> "
           << points[1].histogram.variance;
    return true;
}

// 9. Random-state ensembles approach the lossy limit ensemble as the bath
// grows, dropping below 0.1 by N_B = 9.
bool criterion_9(std::ostringstream &detail) {
    nlohmann::json j{{"model", "global-haar-state"},
                     {"N", {6, 8, 10}},
                     {"N_A", 1},
                     {"m", 1},
                     {"k", 2},
                     {"xi", {1.0}},
                     {"realizations", 3},
                     {"seed", 91},
                     {"output", "x"}};
    const auto rows = experiment::run_distance(experiment::config_from_json(j));
    if (rows.size() != 3) {
        detail << "expected three rows";
        return false;
    }
    for (size_t i = 1; i < rows.size(); ++i)
        if (!(rows[i].delta_mean < rows[i - 1].delta_mean)) {
            detail << "not decreasing at N=" << rows[i].n;
            return false;
        }
    if (!(rows[2].delta_mean < 0.1)) {
        detail << "N_B=9: " << rows[2].delta_mean;
        return false;
    }
    detail << "deltas " << rows[0].delta_mean << ", " << rows[1].delta_mean << ", "
           << rows[2].delta_mean;
    return true;
}

// 10. The two-site gate family and its membership test agree on knowns.
bool criterion_10(std::ostringstream &detail) {
    auto gen = rng::stream(10101);
    for (int i = 0; i < 100; ++i)
        if (!circuits::is_dual_unitary(circuits::random_dual_unitary_gate(gen), 2)) {
            detail << "random draw " << i << " rejected";
            return false;
        }
    ComplexMatrix swap = ComplexMatrix::Zero(4, 4);
    swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
    ComplexMatrix cnot = ComplexMatrix::Zero(4, 4);
    cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
    if (!circuits::is_dual_unitary(swap, 2)) {
        detail << "swap rejected";
        return false;
    }
    if (circuits::is_dual_unitary(cnot, 2) ||
        circuits::is_dual_unitary(ComplexMatrix::Identity(4, 4), 2)) {
        detail << "cnot or identity accepted";
        return false;
    }
    detail << "100 draws pass; swap passes; cnot and identity fail";
    return true;
}

// 11. One isolated lost pair carries the same leading coefficient ratio as a
// consecutive block of two in the deep-circuit limit, exactly.
bool criterion_11(std::ostringstream &detail) {
    const auto sparse = perm::sparse_alpha(1, 2, 2);
    const auto block = perm::alpha_large_t(2, 2, 2);
    const auto id = perm::Permutation::identity(2);
    const auto swap = perm::Permutation::transposition(2, 0, 1);
    const double ratio_sparse = sparse.value(swap) / sparse.value(id);
    const double ratio_block = block.value(swap) / block.value(id);
    if (ratio_sparse != ratio_block) {
        detail << ratio_sparse << " != " << ratio_block;
        return false;
    }
    detail << "both ratios exactly " << ratio_sparse;
    return true;
}

} // namespace

int main() {
    run_criterion(1, "permutation weight identity is exact", criterion_1);
    run_criterion(2, "analytic lossy-ensemble moment matches Monte Carlo", criterion_2);
    run_criterion(3, "first moment reproduces the reduced state for every model",
                  criterion_3);
    run_criterion(4, "saturated deviation decays exponentially with chain length",
                  criterion_4);
    run_criterion(5, "finite-depth coefficients converge at the expected rate",
                  criterion_5);
    run_criterion(6, "analytic conditional entropy shows the sharp transition",
                  criterion_6);
    run_criterion(7, "simulated conditional entropy matches both phases", criterion_7);
    run_criterion(8, "conditional spectra concentrate with depth", criterion_8);
    run_criterion(9, "random-state ensembles converge to the lossy limit", criterion_9);
    run_criterion(10, "dual-unitarity detector agrees on known gates", criterion_10);
    run_criterion(11, "isolated-pair and block losses share the leading ratio",
                  criterion_11);
    if (failures > 0) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all 11 criteria passed\n";
    return 0;
}
