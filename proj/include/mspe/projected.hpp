#pragma once

#include "mspe/linalg.hpp"
#include "mspe/moment.hpp"

#include <json.hpp>
#include <vector>

namespace mspe::projected {

using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::Index;
using linalg::QuditLayout;

enum class MeasurementBasis { HeisenbergWeylPairs, Computational };
enum class LossLayout { Consecutive, Sparse };

// Splits the chain into A = sites [0, n_a), an optional unmeasured reference
// qudit R at the rightmost site, lost sites that are traced out, and measured
// sites (everything else).
struct Partition {
    QuditLayout layout;
    int n_a = 1;
    std::vector<int> lost_sites; // ascending
    bool reference = false;
    MeasurementBasis basis = MeasurementBasis::HeisenbergWeylPairs;
};

std::vector<int> measured_sites(const Partition &p);
std::vector<int> keep_sites(const Partition &p); // A then R, ascending
void validate_partition(const Partition &p);

// One readout unit: an adjacent two-site cell measured in the maximally
// entangled basis, or a single site measured in the computational basis.
struct MeasurementUnit {
    int first_site = 0;
    bool pair = false;
};

// Greedy left-to-right pairing of the measured sites. An odd-length run of
// consecutive measured sites is rejected unless it is the rightmost run, whose
// last site is then read out in the computational basis.
std::vector<MeasurementUnit> measurement_plan(const Partition &p);

// Lost-site placement helper: a centered block of m sites (consecutive), or
// m/2 adjacent pairs separated by `gap` retained sites (sparse), aligned to
// the two-site cell grid when the basis pairs sites.
Partition make_partition(const QuditLayout &layout, int n_a, int m, LossLayout loss,
                         int gap, bool reference, MeasurementBasis basis);

// Columns are the d^2 orthonormal maximally entangled two-qudit states
// (shift^a clock^b acting on the second qudit of the standard pair), column
// index a*d + b.
ComplexMatrix heisenberg_weyl_basis(int d);

struct MSPEntry {
    std::vector<int> outcome; // one symbol per measurement unit
    double p = 0.0;
    ComplexMatrix rho; // normalized state on keep_sites (A digits, then R)
};

struct MSPEnsemble {
    Partition partition;
    std::vector<MSPEntry> entries;
    double total_weight = 0.0; // sum of retained outcome probabilities

    Index keep_dim() const;
    Index lost_dim() const;
};

// Rotates each measured cell into the computational basis, reshapes the
// amplitude vector into a (keep x lost) by (outcomes) array, and reads one
// conditional state per retained column. Outcomes with probability below
// max(probability_floor, 1e-14) are dropped.
MSPEnsemble build_mspe(const ComplexVector &psi, const Partition &partition,
                       double probability_floor = 0.0,
                       Index outcome_budget = Index(1) << 24);

// sum_a P_a rho_a^{(x)k} over the retained entries.
MomentTensor moment(const MSPEnsemble &ensemble, int k, Index budget = 4096);

// Weighted ensemble averages of Tr rho^k for the full kept state (A and R)
// and for its reduction to A alone; the two coincide when no reference is
// present.
struct PurityAverages {
    std::vector<int> ks;
    std::vector<double> keep;      // avg Tr rho_{AR}^k
    std::vector<double> reduced_a; // avg Tr rho_A^k
};

PurityAverages purity_averages(const MSPEnsemble &ensemble, const std::vector<int> &ks);

void to_json(nlohmann::json &j, const Partition &p);
void from_json(const nlohmann::json &j, Partition &p);
void to_json(nlohmann::json &j, const MSPEnsemble &e);
void from_json(const nlohmann::json &j, MSPEnsemble &e);

} // namespace mspe::projected
