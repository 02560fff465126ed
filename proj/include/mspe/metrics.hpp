#pragma once

#include "mspe/linalg.hpp"
#include "mspe/moment.hpp"
#include "mspe/projected.hpp"

namespace mspe::metrics {

struct DistanceReport {
    double xi = 1.0;
    double raw = 0.0;        // ||measured - reference||_xi
    double normalizer = 0.0; // ||reference||_xi
    double normalized = 0.0;
};

DistanceReport ensemble_distance(const MomentTensor &measured, const MomentTensor &reference,
                                 double xi);

// (1 / (1 - k)) log Tr rho^k for real k >= 0, k != 1; k = 0 counts the rank.
double renyi_entropy(const linalg::ComplexMatrix &rho, double k);

// -(1/(k-1)) log( avg Tr rho_{AR}^k / avg Tr rho_A^k ) over the ensemble, in
// nats; requires a reference qudit.
double annealed_conditional_entropy(const projected::MSPEnsemble &ensemble, int k);

} // namespace mspe::metrics
