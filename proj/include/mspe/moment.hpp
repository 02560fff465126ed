#pragma once

#include "mspe/linalg.hpp"

#include <json.hpp>

namespace mspe {

// k-th moment of a state ensemble: sum_a P_a rho_a^{(x)k}, a hermitian PSD
// trace-one operator on k replicas of a per_replica_dim subsystem. Also the
// carrier for analytic reference moments.
struct MomentTensor {
    int k = 1;
    linalg::Index per_replica_dim = 1;
    linalg::ComplexMatrix matrix;

    linalg::Index total_dim() const;
};

// Throws NumericError when the moment fails hermiticity (1e-10), positivity
// (eigenvalues >= -1e-9), unit trace (1e-10), or invariance under permuting
// replicas (max entry deviation 1e-9).
void check_moment(const MomentTensor &m);

void to_json(nlohmann::json &j, const MomentTensor &m);
void from_json(const nlohmann::json &j, MomentTensor &m);

} // namespace mspe
