#include "mspe/moment.hpp"
#include "mspe/errors.hpp"
#include "mspe/json_util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace mspe {

using linalg::Index;

Index MomentTensor::total_dim() const {
    if (k < 1 || per_replica_dim < 1)
        throw ArgumentError("MomentTensor: need k >= 1 and per_replica_dim >= 1");
    Index dim = 1;
    for (int r = 0; r < k; ++r) {
        if (dim > std::numeric_limits<Index>::max() / per_replica_dim)
            throw ResourceError("MomentTensor: replica dimension overflows");
        dim *= per_replica_dim;
    }
    return dim;
}

namespace {

// Basis relabelling induced by moving the digit at replica slot u to slot p[u].
std::vector<Index> replica_index_map(const std::vector<int> &p, Index d, int k) {
    Index dim = 1;
    for (int r = 0; r < k; ++r)
        dim *= d;
    std::vector<Index> stride(k);
    stride[k - 1] = 1;
    for (int r = k - 2; r >= 0; --r)
        stride[r] = stride[r + 1] * d;
    std::vector<Index> map(dim);
    for (Index x = 0; x < dim; ++x) {
        Index rem = x, y = 0;
        for (int u = 0; u < k; ++u) {
            const Index digit = rem / stride[u] % d;
            y += digit * stride[p[u]];
        }
        map[x] = y;
    }
    return map;
}

} // namespace

void check_moment(const MomentTensor &m) {
    const Index dim = m.total_dim();
    if (m.matrix.rows() != dim || m.matrix.cols() != dim)
        throw ArgumentError("check_moment: matrix shape does not match k and per_replica_dim");

    const double herm_dev = (m.matrix - m.matrix.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > 1e-10)
        throw NumericError("check_moment: hermiticity deviation " + std::to_string(herm_dev));

    const double trace_dev = std::abs(m.matrix.trace() - std::complex<double>(1.0, 0.0));
    if (trace_dev > 1e-10)
        throw NumericError("check_moment: trace deviation " + std::to_string(trace_dev));

    const auto eig = linalg::herm_eig(m.matrix);
    if (eig.values.minCoeff() < -1e-9)
        throw NumericError("check_moment: negative eigenvalue " +
                           std::to_string(eig.values.minCoeff()));

    if (m.k > 8)
        throw ResourceError("check_moment: replica invariance check capped at k <= 8");
    std::vector<int> p(m.k);
    std::iota(p.begin(), p.end(), 0);
    do {
        const auto map = replica_index_map(p, m.per_replica_dim, m.k);
        double dev = 0.0;
        for (Index x = 0; x < dim; ++x)
            for (Index y = 0; y < dim; ++y)
                dev = std::max(dev, std::abs(m.matrix(map[x], map[y]) - m.matrix(x, y)));
        if (dev > 1e-9)
            throw NumericError("check_moment: replica permutation breaks invariance by " +
                               std::to_string(dev));
    } while (std::next_permutation(p.begin(), p.end()));
}

void to_json(nlohmann::json &j, const MomentTensor &m) {
    j = nlohmann::json{{"k", m.k},
                       {"per_replica_dim", m.per_replica_dim},
                       {"matrix", matrix_to_json(m.matrix)}};
}

void from_json(const nlohmann::json &j, MomentTensor &m) {
    m.k = j.at("k").get<int>();
    m.per_replica_dim = j.at("per_replica_dim").get<linalg::Index>();
    m.matrix = matrix_from_json(j.at("matrix"));
    if (m.matrix.rows() != m.total_dim() || m.matrix.cols() != m.total_dim())
        throw ArgumentError("MomentTensor json: matrix shape does not match header");
}

} // namespace mspe
