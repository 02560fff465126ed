#include "mspe/json_util.hpp"
#include "mspe/errors.hpp"

namespace mspe {

using nlohmann::json;

json complex_to_json(const std::complex<double> &z) {
    return json::array({z.real(), z.imag()});
}

std::complex<double> complex_from_json(const json &j) {
    if (!j.is_array() || j.size() != 2)
        throw ArgumentError("complex value must be a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const linalg::ComplexMatrix &m) {
    json rows = json::array();
    for (linalg::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (linalg::Index j = 0; j < m.cols(); ++j)
            row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

linalg::ComplexMatrix matrix_from_json(const json &j) {
    if (!j.is_array() || j.empty())
        throw ArgumentError("matrix json must be a non-empty array of rows");
    const auto nrows = static_cast<linalg::Index>(j.size());
    const auto ncols = static_cast<linalg::Index>(j[0].size());
    linalg::ComplexMatrix m(nrows, ncols);
    for (linalg::Index r = 0; r < nrows; ++r) {
        if (static_cast<linalg::Index>(j[r].size()) != ncols)
            throw ArgumentError("matrix json rows have inconsistent lengths");
        for (linalg::Index c = 0; c < ncols; ++c)
            m(r, c) = complex_from_json(j[r][c]);
    }
    return m;
}

} // namespace mspe
