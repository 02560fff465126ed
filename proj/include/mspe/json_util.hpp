#pragma once

#include "mspe/linalg.hpp"

#include <json.hpp>

namespace mspe {

// Complex scalars travel as [re, im]; matrices as row-major nested arrays.
nlohmann::json complex_to_json(const std::complex<double> &z);
std::complex<double> complex_from_json(const nlohmann::json &j);

nlohmann::json matrix_to_json(const linalg::ComplexMatrix &m);
linalg::ComplexMatrix matrix_from_json(const nlohmann::json &j);

} // namespace mspe
