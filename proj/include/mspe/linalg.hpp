#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

namespace mspe::linalg {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Chain of n_sites qudits with equal local dimension. Site 0 is the leftmost
// qudit and owns the most significant digit of the composite index.
struct QuditLayout {
    int n_sites = 0;
    int local_dim = 2;

    Index dim() const;           // local_dim^n_sites, overflow-checked
    Index site_stride(int site) const;
};

constexpr double kHermTol = 1e-10;

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);

// Reduced operator on keep_sites (ascending site indices), tracing the rest.
ComplexMatrix partial_trace(const ComplexMatrix &rho, const QuditLayout &layout,
                            const std::vector<int> &keep_sites);

double schatten_norm(const ComplexMatrix &m, double xi);

struct EigResult {
    RealVector values;      // descending
    ComplexMatrix vectors;  // columns, unitary
};

// Checks hermiticity to kHermTol (max abs entry deviation), symmetrizes, solves.
EigResult herm_eig(const ComplexMatrix &h);

// exp(i * scale * h) for hermitian h.
ComplexMatrix herm_expm(const ComplexMatrix &h, double scale);

} // namespace mspe::linalg
