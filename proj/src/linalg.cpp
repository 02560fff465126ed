#include "mspe/linalg.hpp"
#include "mspe/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

namespace mspe::linalg {

Index QuditLayout::dim() const {
    if (n_sites < 0 || local_dim < 2)
        throw ArgumentError("QuditLayout: need n_sites >= 0 and local_dim >= 2");
    Index d = 1;
    for (int s = 0; s < n_sites; ++s) {
        if (d > (std::numeric_limits<Index>::max() / local_dim))
            throw ResourceError("QuditLayout: composite dimension overflows");
        d *= local_dim;
    }
    return d;
}

Index QuditLayout::site_stride(int site) const {
    if (site < 0 || site >= n_sites)
        throw ArgumentError("QuditLayout: site out of range");
    Index s = 1;
    for (int j = site + 1; j < n_sites; ++j)
        s *= local_dim;
    return s;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix &rho, const QuditLayout &layout,
                            const std::vector<int> &keep_sites) {
    const Index dim = layout.dim();
    if (rho.rows() != dim || rho.cols() != dim)
        throw ArgumentError("partial_trace: operator shape does not match layout");
    if (!std::is_sorted(keep_sites.begin(), keep_sites.end()) ||
        std::adjacent_find(keep_sites.begin(), keep_sites.end()) != keep_sites.end())
        throw ArgumentError("partial_trace: keep_sites must be strictly ascending");
    for (int s : keep_sites)
        if (s < 0 || s >= layout.n_sites)
            throw ArgumentError("partial_trace: keep site out of range");

    std::vector<int> rest;
    {
        std::vector<bool> kept(layout.n_sites, false);
        for (int s : keep_sites)
            kept[s] = true;
        for (int s = 0; s < layout.n_sites; ++s)
            if (!kept[s])
                rest.push_back(s);
    }

    const int d = layout.local_dim;
    // Composite offsets for every digit assignment of a site group, in the
    // group's own big-endian order.
    auto offsets = [&](const std::vector<int> &sites) {
        Index n = 1;
        for (size_t i = 0; i < sites.size(); ++i)
            n *= d;
        std::vector<Index> off(n, 0);
        for (Index idx = 0; idx < n; ++idx) {
            Index rem = idx;
            for (size_t pos = sites.size(); pos-- > 0;) {
                off[idx] += (rem % d) * layout.site_stride(sites[pos]);
                rem /= d;
            }
        }
        return off;
    };

    const auto keep_off = offsets(keep_sites);
    const auto rest_off = offsets(rest);

    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Index>(keep_off.size()),
                                            static_cast<Index>(keep_off.size()));
    for (size_t r = 0; r < keep_off.size(); ++r)
        for (size_t c = 0; c < keep_off.size(); ++c) {
            std::complex<double> acc = 0.0;
            for (Index e : rest_off)
                acc += rho(keep_off[r] + e, keep_off[c] + e);
            out(static_cast<Index>(r), static_cast<Index>(c)) = acc;
        }
    return out;
}

double schatten_norm(const ComplexMatrix &m, double xi) {
    if (!(xi >= 1.0))
        throw ArgumentError("schatten_norm: xi must be >= 1");
    if (xi == 2.0)
        return m.norm();
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const auto &sv = svd.singularValues();
    if (xi == 1.0)
        return sv.sum();
    double acc = 0.0;
    for (Index i = 0; i < sv.size(); ++i)
        acc += std::pow(sv(i), xi);
    return std::pow(acc, 1.0 / xi);
}

EigResult herm_eig(const ComplexMatrix &h) {
    if (h.rows() != h.cols())
        throw ArgumentError("herm_eig: matrix must be square");
    const double dev = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (dev > kHermTol)
        throw NumericError("herm_eig: input deviates from hermitian by " + std::to_string(dev));
    const ComplexMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success)
        throw NumericError("herm_eig: eigensolver failed to converge");
    return {solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
}

ComplexMatrix herm_expm(const ComplexMatrix &h, double scale) {
    const EigResult eig = herm_eig(h);
    ComplexVector phases(eig.values.size());
    for (Index i = 0; i < eig.values.size(); ++i)
        phases(i) = std::exp(std::complex<double>(0.0, scale * eig.values(i)));
    return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

} // namespace mspe::linalg
