#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mspe/errors.hpp"
#include "mspe/linalg.hpp"
#include "mspe/rng.hpp"

#include <cmath>

using namespace mspe;
using linalg::ComplexMatrix;
using linalg::Index;

namespace {

ComplexMatrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
    auto gen = rng::stream(seed);
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            m(i, j) = rng::complex_gaussian(gen);
    return m;
}

ComplexMatrix random_int_matrix(Index rows, Index cols, std::uint64_t seed) {
    auto gen = rng::stream(seed);
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            m(i, j) = {static_cast<double>(gen() % 5), static_cast<double>(gen() % 5)};
    return m;
}

ComplexMatrix random_hermitian(Index dim, std::uint64_t seed) {
    const ComplexMatrix m = random_matrix(dim, dim, seed);
    return 0.5 * (m + m.adjoint().eval());
}

} // namespace

TEST_CASE("kron dimensions and block structure") {
    ComplexMatrix a(2, 2);
    a << 1, 2, 3, 4;
    const ComplexMatrix eye = ComplexMatrix::Identity(2, 2);
    const ComplexMatrix k = linalg::kron(a, eye);
    CHECK(k.rows() == 4);
    CHECK(k.cols() == 4);
    CHECK(k(0, 0) == std::complex<double>(1, 0));
    CHECK(k(1, 1) == std::complex<double>(1, 0));
    CHECK(k(0, 2) == std::complex<double>(2, 0));
    CHECK(k(2, 0) == std::complex<double>(3, 0));
    CHECK(k(3, 3) == std::complex<double>(4, 0));
    CHECK(k(0, 1) == std::complex<double>(0, 0));
}

TEST_CASE("kron trace multiplicativity and exact associativity") {
    const ComplexMatrix a = random_int_matrix(3, 3, 11);
    const ComplexMatrix b = random_int_matrix(2, 2, 12);
    const ComplexMatrix c = random_int_matrix(2, 2, 13);
    CHECK(linalg::kron(a, b).trace() == a.trace() * b.trace());
    const ComplexMatrix left = linalg::kron(linalg::kron(a, b), c);
    const ComplexMatrix right = linalg::kron(a, linalg::kron(b, c));
    CHECK(left == right);
}

TEST_CASE("partial trace respects big-endian site order") {
    // Site 0 is the most significant digit: kron(first site, second site).
    ComplexMatrix sigma(2, 2);
    sigma << 0.25, std::complex<double>(0.1, 0.2), std::complex<double>(0.1, -0.2), 0.75;
    ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    const ComplexMatrix rho = linalg::kron(p0, sigma);
    const linalg::QuditLayout layout{2, 2};
    CHECK((linalg::partial_trace(rho, layout, {1}) - sigma).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((linalg::partial_trace(rho, layout, {0}) - p0).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("partial trace of a product operator factorizes") {
    const ComplexMatrix a = random_hermitian(2, 21);
    const ComplexMatrix b = random_hermitian(2, 22);
    const ComplexMatrix c = random_hermitian(2, 23);
    const ComplexMatrix full = linalg::kron(linalg::kron(a, b), c);
    const linalg::QuditLayout layout{3, 2};
    const ComplexMatrix kept = linalg::partial_trace(full, layout, {1});
    CHECK((kept - b * (a.trace() * c.trace())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("partial trace edge cases and full trace") {
    const ComplexMatrix rho = random_hermitian(8, 31);
    const linalg::QuditLayout layout{3, 2};
    const ComplexMatrix all = linalg::partial_trace(rho, layout, {0, 1, 2});
    CHECK((all - rho).cwiseAbs().maxCoeff() == 0.0);
    const ComplexMatrix none = linalg::partial_trace(rho, layout, {});
    CHECK(none.rows() == 1);
    CHECK(std::abs(none(0, 0) - rho.trace()) < 1e-12);
    CHECK_THROWS_AS(linalg::partial_trace(rho, layout, {1, 0}), ArgumentError);
    CHECK_THROWS_AS(linalg::partial_trace(rho, layout, {3}), ArgumentError);
    CHECK_THROWS_AS(linalg::partial_trace(rho, linalg::QuditLayout{2, 2}, {0}),
                    ArgumentError);
}

TEST_CASE("schatten norms") {
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = -4.0;
    CHECK(linalg::schatten_norm(d, 1.0) == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(linalg::schatten_norm(d, 2.0) == doctest::Approx(5.0).epsilon(1e-12));

    const ComplexMatrix m = random_matrix(6, 6, 41);
    const double frob = linalg::schatten_norm(m, 2.0);
    CHECK(frob * frob == doctest::Approx(m.cwiseAbs2().sum()).epsilon(1e-12));
    // Schatten-xi is monotone nonincreasing in xi.
    const double s1 = linalg::schatten_norm(m, 1.0);
    const double s3 = linalg::schatten_norm(m, 3.0);
    CHECK(s1 >= frob);
    CHECK(frob >= s3);
    CHECK_THROWS_AS(linalg::schatten_norm(m, 0.5), ArgumentError);
}

TEST_CASE("herm_eig reconstructs and orders") {
    const ComplexMatrix h = random_hermitian(6, 51);
    const auto eig = linalg::herm_eig(h);
    for (Index i = 1; i < eig.values.size(); ++i)
        CHECK(eig.values(i) <= eig.values(i - 1));
    const ComplexMatrix rebuilt =
        eig.vectors * eig.values.cast<std::complex<double>>().asDiagonal() *
        eig.vectors.adjoint();
    CHECK((rebuilt - h).cwiseAbs().maxCoeff() < 1e-10);
    const ComplexMatrix gram = eig.vectors.adjoint() * eig.vectors;
    CHECK((gram - ComplexMatrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);

    ComplexMatrix bad = h;
    bad(0, 1) += 1e-6;
    CHECK_THROWS_AS(linalg::herm_eig(bad), NumericError);

    ComplexMatrix z = ComplexMatrix::Zero(2, 2);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    const auto zeig = linalg::herm_eig(z);
    CHECK(zeig.values(0) == doctest::Approx(1.0));
    CHECK(zeig.values(1) == doctest::Approx(-1.0));
    CHECK(std::abs(zeig.vectors(0, 0)) == doctest::Approx(1.0)); // top eigenvector first
}

TEST_CASE("herm_expm special values and group law") {
    ComplexMatrix z(2, 2);
    z << 1, 0, 0, -1;
    const ComplexMatrix id = linalg::herm_expm(z, 0.0);
    CHECK((id - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

    const ComplexMatrix u = linalg::herm_expm(z, -M_PI / 2.0);
    CHECK(std::abs(u(0, 0) - std::complex<double>(0, -1)) < 1e-12);
    CHECK(std::abs(u(1, 1) - std::complex<double>(0, 1)) < 1e-12);

    const ComplexMatrix h = random_hermitian(5, 61);
    const ComplexMatrix a = linalg::herm_expm(h, 0.3);
    const ComplexMatrix b = linalg::herm_expm(h, 0.45);
    const ComplexMatrix ab = linalg::herm_expm(h, 0.75);
    CHECK((a * b - ab).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((a.adjoint() * a - ComplexMatrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-10);
}
