#include "mspe/perm.hpp"
#include "mspe/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace mspe::perm {

using boost::multiprecision::cpp_rational;
using linalg::Index;

int Permutation::cycle_count() const {
    int count = 0;
    std::vector<bool> seen(image.size(), false);
    for (size_t i = 0; i < image.size(); ++i) {
        if (seen[i])
            continue;
        ++count;
        size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = static_cast<size_t>(image[j]);
        }
    }
    return count;
}

std::vector<int> Permutation::cycle_type() const {
    std::vector<int> lengths;
    std::vector<bool> seen(image.size(), false);
    for (size_t i = 0; i < image.size(); ++i) {
        if (seen[i])
            continue;
        int len = 0;
        size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = static_cast<size_t>(image[j]);
            ++len;
        }
        lengths.push_back(len);
    }
    std::sort(lengths.begin(), lengths.end());
    return lengths;
}

std::string Permutation::cycle_type_string() const {
    const auto type = cycle_type();
    std::ostringstream out;
    for (size_t i = 0; i < type.size(); ++i) {
        if (i)
            out << '+';
        out << type[i];
    }
    return out.str();
}

Permutation Permutation::inverse() const {
    Permutation inv;
    inv.image.resize(image.size());
    for (size_t i = 0; i < image.size(); ++i)
        inv.image[static_cast<size_t>(image[i])] = static_cast<int>(i);
    return inv;
}

Permutation Permutation::identity(int k) {
    Permutation g;
    g.image.resize(static_cast<size_t>(k));
    std::iota(g.image.begin(), g.image.end(), 0);
    return g;
}

Permutation Permutation::transposition(int k, int i, int j) {
    if (i < 0 || j < 0 || i >= k || j >= k || i == j)
        throw ArgumentError("transposition: need distinct slots inside [0, k)");
    Permutation g = identity(k);
    std::swap(g.image[static_cast<size_t>(i)], g.image[static_cast<size_t>(j)]);
    return g;
}

Permutation Permutation::forward_cycle(int k, int len) {
    if (len < 1 || len > k)
        throw ArgumentError("forward_cycle: need 1 <= len <= k");
    Permutation g = identity(k);
    for (int i = 0; i < len; ++i)
        g.image[static_cast<size_t>(i)] = (i + 1) % len;
    return g;
}

Permutation operator*(const Permutation &a, const Permutation &b) {
    if (a.degree() != b.degree())
        throw ArgumentError("permutation product: degrees differ");
    Permutation out;
    out.image.resize(a.image.size());
    for (size_t i = 0; i < a.image.size(); ++i)
        out.image[i] = a.image[static_cast<size_t>(b.image[i])];
    return out;
}

int cayley_distance(const Permutation &a, const Permutation &b) {
    if (a.degree() != b.degree())
        throw ArgumentError("cayley_distance: degrees differ");
    return a.degree() - (a.inverse() * b).cycle_count();
}

const std::vector<Permutation> &enumerate_sym(int k) {
    if (k < 1 || k > 8)
        throw ResourceError("enumerate_sym: k must be within [1, 8]");
    static std::mutex guard;
    static std::map<int, std::vector<Permutation>> cache;
    std::lock_guard<std::mutex> lock(guard);
    auto it = cache.find(k);
    if (it != cache.end())
        return it->second;
    std::vector<Permutation> group;
    Permutation g = Permutation::identity(k);
    do {
        group.push_back(g);
    } while (std::next_permutation(g.image.begin(), g.image.end()));
    return cache.emplace(k, std::move(group)).first->second;
}

BigInt ipow(BigInt base, unsigned exp) {
    BigInt out = 1;
    while (exp) {
        if (exp & 1U)
            out *= base;
        base *= base;
        exp >>= 1U;
    }
    return out;
}

BigInt rising_factorial(const BigInt &base, int k) {
    if (k < 0)
        throw ArgumentError("rising_factorial: k must be nonnegative");
    BigInt out = 1;
    for (int i = 0; i < k; ++i)
        out *= base + i;
    return out;
}

namespace {

Index checked_power(int d, int n, Index budget, const char *who) {
    Index dim = 1;
    for (int i = 0; i < n; ++i) {
        if (dim > budget / d)
            throw ResourceError(std::string(who) + ": dimension exceeds dense budget");
        dim *= d;
    }
    return dim;
}

// Basis index relabelling of perm_operator(g) on k replicas of dimension D:
// map[x] is the row holding the 1 of column x.
std::vector<Index> perm_index_map(const Permutation &g, Index d_rep) {
    const int k = g.degree();
    std::vector<Index> stride(static_cast<size_t>(k));
    stride[static_cast<size_t>(k - 1)] = 1;
    for (int u = k - 2; u >= 0; --u)
        stride[static_cast<size_t>(u)] = stride[static_cast<size_t>(u + 1)] * d_rep;
    Index dim = stride[0] * d_rep;
    std::vector<Index> map(static_cast<size_t>(dim));
    for (Index x = 0; x < dim; ++x) {
        Index rem = x, y = 0;
        for (int u = 0; u < k; ++u) {
            const Index digit = rem / stride[static_cast<size_t>(u)] % d_rep;
            y += digit * stride[static_cast<size_t>(g.image[static_cast<size_t>(u)])];
        }
        map[static_cast<size_t>(x)] = y;
    }
    return map;
}

} // namespace

linalg::ComplexMatrix perm_operator(const Permutation &g, int n_sites, int d, Index budget) {
    if (n_sites < 0 || d < 2)
        throw ArgumentError("perm_operator: need n_sites >= 0 and d >= 2");
    const Index d_rep = checked_power(d, n_sites, budget, "perm_operator");
    Index dim = 1;
    for (int u = 0; u < g.degree(); ++u) {
        if (dim > budget / d_rep)
            throw ResourceError("perm_operator: dimension exceeds dense budget");
        dim *= d_rep;
    }
    const auto map = perm_index_map(g, d_rep);
    linalg::ComplexMatrix out = linalg::ComplexMatrix::Zero(dim, dim);
    for (Index x = 0; x < dim; ++x)
        out(map[static_cast<size_t>(x)], x) = 1.0;
    return out;
}

MomentTensor ghs_moment(int n_a, int m, int d, int k, Index budget) {
    if (n_a < 1 || m < 0 || d < 2 || k < 1)
        throw ArgumentError("ghs_moment: need n_a >= 1, m >= 0, d >= 2, k >= 1");
    const Index d_a = checked_power(d, n_a, budget, "ghs_moment");
    Index dim = 1;
    for (int u = 0; u < k; ++u) {
        if (dim > budget / d_a)
            throw ResourceError("ghs_moment: dimension exceeds dense budget");
        dim *= d_a;
    }

    const BigInt normalizer = rising_factorial(ipow(d, static_cast<unsigned>(n_a + m)), k);
    linalg::ComplexMatrix out = linalg::ComplexMatrix::Zero(dim, dim);
    for (const auto &g : enumerate_sym(k)) {
        const BigInt weight = ipow(d, static_cast<unsigned>(m * g.cycle_count()));
        const double coeff = cpp_rational(weight, normalizer).convert_to<double>();
        const auto map = perm_index_map(g, d_a);
        for (Index x = 0; x < dim; ++x)
            out(map[static_cast<size_t>(x)], x) += coeff;
    }
    return MomentTensor{k, d_a, std::move(out)};
}

double AlphaCoefficients::value(const Permutation &g) const {
    const auto &group = enumerate_sym(k);
    for (size_t i = 0; i < group.size(); ++i)
        if (group[i] == g)
            return values[i];
    throw ArgumentError("AlphaCoefficients::value: permutation degree does not match k");
}

AlphaCoefficients solve_alpha_finite_t(long t, int m, int d, int k) {
    if (k < 1 || k > 6)
        throw ArgumentError("solve_alpha_finite_t: k must be within [1, 6]");
    if (d < 2 || m < 0 || m % 2 != 0)
        throw ArgumentError("solve_alpha_finite_t: need d >= 2 and even m >= 0");
    const long n = m / 2;
    if (t + 1 - n < 1)
        throw ArgumentError("solve_alpha_finite_t: need t + 1 - m/2 >= 1");

    const auto &group = enumerate_sym(k);
    const Index size = static_cast<Index>(group.size());
    std::vector<int> cyc(group.size());
    for (size_t i = 0; i < group.size(); ++i)
        cyc[i] = group[i].cycle_count();

    // Everything is scaled so the Gram diagonal is 1: exponents are measured
    // relative to the fully aligned term and stay nonpositive.
    const double logd = std::log(static_cast<double>(d));
    Eigen::MatrixXd gram(size, size);
    Eigen::VectorXd rhs(size);
    for (Index i = 0; i < size; ++i) {
        const Permutation gi_inv = group[static_cast<size_t>(i)].inverse();
        double c = 0.0;
        for (Index j = 0; j < size; ++j) {
            const int rel = (gi_inv * group[static_cast<size_t>(j)]).cycle_count();
            gram(i, j) = std::exp(logd * static_cast<double>((t + 1) * (rel - k)));
            const double expo = static_cast<double>(n) * (cyc[static_cast<size_t>(j)] - k) +
                                static_cast<double>(n) * (cyc[static_cast<size_t>(i)] - k) +
                                static_cast<double>(t + 1 - n) * (rel - k);
            c += std::exp(logd * expo);
        }
        rhs(i) = c;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success)
        throw NumericError("solve_alpha_finite_t: Gram eigensolver failed");
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (lo <= 0.0 || hi / lo > 1e12)
        throw NumericError("solve_alpha_finite_t: Gram matrix condition number exceeds 1e12");

    const Eigen::VectorXd alpha =
        eig.eigenvectors() *
        (eig.eigenvectors().transpose() * rhs).cwiseQuotient(eig.eigenvalues());

    AlphaCoefficients out;
    out.k = k;
    out.d = d;
    out.m = m;
    out.t = t;
    out.kind = "finite-t";
    out.values.assign(alpha.data(), alpha.data() + alpha.size());
    return out;
}

AlphaCoefficients alpha_large_t(int m, int d, int k) {
    if (k < 1 || k > 8 || d < 2 || m < 0)
        throw ArgumentError("alpha_large_t: need 1 <= k <= 8, d >= 2, m >= 0");
    AlphaCoefficients out;
    out.k = k;
    out.d = d;
    out.m = m;
    out.kind = "large-t";
    for (const auto &g : enumerate_sym(k))
        out.values.push_back(
            std::pow(static_cast<double>(d), static_cast<double>(m * (g.cycle_count() - k))));
    return out;
}

AlphaCoefficients alpha_large_d(int m, int d, int k) {
    if (k < 1 || k > 8 || d < 2 || m < 0)
        throw ArgumentError("alpha_large_d: need 1 <= k <= 8, d >= 2, m >= 0");
    AlphaCoefficients out;
    out.k = k;
    out.d = d;
    out.m = m;
    out.kind = "large-d";
    for (const auto &g : enumerate_sym(k)) {
        const int l = g.cycle_count();
        double v = 0.0;
        if (l == k)
            v = 1.0;
        else if (l == k - 1)
            v = std::pow(static_cast<double>(d), -static_cast<double>(m));
        out.values.push_back(v);
    }
    return out;
}

AlphaCoefficients sparse_alpha(int n_pairs, int d, int k) {
    if (k < 1 || k > 8 || d < 2 || n_pairs < 0)
        throw ArgumentError("sparse_alpha: need 1 <= k <= 8, d >= 2, n_pairs >= 0");
    const auto &group = enumerate_sym(k);
    AlphaCoefficients out;
    out.k = k;
    out.d = d;
    out.m = 2 * n_pairs;
    out.kind = "sparse";
    out.values.assign(group.size(), 1.0);
    // One erasure of an isolated adjacent pair damps each coefficient by
    // d^(-2(k - l(g))); the pairs are far apart so the steps compose.
    for (int step = 0; step < n_pairs; ++step)
        for (size_t i = 0; i < group.size(); ++i)
            out.values[i] *= std::pow(static_cast<double>(d),
                                      -2.0 * static_cast<double>(k - group[i].cycle_count()));
    return out;
}

double deviation_prediction(long t, int m, int d, int k, double xi) {
    if (t < 0 || m < 0 || d < 2 || k < 1)
        throw ArgumentError("deviation_prediction: bad arguments");
    if (xi != 1.0 && xi != 2.0)
        throw ArgumentError("deviation_prediction: xi must be 1 or 2");
    const double dm = std::pow(static_cast<double>(d), static_cast<double>(m));
    const double pairs = 0.5 * static_cast<double>(k) * static_cast<double>(k - 1);
    const double base = std::pow(static_cast<double>(d), -static_cast<double>(t + 1)) *
                        (1.0 / dm) * (1.0 - 1.0 / dm);
    return xi == 1.0 ? base * pairs : base * std::sqrt(pairs);
}

bool deviation_small_k_regime(int m, int d, int k) {
    return std::pow(static_cast<double>(d), static_cast<double>(m)) >= 4.0 * k;
}

double conditional_entropy_analytic(int n_a, int m, int d, int k, int q) {
    if (n_a < 0 || m < 0 || d < 2)
        throw ArgumentError("conditional_entropy_analytic: bad subsystem sizes");
    if (k < 2 || q < 1 || k + q > 8)
        throw ArgumentError("conditional_entropy_analytic: need k >= 2, q >= 1, k + q <= 8");

    const Permutation sigma = Permutation::forward_cycle(k + q, k);
    const Permutation sigma_inv = sigma.inverse();
    BigInt num = 0, den = 0;
    const BigInt base = d;
    for (const auto &g : enumerate_sym(k + q)) {
        const int lg = g.cycle_count();
        const int lrel = (sigma_inv * g).cycle_count(); // = cycles of g^-1 sigma too
        num += ipow(base, static_cast<unsigned>(lrel + m * lg + n_a * lrel));
        den += ipow(base, static_cast<unsigned>(lg + m * lg + n_a * lrel));
    }
    if (num == den)
        return 0.0;
    const double ratio = cpp_rational(num, den).convert_to<double>();
    return -std::log(ratio) / static_cast<double>(k - 1);
}

nlohmann::json alpha_to_json(const AlphaCoefficients &alpha) {
    const auto &group = enumerate_sym(alpha.k);
    if (alpha.values.size() != group.size())
        throw ArgumentError("alpha_to_json: value table does not match S_k");
    std::map<std::string, std::pair<double, double>> ranges; // type -> (min, max)
    for (size_t i = 0; i < group.size(); ++i) {
        const auto key = group[i].cycle_type_string();
        auto it = ranges.find(key);
        if (it == ranges.end())
            ranges.emplace(key, std::make_pair(alpha.values[i], alpha.values[i]));
        else {
            it->second.first = std::min(it->second.first, alpha.values[i]);
            it->second.second = std::max(it->second.second, alpha.values[i]);
        }
    }
    nlohmann::json values;
    for (const auto &[key, range] : ranges) {
        if (range.second - range.first > 1e-8 * (1.0 + std::abs(range.second)))
            throw NumericError("alpha_to_json: coefficients not constant on class " + key);
        values[key] = 0.5 * (range.first + range.second);
    }
    nlohmann::json out{{"k", alpha.k}, {"d", alpha.d},       {"m", alpha.m},
                       {"kind", alpha.kind},                 {"values", values}};
    if (alpha.t >= 0)
        out["t"] = alpha.t;
    return out;
}

} // namespace mspe::perm
