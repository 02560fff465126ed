#pragma once

#include "mspe/linalg.hpp"
#include "mspe/moment.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>
#include <string>
#include <vector>

namespace mspe::perm {

using BigInt = boost::multiprecision::cpp_int;

struct Permutation {
    std::vector<int> image; // image[i] = g(i), 0-based

    int degree() const { return static_cast<int>(image.size()); }
    int cycle_count() const;
    std::vector<int> cycle_type() const;   // ascending cycle lengths
    std::string cycle_type_string() const; // e.g. "1+1+2"
    Permutation inverse() const;
    bool operator==(const Permutation &other) const { return image == other.image; }

    static Permutation identity(int k);
    static Permutation transposition(int k, int i, int j);
    // (0 1 ... len-1) as a forward cycle, identity on the remaining slots.
    static Permutation forward_cycle(int k, int len);
};

// Apply b, then a: (a*b)(i) = a(b(i)).
Permutation operator*(const Permutation &a, const Permutation &b);

int cayley_distance(const Permutation &a, const Permutation &b);

// All of S_k in lexicographic image order (index 0 is the identity); cached.
const std::vector<Permutation> &enumerate_sym(int k);

BigInt ipow(BigInt base, unsigned exp);
// D (D+1) ... (D+k-1), the normalizer of a k-fold symmetric projector.
BigInt rising_factorial(const BigInt &base, int k);

// Replica-permutation operator on k copies of an n_sites qudit register:
// the digit at replica slot u moves to slot g(u), so
// perm_operator(g)·perm_operator(h) = perm_operator(g*h) and the trace is
// (d^n_sites)^(number of cycles).
linalg::ComplexMatrix perm_operator(const Permutation &g, int n_sites, int d,
                                    linalg::Index budget = 4096);

// k-th moment of the ensemble obtained by tracing m qudits out of a Haar state
// on n_a + m qudits: sum_g d^(m l(g)) perm_op(g) over S_k, normalized exactly.
MomentTensor ghs_moment(int n_a, int m, int d, int k, linalg::Index budget = 4096);

struct AlphaCoefficients {
    int k = 1;
    int d = 2;
    int m = 0;
    long t = -1;        // -1 for limit results
    std::string kind;   // finite-t | large-t | large-d | sparse
    std::vector<double> values; // aligned with enumerate_sym(k)

    double value(const Permutation &g) const;
};

// Coefficients of the late-time k-replica steady operator over S_k at finite
// circuit depth t, from the Gram-projected linear system for a consecutive
// block of m lost sites (m even). Errors if the Gram condition number exceeds
// 1e12.
AlphaCoefficients solve_alpha_finite_t(long t, int m, int d, int k);

// t -> infinity limit of the consecutive-block coefficients: d^(m(l(g)-k)).
AlphaCoefficients alpha_large_t(int m, int d, int k);

// Additional d -> infinity simplification: 1 on the identity, d^-m on
// transpositions, 0 elsewhere.
AlphaCoefficients alpha_large_d(int m, int d, int k);

// Coefficients for m = 2*n_pairs lost sites split into isolated adjacent pairs,
// obtained by iterating the single-pair erasure recursion n_pairs times.
AlphaCoefficients sparse_alpha(int n_pairs, int d, int k);

// Predicted normalized Schatten-xi distance (xi in {1,2}) between the depth-t
// moment and its limit, valid deep in the k << d^m regime.
double deviation_prediction(long t, int m, int d, int k, double xi);
bool deviation_small_k_regime(int m, int d, int k);

// Annealed order-k conditional entropy of the retained subsystem given the
// outcomes, in nats, from the exact replica sum over S_{k+q} with q >= 1
// integer ghost replicas; exactly 0.0 when n_a == m.
double conditional_entropy_analytic(int n_a, int m, int d, int k, int q);

// Alpha table keyed by cycle type, e.g. {"1+1+2": 0.25}; errors if values are
// not constant on conjugacy classes.
nlohmann::json alpha_to_json(const AlphaCoefficients &alpha);

} // namespace mspe::perm
