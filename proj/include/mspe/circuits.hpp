#pragma once

#include "mspe/linalg.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace mspe::circuits {

using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::Index;
using linalg::QuditLayout;

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

// Generalized shift X|i> = |i+1 mod d> and clock Z|i> = w^i |i>, w = exp(2 pi i / d).
ComplexMatrix shift_op(int d);
ComplexMatrix clock_op(int d);

// Maximally entangled pairs on sites (0,1), (2,3), ...; n_sites must be even.
ComplexVector bell_pair_initial_state(int n_sites, int d);

// |0...0> on n_sites qudits.
ComplexVector computational_zero_state(int n_sites, int d);

// QR of a complex Gaussian matrix with the triangular diagonal made
// real-positive, which gives the unitary group's invariant measure.
ComplexMatrix haar_unitary(Index dim, std::mt19937_64 &gen);

// (u1 x u2) exp(-i [pi/4 (XX + YY) + J ZZ]) (v1 x v2), qubits only.
ComplexMatrix dual_unitary_gate(double J, const ComplexMatrix &u1, const ComplexMatrix &u2,
                                const ComplexMatrix &v1, const ComplexMatrix &v2);

// J uniform in [0, pi/4] and independent Haar one-qubit dressings.
ComplexMatrix random_dual_unitary_gate(std::mt19937_64 &gen);

// True iff the gate and its space-time reshuffle u~_{(i,k),(j,l)} = u_{(i,j),(k,l)}
// are both unitary within tol.
bool is_dual_unitary(const ComplexMatrix &u, int d, double tol = 1e-10);

// exp(-i h sum_j Y_j) exp(-i J sum_j Z_j Z_{j+1}) exp(-i g sum_j Z_j) as a dense
// operator (qubits, open chain).
ComplexMatrix kicked_ising_layer(int n_sites, double h, double J, double g,
                                 Index budget = 4096);

void apply_single_site(ComplexVector &state, const ComplexMatrix &gate, int site,
                       const QuditLayout &layout);
void apply_two_site(ComplexVector &state, const ComplexMatrix &gate, int site,
                    const QuditLayout &layout);
// Same layer as kicked_ising_layer but applied in place without materializing it.
void apply_kicked_ising_layer(ComplexVector &state, const QuditLayout &layout, double h,
                              double J, double g);

struct KickedIsingParams {
    double h = 0.9;
    double J = 0.7;
    double g = 0.6;
};

enum class GateSource { DualUnitaryRandom, HaarRandom, KickedIsing, FixedGateList };

struct CircuitSpec {
    QuditLayout layout;
    GateSource source = GateSource::DualUnitaryRandom;
    std::uint64_t seed = 0;
    KickedIsingParams kicked;
    std::vector<ComplexMatrix> gates; // FixedGateList, indexed by (layer, site)
};

// Applies layers [first_layer, first_layer + n_layers). Even layers couple
// (0,1), (2,3), ...; odd layers couple (1,2), (3,4), ...; edge sites without a
// partner idle. Every random gate draws from its own (seed, layer, site)
// stream, so incremental application reproduces a single full run bit for bit.
void brickwall_apply(ComplexVector &state, const CircuitSpec &spec, long first_layer,
                     long n_layers);

struct HamiltonianSpec {
    QuditLayout layout;
    double h_x = 0.8090;
    double h_y = 0.9045;
    double J = 1.0;
};

// sum_j (h_x X_j + h_y Y_j) + J sum_j X_j X_{j+1}, open chain, qubits.
ComplexMatrix mixed_field_ising_hamiltonian(const HamiltonianSpec &spec, Index budget = 4096);

ComplexMatrix hamiltonian_evolution_operator(const HamiltonianSpec &spec, double time,
                                             Index budget = 4096);

ComplexVector hamiltonian_evolve(const ComplexVector &psi, const HamiltonianSpec &spec,
                                 double time, Index budget = 4096);

} // namespace mspe::circuits
