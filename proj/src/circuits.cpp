#include "mspe/circuits.hpp"
#include "mspe/errors.hpp"
#include "mspe/rng.hpp"

#include <Eigen/QR>
#include <cmath>

namespace mspe::circuits {

namespace {
const std::complex<double> kI(0.0, 1.0);
}

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m << 0, -kI, kI, 0;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

ComplexMatrix shift_op(int d) {
    if (d < 2)
        throw ArgumentError("shift_op: d must be >= 2");
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        m((i + 1) % d, i) = 1.0;
    return m;
}

ComplexMatrix clock_op(int d) {
    if (d < 2)
        throw ArgumentError("clock_op: d must be >= 2");
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        m(i, i) = std::exp(2.0 * M_PI * kI * static_cast<double>(i) / static_cast<double>(d));
    return m;
}

ComplexVector bell_pair_initial_state(int n_sites, int d) {
    if (n_sites < 2 || n_sites % 2 != 0)
        throw ArgumentError("bell_pair_initial_state: n_sites must be even and >= 2");
    if (d < 2)
        throw ArgumentError("bell_pair_initial_state: d must be >= 2");
    ComplexVector pair = ComplexVector::Zero(static_cast<Index>(d) * d);
    for (int i = 0; i < d; ++i)
        pair(static_cast<Index>(i) * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
    ComplexVector state = ComplexVector::Ones(1);
    for (int p = 0; p < n_sites / 2; ++p) {
        ComplexVector next(state.size() * pair.size());
        for (Index i = 0; i < state.size(); ++i)
            next.segment(i * pair.size(), pair.size()) = state(i) * pair;
        state.swap(next);
    }
    return state;
}

ComplexVector computational_zero_state(int n_sites, int d) {
    const QuditLayout layout{n_sites, d};
    ComplexVector state = ComplexVector::Zero(layout.dim());
    state(0) = 1.0;
    return state;
}

ComplexMatrix haar_unitary(Index dim, std::mt19937_64 &gen) {
    if (dim < 1)
        throw ArgumentError("haar_unitary: dim must be >= 1");
    ComplexMatrix z(dim, dim);
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j)
            z(i, j) = rng::complex_gaussian(gen);
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR();
    for (Index j = 0; j < dim; ++j) {
        const std::complex<double> rjj = r(j, j);
        const double mag = std::abs(rjj);
        q.col(j) *= (mag > 0.0) ? (rjj / mag) : std::complex<double>(1.0, 0.0);
    }
    return q;
}

namespace {

void require_unitary_2x2(const ComplexMatrix &u, const char *who) {
    if (u.rows() != 2 || u.cols() != 2)
        throw ArgumentError(std::string(who) + ": one-qubit factors must be 2x2");
    const double dev =
        (u.adjoint() * u - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff();
    if (dev > 1e-10)
        throw ArgumentError(std::string(who) + ": one-qubit factor is not unitary");
}

} // namespace

ComplexMatrix dual_unitary_gate(double J, const ComplexMatrix &u1, const ComplexMatrix &u2,
                                const ComplexMatrix &v1, const ComplexMatrix &v2) {
    require_unitary_2x2(u1, "dual_unitary_gate");
    require_unitary_2x2(u2, "dual_unitary_gate");
    require_unitary_2x2(v1, "dual_unitary_gate");
    require_unitary_2x2(v2, "dual_unitary_gate");
    const ComplexMatrix xx = linalg::kron(pauli_x(), pauli_x());
    const ComplexMatrix yy = linalg::kron(pauli_y(), pauli_y());
    const ComplexMatrix zz = linalg::kron(pauli_z(), pauli_z());
    const ComplexMatrix core = linalg::herm_expm(M_PI / 4.0 * (xx + yy) + J * zz, -1.0);
    return linalg::kron(u1, u2) * core * linalg::kron(v1, v2);
}

ComplexMatrix random_dual_unitary_gate(std::mt19937_64 &gen) {
    const double J = rng::uniform(gen, 0.0, M_PI / 4.0);
    const ComplexMatrix u1 = haar_unitary(2, gen);
    const ComplexMatrix u2 = haar_unitary(2, gen);
    const ComplexMatrix v1 = haar_unitary(2, gen);
    const ComplexMatrix v2 = haar_unitary(2, gen);
    return dual_unitary_gate(J, u1, u2, v1, v2);
}

bool is_dual_unitary(const ComplexMatrix &u, int d, double tol) {
    const Index dim = static_cast<Index>(d) * d;
    if (d < 2 || u.rows() != dim || u.cols() != dim)
        throw ArgumentError("is_dual_unitary: gate must be d^2 x d^2");
    const ComplexMatrix eye = ComplexMatrix::Identity(dim, dim);
    if ((u.adjoint() * u - eye).cwiseAbs().maxCoeff() > tol)
        return false;
    ComplexMatrix resh(dim, dim);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l)
                    resh(static_cast<Index>(i) * d + k, static_cast<Index>(j) * d + l) =
                        u(static_cast<Index>(i) * d + j, static_cast<Index>(k) * d + l);
    return (resh.adjoint() * resh - eye).cwiseAbs().maxCoeff() <= tol;
}

namespace {

// z eigenvalue of a bit: |0> -> +1, |1> -> -1.
inline int zval(Index x, Index stride) { return ((x / stride) & 1) ? -1 : 1; }

} // namespace

ComplexMatrix kicked_ising_layer(int n_sites, double h, double J, double g, Index budget) {
    if (n_sites < 1)
        throw ArgumentError("kicked_ising_layer: n_sites must be >= 1");
    const QuditLayout layout{n_sites, 2};
    const Index dim = layout.dim();
    if (dim > budget)
        throw ResourceError("kicked_ising_layer: dimension exceeds dense budget");

    const ComplexMatrix rot = linalg::herm_expm(pauli_y(), -h);
    ComplexMatrix kick = ComplexMatrix::Ones(1, 1);
    for (int s = 0; s < n_sites; ++s)
        kick = linalg::kron(kick, rot);

    ComplexMatrix out = kick;
    for (Index y = 0; y < dim; ++y) {
        double zz = 0.0, z = 0.0;
        for (int s = 0; s < n_sites; ++s) {
            z += zval(y, layout.site_stride(s));
            if (s + 1 < n_sites)
                zz += zval(y, layout.site_stride(s)) * zval(y, layout.site_stride(s + 1));
        }
        out.col(y) *= std::exp(-kI * (J * zz + g * z));
    }
    return out;
}

void apply_single_site(ComplexVector &state, const ComplexMatrix &gate, int site,
                       const QuditLayout &layout) {
    const Index dim = layout.dim();
    const int d = layout.local_dim;
    if (state.size() != dim)
        throw ArgumentError("apply_single_site: state does not match layout");
    if (gate.rows() != d || gate.cols() != d)
        throw ArgumentError("apply_single_site: gate must be d x d");
    const Index stride = layout.site_stride(site);
    ComplexVector scratch(d);
    for (Index hi = 0; hi < dim; hi += stride * d)
        for (Index lo = 0; lo < stride; ++lo) {
            const Index base = hi + lo;
            for (int a = 0; a < d; ++a)
                scratch(a) = state(base + a * stride);
            for (int a = 0; a < d; ++a) {
                std::complex<double> acc = 0.0;
                for (int b = 0; b < d; ++b)
                    acc += gate(a, b) * scratch(b);
                state(base + a * stride) = acc;
            }
        }
}

void apply_two_site(ComplexVector &state, const ComplexMatrix &gate, int site,
                    const QuditLayout &layout) {
    const Index dim = layout.dim();
    const int d = layout.local_dim;
    const Index d2 = static_cast<Index>(d) * d;
    if (state.size() != dim)
        throw ArgumentError("apply_two_site: state does not match layout");
    if (site < 0 || site + 1 >= layout.n_sites)
        throw ArgumentError("apply_two_site: need an adjacent pair inside the chain");
    if (gate.rows() != d2 || gate.cols() != d2)
        throw ArgumentError("apply_two_site: gate must be d^2 x d^2");
    const Index stride = layout.site_stride(site + 1); // pair digit stride
    ComplexVector scratch(d2);
    for (Index hi = 0; hi < dim; hi += stride * d2)
        for (Index lo = 0; lo < stride; ++lo) {
            const Index base = hi + lo;
            for (Index a = 0; a < d2; ++a)
                scratch(a) = state(base + a * stride);
            for (Index a = 0; a < d2; ++a) {
                std::complex<double> acc = 0.0;
                for (Index b = 0; b < d2; ++b)
                    acc += gate(a, b) * scratch(b);
                state(base + a * stride) = acc;
            }
        }
}

void apply_kicked_ising_layer(ComplexVector &state, const QuditLayout &layout, double h,
                              double J, double g) {
    if (layout.local_dim != 2)
        throw ArgumentError("apply_kicked_ising_layer: qubits only");
    const Index dim = layout.dim();
    if (state.size() != dim)
        throw ArgumentError("apply_kicked_ising_layer: state does not match layout");
    for (Index y = 0; y < dim; ++y) {
        double zz = 0.0, z = 0.0;
        for (int s = 0; s < layout.n_sites; ++s) {
            z += zval(y, layout.site_stride(s));
            if (s + 1 < layout.n_sites)
                zz += zval(y, layout.site_stride(s)) * zval(y, layout.site_stride(s + 1));
        }
        state(y) *= std::exp(-kI * (J * zz + g * z));
    }
    const ComplexMatrix rot = linalg::herm_expm(pauli_y(), -h);
    for (int s = 0; s < layout.n_sites; ++s)
        apply_single_site(state, rot, s, layout);
}

void brickwall_apply(ComplexVector &state, const CircuitSpec &spec, long first_layer,
                     long n_layers) {
    const QuditLayout &layout = spec.layout;
    if (state.size() != layout.dim())
        throw ArgumentError("brickwall_apply: state does not match layout");
    if (first_layer < 0 || n_layers < 0)
        throw ArgumentError("brickwall_apply: layer range must be nonnegative");
    if (spec.source == GateSource::DualUnitaryRandom && layout.local_dim != 2)
        throw ArgumentError("brickwall_apply: dual-unitary gates are implemented for d = 2");
    if (spec.source == GateSource::FixedGateList && spec.gates.empty())
        throw ArgumentError("brickwall_apply: fixed gate list is empty");

    for (long layer = first_layer; layer < first_layer + n_layers; ++layer) {
        if (spec.source == GateSource::KickedIsing) {
            apply_kicked_ising_layer(state, layout, spec.kicked.h, spec.kicked.J,
                                     spec.kicked.g);
            continue;
        }
        const int start = (layer % 2 == 0) ? 0 : 1;
        for (int site = start; site + 1 < layout.n_sites; site += 2) {
            ComplexMatrix gate;
            switch (spec.source) {
            case GateSource::DualUnitaryRandom: {
                auto gen = rng::stream(spec.seed, static_cast<std::uint64_t>(layer),
                                       static_cast<std::uint64_t>(site));
                gate = random_dual_unitary_gate(gen);
                break;
            }
            case GateSource::HaarRandom: {
                auto gen = rng::stream(spec.seed, static_cast<std::uint64_t>(layer),
                                       static_cast<std::uint64_t>(site));
                gate = haar_unitary(static_cast<Index>(layout.local_dim) * layout.local_dim,
                                    gen);
                break;
            }
            case GateSource::FixedGateList: {
                const size_t idx = (static_cast<size_t>(layer) * layout.n_sites +
                                    static_cast<size_t>(site)) %
                                   spec.gates.size();
                gate = spec.gates[idx];
                break;
            }
            default:
                throw ArgumentError("brickwall_apply: unknown gate source");
            }
            apply_two_site(state, gate, site, layout);
        }
    }
}

ComplexMatrix mixed_field_ising_hamiltonian(const HamiltonianSpec &spec, Index budget) {
    const QuditLayout &layout = spec.layout;
    if (layout.local_dim != 2)
        throw ArgumentError("mixed_field_ising_hamiltonian: qubits only");
    const Index dim = layout.dim();
    if (dim > budget)
        throw ResourceError("mixed_field_ising_hamiltonian: dimension exceeds dense budget");

    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    const ComplexMatrix field = spec.h_x * pauli_x() + spec.h_y * pauli_y();
    for (int s = 0; s < layout.n_sites; ++s) {
        const Index stride = layout.site_stride(s);
        for (Index hi = 0; hi < dim; hi += stride * 2)
            for (Index lo = 0; lo < stride; ++lo)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        h(hi + lo + a * stride, hi + lo + b * stride) += field(a, b);
    }
    const ComplexMatrix xx = linalg::kron(pauli_x(), pauli_x());
    for (int s = 0; s + 1 < layout.n_sites; ++s) {
        const Index stride = layout.site_stride(s + 1);
        for (Index hi = 0; hi < dim; hi += stride * 4)
            for (Index lo = 0; lo < stride; ++lo)
                for (Index a = 0; a < 4; ++a)
                    for (Index b = 0; b < 4; ++b)
                        h(hi + lo + a * stride, hi + lo + b * stride) += spec.J * xx(a, b);
    }
    return h;
}

ComplexMatrix hamiltonian_evolution_operator(const HamiltonianSpec &spec, double time,
                                             Index budget) {
    return linalg::herm_expm(mixed_field_ising_hamiltonian(spec, budget), -time);
}

ComplexVector hamiltonian_evolve(const ComplexVector &psi, const HamiltonianSpec &spec,
                                 double time, Index budget) {
    if (psi.size() != spec.layout.dim())
        throw ArgumentError("hamiltonian_evolve: state does not match layout");
    return hamiltonian_evolution_operator(spec, time, budget) * psi;
}

} // namespace mspe::circuits
