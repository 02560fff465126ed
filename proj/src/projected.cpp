#include "mspe/projected.hpp"
#include "mspe/circuits.hpp"
#include "mspe/errors.hpp"
#include "mspe/json_util.hpp"

#include <algorithm>
#include <cmath>

namespace mspe::projected {

std::vector<int> measured_sites(const Partition &p) {
    std::vector<bool> taken(static_cast<size_t>(p.layout.n_sites), false);
    for (int s = 0; s < p.n_a; ++s)
        taken[static_cast<size_t>(s)] = true;
    for (int s : p.lost_sites)
        taken[static_cast<size_t>(s)] = true;
    if (p.reference)
        taken[static_cast<size_t>(p.layout.n_sites - 1)] = true;
    std::vector<int> out;
    for (int s = 0; s < p.layout.n_sites; ++s)
        if (!taken[static_cast<size_t>(s)])
            out.push_back(s);
    return out;
}

std::vector<int> keep_sites(const Partition &p) {
    std::vector<int> out;
    for (int s = 0; s < p.n_a; ++s)
        out.push_back(s);
    if (p.reference)
        out.push_back(p.layout.n_sites - 1);
    return out;
}

void validate_partition(const Partition &p) {
    if (p.layout.n_sites < 1 || p.layout.local_dim < 2)
        throw ArgumentError("partition: bad layout");
    if (p.n_a < 1 || p.n_a > p.layout.n_sites)
        throw ArgumentError("partition: n_a must lie in [1, n_sites]");
    if (p.reference && p.layout.n_sites < p.n_a + 1)
        throw ArgumentError("partition: no room for a reference qudit");
    const int first_b = p.n_a;
    const int last_b = p.layout.n_sites - (p.reference ? 2 : 1);
    if (!std::is_sorted(p.lost_sites.begin(), p.lost_sites.end()) ||
        std::adjacent_find(p.lost_sites.begin(), p.lost_sites.end()) != p.lost_sites.end())
        throw ArgumentError("partition: lost_sites must be strictly ascending");
    for (int s : p.lost_sites)
        if (s < first_b || s > last_b)
            throw ArgumentError("partition: lost site collides with A or the reference");
}

std::vector<MeasurementUnit> measurement_plan(const Partition &p) {
    validate_partition(p);
    const auto meas = measured_sites(p);
    std::vector<MeasurementUnit> units;
    if (p.basis == MeasurementBasis::Computational) {
        for (int s : meas)
            units.push_back({s, false});
        return units;
    }
    size_t i = 0;
    while (i < meas.size()) {
        size_t j = i;
        while (j + 1 < meas.size() && meas[j + 1] == meas[j] + 1)
            ++j;
        const size_t len = j - i + 1;
        if (len % 2 == 1 && j != meas.size() - 1)
            throw ArgumentError(
                "measurement_plan: measured region does not decompose into adjacent pairs");
        for (size_t u = i; u + 1 <= j; u += 2)
            units.push_back({meas[u], true});
        if (len % 2 == 1)
            units.push_back({meas[j], false});
        i = j + 1;
    }
    return units;
}

Partition make_partition(const QuditLayout &layout, int n_a, int m, LossLayout loss,
                         int gap, bool reference, MeasurementBasis basis) {
    Partition p;
    p.layout = layout;
    p.n_a = n_a;
    p.reference = reference;
    p.basis = basis;
    if (m < 0 || gap < 0)
        throw ArgumentError("make_partition: m and gap must be nonnegative");
    const int region = layout.n_sites - n_a - (reference ? 1 : 0);
    if (n_a < 1 || region < 0)
        throw ArgumentError("make_partition: A and reference do not fit the chain");
    if (m > region)
        throw ArgumentError("make_partition: more lost sites than the measured region holds");

    if (basis == MeasurementBasis::HeisenbergWeylPairs) {
        if (m % 2 != 0)
            throw ArgumentError("make_partition: paired readout needs even m");
        if (gap % 2 != 0)
            throw ArgumentError("make_partition: paired readout needs an even gap");
        const int n_cells = region / 2;
        const int lost_cells = m / 2;
        const int gap_cells = gap / 2;
        std::vector<int> cells;
        if (loss == LossLayout::Consecutive) {
            const int first = (n_cells - lost_cells) / 2;
            for (int c = 0; c < lost_cells; ++c)
                cells.push_back(first + c);
        } else {
            const int width =
                lost_cells > 0 ? lost_cells + (lost_cells - 1) * gap_cells : 0;
            if (width > n_cells)
                throw ArgumentError("make_partition: sparse pattern exceeds the cell grid");
            const int first = (n_cells - width) / 2;
            for (int c = 0; c < lost_cells; ++c)
                cells.push_back(first + c * (1 + gap_cells));
        }
        for (int c : cells) {
            p.lost_sites.push_back(n_a + 2 * c);
            p.lost_sites.push_back(n_a + 2 * c + 1);
        }
    } else {
        if (loss == LossLayout::Consecutive) {
            const int first = n_a + (region - m) / 2;
            for (int s = 0; s < m; ++s)
                p.lost_sites.push_back(first + s);
        } else {
            if (m % 2 != 0)
                throw ArgumentError("make_partition: sparse loss works in adjacent pairs");
            const int pairs = m / 2;
            const int width = pairs > 0 ? 2 * pairs + (pairs - 1) * gap : 0;
            if (width > region)
                throw ArgumentError("make_partition: sparse pattern exceeds the region");
            const int first = n_a + (region - width) / 2;
            for (int i = 0; i < pairs; ++i) {
                p.lost_sites.push_back(first + i * (2 + gap));
                p.lost_sites.push_back(first + i * (2 + gap) + 1);
            }
        }
    }
    validate_partition(p);
    measurement_plan(p); // throws when the retained region cannot be read out
    return p;
}

ComplexMatrix heisenberg_weyl_basis(int d) {
    if (d < 2)
        throw ArgumentError("heisenberg_weyl_basis: d must be >= 2");
    const Index dim = static_cast<Index>(d) * d;
    const std::complex<double> kI(0.0, 1.0);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    ComplexMatrix w = ComplexMatrix::Zero(dim, dim);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            const Index col = static_cast<Index>(a) * d + b;
            for (int i = 0; i < d; ++i) {
                const int j = (i + a) % d;
                const std::complex<double> phase =
                    std::exp(2.0 * M_PI * kI * static_cast<double>(b * i) /
                             static_cast<double>(d));
                w(static_cast<Index>(i) * d + j, col) = phase * norm;
            }
        }
    return w;
}

Index MSPEnsemble::keep_dim() const {
    Index dim = 1;
    for (size_t i = 0; i < keep_sites(partition).size(); ++i)
        dim *= partition.layout.local_dim;
    return dim;
}

Index MSPEnsemble::lost_dim() const {
    Index dim = 1;
    for (size_t i = 0; i < partition.lost_sites.size(); ++i)
        dim *= partition.layout.local_dim;
    return dim;
}

MSPEnsemble build_mspe(const ComplexVector &psi, const Partition &partition,
                       double probability_floor, Index outcome_budget) {
    validate_partition(partition);
    const QuditLayout &layout = partition.layout;
    const Index dim = layout.dim();
    if (psi.size() != dim)
        throw ArgumentError("build_mspe: state does not match layout");
    if (std::abs(psi.squaredNorm() - 1.0) > 1e-8)
        throw ArgumentError("build_mspe: state is not normalized");

    const auto plan = measurement_plan(partition);
    const auto meas = measured_sites(partition);
    const auto keep = keep_sites(partition);
    const auto &lost = partition.lost_sites;
    const int d = layout.local_dim;

    Index keep_dim = 1, lost_dim = 1, n_out = 1;
    for (size_t i = 0; i < keep.size(); ++i)
        keep_dim *= d;
    for (size_t i = 0; i < lost.size(); ++i)
        lost_dim *= d;
    for (size_t i = 0; i < meas.size(); ++i) {
        if (n_out > outcome_budget / d)
            throw ResourceError("build_mspe: outcome count exceeds the enumeration budget");
        n_out *= d;
    }
    if (keep_dim > 4096)
        throw ResourceError("build_mspe: kept subsystem exceeds the dense budget");

    ComplexVector work = psi;
    if (partition.basis == MeasurementBasis::HeisenbergWeylPairs) {
        const ComplexMatrix w_adj = heisenberg_weyl_basis(d).adjoint();
        for (const auto &unit : plan)
            if (unit.pair)
                circuits::apply_two_site(work, w_adj, unit.first_site, layout);
    }

    // Row digit order: keep sites (A then R), then lost sites; columns are the
    // measured digits. All groups keep ascending site order internally.
    std::vector<Index> row_w(static_cast<size_t>(layout.n_sites), 0);
    std::vector<Index> col_w(static_cast<size_t>(layout.n_sites), 0);
    {
        Index w = lost_dim;
        for (size_t i = keep.size(); i-- > 0;) {
            row_w[static_cast<size_t>(keep[i])] = w;
            w *= d;
        }
        w = 1;
        for (size_t i = lost.size(); i-- > 0;) {
            row_w[static_cast<size_t>(lost[i])] = w;
            w *= d;
        }
        w = 1;
        for (size_t i = meas.size(); i-- > 0;) {
            col_w[static_cast<size_t>(meas[i])] = w;
            w *= d;
        }
    }

    ComplexMatrix grid = ComplexMatrix::Zero(keep_dim * lost_dim, n_out);
    for (Index x = 0; x < dim; ++x) {
        Index row = 0, col = 0, rem = x;
        for (int s = layout.n_sites - 1; s >= 0; --s) {
            const Index digit = rem % d;
            rem /= d;
            row += digit * row_w[static_cast<size_t>(s)];
            col += digit * col_w[static_cast<size_t>(s)];
        }
        grid(row, col) = work(x);
    }

    // Positions of each unit's digits inside the measured-site ordering.
    std::vector<Index> unit_strides;
    std::vector<int> unit_sizes;
    {
        size_t pos = 0;
        for (const auto &unit : plan) {
            const int width = unit.pair ? 2 : 1;
            Index stride = 1;
            for (size_t rest = pos + static_cast<size_t>(width); rest < meas.size(); ++rest)
                stride *= d;
            unit_strides.push_back(stride);
            unit_sizes.push_back(unit.pair ? d * d : d);
            pos += static_cast<size_t>(width);
        }
    }

    MSPEnsemble out;
    out.partition = partition;
    const double floor = std::max(probability_floor, 1e-14);
    for (Index c = 0; c < n_out; ++c) {
        const double p = grid.col(c).squaredNorm();
        if (p <= floor)
            continue;
        Eigen::Map<const Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic,
                                       Eigen::RowMajor>>
            y(grid.col(c).data(), keep_dim, lost_dim);
        ComplexMatrix rho = (y * y.adjoint()) / p;
        rho = 0.5 * (rho + rho.adjoint().eval());

        MSPEntry entry;
        entry.p = p;
        entry.rho = std::move(rho);
        for (size_t u = 0; u < unit_strides.size(); ++u)
            entry.outcome.push_back(
                static_cast<int>(c / unit_strides[u] % unit_sizes[u]));
        out.entries.push_back(std::move(entry));
        out.total_weight += p;
    }
    if (out.entries.empty())
        throw ArgumentError("build_mspe: probability floor removed every outcome");
    return out;
}

MomentTensor moment(const MSPEnsemble &ensemble, int k, Index budget) {
    if (k < 1)
        throw ArgumentError("moment: k must be >= 1");
    const Index d_keep = ensemble.keep_dim();
    Index dim = 1;
    for (int r = 0; r < k; ++r) {
        if (dim > budget / d_keep)
            throw ResourceError("moment: replica dimension exceeds dense budget");
        dim *= d_keep;
    }
    ComplexMatrix acc = ComplexMatrix::Zero(dim, dim);
    for (const auto &entry : ensemble.entries) {
        ComplexMatrix term = entry.rho;
        for (int r = 1; r < k; ++r)
            term = linalg::kron(term, entry.rho);
        acc += entry.p * term;
    }
    return MomentTensor{k, d_keep, std::move(acc)};
}

PurityAverages purity_averages(const MSPEnsemble &ensemble, const std::vector<int> &ks) {
    for (int k : ks)
        if (k < 1)
            throw ArgumentError("purity_averages: moments need k >= 1");
    const Partition &p = ensemble.partition;
    const int n_keep = static_cast<int>(keep_sites(p).size());
    const QuditLayout keep_layout{n_keep, p.layout.local_dim};
    std::vector<int> a_sites;
    for (int s = 0; s < p.n_a; ++s)
        a_sites.push_back(s);

    PurityAverages out;
    out.ks = ks;
    out.keep.assign(ks.size(), 0.0);
    out.reduced_a.assign(ks.size(), 0.0);
    for (const auto &entry : ensemble.entries) {
        const auto keep_eig = linalg::herm_eig(entry.rho);
        linalg::RealVector red_vals;
        if (p.reference) {
            const ComplexMatrix rho_a = linalg::partial_trace(entry.rho, keep_layout, a_sites);
            red_vals = linalg::herm_eig(rho_a).values;
        } else {
            red_vals = keep_eig.values;
        }
        for (size_t i = 0; i < ks.size(); ++i) {
            double tk = 0.0, tr = 0.0;
            for (Eigen::Index e = 0; e < keep_eig.values.size(); ++e)
                tk += std::pow(std::max(keep_eig.values(e), 0.0), ks[i]);
            for (Eigen::Index e = 0; e < red_vals.size(); ++e)
                tr += std::pow(std::max(red_vals(e), 0.0), ks[i]);
            out.keep[i] += entry.p * tk;
            out.reduced_a[i] += entry.p * tr;
        }
    }
    for (size_t i = 0; i < ks.size(); ++i) {
        out.keep[i] /= ensemble.total_weight;
        out.reduced_a[i] /= ensemble.total_weight;
    }
    return out;
}

namespace {

std::string basis_name(MeasurementBasis b) {
    return b == MeasurementBasis::HeisenbergWeylPairs ? "heisenberg-weyl-pairs"
                                                      : "computational";
}

MeasurementBasis basis_from_name(const std::string &name) {
    if (name == "heisenberg-weyl-pairs")
        return MeasurementBasis::HeisenbergWeylPairs;
    if (name == "computational")
        return MeasurementBasis::Computational;
    throw ArgumentError("unknown measurement basis: " + name);
}

} // namespace

void to_json(nlohmann::json &j, const Partition &p) {
    j = nlohmann::json{{"n_sites", p.layout.n_sites}, {"d", p.layout.local_dim},
                       {"n_a", p.n_a},                {"lost_sites", p.lost_sites},
                       {"reference", p.reference},    {"basis", basis_name(p.basis)}};
}

void from_json(const nlohmann::json &j, Partition &p) {
    p.layout.n_sites = j.at("n_sites").get<int>();
    p.layout.local_dim = j.at("d").get<int>();
    p.n_a = j.at("n_a").get<int>();
    p.lost_sites = j.at("lost_sites").get<std::vector<int>>();
    p.reference = j.at("reference").get<bool>();
    p.basis = basis_from_name(j.at("basis").get<std::string>());
    validate_partition(p);
}

void to_json(nlohmann::json &j, const MSPEnsemble &e) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto &entry : e.entries)
        entries.push_back(nlohmann::json{{"outcome", entry.outcome},
                                         {"p", entry.p},
                                         {"rho", matrix_to_json(entry.rho)}});
    j = nlohmann::json{
        {"partition", e.partition}, {"entries", std::move(entries)},
        {"total_weight", e.total_weight}};
}

void from_json(const nlohmann::json &j, MSPEnsemble &e) {
    e.partition = j.at("partition").get<Partition>();
    e.entries.clear();
    e.total_weight = j.at("total_weight").get<double>();
    for (const auto &item : j.at("entries")) {
        MSPEntry entry;
        entry.outcome = item.at("outcome").get<std::vector<int>>();
        entry.p = item.at("p").get<double>();
        entry.rho = matrix_from_json(item.at("rho"));
        e.entries.push_back(std::move(entry));
    }
}

} // namespace mspe::projected
