#include "qpd/measure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "qpd/qcf.hpp"

namespace qpd {

namespace {

constexpr int kMaxArity = 5;

// Snapped coordinates as a fixed-size lookup key (n <= 5).
struct PointKey {
    std::array<std::int64_t, kMaxArity> idx{};
    int n = 0;

    bool operator==(const PointKey& other) const {
        if (n != other.n) return false;
        for (int i = 0; i < n; ++i) {
            if (idx[static_cast<std::size_t>(i)] != other.idx[static_cast<std::size_t>(i)]) {
                return false;
            }
        }
        return true;
    }
    bool operator<(const PointKey& other) const {
        for (int i = 0; i < n; ++i) {
            if (idx[static_cast<std::size_t>(i)] != other.idx[static_cast<std::size_t>(i)]) {
                return idx[static_cast<std::size_t>(i)] < other.idx[static_cast<std::size_t>(i)];
            }
        }
        return false;
    }
};

PointKey key_of(const RVector& point) {
    PointKey key;
    key.n = static_cast<int>(point.size());
    for (int i = 0; i < key.n; ++i) {
        key.idx[static_cast<std::size_t>(i)] = snap_index(point(i));
    }
    return key;
}

struct PointKeyHash {
    std::size_t operator()(const PointKey& key) const {
        std::uint64_t h = 1469598103934665603ull; // FNV-1a
        for (int i = 0; i < key.n; ++i) {
            auto v = static_cast<std::uint64_t>(key.idx[static_cast<std::size_t>(i)]);
            for (int b = 0; b < 8; ++b) {
                h ^= (v >> (8 * b)) & 0xffull;
                h *= 1099511628211ull;
            }
        }
        return static_cast<std::size_t>(h);
    }
};

bool lex_less(const RVector& a, const RVector& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) != b(i)) return a(i) < b(i);
    }
    return false;
}

std::string hash_state(const DensityMatrix& rho) {
    std::uint64_t h = 1469598103934665603ull;
    auto feed = [&h](double x) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        for (const char* c = buf; *c; ++c) {
            h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(*c));
            h *= 1099511628211ull;
        }
    };
    for (int i = 0; i < rho.dim(); ++i) {
        for (int j = 0; j < rho.dim(); ++j) {
            feed(rho.entries()(i, j).real());
            feed(rho.entries()(i, j).imag());
        }
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return std::string(out);
}

} // namespace

// ---------------------------------------------------------------------------
// SignedDiscreteMeasure
// ---------------------------------------------------------------------------

SignedDiscreteMeasure::SignedDiscreteMeasure(int ndim, std::vector<Atom> atoms,
                                             MeasureMeta meta, bool keep_zero_atoms)
    : ndim_(ndim), meta_(std::move(meta)) {
    if (ndim_ < 1) {
        throw DimMismatch("SignedDiscreteMeasure: ndim must be >= 1");
    }
    for (const auto& atom : atoms) {
        if (atom.point.size() != ndim_) {
            throw DimMismatch("SignedDiscreteMeasure: atom dimension mismatch");
        }
    }
    // Sort by snapped key, ties by raw point, so merging is independent of
    // the caller's atom order.
    std::vector<std::size_t> order(atoms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<PointKey> keys(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        keys[i] = key_of(atoms[i].point);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (!(keys[a] == keys[b])) return keys[a] < keys[b];
        return lex_less(atoms[a].point, atoms[b].point);
    });

    atoms_.reserve(atoms.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        Atom merged = atoms[order[i]];
        merged.weight = 0.0;
        while (j < order.size() && keys[order[j]] == keys[order[i]]) {
            merged.weight += atoms[order[j]].weight;
            ++j;
        }
        if (keep_zero_atoms || std::abs(merged.weight) >= tol::zero_weight) {
            atoms_.push_back(std::move(merged));
        }
        i = j;
    }
}

double SignedDiscreteMeasure::total_weight() const {
    double sum = 0.0;
    for (const auto& atom : atoms_) sum += atom.weight;
    return sum;
}

double SignedDiscreteMeasure::first_moment(int axis) const {
    if (axis < 1 || axis > ndim_) {
        throw AxisOutOfRange("first_moment: axis out of range");
    }
    double sum = 0.0;
    for (const auto& atom : atoms_) sum += atom.weight * atom.point(axis - 1);
    return sum;
}

double SignedDiscreteMeasure::total_variation() const {
    double sum = 0.0;
    for (const auto& atom : atoms_) sum += std::abs(atom.weight);
    return sum;
}

// ---------------------------------------------------------------------------
// Matrix-atom construction
// ---------------------------------------------------------------------------

MatrixAtomMeasure one_step_measure(const OperatorTuple& tuple, int m,
                                   const std::vector<int>& perm) {
    const int n = tuple.arity();
    if (m < 1) {
        throw Error("one_step_measure: m must be >= 1");
    }
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    if (static_cast<int>(perm.size()) != n) {
        throw DimMismatch("one_step_measure: permutation arity mismatch");
    }
    for (int k : perm) {
        if (k < 0 || k >= n || seen[static_cast<std::size_t>(k)]) {
            throw DimMismatch("one_step_measure: not a permutation of 0..n-1");
        }
        seen[static_cast<std::size_t>(k)] = true;
    }

    MatrixAtomMeasure result;
    result.ndim = n;
    result.dim = tuple.dim();

    std::size_t count = 1;
    for (int k = 0; k < n; ++k) {
        count *= tuple.op(k).cluster_values().size();
    }
    result.atoms.reserve(count);

    // Odometer over cluster indices, ordered along the permutation.
    std::vector<std::size_t> cluster(static_cast<std::size_t>(n), 0);
    for (std::size_t r = 0; r < count; ++r) {
        RVector point(n);
        Matrix weight = Matrix::Identity(tuple.dim(), tuple.dim());
        for (int k = 0; k < n; ++k) {
            const int op_index = perm[static_cast<std::size_t>(k)];
            const auto& op = tuple.op(op_index);
            const std::size_t c = cluster[static_cast<std::size_t>(k)];
            point(op_index) = op.cluster_values()[c] / static_cast<double>(m);
            weight = weight * op.cluster_projectors()[c];
        }
        result.atoms.push_back({std::move(point), std::move(weight)});
        for (int k = n - 1; k >= 0; --k) {
            auto& c = cluster[static_cast<std::size_t>(k)];
            const std::size_t size =
                tuple.op(perm[static_cast<std::size_t>(k)]).cluster_values().size();
            if (++c < size) break;
            c = 0;
        }
    }
    return result;
}

MatrixAtomMeasure convolve_power(const MatrixAtomMeasure& base, int m,
                                 std::size_t atom_budget) {
    if (m < 1) {
        throw Error("convolve_power: m must be >= 1");
    }
    MatrixAtomMeasure acc = base;
    for (int t = 1; t < m; ++t) {
        const std::size_t pairs = acc.atoms.size() * base.atoms.size();
        if (pairs > atom_budget) {
            std::ostringstream msg;
            msg << "convolve_power: " << pairs << " intermediate atoms exceed budget "
                << atom_budget;
            throw AtomBudgetExceeded(msg.str());
        }
        std::unordered_map<PointKey, std::size_t, PointKeyHash> index;
        index.reserve(acc.atoms.size() * 2);
        MatrixAtomMeasure next;
        next.ndim = acc.ndim;
        next.dim = acc.dim;
        for (const auto& a : acc.atoms) {
            for (const auto& b : base.atoms) {
                const RVector point = a.point + b.point;
                const PointKey key = key_of(point);
                auto [it, inserted] = index.try_emplace(key, next.atoms.size());
                if (inserted) {
                    next.atoms.push_back({point, Matrix::Zero(acc.dim, acc.dim)});
                }
                next.atoms[it->second].weight.noalias() += a.weight * b.weight;
            }
        }
        std::sort(next.atoms.begin(), next.atoms.end(),
                  [](const MatrixAtom& a, const MatrixAtom& b) {
                      return key_of(a.point) < key_of(b.point);
                  });
        acc = std::move(next);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// mh_measure
// ---------------------------------------------------------------------------

SignedDiscreteMeasure mh_measure(const OperatorTuple& tuple, const DensityMatrix& rho,
                                 int m, const MhOptions& options) {
    if (tuple.dim() != rho.dim()) {
        throw DimMismatch("mh_measure: state and tuple dimensions differ");
    }
    if (tuple.arity() > kMaxArity) {
        throw TupleTooLarge("mh_measure: tuples above n = 5 are not supported");
    }
    if (m < 1) {
        throw Error("mh_measure: m must be >= 1");
    }
    const int n = tuple.arity();

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);

    std::unordered_map<PointKey, std::size_t, PointKeyHash> index;
    std::vector<RVector> points;
    std::vector<Complex> weights;

    std::size_t n_perms = 0;
    do {
        ++n_perms;
        const MatrixAtomMeasure powered =
            convolve_power(one_step_measure(tuple, m, perm), m, options.atom_budget);
        for (const auto& atom : powered.atoms) {
            const PointKey key = key_of(atom.point);
            auto [it, inserted] = index.try_emplace(key, points.size());
            if (inserted) {
                points.push_back(atom.point);
                weights.push_back(Complex(0.0, 0.0));
            }
            weights[it->second] += (rho.entries() * atom.weight).trace();
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    // Real part only after the full permutation sum; per-permutation terms
    // are genuinely complex.
    double max_imag = 0.0;
    std::vector<Atom> atoms;
    atoms.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Complex w = weights[i] / static_cast<double>(n_perms);
        max_imag = std::max(max_imag, std::abs(w.imag()));
        atoms.push_back({points[i], w.real()});
    }
    if (max_imag > tol::imag_residue) {
        std::ostringstream msg;
        msg << "mh_measure: imaginary residue " << max_imag << " exceeds "
            << tol::imag_residue;
        throw ImaginaryResidue(msg.str());
    }

    if (options.keep_lattice) {
        const EigenLattice lattice = eigen_lattice(tuple, m);
        for (const auto& point : lattice.points) {
            const PointKey key = key_of(point);
            if (index.find(key) == index.end()) {
                atoms.push_back({point, 0.0});
            }
        }
    }

    MeasureMeta meta;
    meta.order_m = m;
    meta.labels = tuple.labels();
    meta.state_hash = hash_state(rho);
    return SignedDiscreteMeasure(n, std::move(atoms), std::move(meta),
                                 options.keep_lattice);
}

// ---------------------------------------------------------------------------
// Marginals and distances
// ---------------------------------------------------------------------------

SignedDiscreteMeasure marginal(const SignedDiscreteMeasure& mu, int axis) {
    if (axis < 1 || axis > mu.ndim()) {
        std::ostringstream msg;
        msg << "marginal: axis " << axis << " out of range 1.." << mu.ndim();
        throw AxisOutOfRange(msg.str());
    }
    std::vector<Atom> atoms;
    atoms.reserve(mu.atoms().size());
    for (const auto& atom : mu.atoms()) {
        RVector point(1);
        point(0) = atom.point(axis - 1);
        atoms.push_back({std::move(point), atom.weight});
    }
    MeasureMeta meta = mu.meta();
    if (!meta.labels.empty() && axis <= static_cast<int>(meta.labels.size())) {
        meta.labels = {meta.labels[static_cast<std::size_t>(axis - 1)]};
    }
    return SignedDiscreteMeasure(1, std::move(atoms), std::move(meta));
}

SignedDiscreteMeasure spectral_marginal(const DensityMatrix& rho,
                                        const HermitianOperator& op) {
    if (rho.dim() != op.dim()) {
        throw DimMismatch("spectral_marginal: state and operator dimensions differ");
    }
    std::vector<Atom> atoms;
    atoms.reserve(op.cluster_values().size());
    for (std::size_t c = 0; c < op.cluster_values().size(); ++c) {
        RVector point(1);
        point(0) = op.cluster_values()[c];
        const Complex w = (rho.entries() * op.cluster_projectors()[c]).trace();
        atoms.push_back({std::move(point), w.real()});
    }
    return SignedDiscreteMeasure(1, std::move(atoms));
}

double measure_l1_distance(const SignedDiscreteMeasure& a,
                           const SignedDiscreteMeasure& b) {
    if (a.ndim() != b.ndim()) {
        throw DimMismatch("measure_l1_distance: dimension mismatch");
    }
    std::unordered_map<PointKey, std::array<double, 2>, PointKeyHash> aligned;
    aligned.reserve((a.atoms().size() + b.atoms().size()) * 2);
    for (const auto& atom : a.atoms()) {
        aligned[key_of(atom.point)][0] += atom.weight;
    }
    for (const auto& atom : b.atoms()) {
        aligned[key_of(atom.point)][1] += atom.weight;
    }
    double sum = 0.0;
    for (const auto& [key, w] : aligned) {
        sum += std::abs(w[0] - w[1]);
    }
    return sum;
}

} // namespace qpd
