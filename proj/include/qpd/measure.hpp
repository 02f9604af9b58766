#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qpd/operators.hpp"

namespace qpd {

struct Atom {
    RVector point;
    double weight = 0.0;
};

struct MeasureMeta {
    int order_m = 0;
    std::vector<std::string> labels;
    std::string state_hash;
};

// ---------------------------------------------------------------------------
// SignedDiscreteMeasure: finite list of point masses with real signed weights.
// Construction canonicalizes: atoms are merged when their snapped coordinates
// coincide (1e-9 sup-norm), sorted lexicographically by point, and zero-weight
// atoms (|w| < 1e-12) are dropped unless keep_zero_atoms is set.
// ---------------------------------------------------------------------------
class SignedDiscreteMeasure {
public:
    SignedDiscreteMeasure(int ndim, std::vector<Atom> atoms,
                          MeasureMeta meta = {}, bool keep_zero_atoms = false);

    int ndim() const { return ndim_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const MeasureMeta& meta() const { return meta_; }

    double total_weight() const;
    double first_moment(int axis) const; // axis is 1-based
    double total_variation() const;      // sum |w|

private:
    int ndim_ = 1;
    std::vector<Atom> atoms_;
    MeasureMeta meta_;
};

// Matrix-weighted atom measure, the working object of the convolution
// construction. Canonicalized the same way as SignedDiscreteMeasure.
struct MatrixAtom {
    RVector point;
    Matrix weight;
};

struct MatrixAtomMeasure {
    int ndim = 1;
    int dim = 1; // Hilbert-space dimension of the weights
    std::vector<MatrixAtom> atoms;
};

struct MhOptions {
    bool keep_lattice = false;             // retain the full support lattice
    std::size_t atom_budget = 10'000'000;  // intermediate-atom guard
};

// Single Trotter step of the permuted tuple as a matrix-valued measure:
// one atom per tuple of spectral clusters, located at the cluster values / m
// (coordinate axes in original order), weighted by the ordered projector
// product P_pi(1) P_pi(2) ... P_pi(n).
MatrixAtomMeasure one_step_measure(const OperatorTuple& tuple, int m,
                                   const std::vector<int>& perm);

// m-fold convolution power. Matrix weights multiply with the accumulated
// factor on the left:  W_t(x) = sum_{y+z=x} W_{t-1}(y) W_base(z).
MatrixAtomMeasure convolve_power(const MatrixAtomMeasure& base, int m,
                                 std::size_t atom_budget = 10'000'000);

// The order-m signed measure: weight at x is the n!-averaged
// Re tr(rho W_pi(x)). The real part is taken only after the full permutation
// sum; a residual imaginary part above 1e-8 throws.
SignedDiscreteMeasure mh_measure(const OperatorTuple& tuple, const DensityMatrix& rho,
                                 int m, const MhOptions& options = {});

// Project onto coordinate axis j (1-based), merging coincident values.
SignedDiscreteMeasure marginal(const SignedDiscreteMeasure& mu, int axis);

// Classical spectral law of a single observable: weight tr(rho P_lambda) at
// each distinct eigenvalue.
SignedDiscreteMeasure spectral_marginal(const DensityMatrix& rho,
                                        const HermitianOperator& op);

// Atoms aligned on the canonical lattice, then sum |w_a - w_b|.
double measure_l1_distance(const SignedDiscreteMeasure& a,
                           const SignedDiscreteMeasure& b);

} // namespace qpd
