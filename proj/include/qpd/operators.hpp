#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qpd/constants.hpp"
#include "qpd/errors.hpp"

namespace qpd {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Snap a coordinate to the canonical 1e-9 lattice. Used for deduplicating
// eigenvalues and merging measure atoms; representatives keep full precision.
std::int64_t snap_index(double x);

// ---------------------------------------------------------------------------
// HermitianOperator: validated observable with cached eigendecomposition.
// Eigenvalues ascending; eigenvector columns match that order. Degenerate
// eigenvalues (within snap spacing) are merged into spectral clusters whose
// projectors are basis-independent.
// ---------------------------------------------------------------------------
class HermitianOperator {
public:
    explicit HermitianOperator(Matrix entries);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }
    const RVector& eigenvalues() const { return eigenvalues_; }
    const Matrix& eigenvectors() const { return eigenvectors_; }

    // Distinct eigenvalue clusters, ascending, with their projectors.
    const std::vector<double>& cluster_values() const { return cluster_values_; }
    const std::vector<Matrix>& cluster_projectors() const { return cluster_projectors_; }

    double frobenius_norm() const { return frobenius_norm_; }
    double min_eigenvalue() const { return eigenvalues_(0); }
    double max_eigenvalue() const { return eigenvalues_(dim() - 1); }

private:
    Matrix entries_;
    RVector eigenvalues_;
    Matrix eigenvectors_;
    std::vector<double> cluster_values_;
    std::vector<Matrix> cluster_projectors_;
    double frobenius_norm_ = 0.0;
};

// ---------------------------------------------------------------------------
// DensityMatrix: Hermitian, unit trace, positive semidefinite.
// ---------------------------------------------------------------------------
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix entries);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }
    double frobenius_norm() const { return frobenius_norm_; }

private:
    Matrix entries_;
    double frobenius_norm_ = 0.0;
};

// ---------------------------------------------------------------------------
// OperatorTuple: ordered observables sharing one Hilbert space.
// ---------------------------------------------------------------------------
class OperatorTuple {
public:
    explicit OperatorTuple(std::vector<HermitianOperator> ops,
                           std::vector<std::string> labels = {});

    int arity() const { return static_cast<int>(ops_.size()); }
    int dim() const { return ops_.front().dim(); }
    const HermitianOperator& op(int k) const { return ops_[static_cast<std::size_t>(k)]; }
    const std::vector<HermitianOperator>& ops() const { return ops_; }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    std::vector<HermitianOperator> ops_;
    std::vector<std::string> labels_;
};

HermitianOperator make_hermitian(const Matrix& entries);
DensityMatrix make_density(const Matrix& entries);

// Spin normalization: hbar-units gives the spectrum {-j,...,j}; pauli is the
// spin-1/2 convention with spectrum {-1,+1}.
enum class SpinNormalization { HbarUnits, Pauli };

// S . n for direction n = (sin t cos p, sin t sin p, cos t), built from the
// standard angular-momentum ladder operators in the S_z eigenbasis
// (basis ordered m = j, j-1, ..., -j).
HermitianOperator spin_operator(double j, double theta, double phi,
                                SpinNormalization normalization);

// Expectation vector s_k = tr(rho A_k); imaginary residue beyond 1e-12 throws.
RVector bloch_expectations(const DensityMatrix& rho, const OperatorTuple& tuple);

// ---------------------------------------------------------------------------
// EigenLattice: the m-fold Minkowski average of the spectra, axis by axis.
// points = cartesian product of per-axis value sets, lexicographically sorted.
// ---------------------------------------------------------------------------
struct EigenLattice {
    int m = 1;
    std::vector<std::vector<double>> per_axis_values;
    std::vector<RVector> points;
};

EigenLattice eigen_lattice(const OperatorTuple& tuple, int m);

} // namespace qpd
