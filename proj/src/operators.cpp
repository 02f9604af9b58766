#include "qpd/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qpd {

std::int64_t snap_index(double x) {
    return std::llround(x / tol::snap_spacing);
}

namespace {

void require_square(const Matrix& entries, const char* what) {
    if (entries.rows() == 0 || entries.rows() != entries.cols()) {
        std::ostringstream msg;
        msg << what << ": expected a nonempty square matrix, got " << entries.rows()
            << "x" << entries.cols();
        throw NotHermitian(msg.str());
    }
}

double hermiticity_defect(const Matrix& entries) {
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

} // namespace

// ---------------------------------------------------------------------------
// HermitianOperator
// ---------------------------------------------------------------------------

HermitianOperator::HermitianOperator(Matrix entries) : entries_(std::move(entries)) {
    require_square(entries_, "HermitianOperator");
    if (!entries_.allFinite()) {
        throw NotHermitian("HermitianOperator: entries must be finite");
    }
    const double defect = hermiticity_defect(entries_);
    if (defect > tol::hermitian_input) {
        std::ostringstream msg;
        msg << "HermitianOperator: max |A - A^dag| = " << defect << " exceeds "
            << tol::hermitian_input;
        throw NotHermitian(msg.str());
    }

    Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_);
    if (solver.info() != Eigen::Success) {
        throw EigSolverFailure("HermitianOperator: eigendecomposition failed");
    }
    eigenvalues_ = solver.eigenvalues(); // ascending
    eigenvectors_ = solver.eigenvectors();

    const int d = dim();
    const Matrix reconstructed =
        eigenvectors_ * eigenvalues_.asDiagonal() * eigenvectors_.adjoint();
    if ((reconstructed - entries_).norm() > tol::reconstruction) {
        throw EigSolverFailure("HermitianOperator: U D U^dag does not reconstruct A");
    }
    if ((eigenvectors_.adjoint() * eigenvectors_ - Matrix::Identity(d, d)).norm() >
        tol::unitarity) {
        throw EigSolverFailure("HermitianOperator: eigenvector matrix not unitary");
    }

    // Cluster degenerate eigenvalues; projectors are basis-independent even
    // when the eigensolver's ordering inside a cluster is not.
    int start = 0;
    while (start < d) {
        int stop = start + 1;
        while (stop < d && snap_index(eigenvalues_(stop)) == snap_index(eigenvalues_(start))) {
            ++stop;
        }
        const auto block = eigenvectors_.middleCols(start, stop - start);
        cluster_values_.push_back(eigenvalues_(start));
        cluster_projectors_.push_back(block * block.adjoint());
        start = stop;
    }

    frobenius_norm_ = entries_.norm();
}

// ---------------------------------------------------------------------------
// DensityMatrix
// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
    require_square(entries_, "DensityMatrix");
    const double defect = hermiticity_defect(entries_);
    if (defect > tol::hermitian_input) {
        std::ostringstream msg;
        msg << "DensityMatrix: max |rho - rho^dag| = " << defect << " exceeds "
            << tol::hermitian_input;
        throw NotHermitian(msg.str());
    }
    const double trace_defect = std::abs(entries_.trace() - Complex(1.0, 0.0));
    if (trace_defect > tol::unit_trace) {
        std::ostringstream msg;
        msg << "DensityMatrix: |tr(rho) - 1| = " << trace_defect << " exceeds "
            << tol::unit_trace;
        throw NotUnitTrace(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_);
    if (solver.info() != Eigen::Success) {
        throw EigSolverFailure("DensityMatrix: eigendecomposition failed");
    }
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < tol::psd_floor) {
        std::ostringstream msg;
        msg << "DensityMatrix: min eigenvalue " << min_eig << " below " << tol::psd_floor;
        throw NotPSD(msg.str());
    }
    frobenius_norm_ = entries_.norm();
}

// ---------------------------------------------------------------------------
// OperatorTuple
// ---------------------------------------------------------------------------

OperatorTuple::OperatorTuple(std::vector<HermitianOperator> ops,
                             std::vector<std::string> labels)
    : ops_(std::move(ops)), labels_(std::move(labels)) {
    if (ops_.empty()) {
        throw DimMismatch("OperatorTuple: need at least one operator");
    }
    const int d = ops_.front().dim();
    for (const auto& op : ops_) {
        if (op.dim() != d) {
            throw DimMismatch("OperatorTuple: operators must share one dimension");
        }
    }
    if (labels_.empty()) {
        for (std::size_t k = 0; k < ops_.size(); ++k) {
            labels_.push_back("A" + std::to_string(k + 1));
        }
    }
    if (labels_.size() != ops_.size()) {
        throw DimMismatch("OperatorTuple: one label per operator");
    }
}

HermitianOperator make_hermitian(const Matrix& entries) { return HermitianOperator(entries); }
DensityMatrix make_density(const Matrix& entries) { return DensityMatrix(entries); }

// ---------------------------------------------------------------------------
// Spin operators
// ---------------------------------------------------------------------------

HermitianOperator spin_operator(double j, double theta, double phi,
                                SpinNormalization normalization) {
    const double twoj = 2.0 * j;
    if (!(j > 0.0) || std::abs(twoj - std::llround(twoj)) > 1e-12) {
        std::ostringstream msg;
        msg << "spin_operator: j must be a positive half-integer, got " << j;
        throw InvalidSpin(msg.str());
    }
    if (normalization == SpinNormalization::Pauli && std::llround(twoj) != 1) {
        throw NormalizationMismatch("spin_operator: pauli normalization requires j = 1/2");
    }

    const int d = static_cast<int>(std::llround(twoj)) + 1;
    // Basis ordered m = j, j-1, ..., -j.
    Matrix jz = Matrix::Zero(d, d);
    Matrix jplus = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const double mval = j - i;
        jz(i, i) = mval;
        if (i + 1 < d) {
            const double msrc = j - (i + 1);
            jplus(i, i + 1) = std::sqrt(j * (j + 1.0) - msrc * (msrc + 1.0));
        }
    }
    const Matrix jminus = jplus.adjoint();
    const Matrix jx = 0.5 * (jplus + jminus);
    const Matrix jy = Complex(0.0, -0.5) * (jplus - jminus);

    const double nx = std::sin(theta) * std::cos(phi);
    const double ny = std::sin(theta) * std::sin(phi);
    const double nz = std::cos(theta);
    Matrix s = nx * jx + ny * jy + nz * jz;
    if (normalization == SpinNormalization::Pauli) {
        s *= 2.0;
    }
    // Symmetrize away the last-bit asymmetry of the assembly arithmetic.
    s = 0.5 * (s + s.adjoint().eval());
    return HermitianOperator(std::move(s));
}

RVector bloch_expectations(const DensityMatrix& rho, const OperatorTuple& tuple) {
    if (rho.dim() != tuple.dim()) {
        throw DimMismatch("bloch_expectations: state and tuple dimensions differ");
    }
    RVector s(tuple.arity());
    for (int k = 0; k < tuple.arity(); ++k) {
        const Complex value = (rho.entries() * tuple.op(k).entries()).trace();
        if (std::abs(value.imag()) > 1e-12) {
            std::ostringstream msg;
            msg << "bloch_expectations: imaginary residue " << value.imag();
            throw ImaginaryResidue(msg.str());
        }
        s(k) = value.real();
    }
    return s;
}

// ---------------------------------------------------------------------------
// EigenLattice
// ---------------------------------------------------------------------------

namespace {

// Distinct values of (v_1 + ... + v_m)/m over cluster values, via iterated
// Minkowski sums deduplicated on the snap lattice.
std::vector<double> minkowski_average(const std::vector<double>& values, int m) {
    std::vector<double> sums = values;
    auto dedup = [](std::vector<double>& xs) {
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end(),
                             [](double a, double b) {
                                 return snap_index(a) == snap_index(b);
                             }),
                 xs.end());
    };
    dedup(sums);
    for (int t = 1; t < m; ++t) {
        std::vector<double> next;
        next.reserve(sums.size() * values.size());
        for (double a : sums) {
            for (double b : values) {
                next.push_back(a + b);
            }
        }
        dedup(next);
        sums = std::move(next);
    }
    for (double& x : sums) {
        x /= m;
    }
    return sums;
}

} // namespace

EigenLattice eigen_lattice(const OperatorTuple& tuple, int m) {
    if (m < 1) {
        throw Error("eigen_lattice: m must be >= 1");
    }
    EigenLattice lattice;
    lattice.m = m;
    const int n = tuple.arity();
    lattice.per_axis_values.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        lattice.per_axis_values.push_back(minkowski_average(tuple.op(k).cluster_values(), m));
    }

    std::size_t count = 1;
    for (const auto& axis : lattice.per_axis_values) {
        count *= axis.size();
    }
    lattice.points.reserve(count);
    RVector point(n);
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    for (std::size_t r = 0; r < count; ++r) {
        std::size_t rem = r;
        // Row-major over axes: last axis varies fastest, giving lex order.
        for (int k = n - 1; k >= 0; --k) {
            const auto& axis = lattice.per_axis_values[static_cast<std::size_t>(k)];
            point(k) = axis[rem % axis.size()];
            rem /= axis.size();
        }
        lattice.points.push_back(point);
    }
    return lattice;
}

} // namespace qpd
