#include "qpd/qcf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

namespace qpd {

namespace {

constexpr int kMaxArity = 5; // n! terms; beyond this the sum is impractical

bool finite(const CVector& z) {
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        if (!std::isfinite(z(i).real()) || !std::isfinite(z(i).imag())) {
            return false;
        }
    }
    return true;
}

Matrix matrix_power(Matrix base, int exponent) {
    // Repeated squaring; exponent >= 1.
    Matrix result = Matrix::Identity(base.rows(), base.cols());
    while (exponent > 0) {
        if (exponent & 1) {
            result = result * base;
        }
        exponent >>= 1;
        if (exponent > 0) {
            base = base * base;
        }
    }
    return result;
}

} // namespace

QcfEvaluator::QcfEvaluator(OperatorTuple tuple, DensityMatrix rho)
    : tuple_(std::move(tuple)), rho_(std::move(rho)) {
    if (tuple_.dim() != rho_.dim()) {
        throw DimMismatch("QcfEvaluator: state and tuple dimensions differ");
    }
    const int n = tuple_.arity();
    if (n > kMaxArity) {
        throw TupleTooLarge("QcfEvaluator: tuples above n = 5 are not supported");
    }
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        permutations_.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

Matrix QcfEvaluator::op_exponential(int k, Complex scale) const {
    const auto& op = tuple_.op(k);
    const int d = op.dim();
    CVector diag(d);
    for (int i = 0; i < d; ++i) {
        diag(i) = std::exp(scale * op.eigenvalues()(i));
    }
    return op.eigenvectors() * diag.asDiagonal() * op.eigenvectors().adjoint();
}

Complex QcfEvaluator::f_w(const CVector& z) const {
    if (z.size() != tuple_.arity()) {
        throw DimMismatch("f_w: argument arity mismatch");
    }
    if (!finite(z)) {
        throw NonFiniteInput("f_w: argument must be finite");
    }
    const int d = tuple_.dim();
    Matrix exponent = Matrix::Zero(d, d);
    for (int k = 0; k < tuple_.arity(); ++k) {
        exponent += Complex(0.0, 1.0) * z(k) * tuple_.op(k).entries();
    }
    const Matrix expm = exponent.exp(); // scaling-and-squaring Pade
    return (rho_.entries() * expm).trace();
}

Complex QcfEvaluator::f_w(const RVector& xi) const {
    if (xi.size() != tuple_.arity()) {
        throw DimMismatch("f_w: argument arity mismatch");
    }
    if (!xi.allFinite()) {
        throw NonFiniteInput("f_w: argument must be finite");
    }
    const int d = tuple_.dim();
    Matrix h = Matrix::Zero(d, d);
    for (int k = 0; k < tuple_.arity(); ++k) {
        h += xi(k) * tuple_.op(k).entries();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw EigSolverFailure("f_w: eigendecomposition of xi . A failed");
    }
    // tr(rho U e^{iD} U^dag) = sum_j e^{i lambda_j} (u_j^dag rho u_j)
    const Matrix m = solver.eigenvectors().adjoint() * rho_.entries() * solver.eigenvectors();
    Complex result(0.0, 0.0);
    for (int i = 0; i < d; ++i) {
        result += std::exp(Complex(0.0, solver.eigenvalues()(i))) * m(i, i);
    }
    return result;
}

Complex QcfEvaluator::f_mh(int m, const CVector& z) const {
    if (m < 1) {
        throw Error("f_mh: m must be >= 1");
    }
    if (z.size() != tuple_.arity()) {
        throw DimMismatch("f_mh: argument arity mismatch");
    }
    if (!finite(z)) {
        throw NonFiniteInput("f_mh: argument must be finite");
    }
    const int n = tuple_.arity();
    const int d = tuple_.dim();

    // One factor per operator, shared across permutations.
    std::vector<Matrix> factors;
    factors.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        factors.push_back(op_exponential(k, Complex(0.0, 1.0) * z(k) / static_cast<double>(m)));
    }

    Complex sum(0.0, 0.0);
    for (const auto& perm : permutations_) {
        Matrix step = Matrix::Identity(d, d);
        for (int k : perm) {
            step = step * factors[static_cast<std::size_t>(k)];
        }
        const Matrix powered = matrix_power(std::move(step), m);
        sum += (rho_.entries() * powered).trace();
    }
    return sum / static_cast<double>(permutations_.size());
}

Complex QcfEvaluator::f_mh(int m, const RVector& xi) const {
    CVector z(xi.size());
    for (Eigen::Index i = 0; i < xi.size(); ++i) {
        z(i) = Complex(xi(i), 0.0);
    }
    return f_mh(m, z);
}

double QcfEvaluator::trotter_error_bound(const RVector& xi, int m) const {
    if (xi.size() != tuple_.arity()) {
        throw DimMismatch("trotter_error_bound: argument arity mismatch");
    }
    if (m < 1) {
        throw Error("trotter_error_bound: m must be >= 1");
    }
    double exponent = 0.0;
    for (int k = 0; k < tuple_.arity(); ++k) {
        exponent += std::abs(xi(k)) * tuple_.op(k).frobenius_norm();
    }
    return rho_.frobenius_norm() * (2.0 / static_cast<double>(m)) * std::exp(exponent);
}

double QcfEvaluator::sup_qcf_distance(int m, const std::vector<RVector>& grid) const {
    if (grid.empty()) {
        throw EmptyGrid("sup_qcf_distance: empty grid");
    }
    double sup = 0.0;
    for (const auto& xi : grid) {
        sup = std::max(sup, std::abs(f_w(xi) - f_mh(m, xi)));
    }
    return sup;
}

double QcfEvaluator::supporting_function(const RVector& y) const {
    if (y.size() != tuple_.arity()) {
        throw DimMismatch("supporting_function: argument arity mismatch");
    }
    const int n = tuple_.arity();
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double dot = 0.0;
        for (int k = 0; k < n; ++k) {
            const auto& op = tuple_.op(k);
            const double v = (mask >> k) & 1u ? op.max_eigenvalue() : op.min_eigenvalue();
            dot += v * y(k);
        }
        best = std::max(best, dot);
    }
    return best;
}

} // namespace qpd
