#pragma once

#include <vector>

#include "qpd/operators.hpp"

namespace qpd {

// ---------------------------------------------------------------------------
// QcfEvaluator: quasi-characteristic functions of a bound (tuple, state) pair.
//
//   f_w(z)     = tr(rho exp(i z . A))
//   f_mh(m, z) = (1/n!) sum_{pi in S_n} tr(rho (prod_k exp(i z_pi(k) A_pi(k) / m))^m)
//
// Products are ordered left to right from k = 1. Both functions accept complex
// arguments (analytic extension); the real-argument overloads use the
// eigendecomposition fast path for the joint exponential.
// ---------------------------------------------------------------------------
class QcfEvaluator {
public:
    QcfEvaluator(OperatorTuple tuple, DensityMatrix rho);

    const OperatorTuple& tuple() const { return tuple_; }
    const DensityMatrix& rho() const { return rho_; }
    int arity() const { return tuple_.arity(); }

    // All n! permutations of {0,...,n-1}, lexicographic.
    const std::vector<std::vector<int>>& permutations() const { return permutations_; }

    Complex f_w(const CVector& z) const;
    Complex f_w(const RVector& xi) const;
    Complex f_mh(int m, const CVector& z) const;
    Complex f_mh(int m, const RVector& xi) const;

    // Per-permutation Trotter error bound on |f_w - trotterized term|:
    //   ||rho||_F * (2/m) * exp(sum_k |xi_k| ||A_k||_F).
    double trotter_error_bound(const RVector& xi, int m) const;

    // max over grid of |f_w - f_mh(m)|.
    double sup_qcf_distance(int m, const std::vector<RVector>& grid) const;

    // Supporting function of conv(Lambda), evaluated over the 2^n
    // extreme-eigenvalue vertex set. Appears in the Paley-Wiener bound
    //   |f_mh(-z)| <= exp(H_K(Im z)).
    double supporting_function(const RVector& y) const;

private:
    // U diag(exp(scale * lambda)) U^dag for operator k.
    Matrix op_exponential(int k, Complex scale) const;

    OperatorTuple tuple_;
    DensityMatrix rho_;
    std::vector<std::vector<int>> permutations_;
};

} // namespace qpd
