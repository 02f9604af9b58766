#pragma once

#include <complex>

#include "qpd/measure.hpp"
#include "qpd/operators.hpp"

namespace qpd {

// ---------------------------------------------------------------------------
// Closed forms for a pair of spin-1/2 observables along orthogonal Bloch
// directions, in the +-1 eigenvalue convention. Everything here is expressed
// through Chebyshev polynomials of the first and second kinds.
// ---------------------------------------------------------------------------

// Monomial coefficients of T_m: T_m(x) = sum_n coeffs[n] x^n. Computed by the
// exact integer recurrence T_{m+1} = 2x T_m - T_{m-1}; degrees above 60 are
// rejected since coefficient magnitudes outgrow double precision.
struct ChebyshevCoeffs {
    int degree = 0;
    std::vector<double> coeffs;
};

ChebyshevCoeffs chebyshev_coeffs(int m);

// Stable pointwise evaluation, trigonometric/hyperbolic form.
double cheb_t(int m, double x);
double cheb_u(int m, double x); // second kind, degree m

// T_m and U_{m-1} at the product argument cos(a) cos(b), for complex a, b.
// The angle acos(cos(a)cos(b)) is reconstructed from 1 - cos(a)cos(b)
// computed by half-angle identities, which stays accurate when the argument
// approaches 1 (large m at fixed a, b).
struct ChebAtCosProduct {
    Complex t;  // T_m
    Complex u;  // U_{m-1}
};
ChebAtCosProduct cheb_at_cos_product(int m, Complex a, Complex b);

// State of a spin-1/2 particle reduced to the in-plane expectations
// s_k = tr(rho S_k) along the two measurement directions.
struct SpinHalfState {
    double s1 = 0.0;
    double s2 = 0.0;
    SpinHalfState(double s1_, double s2_);
};

// Closed-form order-m quasi-characteristic function:
//   T_m(c) + i (s1 sin(x1/m) cos(x2/m) + s2 cos(x1/m) sin(x2/m)) U_{m-1}(c),
// with c = cos(x1/m) cos(x2/m).
Complex f_mh_spin_half(const SpinHalfState& state, int m, Complex xi1, Complex xi2);

// Closed-form order-m measure: the binomial base measure built from the
// Chebyshev coefficients, tilted by the affine factor (1 + s1 x1 + s2 x2).
SignedDiscreteMeasure p_mh_spin_half(const SpinHalfState& state, int m,
                                     bool keep_lattice = false);

// Residual of the noncommutative de Moivre identities: the half-sum of the
// two ordered Trotter powers against T_m + i b_m U_{m-1}, and the
// half-difference against U_{m-1} sin sin S2 S1. Exact identities; the
// returned value is numerical noise.
double de_moivre_residual(double xi1, double xi2, int m);

// |T_m(cos(z1/m) cos(z2/m)) - cos(sqrt(z1^2 + z2^2))|, principal square root.
double mehler_heine_residual(Complex z1, Complex z2, long m);

// Same limit with the Jacobi-polynomial prefactor sqrt(m pi) (2m)! / (2^2m (m!)^2),
// evaluated through log-gamma.
double mehler_heine_jacobi_residual(Complex z1, Complex z2, long m);

// Closed-form Wigner quasi-characteristic function
//   cos(||xi||) + i (s1 xi1 + s2 xi2) sin(||xi||)/||xi||.
Complex f_w_spin_half(const SpinHalfState& state, double xi1, double xi2);

// Affine tilt factor in polar coordinates: 1 + s1 r cos(theta) + s2 r sin(theta).
double h_factor(const SpinHalfState& state, double r, double theta);

} // namespace qpd
