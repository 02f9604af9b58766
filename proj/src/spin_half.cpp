#include "qpd/spin_half.hpp"

#include <cmath>
#include <sstream>

namespace qpd {

namespace {

constexpr int kMaxDegree = 60;
constexpr double kPi = 3.14159265358979323846;

// Directions used to realize the operators in de_moivre_residual. Any
// orthogonal pair works; theta-hat of (theta1, phi1) is orthogonal to n-hat.
constexpr double kTheta1 = 0.9;
constexpr double kPhi1 = 0.3;

Complex csin(Complex z) { return std::sin(z); }
Complex ccos(Complex z) { return std::cos(z); }

} // namespace

// ---------------------------------------------------------------------------
// Chebyshev machinery
// ---------------------------------------------------------------------------

ChebyshevCoeffs chebyshev_coeffs(int m) {
    if (m < 0 || m > kMaxDegree) {
        std::ostringstream msg;
        msg << "chebyshev_coeffs: degree " << m << " outside [0, " << kMaxDegree << "]";
        throw DegreeTooLarge(msg.str());
    }
    // Exact integer recurrence; __int128 holds every coefficient up to m = 60.
    std::vector<__int128> prev{1};           // T_0
    std::vector<__int128> curr{0, 1};        // T_1
    if (m == 0) curr = prev;
    for (int k = 2; k <= m; ++k) {
        std::vector<__int128> next(static_cast<std::size_t>(k) + 1, 0);
        for (std::size_t i = 0; i < curr.size(); ++i) {
            next[i + 1] += 2 * curr[i];
        }
        for (std::size_t i = 0; i < prev.size(); ++i) {
            next[i] -= prev[i];
        }
        prev = std::move(curr);
        curr = std::move(next);
    }
    ChebyshevCoeffs out;
    out.degree = m;
    out.coeffs.reserve(curr.size());
    for (__int128 c : curr) {
        out.coeffs.push_back(static_cast<double>(c));
    }
    return out;
}

double cheb_t(int m, double x) {
    if (m < 0) throw DegreeTooLarge("cheb_t: negative degree");
    if (std::abs(x) <= 1.0) {
        return std::cos(m * std::acos(x));
    }
    const double sign = (x < 0.0 && (m & 1)) ? -1.0 : 1.0;
    return sign * std::cosh(m * std::acosh(std::abs(x)));
}

double cheb_u(int m, double x) {
    if (m < 0) throw DegreeTooLarge("cheb_u: negative degree");
    if (std::abs(x) < 1.0) {
        const double theta = std::acos(x);
        const double s = std::sin(theta);
        if (s > 1e-9) {
            return std::sin((m + 1) * theta) / s;
        }
    }
    if (std::abs(std::abs(x) - 1.0) < 1e-9) {
        const double sign = (x < 0.0 && (m & 1)) ? -1.0 : 1.0;
        return sign * (m + 1);
    }
    const double w = std::acosh(std::abs(x));
    const double sign = (x < 0.0 && (m & 1)) ? -1.0 : 1.0;
    return sign * std::sinh((m + 1) * w) / std::sinh(w);
}

ChebAtCosProduct cheb_at_cos_product(int m, Complex a, Complex b) {
    if (m < 1) throw DegreeTooLarge("cheb_at_cos_product: degree must be >= 1");
    const Complex c = ccos(a) * ccos(b);

    // Reconstruct theta = acos(+-c) from 1 -+ cos(a)cos(b) assembled out of
    // half-angle terms; the naive 1 - c loses the digits that matter when c
    // approaches 1. Arguments with Re(c) < 0 are reflected to the stable side
    // and mapped back through the parity rules T_m(-x) = (-1)^m T_m(x),
    // U_{m-1}(-x) = (-1)^{m-1} U_{m-1}(x).
    const bool reflect = c.real() < 0.0;
    const Complex sa = csin(a / 2.0), sb = csin(b / 2.0), ca = ccos(a / 2.0);
    const Complex one_minus = reflect
                                  ? 2.0 * ca * ca - ccos(a) * (2.0 * sb * sb)  // 1 + c
                                  : 2.0 * sa * sa + ccos(a) * (2.0 * sb * sb); // 1 - c
    const Complex theta = 2.0 * std::asin(std::sqrt(one_minus / 2.0));
    const Complex mtheta = static_cast<double>(m) * theta;

    Complex t = ccos(mtheta);
    const Complex st = csin(theta);
    Complex u = std::abs(st) > 1e-9
                    ? csin(mtheta) / st
                    : static_cast<double>(m) * ccos(mtheta) / ccos(theta);
    if (reflect) {
        if (m % 2 == 1) t = -t;
        if (m % 2 == 0) u = -u;
    }
    return {t, u};
}

// ---------------------------------------------------------------------------
// Spin-1/2 closed forms
// ---------------------------------------------------------------------------

SpinHalfState::SpinHalfState(double s1_, double s2_) : s1(s1_), s2(s2_) {
    const double norm2 = s1 * s1 + s2 * s2;
    if (norm2 > 1.0 + 1e-12) {
        std::ostringstream msg;
        msg << "SpinHalfState: s1^2 + s2^2 = " << norm2 << " exceeds 1";
        throw ValidationError(msg.str());
    }
}

Complex f_mh_spin_half(const SpinHalfState& state, int m, Complex xi1, Complex xi2) {
    if (m < 1) throw Error("f_mh_spin_half: m must be >= 1");
    const Complex a = xi1 / static_cast<double>(m);
    const Complex b = xi2 / static_cast<double>(m);
    const auto tu = cheb_at_cos_product(m, a, b);
    const Complex derivative_part =
        state.s1 * csin(a) * ccos(b) + state.s2 * ccos(a) * csin(b);
    return tu.t + Complex(0.0, 1.0) * derivative_part * tu.u;
}

SignedDiscreteMeasure p_mh_spin_half(const SpinHalfState& state, int m,
                                     bool keep_lattice) {
    if (m < 1) throw Error("p_mh_spin_half: m must be >= 1");
    const ChebyshevCoeffs cheb = chebyshev_coeffs(m);

    // Base weights on the (m+1)^2 lattice { (k1/m, k2/m) : k = -m..m, step 2 },
    // indexed by (k + m)/2. Only n with the parity of m contribute.
    const std::size_t side = static_cast<std::size_t>(m) + 1;
    std::vector<double> base(side * side, 0.0);
    std::vector<double> binom(side, 0.0);
    for (int n = m % 2; n <= m; n += 2) {
        const double coeff = cheb.coeffs[static_cast<std::size_t>(n)] /
                             std::pow(4.0, static_cast<double>(n));
        if (coeff == 0.0) continue;
        binom[0] = 1.0;
        for (int p = 0; p < n; ++p) {
            binom[static_cast<std::size_t>(p) + 1] =
                binom[static_cast<std::size_t>(p)] * static_cast<double>(n - p) /
                static_cast<double>(p + 1);
        }
        for (int p = 0; p <= n; ++p) {
            const int i1 = (n - 2 * p + m) / 2;
            for (int q = 0; q <= n; ++q) {
                const int i2 = (n - 2 * q + m) / 2;
                base[static_cast<std::size_t>(i1) * side + static_cast<std::size_t>(i2)] +=
                    coeff * binom[static_cast<std::size_t>(p)] *
                    binom[static_cast<std::size_t>(q)];
            }
        }
    }

    std::vector<Atom> atoms;
    atoms.reserve(side * side);
    for (std::size_t i1 = 0; i1 < side; ++i1) {
        for (std::size_t i2 = 0; i2 < side; ++i2) {
            RVector point(2);
            point(0) = static_cast<double>(2.0 * static_cast<double>(i1) - m) /
                       static_cast<double>(m);
            point(1) = static_cast<double>(2.0 * static_cast<double>(i2) - m) /
                       static_cast<double>(m);
            const double tilt = 1.0 + state.s1 * point(0) + state.s2 * point(1);
            atoms.push_back({std::move(point), tilt * base[i1 * side + i2]});
        }
    }
    MeasureMeta meta;
    meta.order_m = m;
    meta.labels = {"S1", "S2"};
    return SignedDiscreteMeasure(2, std::move(atoms), std::move(meta), keep_lattice);
}

// ---------------------------------------------------------------------------
// Identities and limits
// ---------------------------------------------------------------------------

namespace {

Matrix spin_half_exponential(const Matrix& s, double angle) {
    // exp(i t S) = cos(t) I + i sin(t) S for S^2 = I.
    return std::cos(angle) * Matrix::Identity(2, 2) +
           Complex(0.0, std::sin(angle)) * s;
}

Matrix small_power(Matrix base, int exponent) {
    Matrix result = Matrix::Identity(base.rows(), base.cols());
    while (exponent > 0) {
        if (exponent & 1) result = result * base;
        exponent >>= 1;
        if (exponent > 0) base = base * base;
    }
    return result;
}

} // namespace

double de_moivre_residual(double xi1, double xi2, int m) {
    if (m < 1) throw Error("de_moivre_residual: m must be >= 1");
    const Matrix s1 =
        spin_operator(0.5, kTheta1, kPhi1, SpinNormalization::Pauli).entries();
    const Matrix s2 =
        spin_operator(0.5, kTheta1 + kPi / 2.0, kPhi1, SpinNormalization::Pauli).entries();

    const double a = xi1 / m;
    const double b = xi2 / m;
    const Matrix ea = spin_half_exponential(s1, a);
    const Matrix eb = spin_half_exponential(s2, b);
    const Matrix p = small_power(ea * eb, m);
    const Matrix q = small_power(eb * ea, m);

    const auto tu = cheb_at_cos_product(m, Complex(a, 0.0), Complex(b, 0.0));
    const double tm = tu.t.real();
    const double um1 = tu.u.real();

    const Matrix b_m = std::sin(a) * std::cos(b) * s1 + std::cos(a) * std::sin(b) * s2;
    const Matrix half_sum_target =
        tm * Matrix::Identity(2, 2) + Complex(0.0, 1.0) * um1 * b_m;
    const Matrix half_diff_target = um1 * std::sin(a) * std::sin(b) * (s2 * s1);

    const double r1 = (0.5 * (p + q) - half_sum_target).norm();
    const double r2 = (0.5 * (p - q) - half_diff_target).norm();
    return std::max(r1, r2);
}

double mehler_heine_residual(Complex z1, Complex z2, long m) {
    if (m < 1) throw Error("mehler_heine_residual: m must be >= 1");
    if (m > 1000000L) {
        throw OverflowGuard("mehler_heine_residual: m above 10^6");
    }
    const double md = static_cast<double>(m);
    const Complex a = z1 / md;
    const Complex b = z2 / md;
    // theta = acos(cos(a)cos(b)) with 1 - cos(a)cos(b) assembled from
    // half-angle terms; for z fixed and m large this keeps full precision.
    const Complex sa = csin(a / 2.0), sb = csin(b / 2.0);
    const Complex one_minus = 2.0 * sa * sa + ccos(a) * (2.0 * sb * sb);
    const Complex theta = 2.0 * std::asin(std::sqrt(one_minus / 2.0));
    const Complex tm = ccos(md * theta);
    const Complex target = ccos(std::sqrt(z1 * z1 + z2 * z2));
    return std::abs(tm - target);
}

double mehler_heine_jacobi_residual(Complex z1, Complex z2, long m) {
    if (m < 1) throw Error("mehler_heine_jacobi_residual: m must be >= 1");
    if (m > 1000000L) {
        throw OverflowGuard("mehler_heine_jacobi_residual: m above 10^6");
    }
    const double md = static_cast<double>(m);
    // sqrt(m pi) (2m)! / (2^{2m} (m!)^2) via log-gamma.
    const double log_prefactor = 0.5 * std::log(md * kPi) + std::lgamma(2.0 * md + 1.0) -
                                 2.0 * md * std::log(2.0) - 2.0 * std::lgamma(md + 1.0);
    const double prefactor = std::exp(log_prefactor);

    const Complex a = z1 / md;
    const Complex b = z2 / md;
    const Complex sa = csin(a / 2.0), sb = csin(b / 2.0);
    const Complex one_minus = 2.0 * sa * sa + ccos(a) * (2.0 * sb * sb);
    const Complex theta = 2.0 * std::asin(std::sqrt(one_minus / 2.0));
    const Complex tm = ccos(md * theta);
    const Complex target = ccos(std::sqrt(z1 * z1 + z2 * z2));
    return std::abs(prefactor * tm - target);
}

Complex f_w_spin_half(const SpinHalfState& state, double xi1, double xi2) {
    const double r = std::hypot(xi1, xi2);
    const double sinc = r < 1e-8 ? 1.0 - r * r / 6.0 : std::sin(r) / r;
    return Complex(std::cos(r), (state.s1 * xi1 + state.s2 * xi2) * sinc);
}

double h_factor(const SpinHalfState& state, double r, double theta) {
    if (r < 0.0) throw Error("h_factor: radius must be nonnegative");
    return 1.0 + state.s1 * r * std::cos(theta) + state.s2 * r * std::sin(theta);
}

} // namespace qpd
