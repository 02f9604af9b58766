#pragma once

#include <array>
#include <functional>

#include "qpd/measure.hpp"
#include "qpd/qcf.hpp"

namespace qpd {

// ---------------------------------------------------------------------------
// Regular 2-d grids of real density values.
// ---------------------------------------------------------------------------
struct GridSpec {
    std::array<double, 2> min{-1.6, -1.6};
    std::array<double, 2> max{1.6, 1.6};
    std::array<int, 2> resolution{256, 256};

    void validate() const; // throws BadGridSpec
    double coord(int axis, int index) const;
    double spacing(int axis) const;
    // Square grid [-extent, extent]^2 at n x n samples.
    static GridSpec square(double extent, int n);
};

struct DensityGrid {
    GridSpec spec;
    std::vector<double> values; // values[i0 * res1 + i1], i0 along axis 0
    double epsilon = 0.0;

    double value(int i0, int i1) const;
    double min_value() const;
    double max_value() const;
};

// Frequency window applied to a quasi-characteristic function before
// inversion. Gaussian: exp(-eps r^2). RaisedCosine: 0.5 (1 + cos(pi r / R))
// for r <= R, zero beyond (compactly supported in frequency).
struct FrequencyWindow {
    enum class Kind { Gaussian, RaisedCosine };
    Kind kind = Kind::Gaussian;
    double param = 0.01; // eps for Gaussian, cutoff radius R for RaisedCosine

    double weight(double r) const;
    double radius() const; // truncation radius of the quadrature box
};

// Inverse-transform quadrature
//   g(x) = (1/(2 pi)^2) sum_xi W(||xi||) f(xi) e^{-i x . xi} dxi^2
// over a symmetric midpoint grid on [-R, R]^2, evaluated separably per axis.
// The imaginary residue of the result must stay below 1e-8. freq_extent and
// freq_samples of zero pick defaults: R from the window, spacing at half the
// Nyquist limit of the spatial extent.
DensityGrid invert_qcf(const std::function<Complex(double, double)>& f,
                       const FrequencyWindow& window, const GridSpec& grid,
                       double freq_extent = 0.0, int freq_samples = 0);

// Closed-form Gaussian smearing of a discrete measure:
//   value(x) = sum_atoms w * exp(-||x - p||^2 / (4 eps)) / (4 pi eps).
DensityGrid smear_measure(const SignedDiscreteMeasure& mu, double epsilon,
                          const GridSpec& grid);

// Smearing through an arbitrary frequency window, via the measure's own
// exponential sum f(xi) = sum w e^{i xi . p}.
DensityGrid smear_measure_windowed(const SignedDiscreteMeasure& mu,
                                   const FrequencyWindow& window, const GridSpec& grid,
                                   double freq_extent = 0.0, int freq_samples = 0);

// Gaussian-regularized Wigner density by frequency-domain quadrature of f_w.
DensityGrid regularized_wigner(const OperatorTuple& tuple, const DensityMatrix& rho,
                               double epsilon, const GridSpec& grid,
                               double freq_extent = 0.0, int freq_samples = 0);

// Relative absolute mass beyond ||x|| > radius + margin (Riemann sums).
double mass_outside_disk(const DensityGrid& grid, double radius, double margin);

// ---------------------------------------------------------------------------
// Joint numerical range (n = 2): counterclockwise convex polygon through the
// expectation pairs of extremal eigenvectors of cos(t) A1 + sin(t) A2.
// ---------------------------------------------------------------------------
struct ConvexPolygon {
    std::vector<Eigen::Vector2d> vertices; // counterclockwise, may degenerate

    double support(const Eigen::Vector2d& direction) const;
};

ConvexPolygon joint_numerical_range_2d(const HermitianOperator& a1,
                                       const HermitianOperator& a2, int n_angles);

} // namespace qpd
