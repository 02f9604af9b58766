#include "qpd/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qpd {

namespace {

constexpr double kPi = 3.14159265358979323846;

} // namespace

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

void GridSpec::validate() const {
    for (int axis = 0; axis < 2; ++axis) {
        const auto a = static_cast<std::size_t>(axis);
        if (!(max[a] > min[a]) || !std::isfinite(min[a]) || !std::isfinite(max[a])) {
            throw BadGridSpec("GridSpec: extent must be finite with max > min");
        }
        if (resolution[a] < 2) {
            throw BadGridSpec("GridSpec: need at least 2 samples per axis");
        }
    }
}

double GridSpec::coord(int axis, int index) const {
    const auto a = static_cast<std::size_t>(axis);
    return min[a] + spacing(axis) * index;
}

double GridSpec::spacing(int axis) const {
    const auto a = static_cast<std::size_t>(axis);
    return (max[a] - min[a]) / (resolution[a] - 1);
}

GridSpec GridSpec::square(double extent, int n) {
    GridSpec spec;
    spec.min = {-extent, -extent};
    spec.max = {extent, extent};
    spec.resolution = {n, n};
    return spec;
}

double DensityGrid::value(int i0, int i1) const {
    return values[static_cast<std::size_t>(i0) *
                      static_cast<std::size_t>(spec.resolution[1]) +
                  static_cast<std::size_t>(i1)];
}

double DensityGrid::min_value() const {
    return *std::min_element(values.begin(), values.end());
}

double DensityGrid::max_value() const {
    return *std::max_element(values.begin(), values.end());
}

// ---------------------------------------------------------------------------
// Frequency windows
// ---------------------------------------------------------------------------

double FrequencyWindow::weight(double r) const {
    switch (kind) {
        case Kind::Gaussian:
            return std::exp(-param * r * r);
        case Kind::RaisedCosine:
            return r <= param ? 0.5 * (1.0 + std::cos(kPi * r / param)) : 0.0;
    }
    return 0.0;
}

double FrequencyWindow::radius() const {
    switch (kind) {
        case Kind::Gaussian:
            // exp(-eps R^2) < 1e-12 beyond the truncation radius.
            return std::sqrt(std::log(1e12) / param);
        case Kind::RaisedCosine:
            return param;
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Inverse-transform quadrature
// ---------------------------------------------------------------------------

DensityGrid invert_qcf(const std::function<Complex(double, double)>& f,
                       const FrequencyWindow& window, const GridSpec& grid,
                       double freq_extent, int freq_samples) {
    grid.validate();
    if (window.param <= 0.0) {
        throw BadGridSpec("invert_qcf: window parameter must be positive");
    }
    const double radius = freq_extent > 0.0 ? freq_extent : window.radius();

    double spatial_reach = 0.0;
    for (int axis = 0; axis < 2; ++axis) {
        const auto a = static_cast<std::size_t>(axis);
        spatial_reach = std::max({spatial_reach, std::abs(grid.min[a]), std::abs(grid.max[a])});
    }
    const double nyquist_spacing = kPi / spatial_reach;
    int samples = freq_samples;
    if (samples <= 0) {
        // Half the Nyquist limit by default.
        samples = static_cast<int>(std::ceil(2.0 * radius / (0.5 * nyquist_spacing)));
        samples = std::max(samples, 16);
    }
    const double spacing = 2.0 * radius / samples;
    if (spacing > nyquist_spacing * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "invert_qcf: frequency spacing " << spacing
            << " underresolves spatial extent (limit " << nyquist_spacing << ")";
        throw QuadratureUnderresolved(msg.str());
    }

    // Midpoint samples, symmetric about 0 so conj-symmetric f inverts to a
    // real field up to rounding.
    std::vector<double> xi(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) {
        xi[static_cast<std::size_t>(k)] = -radius + (k + 0.5) * spacing;
    }

    const int n0 = grid.resolution[0];
    const int n1 = grid.resolution[1];

    // Phase tables e^{-i x_j xi_k} per axis.
    auto phases = [&xi, samples](const GridSpec& g, int axis) {
        const int n = g.resolution[static_cast<std::size_t>(axis)];
        std::vector<Complex> table(static_cast<std::size_t>(n) *
                                   static_cast<std::size_t>(samples));
        for (int j = 0; j < n; ++j) {
            const double x = g.coord(axis, j);
            for (int k = 0; k < samples; ++k) {
                table[static_cast<std::size_t>(j) * static_cast<std::size_t>(samples) +
                      static_cast<std::size_t>(k)] =
                    std::polar(1.0, -x * xi[static_cast<std::size_t>(k)]);
            }
        }
        return table;
    };
    const std::vector<Complex> phase0 = phases(grid, 0);
    const std::vector<Complex> phase1 = phases(grid, 1);

    // Separable two-stage reduction: sum over xi1, then over xi0.
    std::vector<Complex> row(static_cast<std::size_t>(samples));
    std::vector<Complex> inner(static_cast<std::size_t>(samples) *
                               static_cast<std::size_t>(n1));
    for (int k0 = 0; k0 < samples; ++k0) {
        const double x0 = xi[static_cast<std::size_t>(k0)];
        for (int k1 = 0; k1 < samples; ++k1) {
            const double x1 = xi[static_cast<std::size_t>(k1)];
            const double w = window.weight(std::hypot(x0, x1));
            row[static_cast<std::size_t>(k1)] = w == 0.0 ? Complex(0.0, 0.0)
                                                         : w * f(x0, x1);
        }
        for (int j1 = 0; j1 < n1; ++j1) {
            Complex acc(0.0, 0.0);
            const Complex* ph = &phase1[static_cast<std::size_t>(j1) *
                                        static_cast<std::size_t>(samples)];
            for (int k1 = 0; k1 < samples; ++k1) {
                acc += row[static_cast<std::size_t>(k1)] * ph[k1];
            }
            inner[static_cast<std::size_t>(k0) * static_cast<std::size_t>(n1) +
                  static_cast<std::size_t>(j1)] = acc;
        }
    }

    DensityGrid out;
    out.spec = grid;
    out.epsilon = window.kind == FrequencyWindow::Kind::Gaussian ? window.param : 0.0;
    out.values.assign(static_cast<std::size_t>(n0) * static_cast<std::size_t>(n1), 0.0);
    const double scale = spacing * spacing / (4.0 * kPi * kPi);
    double max_imag = 0.0;
    for (int j0 = 0; j0 < n0; ++j0) {
        const Complex* ph = &phase0[static_cast<std::size_t>(j0) *
                                    static_cast<std::size_t>(samples)];
        for (int j1 = 0; j1 < n1; ++j1) {
            Complex acc(0.0, 0.0);
            for (int k0 = 0; k0 < samples; ++k0) {
                acc += ph[k0] * inner[static_cast<std::size_t>(k0) *
                                          static_cast<std::size_t>(n1) +
                                      static_cast<std::size_t>(j1)];
            }
            acc *= scale;
            max_imag = std::max(max_imag, std::abs(acc.imag()));
            out.values[static_cast<std::size_t>(j0) * static_cast<std::size_t>(n1) +
                       static_cast<std::size_t>(j1)] = acc.real();
        }
    }
    if (max_imag > tol::imag_residue) {
        std::ostringstream msg;
        msg << "invert_qcf: imaginary residue " << max_imag << " exceeds "
            << tol::imag_residue;
        throw ImaginaryResidue(msg.str());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Smearing
// ---------------------------------------------------------------------------

DensityGrid smear_measure(const SignedDiscreteMeasure& mu, double epsilon,
                          const GridSpec& grid) {
    grid.validate();
    if (mu.ndim() != 2) {
        throw DimMismatch("smear_measure: measure must be 2-dimensional");
    }
    if (!(epsilon > 0.0)) {
        throw BadGridSpec("smear_measure: epsilon must be positive");
    }
    DensityGrid out;
    out.spec = grid;
    out.epsilon = epsilon;
    const int n0 = grid.resolution[0];
    const int n1 = grid.resolution[1];
    out.values.assign(static_cast<std::size_t>(n0) * static_cast<std::size_t>(n1), 0.0);
    const double norm = 1.0 / (4.0 * kPi * epsilon);
    const double inv = 1.0 / (4.0 * epsilon);
    for (int i0 = 0; i0 < n0; ++i0) {
        const double x0 = grid.coord(0, i0);
        for (int i1 = 0; i1 < n1; ++i1) {
            const double x1 = grid.coord(1, i1);
            double sum = 0.0;
            for (const auto& atom : mu.atoms()) {
                const double d0 = x0 - atom.point(0);
                const double d1 = x1 - atom.point(1);
                sum += atom.weight * std::exp(-(d0 * d0 + d1 * d1) * inv);
            }
            out.values[static_cast<std::size_t>(i0) * static_cast<std::size_t>(n1) +
                       static_cast<std::size_t>(i1)] = sum * norm;
        }
    }
    return out;
}

DensityGrid smear_measure_windowed(const SignedDiscreteMeasure& mu,
                                   const FrequencyWindow& window, const GridSpec& grid,
                                   double freq_extent, int freq_samples) {
    if (mu.ndim() != 2) {
        throw DimMismatch("smear_measure_windowed: measure must be 2-dimensional");
    }
    const auto& atoms = mu.atoms();
    auto f = [&atoms](double xi0, double xi1) {
        Complex sum(0.0, 0.0);
        for (const auto& atom : atoms) {
            sum += atom.weight *
                   std::polar(1.0, xi0 * atom.point(0) + xi1 * atom.point(1));
        }
        return sum;
    };
    return invert_qcf(f, window, grid, freq_extent, freq_samples);
}

DensityGrid regularized_wigner(const OperatorTuple& tuple, const DensityMatrix& rho,
                               double epsilon, const GridSpec& grid,
                               double freq_extent, int freq_samples) {
    if (tuple.arity() != 2) {
        throw DimMismatch("regularized_wigner: need a pair of observables");
    }
    if (!(epsilon > 0.0)) {
        throw BadGridSpec("regularized_wigner: epsilon must be positive");
    }
    const QcfEvaluator evaluator{tuple, rho};
    auto f = [&evaluator](double xi0, double xi1) {
        RVector xi(2);
        xi << xi0, xi1;
        return evaluator.f_w(xi);
    };
    FrequencyWindow window{FrequencyWindow::Kind::Gaussian, epsilon};
    return invert_qcf(f, window, grid, freq_extent, freq_samples);
}

double mass_outside_disk(const DensityGrid& grid, double radius, double margin) {
    const int n0 = grid.spec.resolution[0];
    const int n1 = grid.spec.resolution[1];
    const double cutoff = radius + margin;
    double outside = 0.0;
    double total = 0.0;
    for (int i0 = 0; i0 < n0; ++i0) {
        const double x0 = grid.spec.coord(0, i0);
        for (int i1 = 0; i1 < n1; ++i1) {
            const double x1 = grid.spec.coord(1, i1);
            const double v = std::abs(grid.value(i0, i1));
            total += v;
            if (std::hypot(x0, x1) > cutoff) {
                outside += v;
            }
        }
    }
    return total > 0.0 ? outside / total : 0.0;
}

// ---------------------------------------------------------------------------
// Joint numerical range
// ---------------------------------------------------------------------------

double ConvexPolygon::support(const Eigen::Vector2d& direction) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : vertices) {
        best = std::max(best, v.dot(direction));
    }
    return best;
}

namespace {

double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& a,
              const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Andrew monotone chain; collinear inputs degenerate to a segment.
std::vector<Eigen::Vector2d> convex_hull(std::vector<Eigen::Vector2d> points) {
    std::sort(points.begin(), points.end(),
              [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
                  return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
              });
    points.erase(std::unique(points.begin(), points.end(),
                             [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
                                 return a == b;
                             }),
                 points.end());
    if (points.size() <= 2) return points;

    std::vector<Eigen::Vector2d> hull(points.size() * 2);
    std::size_t k = 0;
    for (const auto& p : points) { // lower
        while (k >= 2 && cross2(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (auto it = points.rbegin() + 1; it != points.rend(); ++it) { // upper
        while (k >= lower && cross2(hull[k - 2], hull[k - 1], *it) <= 0.0) --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

} // namespace

ConvexPolygon joint_numerical_range_2d(const HermitianOperator& a1,
                                       const HermitianOperator& a2, int n_angles) {
    if (a1.dim() != a2.dim()) {
        throw DimMismatch("joint_numerical_range_2d: dimension mismatch");
    }
    if (n_angles < 8) {
        throw ValidationError("joint_numerical_range_2d: need at least 8 angles");
    }
    std::vector<Eigen::Vector2d> points;
    points.reserve(static_cast<std::size_t>(n_angles));
    for (int k = 0; k < n_angles; ++k) {
        const double angle = 2.0 * kPi * k / n_angles;
        const Matrix combo =
            std::cos(angle) * a1.entries() + std::sin(angle) * a2.entries();
        Eigen::SelfAdjointEigenSolver<Matrix> solver(combo);
        if (solver.info() != Eigen::Success) {
            throw EigSolverFailure("joint_numerical_range_2d: eigensolver failed");
        }
        const CVector top = solver.eigenvectors().col(a1.dim() - 1);
        const double e1 = (top.adjoint() * a1.entries() * top)(0).real();
        const double e2 = (top.adjoint() * a2.entries() * top)(0).real();
        points.emplace_back(e1, e2);
    }
    ConvexPolygon polygon;
    polygon.vertices = convex_hull(std::move(points));
    return polygon;
}

} // namespace qpd
