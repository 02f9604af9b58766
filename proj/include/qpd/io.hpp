#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qpd/measure.hpp"
#include "qpd/operators.hpp"
#include "qpd/wigner.hpp"

namespace qpd {

// ---------------------------------------------------------------------------
// Problem files: JSON descriptions of an operator tuple and a state.
//
// {
//   "dimension": 2,
//   "labels": ["Sx", "Sy"],                            // optional
//   "operators": [
//     {"j": 0.5, "theta": 1.5707963, "phi": 0.0, "normalization": "pauli"},
//     {"matrix": [[[0,0],[0,-1]], [[0,1],[0,0]]]}      // entries as [re, im]
//   ],
//   "state": "maximally-mixed"
//          | {"eigenstate": {"axis": 2, "sign": "+"}}  // 1-based operator axis
//          | {"matrix": [[[1,0],[0,0]],[[0,0],[0,0]]]}
// }
// ---------------------------------------------------------------------------
struct ProblemSpec {
    OperatorTuple tuple;
    DensityMatrix rho;
};

ProblemSpec parse_problem(const std::string& path);
ProblemSpec parse_problem_text(const std::string& text, const std::string& origin);

// Measure CSV: header x1,...,xn,weight; 17-significant-digit fields; atoms in
// canonical order. Parsing a written file reproduces the measure bit-exactly.
std::string measure_to_csv(const SignedDiscreteMeasure& mu);
SignedDiscreteMeasure measure_from_csv(const std::string& text);

// Grayscale P2 image of a grid, [min, max] mapped linearly onto [0, 255],
// plus a JSON sidecar with min/max/extent/epsilon so values are recoverable.
std::string grid_to_pgm(const DensityGrid& grid);
std::string grid_sidecar_json(const DensityGrid& grid);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// ---------------------------------------------------------------------------
// Verification suites: named runtime checks mirroring the library invariants.
// ---------------------------------------------------------------------------
struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    double runtime_s = 0.0;
};

struct RunReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;

    bool all_passed() const;
    std::string to_json() const;
};

// Known selectors: spin-identities, marginals, de-moivre, mass, commuting,
// convergence, paley-wiener, mehler-heine, closed-form, wigner-support, all.
RunReport run_verify_suite(const std::string& selector, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Subcommand cores (the CLI wraps these).
// ---------------------------------------------------------------------------
void cmd_measure(const ProblemSpec& problem, int m, bool keep_lattice,
                 const std::string& out_path);
void cmd_marginal(const ProblemSpec& problem, int m, int axis,
                  const std::string& out_path);

struct RenderOptions {
    double epsilon = 0.01;
    GridSpec grid;
    bool wigner = false; // invert f_w instead of smearing the order-m measure
    int m = 1;
    bool keep_lattice = false;
};

void cmd_render(const ProblemSpec& problem, const RenderOptions& options,
                const std::string& out_path);
void cmd_render_csv(const SignedDiscreteMeasure& mu, double epsilon,
                    const GridSpec& grid, const std::string& out_path);

// Convergence table: rows m, sup |f_mh - f_w|, Trotter bound over the grid,
// and the windowed smeared sup-norm distance.
std::string cmd_converge(const ProblemSpec& problem, const std::vector<int>& orders,
                         int grid_n, double grid_extent);

// One-point QCF comparison; returns a printable report.
std::string cmd_qcf(const ProblemSpec& problem, int m, const RVector& xi);

} // namespace qpd
