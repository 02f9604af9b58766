#include "qpd/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qpd/qcf.hpp"

namespace qpd {

using nlohmann::json;

namespace {

std::string format17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

Matrix parse_complex_matrix(const json& node, const std::string& where) {
    if (!node.is_array() || node.empty()) {
        throw ParseError(where + ": expected a nonempty array of rows");
    }
    const std::size_t d = node.size();
    Matrix out(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
        const json& row = node[i];
        if (!row.is_array() || row.size() != d) {
            throw ParseError(where + ": row " + std::to_string(i + 1) +
                             " must have " + std::to_string(d) + " entries");
        }
        for (std::size_t j = 0; j < d; ++j) {
            const json& entry = row[j];
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
                !entry[1].is_number()) {
                throw ParseError(where + ": entry (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ") must be an [re, im] pair");
            }
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                Complex(entry[0].get<double>(), entry[1].get<double>());
        }
    }
    return out;
}

HermitianOperator parse_operator(const json& node, int dimension,
                                 const std::string& where) {
    try {
        if (node.is_object() && node.contains("j")) {
            for (const char* field : {"theta", "phi", "normalization"}) {
                if (!node.contains(field)) {
                    throw ParseError(where + ": spin descriptor missing \"" +
                                     field + "\"");
                }
            }
            const double j = node["j"].get<double>();
            const double theta = node["theta"].get<double>();
            const double phi = node["phi"].get<double>();
            const std::string normalization = node["normalization"].get<std::string>();
            SpinNormalization norm;
            if (normalization == "pauli") {
                norm = SpinNormalization::Pauli;
            } else if (normalization == "hbar-units" || normalization == "hbar") {
                norm = SpinNormalization::HbarUnits;
            } else {
                throw ParseError(where + ": unknown normalization \"" + normalization +
                                 "\" (expected \"pauli\" or \"hbar-units\")");
            }
            HermitianOperator op = spin_operator(j, theta, phi, norm);
            if (op.dim() != dimension) {
                throw ValidationError(where + ": spin operator dimension " +
                                      std::to_string(op.dim()) + " != declared " +
                                      std::to_string(dimension));
            }
            return op;
        }
        const json& matrix_node =
            node.is_object() && node.contains("matrix") ? node["matrix"] : node;
        Matrix entries = parse_complex_matrix(matrix_node, where);
        if (entries.rows() != dimension) {
            throw ValidationError(where + ": matrix dimension " +
                                  std::to_string(entries.rows()) + " != declared " +
                                  std::to_string(dimension));
        }
        return make_hermitian(entries);
    } catch (const ParseError&) {
        throw;
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        throw ValidationError(where + ": " + e.what());
    } catch (const json::exception& e) {
        throw ParseError(where + ": " + e.what());
    }
}

DensityMatrix parse_state(const json& node, const std::vector<HermitianOperator>& ops,
                          int dimension) {
    const std::string where = "state";
    try {
        if (node.is_string()) {
            const std::string name = node.get<std::string>();
            if (name == "maximally-mixed") {
                return DensityMatrix(Matrix::Identity(dimension, dimension) /
                                     static_cast<double>(dimension));
            }
            throw ParseError(where + ": unknown state \"" + name + "\"");
        }
        if (node.is_object() && node.contains("eigenstate")) {
            const json& spec = node["eigenstate"];
            const int axis = spec.at("axis").get<int>();
            const std::string sign = spec.at("sign").get<std::string>();
            if (axis < 1 || axis > static_cast<int>(ops.size())) {
                throw ParseError(where + ": eigenstate axis out of range");
            }
            if (sign != "+" && sign != "-") {
                throw ParseError(where + ": eigenstate sign must be \"+\" or \"-\"");
            }
            const auto& op = ops[static_cast<std::size_t>(axis - 1)];
            const CVector v = sign == "+" ? op.eigenvectors().col(op.dim() - 1)
                                          : op.eigenvectors().col(0);
            return DensityMatrix(v * v.adjoint());
        }
        const json& matrix_node =
            node.is_object() && node.contains("matrix") ? node["matrix"] : node;
        Matrix entries = parse_complex_matrix(matrix_node, where);
        if (entries.rows() != dimension) {
            throw ValidationError(where + ": matrix dimension " +
                                  std::to_string(entries.rows()) + " != declared " +
                                  std::to_string(dimension));
        }
        return make_density(entries);
    } catch (const ParseError&) {
        throw;
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        throw ValidationError(where + ": " + e.what());
    } catch (const json::exception& e) {
        throw ParseError(where + ": " + e.what());
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Problem files
// ---------------------------------------------------------------------------

ProblemSpec parse_problem_text(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
    if (!root.is_object()) {
        throw ParseError(origin + ": top level must be an object");
    }
    if (!root.contains("dimension") || !root["dimension"].is_number_integer()) {
        throw ParseError(origin + ": missing integer field \"dimension\"");
    }
    const int dimension = root["dimension"].get<int>();
    if (dimension < 1) {
        throw ParseError(origin + ": dimension must be positive");
    }
    if (!root.contains("operators") || !root["operators"].is_array() ||
        root["operators"].empty()) {
        throw ParseError(origin + ": missing nonempty array \"operators\"");
    }

    std::vector<HermitianOperator> ops;
    ops.reserve(root["operators"].size());
    for (std::size_t k = 0; k < root["operators"].size(); ++k) {
        ops.push_back(parse_operator(root["operators"][k], dimension,
                                     "operators[" + std::to_string(k + 1) + "]"));
    }

    std::vector<std::string> labels;
    if (root.contains("labels")) {
        if (!root["labels"].is_array()) {
            throw ParseError(origin + ": \"labels\" must be an array of strings");
        }
        for (const auto& label : root["labels"]) {
            labels.push_back(label.get<std::string>());
        }
    }

    if (!root.contains("state")) {
        throw ParseError(origin + ": missing field \"state\"");
    }
    DensityMatrix rho = parse_state(root["state"], ops, dimension);

    try {
        OperatorTuple tuple(std::move(ops), std::move(labels));
        return ProblemSpec{std::move(tuple), std::move(rho)};
    } catch (const Error& e) {
        throw ValidationError(origin + ": " + e.what());
    }
}

ProblemSpec parse_problem(const std::string& path) {
    return parse_problem_text(read_file(path), path);
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

std::string measure_to_csv(const SignedDiscreteMeasure& mu) {
    std::string out;
    for (int k = 1; k <= mu.ndim(); ++k) {
        out += "x" + std::to_string(k) + ",";
    }
    out += "weight\n";
    for (const auto& atom : mu.atoms()) {
        for (int k = 0; k < mu.ndim(); ++k) {
            out += format17(atom.point(k));
            out += ',';
        }
        out += format17(atom.weight);
        out += '\n';
    }
    return out;
}

SignedDiscreteMeasure measure_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("measure CSV: empty input");
    }
    int ndim = 0;
    {
        std::istringstream header(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(header, field, ',')) {
            fields.push_back(field);
        }
        if (fields.size() < 2 || fields.back() != "weight") {
            throw ParseError("measure CSV: header must be x1,...,xn,weight");
        }
        ndim = static_cast<int>(fields.size()) - 1;
    }
    std::vector<Atom> atoms;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        RVector point(ndim);
        for (int k = 0; k < ndim; ++k) {
            if (!std::getline(row, field, ',')) {
                throw ParseError("measure CSV: line " + std::to_string(line_no) +
                                 ": too few fields");
            }
            point(k) = std::strtod(field.c_str(), nullptr);
        }
        if (!std::getline(row, field, ',')) {
            throw ParseError("measure CSV: line " + std::to_string(line_no) +
                             ": missing weight");
        }
        atoms.push_back({std::move(point), std::strtod(field.c_str(), nullptr)});
    }
    return SignedDiscreteMeasure(ndim, std::move(atoms), {}, /*keep_zero_atoms=*/true);
}

// ---------------------------------------------------------------------------
// PGM + sidecar
// ---------------------------------------------------------------------------

std::string grid_to_pgm(const DensityGrid& grid) {
    const int n0 = grid.spec.resolution[0];
    const int n1 = grid.spec.resolution[1];
    const double lo = grid.min_value();
    const double hi = grid.max_value();
    const double span = hi - lo;

    std::string out = "P2\n" + std::to_string(n0) + " " + std::to_string(n1) + "\n255\n";
    // Raster rows run from the top of the image: axis 1 from max to min.
    for (int r = 0; r < n1; ++r) {
        const int i1 = n1 - 1 - r;
        for (int i0 = 0; i0 < n0; ++i0) {
            int pixel = 0;
            if (span > 0.0) {
                pixel = static_cast<int>(
                    std::lround((grid.value(i0, i1) - lo) / span * 255.0));
                pixel = std::min(255, std::max(0, pixel));
            }
            out += std::to_string(pixel);
            out += i0 + 1 == n0 ? '\n' : ' ';
        }
    }
    return out;
}

std::string grid_sidecar_json(const DensityGrid& grid) {
    json side;
    side["min"] = grid.min_value();
    side["max"] = grid.max_value();
    side["extent"] = {{grid.spec.min[0], grid.spec.max[0]},
                      {grid.spec.min[1], grid.spec.max[1]}};
    side["resolution"] = {grid.spec.resolution[0], grid.spec.resolution[1]};
    side["epsilon"] = grid.epsilon;
    return side.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path);
    }
    out << content;
}

// ---------------------------------------------------------------------------
// Subcommand cores
// ---------------------------------------------------------------------------

void cmd_measure(const ProblemSpec& problem, int m, bool keep_lattice,
                 const std::string& out_path) {
    MhOptions options;
    options.keep_lattice = keep_lattice;
    const SignedDiscreteMeasure mu = mh_measure(problem.tuple, problem.rho, m, options);
    write_file(out_path, measure_to_csv(mu));
}

void cmd_marginal(const ProblemSpec& problem, int m, int axis,
                  const std::string& out_path) {
    const SignedDiscreteMeasure mu = mh_measure(problem.tuple, problem.rho, m);
    write_file(out_path, measure_to_csv(marginal(mu, axis)));
}

void cmd_render(const ProblemSpec& problem, const RenderOptions& options,
                const std::string& out_path) {
    DensityGrid grid;
    if (options.wigner) {
        grid = regularized_wigner(problem.tuple, problem.rho, options.epsilon,
                                  options.grid);
    } else {
        MhOptions mh_options;
        mh_options.keep_lattice = options.keep_lattice;
        const SignedDiscreteMeasure mu =
            mh_measure(problem.tuple, problem.rho, options.m, mh_options);
        if (mu.atoms().empty()) {
            throw EmptyMeasure("cmd_render: measure has no atoms");
        }
        grid = smear_measure(mu, options.epsilon, options.grid);
    }
    write_file(out_path, grid_to_pgm(grid));
    write_file(out_path + ".json", grid_sidecar_json(grid));
}

void cmd_render_csv(const SignedDiscreteMeasure& mu, double epsilon,
                    const GridSpec& grid, const std::string& out_path) {
    if (mu.atoms().empty()) {
        throw EmptyMeasure("cmd_render_csv: measure has no atoms");
    }
    const DensityGrid out = smear_measure(mu, epsilon, grid);
    write_file(out_path, grid_to_pgm(out));
    write_file(out_path + ".json", grid_sidecar_json(out));
}

std::string cmd_converge(const ProblemSpec& problem, const std::vector<int>& orders,
                         int grid_n, double grid_extent) {
    const QcfEvaluator evaluator{problem.tuple, problem.rho};
    if (problem.tuple.arity() != 2) {
        throw DimMismatch("cmd_converge: need a pair of observables");
    }

    std::vector<RVector> grid;
    grid.reserve(static_cast<std::size_t>(grid_n) * static_cast<std::size_t>(grid_n));
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            RVector xi(2);
            xi << -grid_extent + 2.0 * grid_extent * i / (grid_n - 1),
                -grid_extent + 2.0 * grid_extent * j / (grid_n - 1);
            grid.push_back(std::move(xi));
        }
    }

    // Smeared distances use the compact raised-cosine window over the same
    // frequency box and a spatial grid covering the support.
    double reach = 0.0;
    for (const auto& op : problem.tuple.ops()) {
        reach = std::max({reach, std::abs(op.min_eigenvalue()),
                          std::abs(op.max_eigenvalue())});
    }
    const GridSpec spatial = GridSpec::square(reach + 0.5, 41);
    const FrequencyWindow window{FrequencyWindow::Kind::RaisedCosine, grid_extent};
    auto density_for = [&](auto&& f) {
        return invert_qcf(f, window, spatial);
    };
    auto f_w = [&evaluator](double a, double b) {
        RVector xi(2);
        xi << a, b;
        return evaluator.f_w(xi);
    };
    const DensityGrid wigner_grid = density_for(f_w);

    std::string out = "m,sup_qcf_distance,trotter_bound,smeared_sup_distance\n";
    for (int m : orders) {
        const double sup = evaluator.sup_qcf_distance(m, grid);
        double bound = 0.0;
        for (const auto& xi : grid) {
            bound = std::max(bound, evaluator.trotter_error_bound(xi, m));
        }
        auto f_m = [&evaluator, m](double a, double b) {
            RVector xi(2);
            xi << a, b;
            return evaluator.f_mh(m, xi);
        };
        const DensityGrid mh_grid = density_for(f_m);
        double smeared = 0.0;
        for (std::size_t i = 0; i < mh_grid.values.size(); ++i) {
            smeared = std::max(smeared,
                               std::abs(mh_grid.values[i] - wigner_grid.values[i]));
        }
        out += std::to_string(m) + "," + format17(sup) + "," + format17(bound) + "," +
               format17(smeared) + "\n";
    }
    return out;
}

std::string cmd_qcf(const ProblemSpec& problem, int m, const RVector& xi) {
    const QcfEvaluator evaluator{problem.tuple, problem.rho};
    const Complex fw = evaluator.f_w(xi);
    const Complex fm = evaluator.f_mh(m, xi);
    std::string out;
    out += "f_w = " + format17(fw.real()) + " + " + format17(fw.imag()) + "i\n";
    out += "f_mh_" + std::to_string(m) + " = " + format17(fm.real()) + " + " +
           format17(fm.imag()) + "i\n";
    out += "abs_difference = " + format17(std::abs(fw - fm)) + "\n";
    out += "trotter_bound = " + format17(evaluator.trotter_error_bound(xi, m)) + "\n";
    return out;
}

} // namespace qpd
