#pragma once

#include "torifano/fan.hpp"
#include "torifano/ma_solver.hpp"
#include "torifano/polytope.hpp"
#include "torifano/rational.hpp"
#include "torifano/stability.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace torifano {

struct LiftOptions {
    std::size_t part = 0;
    std::optional<QVector> v;
    std::optional<Rational> cap;
};

struct ProblemOptions {
    double tol = kDefaultTolerance;
    double ma_tol = 1e-9;
    GridSpec grid;
    std::vector<double> t_schedule{0.0, 0.25, 0.5, 0.75, 0.9, 1.0};
    int newton_max_iter = 50;
    int ma_max_iter = 5000;
    double relaxation = 0.5;
    std::optional<QVector> df_vector;
    LiftOptions lift;
};

struct ProblemDocument {
    std::string name;
    int dimension = 0;
    // fan route
    std::vector<IntVector> rays;
    std::vector<std::vector<int>> max_cones;
    QMatrix decomposition;
    // raw route: one halfspace list per part, stored in the >= convention
    std::vector<std::vector<Halfspace>> halfspaces;
    /// Convention the raw halfspaces were given in ("geq" or "leq").
    std::string halfspace_convention = "geq";
    std::vector<std::vector<double>> vector_fields;
    /// False when some decomposition datum came from a floating-point number.
    bool exact = true;
    ProblemOptions options;

    bool fan_route() const { return !rays.empty(); }
    std::size_t parts() const { return fan_route() ? decomposition.size() : halfspaces.size(); }
};

/// Validates and converts; errors name the offending field, e.g.
/// "decomposition[0][2]: zero denominator in '1/0'".
ProblemDocument problem_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const ProblemDocument& doc);

/// Reads a JSON file. Throws InputError on unreadable or malformed input.
ProblemDocument load_problem(const std::string& path);

/// Registry entry names, optionally parameterized as "name:value".
std::vector<std::string> builtin_names();

/// Throws UnknownExampleError for names outside the registry.
ProblemDocument builtin_example(const std::string& spec);

/// Fan for the fan route.
Fan problem_fan(const ProblemDocument& doc);

/// Polytopes of every part, without decomposition checks.
std::vector<Polytope> problem_polytopes(const ProblemDocument& doc);

/// The validated decomposition (throws InputError on failure).
Decomposition problem_decomposition(const ProblemDocument& doc);

}  // namespace torifano
