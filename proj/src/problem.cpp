#include "torifano/problem.hpp"

#include "torifano/errors.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace torifano {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw InputError(path + ": " + what); }

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }
std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Rationals arrive as "p/q" strings, integers, or floats (float mode).
Rational read_rational(const json& j, const std::string& path, bool& exact) {
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const InputError& e) {
            fail(path, e.what());
        }
    }
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number_float()) {
        const double d = j.get<double>();
        if (!std::isfinite(d)) fail(path, "not a finite number");
        exact = false;
        return rational_from_double(d);
    }
    fail(path, "expected a rational (\"p/q\" string or number)");
}

QVector read_rational_vector(const json& j, const std::string& path, bool& exact) {
    if (!j.is_array()) fail(path, "expected an array");
    QVector out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_rational(j[i], at(path, i), exact));
    return out;
}

double read_double(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        try {
            return to_double(parse_rational(j.get<std::string>()));
        } catch (const InputError& e) {
            fail(path, e.what());
        }
    }
    fail(path, "expected a number");
}

int read_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

std::vector<double> read_double_vector(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_double(j[i], at(path, i)));
    return out;
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) fail(at(path, key), "unknown field");
    }
}

std::vector<Halfspace> read_halfspace_list(const json& j, const std::string& path, bool leq, bool& exact) {
    if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of {normal, offset}");
    std::vector<Halfspace> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto p = at(path, i);
        if (!j[i].is_object() || !j[i].contains("normal") || !j[i].contains("offset"))
            fail(p, "expected an object with normal and offset");
        check_keys(j[i], p, {"normal", "offset"});
        Halfspace h;
        h.normal = read_rational_vector(j[i]["normal"], at(p, "normal"), exact);
        h.offset = read_rational(j[i]["offset"], at(p, "offset"), exact);
        // <y, d> <= c  becomes  <-d, y> >= -c
        if (leq) h.normal = scale(h.normal, Rational(-1));
        out.push_back(std::move(h));
    }
    return out;
}

ProblemOptions read_options(const json& j, int dimension, bool& exact) {
    ProblemOptions o;
    if (!j.is_object()) fail("options", "expected an object");
    check_keys(j, "options", {"tol", "ma_tol", "grid", "t_schedule", "newton_max_iter", "ma_max_iter", "relaxation",
                              "df_vector", "lift"});
    if (j.contains("tol")) o.tol = read_double(j["tol"], "options.tol");
    if (j.contains("ma_tol")) o.ma_tol = read_double(j["ma_tol"], "options.ma_tol");
    if (!(o.tol > 0)) fail("options.tol", "must be positive");
    if (!(o.ma_tol > 0)) fail("options.ma_tol", "must be positive");
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        if (!g.is_object()) fail("options.grid", "expected an object {R, h}");
        check_keys(g, "options.grid", {"R", "h"});
        if (g.contains("R")) o.grid.R = read_double(g["R"], "options.grid.R");
        if (g.contains("h")) o.grid.h = read_double(g["h"], "options.grid.h");
    }
    if (j.contains("t_schedule")) o.t_schedule = read_double_vector(j["t_schedule"], "options.t_schedule");
    if (j.contains("newton_max_iter")) o.newton_max_iter = read_int(j["newton_max_iter"], "options.newton_max_iter");
    if (j.contains("ma_max_iter")) o.ma_max_iter = read_int(j["ma_max_iter"], "options.ma_max_iter");
    if (j.contains("relaxation")) o.relaxation = read_double(j["relaxation"], "options.relaxation");
    if (j.contains("df_vector")) {
        o.df_vector = read_rational_vector(j["df_vector"], "options.df_vector", exact);
        if (static_cast<int>(o.df_vector->size()) != dimension) fail("options.df_vector", "wrong dimension");
    }
    if (j.contains("lift")) {
        const auto& l = j["lift"];
        if (!l.is_object()) fail("options.lift", "expected an object {part, v, cap}");
        check_keys(l, "options.lift", {"part", "v", "cap"});
        if (l.contains("part")) {
            const int part = read_int(l["part"], "options.lift.part");
            if (part < 0) fail("options.lift.part", "must be nonnegative");
            o.lift.part = static_cast<std::size_t>(part);
        }
        if (l.contains("v")) {
            o.lift.v = read_rational_vector(l["v"], "options.lift.v", exact);
            if (static_cast<int>(o.lift.v->size()) != dimension) fail("options.lift.v", "wrong dimension");
        }
        if (l.contains("cap")) o.lift.cap = read_rational(l["cap"], "options.lift.cap", exact);
    }
    return o;
}

json rational_array(const QVector& v) {
    json a = json::array();
    for (const auto& q : v) a.push_back(to_string(q));
    return a;
}

}  // namespace

ProblemDocument problem_from_json(const json& j) {
    if (!j.is_object()) fail("(document)", "expected a JSON object");
    check_keys(j, "", {"name", "dimension", "rays", "max_cones", "decomposition", "halfspaces", "halfspace_convention",
                       "converted_from", "vector_fields", "options", "float_mode"});
    ProblemDocument doc;
    if (j.contains("name")) {
        if (!j["name"].is_string()) fail("name", "expected a string");
        doc.name = j["name"].get<std::string>();
    }
    if (!j.contains("dimension")) fail("dimension", "missing");
    doc.dimension = read_int(j["dimension"], "dimension");
    if (doc.dimension < 1) fail("dimension", "must be at least 1");
    const auto n = static_cast<std::size_t>(doc.dimension);

    const bool has_fan = j.contains("rays") || j.contains("max_cones") || j.contains("decomposition");
    const bool has_raw = j.contains("halfspaces");
    if (has_fan == has_raw)
        fail("(document)", "exactly one geometry source required: rays+max_cones+decomposition or halfspaces");

    bool exact = true;
    if (has_fan) {
        for (const char* key : {"rays", "max_cones", "decomposition"})
            if (!j.contains(key)) fail(key, "missing (required with the fan geometry source)");
        const auto& rays = j["rays"];
        if (!rays.is_array() || rays.empty()) fail("rays", "expected a nonempty array");
        for (std::size_t i = 0; i < rays.size(); ++i) {
            const auto p = at("rays", i);
            if (!rays[i].is_array() || rays[i].size() != n) fail(p, "expected " + std::to_string(n) + " integers");
            IntVector r;
            for (std::size_t k = 0; k < n; ++k) {
                if (!rays[i][k].is_number_integer()) fail(at(p, k), "expected an integer");
                r.push_back(rays[i][k].get<std::int64_t>());
            }
            doc.rays.push_back(std::move(r));
        }
        const auto& cones = j["max_cones"];
        if (!cones.is_array() || cones.empty()) fail("max_cones", "expected a nonempty array");
        for (std::size_t i = 0; i < cones.size(); ++i) {
            const auto p = at("max_cones", i);
            if (!cones[i].is_array()) fail(p, "expected an array of ray indices");
            std::vector<int> cone;
            for (std::size_t k = 0; k < cones[i].size(); ++k) cone.push_back(read_int(cones[i][k], at(p, k)));
            doc.max_cones.push_back(std::move(cone));
        }
        const auto& dec = j["decomposition"];
        if (!dec.is_array() || dec.empty()) fail("decomposition", "expected a nonempty array of rows");
        for (std::size_t i = 0; i < dec.size(); ++i) {
            auto row = read_rational_vector(dec[i], at("decomposition", i), exact);
            if (row.size() != doc.rays.size())
                fail(at("decomposition", i), "has " + std::to_string(row.size()) + " entries, expected " +
                                                 std::to_string(doc.rays.size()));
            doc.decomposition.push_back(std::move(row));
        }
    } else {
        if (j.contains("halfspace_convention")) {
            if (!j["halfspace_convention"].is_string()) fail("halfspace_convention", "expected \"geq\" or \"leq\"");
            doc.halfspace_convention = j["halfspace_convention"].get<std::string>();
            if (doc.halfspace_convention != "geq" && doc.halfspace_convention != "leq")
                fail("halfspace_convention", "expected \"geq\" or \"leq\"");
        }
        const bool leq = doc.halfspace_convention == "leq";
        const auto& hs = j["halfspaces"];
        if (!hs.is_array() || hs.empty()) fail("halfspaces", "expected a nonempty array");
        if (hs[0].is_object()) {
            doc.halfspaces.push_back(read_halfspace_list(hs, "halfspaces", leq, exact));
        } else {
            for (std::size_t i = 0; i < hs.size(); ++i)
                doc.halfspaces.push_back(read_halfspace_list(hs[i], at("halfspaces", i), leq, exact));
        }
        for (std::size_t i = 0; i < doc.halfspaces.size(); ++i)
            for (std::size_t k = 0; k < doc.halfspaces[i].size(); ++k)
                if (doc.halfspaces[i][k].normal.size() != n)
                    fail(at(at(at("halfspaces", i), k), "normal"), "expected " + std::to_string(n) + " entries");
        if (j.contains("converted_from")) {
            if (j["converted_from"] != "leq") fail("converted_from", "only \"leq\" is recognized");
            if (leq) fail("converted_from", "halfspaces cannot be converted twice");
            doc.halfspace_convention = "leq";
        }
    }

    if (j.contains("vector_fields")) {
        const auto& vf = j["vector_fields"];
        if (!vf.is_array()) fail("vector_fields", "expected an array of vectors");
        for (std::size_t i = 0; i < vf.size(); ++i) {
            auto v = read_double_vector(vf[i], at("vector_fields", i));
            if (v.size() != n) fail(at("vector_fields", i), "expected " + std::to_string(n) + " entries");
            doc.vector_fields.push_back(std::move(v));
        }
        if (doc.vector_fields.size() != doc.parts())
            fail("vector_fields", "expected one vector per part (" + std::to_string(doc.parts()) + ")");
    }
    if (j.contains("options")) doc.options = read_options(j["options"], doc.dimension, exact);
    if (j.contains("float_mode")) {
        if (!j["float_mode"].is_boolean()) fail("float_mode", "expected a boolean");
        if (j["float_mode"].get<bool>()) exact = false;
    }
    doc.exact = exact;
    return doc;
}

json problem_to_json(const ProblemDocument& doc) {
    json j;
    j["name"] = doc.name;
    j["dimension"] = doc.dimension;
    if (doc.fan_route()) {
        j["rays"] = doc.rays;
        j["max_cones"] = doc.max_cones;
        json dec = json::array();
        for (const auto& row : doc.decomposition) dec.push_back(rational_array(row));
        j["decomposition"] = dec;
    } else {
        json parts = json::array();
        for (const auto& part : doc.halfspaces) {
            json list = json::array();
            for (const auto& h : part) list.push_back({{"normal", rational_array(h.normal)}, {"offset", to_string(h.offset)}});
            parts.push_back(list);
        }
        j["halfspaces"] = parts;
        j["halfspace_convention"] = "geq";
        if (doc.halfspace_convention == "leq") j["converted_from"] = "leq";
    }
    if (!doc.vector_fields.empty()) j["vector_fields"] = doc.vector_fields;
    if (!doc.exact) j["float_mode"] = true;

    const auto& o = doc.options;
    json opt;
    opt["tol"] = o.tol;
    opt["ma_tol"] = o.ma_tol;
    opt["grid"] = {{"R", o.grid.R}, {"h", o.grid.h}};
    opt["t_schedule"] = o.t_schedule;
    opt["newton_max_iter"] = o.newton_max_iter;
    opt["ma_max_iter"] = o.ma_max_iter;
    opt["relaxation"] = o.relaxation;
    if (o.df_vector) opt["df_vector"] = rational_array(*o.df_vector);
    json lift;
    lift["part"] = o.lift.part;
    if (o.lift.v) lift["v"] = rational_array(*o.lift.v);
    if (o.lift.cap) lift["cap"] = to_string(*o.lift.cap);
    opt["lift"] = lift;
    j["options"] = opt;
    return j;
}

ProblemDocument load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
    return problem_from_json(j);
}

namespace {

ProblemDocument fan_document(std::string name, int dim, std::vector<IntVector> rays, std::vector<std::vector<int>> cones,
                             QMatrix decomposition) {
    ProblemDocument d;
    d.name = std::move(name);
    d.dimension = dim;
    d.rays = std::move(rays);
    d.max_cones = std::move(cones);
    d.decomposition = std::move(decomposition);
    return d;
}

QVector filled(std::size_t m, const Rational& q) { return QVector(m, q); }

ProblemDocument make_p2(const std::string&) {
    return fan_document("p2", 2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}, {2, 0}}, {filled(3, 1)});
}

ProblemDocument make_p1xp1(const std::string&) {
    return fan_document("p1xp1", 2, {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}},
                        {filled(4, Rational(1, 2)), filled(4, Rational(1, 2))});
}

ProblemDocument make_blowup(const std::string&) {
    return fan_document("blowup-p2-1pt", 2, {{1, 0}, {1, 1}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}},
                        {filled(4, 1)});
}

ProblemDocument make_hexagon(const std::string& param) {
    const Rational t = param.empty() ? Rational(1, 10) : parse_rational(param);
    // D_t = 1/2 everywhere except 1/2 + t on the ray (1,1)
    QVector plus = filled(6, Rational(1, 2)), minus = plus;
    plus[1] += t;
    minus[1] -= t;
    auto d = fan_document("hexagon-dP6-t:" + to_string(t), 2, {{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}},
                          {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}}, {plus, minus});
    return d;
}

ProblemDocument make_pe(const std::string& param) {
    Rational c(1, 2);
    bool exact = true;
    if (param == "c*" || param == "cstar") {
        c = rational_from_double(0.5 + std::sqrt(5.0 / 7.0) / 4.0);
        exact = false;
    } else if (!param.empty()) {
        c = parse_rational(param);
    }
    // transformed rays d'_1..d'_7 with <y, d'> <= offset
    const std::vector<IntVector> d{{-1, -1, 0, -2}, {1, 0, 0, -2}, {0, 1, 0, -2}, {0, 0, -1, 3},
                                   {0, 0, 1, 3},    {0, 0, 0, 6},  {0, 0, 0, -6}};
    ProblemDocument doc;
    doc.name = "pE-4fold-c:" + (exact ? to_string(c) : std::string("c*"));
    doc.dimension = 4;
    doc.halfspace_convention = "leq";
    doc.exact = exact;
    for (const Rational& ci : {c, Rational(1 - c)}) {
        std::vector<Halfspace> part;
        for (std::size_t i = 0; i < d.size(); ++i) {
            const Rational offset = (i == 3 || i == 4) ? ci : Rational(1, 2);
            part.push_back({scale(to_rationals(d[i]), Rational(-1)), offset});
        }
        doc.halfspaces.push_back(std::move(part));
    }
    return doc;
}

ProblemDocument make_p1_fubini(const std::string&) {
    auto d = fan_document("p1-fubini", 1, {{1}, {-1}}, {{0}, {1}}, {filled(2, 1)});
    d.options.grid = {8.0, 1.0 / 250};
    return d;
}

ProblemDocument make_p1_split(const std::string& param) {
    const Rational a = param.empty() ? Rational(3, 4) : parse_rational(param);
    // P_1 = [-a, 1-a], P_2 = [-(1-a), a]
    auto d = fan_document("p1-split:" + to_string(a), 1, {{1}, {-1}}, {{0}, {1}}, {{a, 1 - a}, {1 - a, a}});
    d.options.grid = {8.0, 1.0 / 250};
    return d;
}

using Builder = ProblemDocument (*)(const std::string&);

const std::map<std::string, Builder>& registry() {
    static const std::map<std::string, Builder> r{
        {"p2", make_p2},
        {"p1xp1", make_p1xp1},
        {"blowup-p2-1pt", make_blowup},
        {"hexagon-dP6-t", make_hexagon},
        {"hexagon-dP6", make_hexagon},
        {"pE-4fold-c", make_pe},
        {"p1-fubini", make_p1_fubini},
        {"p1-split", make_p1_split},
    };
    return r;
}

}  // namespace

std::vector<std::string> builtin_names() {
    return {"p2", "p1xp1", "blowup-p2-1pt", "hexagon-dP6-t[:t]", "pE-4fold-c[:c|c*]", "p1-fubini", "p1-split[:a]"};
}

ProblemDocument builtin_example(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string param = colon == std::string::npos ? "" : spec.substr(colon + 1);
    const auto it = registry().find(name);
    if (it == registry().end()) {
        std::string list;
        for (const auto& n : builtin_names()) list += (list.empty() ? "" : ", ") + n;
        throw UnknownExampleError("unknown example '" + name + "'; available: " + list);
    }
    return it->second(param);
}

Fan problem_fan(const ProblemDocument& doc) {
    if (!doc.fan_route()) throw InputError("document has no fan (raw halfspace input)");
    return Fan{doc.dimension, doc.rays, doc.max_cones};
}

std::vector<Polytope> problem_polytopes(const ProblemDocument& doc) {
    std::vector<Polytope> out;
    if (doc.fan_route()) {
        const Fan fan = problem_fan(doc);
        check_fan_input(fan);
        for (const auto& row : doc.decomposition) out.push_back(polytope_from_support(fan, row));
    } else {
        for (const auto& part : doc.halfspaces) out.push_back(polytope_from_halfspaces(part, doc.dimension));
    }
    return out;
}

Decomposition problem_decomposition(const ProblemDocument& doc) {
    if (doc.fan_route()) return Decomposition::from_support(problem_fan(doc), doc.decomposition, doc.exact);
    return Decomposition::from_polytopes(problem_polytopes(doc), doc.exact);
}

}  // namespace torifano
