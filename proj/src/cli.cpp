#include "torifano/cli.hpp"

#include "torifano/errors.hpp"
#include "torifano/moments.hpp"
#include "torifano/triangulation.hpp"

#include <chrono>
#include <functional>
#include <map>

namespace torifano {

using nlohmann::json;

namespace {

json qjson(const QVector& v) {
    json a = json::array();
    for (const auto& q : v) a.push_back(to_string(q));
    return a;
}

json djson(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::VectorXd to_eigen(const QVector& v) { return to_eigen(to_doubles(v)); }

json polytope_json(const Polytope& p) {
    json verts = json::array();
    for (const auto& v : p.vertices) verts.push_back(qjson(v));
    json redundant = json::array();
    for (std::size_t j = 0; j < p.redundant.size(); ++j)
        if (p.redundant[j]) redundant.push_back(j);
    return {{"vertices", verts},
            {"vertex_count", p.vertices.size()},
            {"halfspace_count", p.halfspaces.size()},
            {"redundant_halfspaces", redundant},
            {"provenance", to_string(p.provenance)}};
}

std::string joined(const std::vector<std::string>& items) {
    std::string s;
    for (const auto& it : items) s += (s.empty() ? "" : "; ") + it;
    return s;
}

std::vector<Eigen::VectorXd> vector_fields(const ProblemDocument& doc, const char* command) {
    if (doc.vector_fields.empty())
        throw InputError(std::string(command) + " needs vector_fields (one vector per part)");
    std::vector<Eigen::VectorXd> out;
    for (const auto& v : doc.vector_fields) out.push_back(to_eigen(v));
    return out;
}

json cmd_validate(const ProblemDocument& doc) {
    json r;
    std::vector<std::string> failures;
    if (doc.fan_route()) {
        const Fan fan = problem_fan(doc);
        const auto fr = validate_fan(fan);
        r["fan"] = {{"complete", fr.complete}, {"smooth", fr.smooth}, {"fano", fr.fano}, {"witnesses", fr.witnesses}};
        const auto dr = validate_decomposition(fan, doc.decomposition);
        json classes = json::array();
        for (const auto a : dr.row_classes) classes.push_back(to_string(a));
        r["row_classes"] = classes;
        failures = dr.failures;
        if (!fr.smooth || !fr.complete) failures.insert(failures.begin(), "fan: " + joined(fr.witnesses));
    }
    const auto parts = problem_polytopes(doc);
    json pj = json::array();
    for (const auto& p : parts) pj.push_back(polytope_json(p));
    r["parts"] = pj;
    if (!doc.fan_route()) {
        try {
            Decomposition::from_polytopes(parts, doc.exact);
        } catch (const InputError& e) {
            failures.emplace_back(e.what());
        }
    }
    if (doc.fan_route() && failures.empty()) {
        std::vector<QVector> rows(doc.decomposition.begin(), doc.decomposition.end());
        const auto sum = minkowski_sum(problem_fan(doc), rows);
        r["minkowski"] = {{"support", qjson(sum.support)}, {"vertex_sums_match", sum.vertex_sum_check}};
    }
    r["valid"] = failures.empty();
    r["failures"] = failures;
    return r;
}

json cmd_barycenter(const ProblemDocument& doc) {
    json r;
    json pj = json::array();
    QVector total(static_cast<std::size_t>(doc.dimension), Rational(0));
    for (const auto& p : problem_polytopes(doc)) {
        const auto mesh = triangulate(p);
        const auto vol = volume(mesh);
        const auto b = barycenter(mesh);
        total = add(total, b);
        pj.push_back({{"volume", to_string(vol)},
                      {"barycenter", qjson(b)},
                      {"first_moment", qjson(scale(b, vol))},
                      {"simplices", mesh.simplices.size()}});
    }
    r["parts"] = pj;
    r["barycenter_sum"] = qjson(total);
    r["barycenter_sum_float"] = djson(to_eigen(total));
    return r;
}

json cmd_ke_verdict(const ProblemDocument& doc) {
    const auto d = problem_decomposition(doc);
    const auto v = coupled_ke_verdict(d, doc.options.tol);
    json r;
    r["verdict"] = v.exists ? "Exists" : "NotExists";
    r["barycenter_sum"] = qjson(v.barycenter_sum);
    r["exact_test"] = v.exact_test;
    r["residual_norm"] = v.residual_norm;
    if (v.destabilizer) {
        r["destabilizer"] = qjson(*v.destabilizer);
        const auto df = df_invariant(d, *v.destabilizer);
        r["destabilizer_df"] = to_string(df.df_value);
    } else {
        r["destabilizer"] = nullptr;
    }
    return r;
}

json cmd_soliton_check(const ProblemDocument& doc) {
    const auto d = problem_decomposition(doc);
    const auto vs = vector_fields(doc, "soliton-check");
    json r;
    json parts = json::array();
    Eigen::VectorXd total = Eigen::VectorXd::Zero(doc.dimension);
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto w = weighted_moments(d.meshes()[i], vs[i], 1);
        total += w.barycenter;
        parts.push_back({{"A", djson(w.barycenter)}, {"log_weighted_volume", w.log_volume}, {"err_estimate", w.err_estimate}});
    }
    r["parts"] = parts;
    r["sum_A"] = djson(total);
    r["residual_norm"] = total.norm();
    r["verdict"] = total.norm() < doc.options.tol ? "Exists" : "NotExists";
    return r;
}

json cmd_soliton_solve(const ProblemDocument& doc, int& exit_code) {
    const auto d = problem_decomposition(doc);
    SolitonOptions opt;
    opt.tol = doc.options.tol;
    opt.max_iter = doc.options.newton_max_iter;
    const auto s = solve_soliton(d, opt);
    json parts = json::array();
    for (const auto& a : s.per_polytope_A) parts.push_back(djson(a));
    if (!s.converged) exit_code = kExitNoConvergence;
    return {{"v", djson(s.v)},
            {"residual_norm", s.residual_norm},
            {"iterations", s.iterations},
            {"converged", s.converged},
            {"hessian_condition", s.hessian_condition},
            {"min_hessian_eigenvalue", s.min_hessian_eigenvalue},
            {"per_part_A", parts}};
}

QVector default_vector(const Decomposition& d) {
    if (auto v = destabilizer(d)) return *v;
    return QVector(static_cast<std::size_t>(d.dimension()), Rational(0));
}

json cmd_df(const ProblemDocument& doc) {
    const auto d = problem_decomposition(doc);
    const QVector v = doc.options.df_vector.value_or(default_vector(d));
    const auto df = df_invariant(d, v);
    return {{"v", qjson(df.v)},
            {"v_source", doc.options.df_vector ? "options" : "destabilizer"},
            {"barycenter_sum", qjson(df.barycenter_sum)},
            {"df", to_string(df.df_value)},
            {"df_float", to_double(df.df_value)},
            {"destabilizing", df.destabilizing}};
}

json cmd_lift(const ProblemDocument& doc) {
    const auto parts = problem_polytopes(doc);
    const auto& lo = doc.options.lift;
    if (lo.part >= parts.size())
        throw InputError("options.lift.part: " + std::to_string(lo.part) + " out of range (" + std::to_string(parts.size()) +
                         " parts)");
    const Polytope& base = parts[lo.part];
    QVector v = lo.v.value_or(QVector(static_cast<std::size_t>(doc.dimension), Rational(0)));
    Rational cap;
    if (lo.cap) {
        cap = *lo.cap;
    } else {
        cap = -dot(v, base.vertices.front());
        for (const auto& p : base.vertices) cap = std::max(cap, Rational(-dot(v, p)));
        cap += 1;
    }
    const auto lc = lifted_config(base, v, cap);
    const auto mesh = triangulate(base);
    return {{"part", lo.part},
            {"v", qjson(v)},
            {"cap", to_string(cap)},
            {"base_volume", to_string(volume(mesh))},
            {"base_barycenter", qjson(barycenter(mesh))},
            {"lifted_vertex_count", lc.lifted.vertices.size()},
            {"lifted_volume", to_string(lc.lifted_volume)},
            {"predicted_volume", to_string(lc.predicted_volume)},
            {"identity_holds", lc.identity_holds}};
}

json state_record(const MAState& s, int iterations) {
    return {{"t", s.t},
            {"iterations", iterations},
            {"x", s.x},
            {"f", s.f},
            {"rho", s.rho},
            {"mass", s.mass},
            {"m", s.w_min},
            {"x_w", s.x_w},
            {"update_norm", s.update_norm}};
}

json cmd_ma_solve(const ProblemDocument& doc, std::vector<json>& snapshots) {
    if (doc.dimension != 1) throw InputError("ma-solve supports dimension 1 only");
    const auto d = problem_decomposition(doc);
    MAProblem problem;
    problem.grid = doc.options.grid;
    for (const auto& p : d.polytopes()) problem.parts.push_back({to_double(p.vertices.front()[0]), to_double(p.vertices.back()[0])});
    if (doc.vector_fields.empty()) {
        problem.v.assign(d.size(), 0.0);
    } else {
        for (const auto& v : doc.vector_fields) problem.v.push_back(v[0]);
    }
    ContinuityOptions opt;
    opt.t_schedule = doc.options.t_schedule;
    opt.tol = doc.options.ma_tol;
    opt.max_iter = doc.options.ma_max_iter;
    opt.relaxation = doc.options.relaxation;
    opt.on_t_complete = [&](const MAState& s, int it) { snapshots.push_back(state_record(s, it)); };
    const auto res = solve_continuity_1d(problem, opt);

    json path = json::array();
    for (const auto& step : res.path)
        path.push_back({{"t", step.t}, {"iterations", step.iterations}, {"update_norm", step.update_norm},
                        {"x_w", step.x_w}, {"mass", step.mass}});
    json intervals = json::array();
    for (const auto& iv : problem.parts) intervals.push_back({iv.lo, iv.hi});
    const std::size_t zero = res.state.x.size() / 2;
    json f0 = json::array();
    for (const auto& fi : res.state.f) f0.push_back(fi[zero]);
    return {{"status", res.status == MAStatus::Converged ? "Converged" : "Obstructed"},
            {"reason", res.reason},
            {"heuristic", true},
            {"intervals", intervals},
            {"v", problem.v},
            {"t_reached", res.t_reached},
            {"path", path},
            {"soliton_residual", res.soliton_residual},
            {"obstruction_residual", res.obstruction_residual},
            {"w", {{"m", res.w.m}, {"x_w", res.w.x_w}, {"growth_eps", res.w.growth_eps}}},
            {"mass", res.state.mass},
            {"f_at_0", f0},
            {"update_norm", res.state.update_norm}};
}

}  // namespace

std::vector<std::string> command_names() {
    return {"validate", "barycenter", "ke-verdict", "soliton-check", "soliton-solve", "df", "lift", "ma-solve"};
}

RunOutput run_command(const std::string& command, const ProblemDocument& doc) {
    const auto start = std::chrono::steady_clock::now();
    RunOutput out;
    json results;
    if (command == "validate") results = cmd_validate(doc);
    else if (command == "barycenter") results = cmd_barycenter(doc);
    else if (command == "ke-verdict") results = cmd_ke_verdict(doc);
    else if (command == "soliton-check") results = cmd_soliton_check(doc);
    else if (command == "soliton-solve") results = cmd_soliton_solve(doc, out.exit_code);
    else if (command == "df") results = cmd_df(doc);
    else if (command == "lift") results = cmd_lift(doc);
    else if (command == "ma-solve") results = cmd_ma_solve(doc, out.snapshots);
    else throw std::invalid_argument("unknown command '" + command + "'");

    const auto& o = doc.options;
    json& r = out.report;
    r["command"] = command;
    r["version"] = kVersion;
    r["input"] = problem_to_json(doc);
    r["tolerances"] = {{"tol", o.tol},
                       {"ma_tol", o.ma_tol},
                       {"exact_test", doc.exact},
                       {"newton_max_iter", o.newton_max_iter},
                       {"ma_max_iter", o.ma_max_iter},
                       {"relaxation", o.relaxation},
                       {"grid", {{"R", o.grid.R}, {"h", o.grid.h}}}};
    r["results"] = results;
    r["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

json strip_wall_time(json report) {
    report.erase("wall_time_seconds");
    return report;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const UnknownExampleError*>(&e) || dynamic_cast<const std::invalid_argument*>(&e)) return kExitUsage;
    if (dynamic_cast<const SingularHessianError*>(&e)) return kExitNoConvergence;
    return kExitInvalidInput;
}

}  // namespace torifano
