#include "torifano/cli.hpp"
#include "torifano/errors.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace torifano;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

double parse_number(const std::string& s, const std::string& flag) {
    try {
        return to_double(parse_rational(s));
    } catch (const InputError&) {
        throw CLI::ValidationError(flag, "'" + s + "' is not a number");
    }
}

// "R=8,h=0.004"
GridSpec parse_grid(const std::string& text, GridSpec grid) {
    for (const auto& kv : split(text, ',')) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--grid", "expected R=...,h=...");
        const auto key = kv.substr(0, eq);
        const double value = parse_number(kv.substr(eq + 1), "--grid");
        if (key == "R") grid.R = value;
        else if (key == "h") grid.h = value;
        else throw CLI::ValidationError("--grid", "unknown key '" + key + "'");
    }
    return grid;
}

// "2;0" or "1,0;0,1": parts separated by ';', components by ','
std::vector<std::vector<double>> parse_fields(const std::string& text) {
    std::vector<std::vector<double>> out;
    for (const auto& part : split(text, ';')) {
        std::vector<double> v;
        for (const auto& c : split(part, ',')) v.push_back(parse_number(c, "--vector-fields"));
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coupled Kahler-Einstein and soliton tools for toric Fano manifolds"};
    std::string command, input, example, out_path, snapshot_path, grid_text, schedule_text, fields_text;
    double tol = 0;
    bool list = false;

    std::string commands;
    for (const auto& c : command_names()) commands += (commands.empty() ? "" : ", ") + c;
    app.add_option("command", command, "one of: " + commands);
    auto* in_opt = app.add_option("--input", input, "problem document (JSON)");
    auto* ex_opt = app.add_option("--example", example, "builtin example, name[:param]");
    in_opt->excludes(ex_opt);
    app.add_option("--tol", tol, "verdict tolerance (default 1e-10)");
    app.add_option("--grid", grid_text, "Monge-Ampere grid, e.g. R=8,h=0.004");
    app.add_option("--t-schedule", schedule_text, "continuity schedule, e.g. 0,0.25,0.5,0.75,0.9,1");
    app.add_option("--vector-fields", fields_text, "per-part vector fields, e.g. 2;0");
    app.add_option("--out", out_path, "write the report here instead of stdout");
    app.add_option("--snapshots", snapshot_path, "ma-solve: per-t snapshot records (JSON lines)");
    app.add_flag("--list-examples", list, "print the builtin registry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (list) {
        for (const auto& n : builtin_names()) std::cout << n << "\n";
        return kExitOk;
    }
    const auto names = command_names();
    if (std::find(names.begin(), names.end(), command) == names.end()) {
        std::cerr << "error: " << (command.empty() ? "missing command" : "unknown command '" + command + "'")
                  << "; expected one of: " << commands << "\n";
        return kExitUsage;
    }
    if (input.empty() == example.empty()) {
        std::cerr << "error: exactly one of --input or --example is required\n";
        return kExitUsage;
    }

    try {
        ProblemDocument doc = input.empty() ? builtin_example(example) : load_problem(input);
        if (tol > 0) doc.options.tol = tol;
        if (!grid_text.empty()) doc.options.grid = parse_grid(grid_text, doc.options.grid);
        if (!schedule_text.empty()) {
            doc.options.t_schedule.clear();
            for (const auto& t : split(schedule_text, ',')) doc.options.t_schedule.push_back(parse_number(t, "--t-schedule"));
        }
        if (!fields_text.empty()) doc.vector_fields = parse_fields(fields_text);
        if (!doc.vector_fields.empty()) {
            if (doc.vector_fields.size() != doc.parts()) throw InputError("vector_fields: expected one vector per part");
            for (const auto& v : doc.vector_fields)
                if (static_cast<int>(v.size()) != doc.dimension) throw InputError("vector_fields: wrong dimension");
        }

        const auto result = run_command(command, doc);
        const std::string text = result.report.dump(2) + "\n";
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(out_path);
            if (!out) throw InputError("cannot write '" + out_path + "'");
            out << text;
        }
        if (!snapshot_path.empty()) {
            std::ofstream snap(snapshot_path);
            if (!snap) throw InputError("cannot write '" + snapshot_path + "'");
            for (const auto& rec : result.snapshots) snap << rec.dump() << "\n";
        }
        return result.exit_code;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}
