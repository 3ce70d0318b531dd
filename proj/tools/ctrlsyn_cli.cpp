// Command-line front end: design | analyze | nyquist | feasibility.
// Exit codes: 0 success, 2 infeasible, 3 parse error, 4 numeric failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctrlsyn/design_doc.hpp"
#include "ctrlsyn/errors.hpp"

namespace {

using ctrlsyn::doc::json;

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path);
    if (!in) {
        throw ctrlsyn::ParseError("input: cannot open " + path);
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw ctrlsyn::Error("output: cannot open " + path);
    }
    out << text;
}

json parse_json_input(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        throw ctrlsyn::ParseError("request: invalid JSON document");
    }
    return j;
}

struct CommonOpts {
    std::string input;
    std::string output;
    std::string format = "json";
    std::string grid;
    bool full_precision = false;

    int precision() const { return full_precision ? 17 : 6; }
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_grid, bool with_format = true) {
    cmd->add_option("--input", opts.input, "Request document (JSON); '-' or empty reads stdin");
    cmd->add_option("--output", opts.output, "Output path; '-' or empty writes stdout");
    if (with_format) {
        cmd->add_option("--format", opts.format, "Report format: json or text")
            ->check(CLI::IsMember({"json", "text"}));
    }
    if (with_grid) {
        cmd->add_option("--grid", opts.grid, "Frequency grid lo:hi:n (log-spaced, rad/s)");
    }
    cmd->add_flag("--full-precision", opts.full_precision, "Print with 17 significant digits");
}

ctrlsyn::FrequencyGrid pick_grid(const CommonOpts& opts, const ctrlsyn::TransferFunction& loop) {
    if (!opts.grid.empty()) return ctrlsyn::doc::parse_grid(opts.grid);
    return ctrlsyn::default_grid(loop);
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

int run_design_cmd(const CommonOpts& opts) {
    const auto request = ctrlsyn::doc::parse_request(parse_json_input(read_input(opts.input)));
    const auto report = ctrlsyn::doc::run_design(request);
    if (opts.format == "json") {
        write_output(opts.output, dump_json(ctrlsyn::doc::report_to_json(report)));
    } else {
        write_output(opts.output, ctrlsyn::doc::report_to_text(report, opts.precision()));
    }
    return 0;
}

int run_analyze_cmd(const CommonOpts& opts) {
    const auto loop_req = ctrlsyn::doc::parse_loop(parse_json_input(read_input(opts.input)));
    const auto loop = ctrlsyn::doc::loop_tf(loop_req);
    const auto margins = ctrlsyn::measure_margins(loop, pick_grid(opts, loop));
    if (opts.format == "json") {
        write_output(opts.output, dump_json(ctrlsyn::doc::margins_to_json(margins)));
    } else {
        write_output(opts.output, ctrlsyn::doc::margins_to_text(margins, opts.precision()));
    }
    return 0;
}

int run_nyquist_cmd(const CommonOpts& opts) {
    const auto loop_req = ctrlsyn::doc::parse_loop(parse_json_input(read_input(opts.input)));
    const auto loop = ctrlsyn::doc::loop_tf(loop_req);
    ctrlsyn::FrequencyGrid grid = pick_grid(opts, loop);
    if (opts.grid.empty()) grid.samples = 500;  // plotting default
    write_output(opts.output,
                 ctrlsyn::doc::nyquist_csv(loop, grid, opts.full_precision ? 17 : 10));
    return 0;
}

int run_feasibility_cmd(const CommonOpts& opts, const std::string& boundary_path,
                        int boundary_samples) {
    const auto request =
        ctrlsyn::doc::parse_feasibility(parse_json_input(read_input(opts.input)));
    const auto out = ctrlsyn::doc::run_feasibility(request);
    if (opts.format == "json") {
        write_output(opts.output, dump_json(ctrlsyn::doc::feasibility_to_json(out)));
    } else {
        write_output(opts.output, ctrlsyn::doc::feasibility_to_text(out, opts.precision()));
    }
    if (!boundary_path.empty()) {
        write_output(boundary_path, ctrlsyn::doc::boundary_csv(boundary_samples));
    }
    return 0;
}

json error_json(const char* kind, const std::string& what) {
    return {{"status", "error"}, {"error", kind}, {"reason", what}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-form Lead/Lag/Lead-Lag/PID synthesis from frequency-domain specs"};
    app.require_subcommand(1);

    CommonOpts design_opts, analyze_opts, nyquist_opts, feas_opts;
    std::string boundary_path;
    int boundary_samples = 256;

    CLI::App* design = app.add_subcommand("design", "Design a compensator from a request document");
    add_common(design, design_opts, false);

    CLI::App* analyze = app.add_subcommand("analyze", "Measure margins of a plant or loop");
    add_common(analyze, analyze_opts, true);

    CLI::App* nyquist = app.add_subcommand("nyquist", "Emit omega,re,im,mag,phase_deg CSV");
    add_common(nyquist, nyquist_opts, true, /*with_format=*/false);

    CLI::App* feas = app.add_subcommand("feasibility", "Classify targets against design regions");
    add_common(feas, feas_opts, false);
    feas->add_option("--boundary", boundary_path, "Also write region-boundary samples CSV here");
    feas->add_option("--boundary-samples", boundary_samples, "Samples per boundary curve");

    CLI11_PARSE(app, argc, argv);

    try {
        if (design->parsed()) return run_design_cmd(design_opts);
        if (analyze->parsed()) return run_analyze_cmd(analyze_opts);
        if (nyquist->parsed()) return run_nyquist_cmd(nyquist_opts);
        if (feas->parsed()) return run_feasibility_cmd(feas_opts, boundary_path, boundary_samples);
    } catch (const ctrlsyn::ParseError& e) {
        std::cerr << dump_json(error_json("parse", e.what()));
        return 3;
    } catch (const ctrlsyn::Infeasible& e) {
        std::cerr << dump_json(error_json("infeasible", e.what()));
        return 2;
    } catch (const ctrlsyn::NoFeasibleCrossover& e) {
        std::cerr << dump_json(error_json("infeasible", e.what()));
        return 2;
    } catch (const ctrlsyn::InfeasibleAtFrequency& e) {
        std::cerr << dump_json(error_json("infeasible", e.what()));
        return 2;
    } catch (const ctrlsyn::Error& e) {
        std::cerr << dump_json(error_json("numeric", e.what()));
        return 4;
    }
    return 1;
}
