#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::set<std::string> split_list(const std::string& s) {
    std::set<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.insert(item);
    return out;
}

// Writes to --out when given, otherwise stdout.
int emit(const std::string& out_path, const std::function<int(std::ostream&)>& run) {
    if (out_path.empty()) return run(std::cout);
    std::ostringstream buf;
    const int code = run(buf);
    std::ofstream f(out_path);
    if (!f) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return crncap::kExitParse;
    }
    f << buf.str();
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Capacity for symmetry-breaking bifurcations in reaction networks"};
    app.set_version_flag("--version", std::string("crncap ") + crncap::kToolVersion);
    app.require_subcommand(1);

    std::string symmetry = "explicit";
    std::string frozen;
    std::string format = "json";
    std::string out_path;
    std::uint64_t seed = 20240101;
    std::size_t jobs = 0;
    bool validate = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--symmetry", symmetry, "Symmetry source: explicit, infer or none")
            ->check(CLI::IsMember({"explicit", "infer", "none"}));
        sub->add_option("--out", out_path, "Write output to this file");
        sub->add_option("--jobs", jobs, "Worker threads (default: CRN_CAPACITY_JOBS or hardware)");
    };

    std::string model;
    auto* analyze = app.add_subcommand("analyze", "Run the structural and symbolic capacity analysis");
    analyze->add_option("model", model, "Network file")->required();
    add_common(analyze);
    analyze->add_option("--frozen", frozen, "Comma-separated catalytic species to freeze");
    analyze->add_flag("--validate", validate, "Realize kinetics and check the reduced Jacobian");
    analyze->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));
    analyze->add_option("--seed", seed, "Random seed for witness search and validation");

    auto* motifs = app.add_subcommand("motifs", "List instability motifs");
    motifs->add_option("model", model, "Network file")->required();
    add_common(motifs);
    motifs->add_option("--frozen", frozen, "Comma-separated catalytic species to freeze");
    motifs->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

    crncap::SimulateOptions sim;
    std::string x0;
    auto* simulate = app.add_subcommand("simulate", "Integrate a kinetic model and print a trajectory CSV");
    simulate->add_option("model", model, "Network file")->required();
    add_common(simulate);
    simulate->add_option("--kinetics", sim.kinetics, "Kinetics spec file")->required();
    simulate->add_option("--x0", x0, "Initial state, e.g. L1=0.6,L2=0.4");
    simulate->add_option("--t-end", sim.t_end, "Final time");
    simulate->add_option("--samples", sim.samples, "Number of output times");
    simulate->add_option("--param", sim.param, "Value substituted for $p");
    simulate->add_option("--rtol", sim.rtol, "Relative tolerance");
    simulate->add_option("--atol", sim.atol, "Absolute tolerance");

    crncap::BifurcateOptions bif;
    std::string range = "0:1";
    auto* bifurcate = app.add_subcommand("bifurcate", "Scan steady states over a parameter and print a branch CSV");
    bifurcate->add_option("model", model, "Network file")->required();
    add_common(bifurcate);
    bifurcate->add_option("--kinetics", bif.kinetics, "Kinetics spec file using $p");
    bifurcate->add_option("--range", range, "Parameter range lo:hi");
    bifurcate->add_option("--grid", bif.grid, "Number of grid points");
    bifurcate->add_option("--observe", bif.observe, "Species reported in the value column");
    bifurcate->add_option("--x0", x0, "Reference state fixing the compatibility class");
    bifurcate->add_option("--multistart", bif.multistart, "Random Newton seeds per grid point");
    bifurcate->add_option("--seed", bif.seed, "Random seed for multistart");
    bifurcate->add_flag("--witness-segment", bif.witness_segment,
                        "Scan realized models along the capacity witness segment instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : crncap::kExitParse;
    }

    const auto mode = crncap::parse_symmetry_mode(symmetry);
    const auto fmt = format == "text" ? crncap::Format::Text : crncap::Format::Json;
    crncap::AnalyzeOptions opts;
    opts.symmetry = mode;
    opts.frozen = split_list(frozen);
    opts.validate = validate;
    opts.jobs = jobs;
    opts.seed = seed;

    if (analyze->parsed())
        return emit(out_path, [&](std::ostream& o) { return crncap::cmd_analyze(model, opts, fmt, o, std::cerr); });
    if (motifs->parsed())
        return emit(out_path, [&](std::ostream& o) { return crncap::cmd_motifs(model, opts, fmt, o, std::cerr); });
    if (simulate->parsed()) {
        if (!x0.empty()) sim.x0 = x0;
        return emit(out_path, [&](std::ostream& o) { return crncap::cmd_simulate(model, mode, sim, o, std::cerr); });
    }
    const auto colon = range.find(':');
    try {
        if (colon == std::string::npos) throw std::invalid_argument(range);
        bif.lo = std::stod(range.substr(0, colon));
        bif.hi = std::stod(range.substr(colon + 1));
    } catch (const std::exception&) {
        std::cerr << "error: --range expects lo:hi\n";
        return crncap::kExitParse;
    }
    if (!x0.empty()) bif.x0 = x0;
    bif.jobs = jobs;
    return emit(out_path, [&](std::ostream& o) { return crncap::cmd_bifurcate(model, mode, bif, o, std::cerr); });
}
