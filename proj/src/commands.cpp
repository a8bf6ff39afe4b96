#include "commands.hpp"

#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace crncap {

namespace {

int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const crn::ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const SpecError& e) {
        err << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const crn::NetworkError& e) {
        err << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

std::string input_name(const std::string& path) { return std::filesystem::path(path).filename().string(); }

}  // namespace

std::string format_double(double x) {
    std::ostringstream s;
    s << std::setprecision(12) << x;
    return s.str();
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g;
    if (n == 0) return g;
    if (n == 1) return {lo};
    for (std::size_t i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    return g;
}

std::string trajectory_csv(const crn::Trajectory& tr) {
    std::ostringstream out;
    out << "t";
    const std::size_t n = tr.states.empty() ? 0 : tr.states.front().size();
    for (std::size_t i = 0; i < n; ++i) out << ",x_" << i;
    out << "\n";
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        out << format_double(tr.times[k]);
        for (double v : tr.states[k]) out << "," << format_double(v);
        out << "\n";
    }
    return out.str();
}

std::string branch_csv(const crn::ScanResult& scan) {
    std::ostringstream out;
    out << "param,state_index,value,stability\n";
    for (const auto& p : scan.points)
        out << format_double(p.param) << "," << p.state_index << "," << format_double(p.value) << ","
            << crn::to_string(p.stability) << "\n";
    return out.str();
}

std::string segment_csv(const std::vector<crn::SegmentPoint>& segment) {
    std::ostringstream out;
    out << "param,state_index,value,stability\n";
    for (const auto& p : segment)
        out << format_double(p.s) << ",0," << format_double(p.leading_real) << "," << crn::to_string(p.stability) << "\n";
    return out.str();
}

int cmd_analyze(const std::string& path, const AnalyzeOptions& opts, Format format, std::ostream& out,
                std::ostream& err) {
    return guarded(err, [&] {
        const auto parsed = load_network(path, opts.symmetry);
        const Json report = analyze_report(parsed, opts, input_name(path));
        if (format == Format::Json)
            out << report.dump(2) << "\n";
        else
            out << render_analysis_text(report);
        return report_exit_code(report);
    });
}

int cmd_motifs(const std::string& path, const AnalyzeOptions& opts, Format format, std::ostream& out,
               std::ostream& err) {
    return guarded(err, [&] {
        const auto parsed = load_network(path, opts.symmetry);
        const Json report = motifs_report(parsed, opts, input_name(path));
        if (format == Format::Json)
            out << report.dump(2) << "\n";
        else
            out << render_motifs_text(report);
        return static_cast<int>(kExitOk);
    });
}

int cmd_simulate(const std::string& path, SymmetryMode mode, const SimulateOptions& opts, std::ostream& out,
                 std::ostream& err) {
    return guarded(err, [&] {
        const auto parsed = load_network(path, mode);
        const auto& net = parsed.network;
        const KineticsSpec spec = parse_kinetics_file(opts.kinetics, net);
        const crn::KineticModel model = spec.instantiate(net, opts.param);
        std::vector<double> x0 = spec.initial_state(net);
        if (opts.x0) x0 = parse_state_assignment(*opts.x0, net, x0);
        if (!(opts.t_end > 0)) throw std::invalid_argument("t_end must be positive");
        crn::SimulationOptions so;
        so.rtol = opts.rtol;
        so.atol = opts.atol;
        so.output_times = uniform_grid(0.0, opts.t_end, std::max<std::size_t>(opts.samples, 2));
        const crn::Trajectory tr = crn::simulate(model, x0, opts.t_end, so);
        out << trajectory_csv(tr);
        if (!tr.ok) {
            err << "integration stopped: " << tr.message << "\n";
            return static_cast<int>(kExitInfeasible);
        }
        return static_cast<int>(kExitOk);
    });
}

int cmd_bifurcate(const std::string& path, SymmetryMode mode, const BifurcateOptions& opts, std::ostream& out,
                  std::ostream& err) {
    return guarded(err, [&] {
        const auto parsed = load_network(path, mode);
        const auto& net = parsed.network;
        const auto grid = uniform_grid(opts.lo, opts.hi, opts.grid);
        if (opts.witness_segment) {
            crn::CapacityOptions co;
            co.use_symmetry = net.symmetry.has_value();
            co.jobs = crn::resolve_jobs(opts.jobs);
            const auto verdict = crn::capacity_for_differentiation(net, co);
            if (!verdict.witness_endpoints) {
                err << "no capacity witness: " << crn::to_string(verdict.status) << "\n";
                return static_cast<int>(kExitInfeasible);
            }
            out << segment_csv(crn::witness_segment(net, verdict, grid));
            return static_cast<int>(kExitOk);
        }
        if (opts.kinetics.empty()) throw std::invalid_argument("--kinetics is required unless --witness-segment is given");
        const KineticsSpec spec = parse_kinetics_file(opts.kinetics, net);
        std::vector<double> x_ref = spec.initial_state(net);
        if (opts.x0) x_ref = parse_state_assignment(*opts.x0, net, x_ref);
        crn::ScanOptions so;
        so.multistart = opts.multistart;
        so.seed = opts.seed;
        so.jobs = crn::resolve_jobs(opts.jobs);
        so.observe = opts.observe.empty() ? 0 : net.require_species(opts.observe);
        spec.instantiate(net, opts.lo);  // surfaces spec errors before the scan
        const auto scan = crn::bifurcation_scan([&](double p) { return spec.instantiate(net, p); }, grid, x_ref, so);
        out << branch_csv(scan);
        for (double g : scan.gaps) err << "warning: no steady state converged at param " << format_double(g) << "\n";
        return static_cast<int>(kExitOk);
    });
}

}  // namespace crncap
