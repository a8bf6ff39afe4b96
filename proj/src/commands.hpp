#pragma once

#include "kinetics_spec.hpp"
#include "report.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace crncap {

enum ExitCode : int {
    kExitOk = 0,
    kExitParse = 2,
    kExitInfeasible = 3,
    kExitInternal = 11,
};

enum class Format { Json, Text };

struct SimulateOptions {
    std::string kinetics;
    std::optional<std::string> x0;
    double t_end = 100.0;
    std::size_t samples = 101;
    double param = 0.0;
    double rtol = 1e-8;
    double atol = 1e-10;
};

struct BifurcateOptions {
    std::string kinetics;
    double lo = 0.0;
    double hi = 1.0;
    std::size_t grid = 101;
    std::string observe;
    std::optional<std::string> x0;
    std::size_t multistart = 24;
    std::uint64_t seed = 12345;
    std::size_t jobs = 0;
    bool witness_segment = false;
};

std::string format_double(double x);
std::string trajectory_csv(const crn::Trajectory& tr);
std::string branch_csv(const crn::ScanResult& scan);
std::string segment_csv(const std::vector<crn::SegmentPoint>& segment);
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

// Each command writes its primary output to `out` and diagnostics to `err`,
// and returns the process exit code.
int cmd_analyze(const std::string& path, const AnalyzeOptions& opts, Format format, std::ostream& out, std::ostream& err);
int cmd_motifs(const std::string& path, const AnalyzeOptions& opts, Format format, std::ostream& out, std::ostream& err);
int cmd_simulate(const std::string& path, SymmetryMode mode, const SimulateOptions& opts, std::ostream& out,
                 std::ostream& err);
int cmd_bifurcate(const std::string& path, SymmetryMode mode, const BifurcateOptions& opts, std::ostream& out,
                  std::ostream& err);

}  // namespace crncap
