#pragma once

// File formats used by the CLI: line-oriented key/value files for problems,
// design vectors and results, CSV for bulk data. All angles radians, '.'
// decimal separator, full double precision in machine-readable output.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sph4r/de.hpp"
#include "sph4r/objective.hpp"

namespace sph4r {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Parsed problem file: mode, target points, timing law and optimizer
/// settings. Paths inside the file are resolved relative to its directory.
struct ProblemSpec {
    DesignMode mode = DesignMode::prescribed;
    TargetPath path;
    Timing timing;                          // prescribed mode only
    std::optional<double> pinned_theta1;    // set by `timing list`
    int population = 100;
    int generations = 1000;
    double cr = 0.9;
    double f_lo = 0.4;
    double f_hi = 0.8;
    std::uint64_t seed = 1;
    int seeds = 1;
    std::string out_path;          // result file; empty -> stdout summary only
    std::string convergence_path;  // per-generation CSV; empty -> not written

    SynthesisProblem problem() const { return SynthesisProblem{mode, path, timing}; }
    /// Bounds for the optimizer, with theta1 pinned when timing is explicit.
    DesignBounds bounds() const;
};

ProblemSpec load_problem(const std::string& file);

/// Design-vector file (a result file is a superset and loads the same way).
struct DesignFile {
    DesignVector design;
    int point_count = 0;
    std::optional<double> stored_f_ob;  // present in result files
};

DesignFile load_design(const std::string& file);

/// Everything a synthesis run reports; layout mirrors the design file so a
/// result can be re-verified directly.
struct ResultData {
    DesignVector design;
    int point_count = 0;
    double f_ob = 0.0;
    std::array<double, 4> link_lengths{};
    bool grashof = false;
    double theta0 = 0.0;
    double phi0 = 0.0;
    std::vector<double> geodesic_errors;
    std::uint64_t seed = 0;
    double runtime_seconds = 0.0;
};

void write_result(const std::string& file, const ResultData& result);

std::vector<Vec3> load_points_csv(const std::string& file);
std::vector<double> load_angle_list(const std::string& file);

void write_convergence_csv(const std::string& file, const std::vector<GenerationRecord>& history);

/// One row per sample over a full input revolution (theta from 0 to 2*pi
/// inclusive): theta, generated point, r2, r3, feasible flag. Infeasible
/// rows keep theta and r2 and leave the dependent columns empty.
void write_trace_csv(const std::string& file, const SphericalFourBar& mech, Branch branch,
                     int samples);

}  // namespace sph4r
