#pragma once

// Design-vector encoding and the structural-error objective for prescribed-
// and free-timing path generation.
//
// Design vector layouts (all entries angles, radians):
//   prescribed: (theta1, beta, gamma, az1..az4, co1..co4)          11 entries
//   free:       (theta1..theta_n, beta, gamma, az1..az4, co1..co4) n + 10
// Domains: theta_k, beta, az_k in [0, 2*pi); gamma in [-pi, pi);
// colatitudes in [0, pi].

#include <vector>

#include "sph4r/mechanism.hpp"

namespace sph4r {

enum class DesignMode { prescribed, free_timing };

/// Ordered desired points on the unit sphere.
struct TargetPath {
    std::vector<UnitVector3> points;

    /// Renormalizes each point (published tables are truncated and lie
    /// slightly off the sphere). Requires n >= 3.
    static TargetPath from_points(const std::vector<Vec3>& raw);

    int size() const { return static_cast<int>(points.size()); }
};

struct DesignVector {
    DesignMode mode = DesignMode::prescribed;
    std::vector<double> values;
};

int design_dimension(DesignMode mode, int point_count);

/// Coordinate domain topology for bound handling in the optimizer.
enum class CoordKind {
    periodic,  // wrap into [lower, upper)
    reflect,   // fold back at the interval ends
};

struct DesignBounds {
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<CoordKind> kinds;
};

DesignBounds design_bounds(DesignMode mode, int point_count);

/// Input-angle schedule for prescribed timing: offsets added to theta1.
struct Timing {
    std::vector<double> offsets;  // size n, offsets[0] == 0

    static Timing uniform(int n);
    static Timing with_spacing(int n, double spacing);
    /// Absolute input-angle list; stored as offsets from the first entry.
    static Timing from_list(const std::vector<double>& absolute);
};

/// theta_k = theta1 + (2*pi/n)(k-1), k = 1..n.
std::vector<double> prescribed_thetas(double theta1, int n);
std::vector<double> prescribed_thetas(double theta1, int n, double spacing);

struct DecodedDesign {
    SphericalFourBar mechanism;
    std::vector<double> thetas;
};

/// Throws DegenerateMechanism (propagated from the build).
DecodedDesign decode(const DesignVector& design, int point_count);
DecodedDesign decode(const DesignVector& design, int point_count, const Timing& timing);

DesignVector encode(DesignMode mode, const SphericalFourBar& mech,
                    const std::vector<double>& thetas);

struct EvaluationReport {
    double f_ob = 0.0;
    /// Squared chordal errors |r_d - r_gen|^2 per point; NaN where infeasible.
    std::vector<double> per_point_errors;
    /// Geodesic (arc) errors per point, radians; NaN where infeasible.
    std::vector<double> geodesic_errors;
    bool feasible = true;
    int infeasible_count = 0;
};

/// Graded penalty base for designs that cannot assemble at every input angle.
inline constexpr double kInfeasiblePenalty = 1e10;

/// f_ob = sum of squared chordal distances between desired and generated
/// points. Never throws: designs that fail to decode or to assemble at some
/// theta are reported infeasible with f_ob = kInfeasiblePenalty + count of
/// failing points, so an optimizer always sees a finite, graded value.
EvaluationReport structural_error(const DesignVector& design, const TargetPath& path);
EvaluationReport structural_error(const DesignVector& design, const TargetPath& path,
                                  const Timing& timing);

/// Arc length of the geodesic joining the two points; satisfies
/// |r_d - r_gen|^2 = 2 (1 - cos delta).
double geodesic_error(const UnitVector3& desired, const UnitVector3& generated);

struct ThetaDiffs {
    std::vector<double> diffs;
    double mean = 0.0;
};

/// Consecutive input-angle differences and their mean.
ThetaDiffs theta_differences(const std::vector<double>& thetas);

/// Target path plus synthesis mode and timing law; adapts the structural
/// error to a plain vector objective for the optimizer.
struct SynthesisProblem {
    DesignMode mode = DesignMode::prescribed;
    TargetPath path;
    Timing timing;  // prescribed mode only; ignored in free mode

    DesignVector to_design(const std::vector<double>& raw) const {
        return DesignVector{mode, raw};
    }
    double evaluate(const std::vector<double>& raw) const {
        return structural_error(to_design(raw), path, timing).f_ob;
    }
};

}  // namespace sph4r
