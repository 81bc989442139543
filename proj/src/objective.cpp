#include "sph4r/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sph4r {

TargetPath TargetPath::from_points(const std::vector<Vec3>& raw) {
    if (raw.size() < 3) {
        throw std::invalid_argument("TargetPath: at least 3 points required");
    }
    TargetPath path;
    path.points.reserve(raw.size());
    for (const Vec3& p : raw) path.points.emplace_back(p);
    return path;
}

int design_dimension(DesignMode mode, int point_count) {
    return mode == DesignMode::prescribed ? 11 : point_count + 10;
}

namespace {

int theta_count(DesignMode mode, int n) { return mode == DesignMode::prescribed ? 1 : n; }

}  // namespace

DesignBounds design_bounds(DesignMode mode, int point_count) {
    const int tc = theta_count(mode, point_count);
    DesignBounds b;
    const int dim = design_dimension(mode, point_count);
    b.lower.assign(static_cast<std::size_t>(dim), 0.0);
    b.upper.assign(static_cast<std::size_t>(dim), kTwoPi);
    b.kinds.assign(static_cast<std::size_t>(dim), CoordKind::periodic);
    // thetas and beta: [0, 2*pi), already set
    b.lower[static_cast<std::size_t>(tc + 1)] = -kPi;  // gamma in [-pi, pi)
    b.upper[static_cast<std::size_t>(tc + 1)] = kPi;
    for (int k = 0; k < 4; ++k) {
        const auto co = static_cast<std::size_t>(tc + 6 + k);  // colatitudes in [0, pi]
        b.lower[co] = 0.0;
        b.upper[co] = kPi;
        b.kinds[co] = CoordKind::reflect;
    }
    return b;
}

Timing Timing::uniform(int n) { return with_spacing(n, kTwoPi / n); }

Timing Timing::with_spacing(int n, double spacing) {
    if (n < 1) throw std::invalid_argument("Timing: n must be >= 1");
    Timing t;
    t.offsets.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) t.offsets[static_cast<std::size_t>(k)] = spacing * k;
    return t;
}

Timing Timing::from_list(const std::vector<double>& absolute) {
    if (absolute.empty()) throw std::invalid_argument("Timing: empty angle list");
    Timing t;
    t.offsets.resize(absolute.size());
    for (std::size_t k = 0; k < absolute.size(); ++k) t.offsets[k] = absolute[k] - absolute[0];
    return t;
}

std::vector<double> prescribed_thetas(double theta1, int n) {
    return prescribed_thetas(theta1, n, kTwoPi / n);
}

std::vector<double> prescribed_thetas(double theta1, int n, double spacing) {
    if (n < 1) throw std::invalid_argument("prescribed_thetas: n must be >= 1");
    std::vector<double> thetas(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) thetas[static_cast<std::size_t>(k)] = theta1 + spacing * k;
    return thetas;
}

DecodedDesign decode(const DesignVector& design, int point_count) {
    return decode(design, point_count, Timing::uniform(point_count));
}

DecodedDesign decode(const DesignVector& design, int point_count, const Timing& timing) {
    const int dim = design_dimension(design.mode, point_count);
    if (static_cast<int>(design.values.size()) != dim) {
        throw std::invalid_argument("decode: design vector length does not match mode");
    }
    const int tc = theta_count(design.mode, point_count);
    const double* v = design.values.data();
    const double beta = v[tc];
    const double gamma = v[tc + 1];
    std::array<JointCoords, 4> coords;
    for (int k = 0; k < 4; ++k) {
        coords[static_cast<std::size_t>(k)] = JointCoords{v[tc + 2 + k], v[tc + 6 + k]};
    }
    std::vector<double> thetas;
    if (design.mode == DesignMode::prescribed) {
        if (static_cast<int>(timing.offsets.size()) != point_count) {
            throw std::invalid_argument("decode: timing offsets do not match point count");
        }
        thetas.resize(static_cast<std::size_t>(point_count));
        for (int k = 0; k < point_count; ++k) {
            thetas[static_cast<std::size_t>(k)] = v[0] + timing.offsets[static_cast<std::size_t>(k)];
        }
    } else {
        thetas.assign(v, v + point_count);
    }
    return DecodedDesign{SphericalFourBar::build(coords, beta, gamma), std::move(thetas)};
}

DesignVector encode(DesignMode mode, const SphericalFourBar& mech,
                    const std::vector<double>& thetas) {
    if (thetas.empty()) throw std::invalid_argument("encode: empty theta list");
    DesignVector design;
    design.mode = mode;
    if (mode == DesignMode::prescribed) {
        design.values.push_back(thetas.front());
    } else {
        design.values = thetas;
    }
    design.values.push_back(mech.beta());
    design.values.push_back(mech.gamma());
    for (int k = 0; k < 4; ++k) design.values.push_back(mech.joint_coords()[static_cast<std::size_t>(k)].azimuth);
    for (int k = 0; k < 4; ++k) design.values.push_back(mech.joint_coords()[static_cast<std::size_t>(k)].colatitude);
    return design;
}

namespace {

EvaluationReport all_infeasible(int n) {
    EvaluationReport report;
    report.feasible = false;
    report.infeasible_count = n;
    report.f_ob = kInfeasiblePenalty + n;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    report.per_point_errors.assign(static_cast<std::size_t>(n), nan);
    report.geodesic_errors.assign(static_cast<std::size_t>(n), nan);
    return report;
}

}  // namespace

EvaluationReport structural_error(const DesignVector& design, const TargetPath& path) {
    return structural_error(design, path, Timing::uniform(path.size()));
}

EvaluationReport structural_error(const DesignVector& design, const TargetPath& path,
                                  const Timing& timing) {
    const int n = path.size();
    std::optional<DecodedDesign> decoded;
    try {
        decoded.emplace(decode(design, n, timing));
    } catch (const DegenerateMechanism&) {
        return all_infeasible(n);
    }

    const auto branch = try_select_branch(decoded->mechanism);
    if (!branch) return all_infeasible(n);

    EvaluationReport report;
    report.per_point_errors.reserve(static_cast<std::size_t>(n));
    report.geodesic_errors.reserve(static_cast<std::size_t>(n));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    double sum = 0.0;
    std::optional<UnitVector3> gen;
    for (int i = 0; i < n; ++i) {
        const auto status = try_generated_point(decoded->mechanism,
                                                decoded->thetas[static_cast<std::size_t>(i)], *branch, gen);
        if (status != TrajectoryStatus::ok) {
            ++report.infeasible_count;
            report.per_point_errors.push_back(nan);
            report.geodesic_errors.push_back(nan);
            continue;
        }
        const UnitVector3& desired = path.points[static_cast<std::size_t>(i)];
        const double e2 = (desired.vec() - gen->vec()).squared_norm();
        sum += e2;
        report.per_point_errors.push_back(e2);
        report.geodesic_errors.push_back(geodesic_error(desired, *gen));
    }
    if (report.infeasible_count > 0) {
        report.feasible = false;
        report.f_ob = kInfeasiblePenalty + report.infeasible_count;
    } else {
        report.f_ob = sum;
    }
    return report;
}

double geodesic_error(const UnitVector3& desired, const UnitVector3& generated) {
    return std::acos(std::clamp(desired.dot(generated), -1.0, 1.0));
}

ThetaDiffs theta_differences(const std::vector<double>& thetas) {
    if (thetas.size() < 2) throw std::invalid_argument("theta_differences: need at least 2 angles");
    ThetaDiffs result;
    result.diffs.reserve(thetas.size() - 1);
    double sum = 0.0;
    for (std::size_t k = 1; k < thetas.size(); ++k) {
        const double d = thetas[k] - thetas[k - 1];
        result.diffs.push_back(d);
        sum += d;
    }
    result.mean = sum / static_cast<double>(result.diffs.size());
    return result;
}

}  // namespace sph4r
