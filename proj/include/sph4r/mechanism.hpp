#pragma once

// Forward kinematics of the spherical 4R linkage: joint placement, link
// lengths, input/output trajectories, closure solutions and the tracer point.
//
// Joints x1..x4 sit on the unit sphere. The input link joins x1 (fixed pivot)
// to x2, the coupler x2 to x3, the output link x3 to x4 (fixed pivot), and
// the fixed link x4 back to x1. Link lengths are arc angles. The input motion
// rotates x2 about x1 by theta; the output angle phi rotates x3 about x4 and
// is determined by keeping the coupler arc constant.

#include <array>
#include <optional>

#include "sph4r/so3.hpp"

namespace sph4r {

/// The +/- choice in the closed-form closure solution; the two values are
/// the two assembly configurations of the linkage.
enum class Branch { plus, minus };

/// Spherical placement of one joint: azimuth in [0, 2*pi), colatitude in [0, pi].
struct JointCoords {
    double azimuth = 0.0;
    double colatitude = 0.0;
};

/// Joint point from azimuth/colatitude:
/// (cos(az) sin(co), sin(az) sin(co), cos(co)).
UnitVector3 joint_point(double azimuth, double colatitude);

class SphericalFourBar {
public:
    /// Builds the linkage and derives joints, link lengths and the initial
    /// geodesic angles. Throws DegenerateMechanism when any adjacent joint
    /// pair is parallel or antiparallel.
    static SphericalFourBar build(const std::array<JointCoords, 4>& joint_coords,
                                  double tracer_beta, double tracer_gamma);

    const std::array<JointCoords, 4>& joint_coords() const { return coords_; }
    /// k = 0..3 for x1..x4.
    const UnitVector3& joint(int k) const { return joints_[static_cast<std::size_t>(k)]; }
    /// alpha1..alpha4: input, coupler, output, fixed link arcs, each in (0, pi).
    const std::array<double, 4>& link_lengths() const { return alpha_; }
    double beta() const { return beta_; }
    double gamma() const { return gamma_; }
    /// Initial signed angle at x1 between the fixed-link and input-link geodesics.
    double theta0() const { return theta0_; }
    /// Initial signed angle at x4 between the fixed-link and output-link geodesics.
    double phi0() const { return phi0_; }
    /// x2 . x3, the conserved coupler inner product (= cos alpha2).
    double coupler_dot() const { return coupler_dot_; }

    double sin_alpha(int k) const { return sin_alpha_[static_cast<std::size_t>(k)]; }
    double cos_alpha(int k) const { return cos_alpha_[static_cast<std::size_t>(k)]; }

private:
    SphericalFourBar(const std::array<JointCoords, 4>& coords,
                     const std::array<UnitVector3, 4>& joints, double beta, double gamma);

    std::array<JointCoords, 4> coords_;
    std::array<UnitVector3, 4> joints_;
    std::array<double, 4> alpha_;
    std::array<double, 4> sin_alpha_;
    std::array<double, 4> cos_alpha_;
    double beta_;
    double gamma_;
    double theta0_;
    double phi0_;
    double coupler_dot_;
};

/// r2(theta): x2 rotated about x1 by the input angle.
UnitVector3 input_point(const SphericalFourBar& mech, double theta);

/// r3(phi): x3 rotated about x4 by the output angle.
UnitVector3 output_point(const SphericalFourBar& mech, double phi);

enum class ClosureStatus {
    ok,
    infeasible,  // discriminant < 0: the linkage cannot assemble at this theta
    singular,    // half-angle form degenerates (C == B)
};

struct ClosureResult {
    ClosureStatus status = ClosureStatus::infeasible;
    double phi = 0.0;  // valid only when status == ok; wrapped to (-pi, pi]
};

/// Closed-form output angle for one branch; non-throwing hot path.
ClosureResult try_output_angle(const SphericalFourBar& mech, double theta, Branch branch) noexcept;

/// Closed-form output angle phi(theta) such that the coupler arc is conserved.
/// Throws InfeasibleConfiguration / SingularConfiguration.
double output_angle_analytic(const SphericalFourBar& mech, double theta, Branch branch);

/// Output angle from a bracketed 1-D root search on the closure residual
/// g(phi) = r2(theta) . r3(phi) - x2 . x3, starting near phi_guess.
/// Independent of the closed form; serves as its oracle.
/// Throws NoConvergence when no root can be bracketed near the guess.
double output_angle_numeric(const SphericalFourBar& mech, double theta, double phi_guess);

enum class TrajectoryStatus {
    ok,
    infeasible,
    singular,
    degenerate_coupler,  // r2 and r3 (anti)parallel: coupler normal undefined
};

/// Everything needed to place coupler-attached points at one input angle.
struct CouplerState {
    UnitVector3 r2;
    UnitVector3 r3;
    UnitVector3 axis;  // normalized r2 x r3
};

TrajectoryStatus try_coupler_state(const SphericalFourBar& mech, double theta, Branch branch,
                                   std::optional<CouplerState>& out) noexcept;

/// Point of the full coupler arc at arc offset nu from r2 (toward r3).
UnitVector3 coupler_point_from(const CouplerState& state, double nu);

/// coupler_point(mech, theta, nu) = R(nu, n23) r2(theta). Throws on
/// infeasible/singular/degenerate configurations.
UnitVector3 coupler_point(const SphericalFourBar& mech, double theta, double nu, Branch branch);

/// Tracer point: r_cp(theta, beta + gamma) rotated a quarter turn about
/// r_cp(theta, beta).
UnitVector3 generated_point(const SphericalFourBar& mech, double theta, Branch branch);

TrajectoryStatus try_generated_point(const SphericalFourBar& mech, double theta, Branch branch,
                                     std::optional<UnitVector3>& out) noexcept;

/// Branch whose closure solution at theta = 0 reproduces the assembly
/// position r3 = x3; held fixed for a whole trajectory sweep.
std::optional<Branch> try_select_branch(const SphericalFourBar& mech) noexcept;

/// Throwing variant; NoValidBranch when neither branch closes the assembly.
Branch select_branch(const SphericalFourBar& mech);

/// Mobility test on link arcs: each alpha is first folded to min(alpha,
/// pi - alpha), then shortest + longest <= sum of the other two.
bool grashof_check(const std::array<double, 4>& link_lengths);

}  // namespace sph4r
