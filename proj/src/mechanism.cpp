#include "sph4r/mechanism.hpp"

#include <algorithm>
#include <cmath>

namespace sph4r {

UnitVector3 joint_point(double azimuth, double colatitude) {
    const double se = std::sin(colatitude);
    // Near the poles sin(colatitude) ~ 0 and the raw components are not unit
    // to roundoff; UnitVector3 renormalizes.
    return UnitVector3(std::cos(azimuth) * se, std::sin(azimuth) * se, std::cos(colatitude));
}

SphericalFourBar::SphericalFourBar(const std::array<JointCoords, 4>& coords,
                                   const std::array<UnitVector3, 4>& joints, double beta,
                                   double gamma)
    : coords_(coords),
      joints_(joints),
      alpha_{},
      sin_alpha_{},
      cos_alpha_{},
      beta_(beta),
      gamma_(gamma),
      theta0_(0.0),
      phi0_(0.0),
      coupler_dot_(0.0) {}

SphericalFourBar SphericalFourBar::build(const std::array<JointCoords, 4>& joint_coords,
                                         double tracer_beta, double tracer_gamma) {
    const std::array<UnitVector3, 4> joints = {
        joint_point(joint_coords[0].azimuth, joint_coords[0].colatitude),
        joint_point(joint_coords[1].azimuth, joint_coords[1].colatitude),
        joint_point(joint_coords[2].azimuth, joint_coords[2].colatitude),
        joint_point(joint_coords[3].azimuth, joint_coords[3].colatitude)};

    SphericalFourBar mech(joint_coords, joints, tracer_beta, tracer_gamma);
    for (int k = 0; k < 4; ++k) {
        const double d = joints[static_cast<std::size_t>(k)].dot(joints[static_cast<std::size_t>((k + 1) % 4)]);
        if (std::abs(d) >= 1.0 - kParallelEps) {
            throw DegenerateMechanism("adjacent joints coincident or antipodal");
        }
        const double a = std::acos(std::clamp(d, -1.0, 1.0));
        mech.alpha_[static_cast<std::size_t>(k)] = a;
        mech.sin_alpha_[static_cast<std::size_t>(k)] = std::sin(a);
        mech.cos_alpha_[static_cast<std::size_t>(k)] = std::cos(a);
    }
    mech.coupler_dot_ = joints[1].dot(joints[2]);
    // Initial geodesic angles, both measured from the fixed link.
    mech.theta0_ = spherical_angle_at_vertex(joints[0], joints[3], joints[1]);
    mech.phi0_ = spherical_angle_at_vertex(joints[3], joints[0], joints[2]);
    return mech;
}

UnitVector3 input_point(const SphericalFourBar& mech, double theta) {
    return rotation_about_axis(theta, mech.joint(0)).apply(mech.joint(1));
}

UnitVector3 output_point(const SphericalFourBar& mech, double phi) {
    return rotation_about_axis(phi, mech.joint(3)).apply(mech.joint(2));
}

ClosureResult try_output_angle(const SphericalFourBar& mech, double theta, Branch branch) noexcept {
    const double s1 = mech.sin_alpha(0), c1 = mech.cos_alpha(0);
    const double s3 = mech.sin_alpha(2), c3 = mech.cos_alpha(2);
    const double s4 = mech.sin_alpha(3), c4 = mech.cos_alpha(3);
    const double psi = theta + mech.theta0();
    const double sp = std::sin(psi);
    const double cp = std::cos(psi);

    const double a = s1 * s3 * sp;
    const double b = c1 * s3 * s4 - s1 * s3 * c4 * cp;
    const double c = s1 * c3 * s4 * cp + c1 * c3 * c4 - mech.cos_alpha(1);

    double disc = a * a + b * b - c * c;
    if (disc < 0.0) {
        // Roundoff guard: the assembly position itself can compute a few ulps
        // below zero. Genuine infeasibility is far more negative.
        if (disc < -1e-12) return {ClosureStatus::infeasible, 0.0};
        disc = 0.0;
    }
    if (std::abs(c - b) < 1e-12) {
        return {ClosureStatus::singular, 0.0};
    }
    const double root = std::sqrt(disc);
    const double num = (branch == Branch::plus) ? a + root : a - root;
    const double chi = 2.0 * std::atan2(num, c - b);
    return {ClosureStatus::ok, wrap_pi(chi - mech.phi0())};
}

double output_angle_analytic(const SphericalFourBar& mech, double theta, Branch branch) {
    const ClosureResult r = try_output_angle(mech, theta, branch);
    switch (r.status) {
        case ClosureStatus::ok:
            return r.phi;
        case ClosureStatus::infeasible:
            throw InfeasibleConfiguration("closure discriminant negative");
        case ClosureStatus::singular:
        default:
            throw SingularConfiguration("closure half-angle form degenerate (C == B)");
    }
}

double output_angle_numeric(const SphericalFourBar& mech, double theta, double phi_guess) {
    const UnitVector3 r2 = input_point(mech, theta);
    const Vec3 x3 = mech.joint(2).vec();
    const UnitVector3& x4 = mech.joint(3);
    const double target = mech.coupler_dot();

    const auto residual = [&](double phi) {
        return (rotation_about_axis(phi, x4) * x3).dot(r2.vec()) - target;
    };

    double g0 = residual(phi_guess);
    if (std::abs(g0) < 1e-15) return wrap_pi(phi_guess);

    // Expand around the guess in alternating steps until the residual
    // changes sign; a root "near phi_guess" is expected within +/- pi.
    const double h = kPi / 32.0;
    double lo = phi_guess, hi = phi_guess, glo = g0, ghi = g0;
    bool bracketed = false;
    for (int k = 1; k <= 32 && !bracketed; ++k) {
        const double right = phi_guess + k * h;
        const double gr = residual(right);
        if (gr * ghi <= 0.0) {
            lo = right - h;
            glo = ghi;
            hi = right;
            ghi = gr;
            bracketed = true;
            break;
        }
        ghi = gr;
        const double left = phi_guess - k * h;
        const double gl = residual(left);
        if (gl * glo <= 0.0) {
            hi = left + h;
            ghi = glo;
            lo = left;
            glo = gl;
            bracketed = true;
            break;
        }
        glo = gl;
    }
    if (!bracketed) {
        throw NoConvergence("output_angle_numeric: no sign change near phi_guess");
    }

    // Illinois false position: keeps the bracket, damps a stale endpoint so
    // the interpolation point always crosses the root. Superlinear near a
    // simple root, never stalls.
    int side = 0;
    for (int it = 0; it < 64; ++it) {
        const double x = (lo * ghi - hi * glo) / (ghi - glo);
        const double gx = residual(x);
        if (std::abs(gx) < 1e-15 || std::abs(hi - lo) < 1e-14) {
            return wrap_pi(x);
        }
        if (gx * glo > 0.0) {
            lo = x;
            glo = gx;
            if (side == -1) ghi *= 0.5;
            side = -1;
        } else if (gx * ghi > 0.0) {
            hi = x;
            ghi = gx;
            if (side == +1) glo *= 0.5;
            side = +1;
        } else {
            return wrap_pi(x);  // landed on an exact zero
        }
    }
    if (std::abs(hi - lo) < 1e-10) {
        return wrap_pi(0.5 * (lo + hi));
    }
    throw NoConvergence("output_angle_numeric: iteration cap reached");
}

TrajectoryStatus try_coupler_state(const SphericalFourBar& mech, double theta, Branch branch,
                                   std::optional<CouplerState>& out) noexcept {
    out.reset();
    const ClosureResult cr = try_output_angle(mech, theta, branch);
    if (cr.status == ClosureStatus::infeasible) return TrajectoryStatus::infeasible;
    if (cr.status == ClosureStatus::singular) return TrajectoryStatus::singular;

    const UnitVector3 r2 = input_point(mech, theta);
    const UnitVector3 r3 = output_point(mech, cr.phi);
    const Vec3 cross = r2.cross(r3);
    const double n = cross.norm();
    if (n < 1e-9) return TrajectoryStatus::degenerate_coupler;
    out.emplace(CouplerState{r2, r3, UnitVector3(cross * (1.0 / n))});
    return TrajectoryStatus::ok;
}

UnitVector3 coupler_point_from(const CouplerState& state, double nu) {
    return rotation_about_axis(nu, state.axis).apply(state.r2);
}

namespace {

void throw_for(TrajectoryStatus status) {
    switch (status) {
        case TrajectoryStatus::infeasible:
            throw InfeasibleConfiguration("closure discriminant negative");
        case TrajectoryStatus::singular:
            throw SingularConfiguration("closure half-angle form degenerate (C == B)");
        case TrajectoryStatus::degenerate_coupler:
            throw DegenerateCoupler("r2 and r3 are (anti)parallel");
        case TrajectoryStatus::ok:
            break;
    }
}

}  // namespace

UnitVector3 coupler_point(const SphericalFourBar& mech, double theta, double nu, Branch branch) {
    std::optional<CouplerState> state;
    throw_for(try_coupler_state(mech, theta, branch, state));
    return coupler_point_from(*state, nu);
}

TrajectoryStatus try_generated_point(const SphericalFourBar& mech, double theta, Branch branch,
                                     std::optional<UnitVector3>& out) noexcept {
    out.reset();
    std::optional<CouplerState> state;
    const TrajectoryStatus status = try_coupler_state(mech, theta, branch, state);
    if (status != TrajectoryStatus::ok) return status;
    const UnitVector3 anchor = coupler_point_from(*state, mech.beta());
    const UnitVector3 offset = coupler_point_from(*state, mech.beta() + mech.gamma());
    out.emplace(rotation_about_axis(0.5 * kPi, anchor).apply(offset));
    return TrajectoryStatus::ok;
}

UnitVector3 generated_point(const SphericalFourBar& mech, double theta, Branch branch) {
    std::optional<UnitVector3> p;
    throw_for(try_generated_point(mech, theta, branch, p));
    return *p;
}

std::optional<Branch> try_select_branch(const SphericalFourBar& mech) noexcept {
    for (const Branch branch : {Branch::plus, Branch::minus}) {
        const ClosureResult r = try_output_angle(mech, 0.0, branch);
        if (r.status != ClosureStatus::ok) continue;
        const UnitVector3 r3 = output_point(mech, r.phi);
        const Vec3 diff = r3.vec() - mech.joint(2).vec();
        if (diff.norm() <= 1e-6) return branch;
    }
    return std::nullopt;
}

Branch select_branch(const SphericalFourBar& mech) {
    const auto branch = try_select_branch(mech);
    if (!branch) throw NoValidBranch("no closure branch reproduces the assembly at theta = 0");
    return *branch;
}

bool grashof_check(const std::array<double, 4>& link_lengths) {
    std::array<double, 4> folded;
    for (std::size_t k = 0; k < 4; ++k) {
        folded[k] = std::min(link_lengths[k], kPi - link_lengths[k]);
    }
    std::sort(folded.begin(), folded.end());
    return folded[0] + folded[3] <= folded[1] + folded[2];
}

}  // namespace sph4r
