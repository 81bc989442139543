#pragma once

#include <stdexcept>
#include <string>

namespace sph4r {

/// Two spherical points are parallel or antiparallel; the connecting
/// great circle (and its axis) is undefined.
struct DegenerateGeodesic : std::runtime_error {
    explicit DegenerateGeodesic(const std::string& what) : std::runtime_error(what) {}
};

/// Adjacent joints of a four-bar are coincident or antipodal.
struct DegenerateMechanism : std::runtime_error {
    explicit DegenerateMechanism(const std::string& what) : std::runtime_error(what) {}
};

/// Input and output link endpoints are parallel; the coupler normal is undefined.
struct DegenerateCoupler : std::runtime_error {
    explicit DegenerateCoupler(const std::string& what) : std::runtime_error(what) {}
};

/// The closure equation has no real solution at the requested input angle.
struct InfeasibleConfiguration : std::runtime_error {
    explicit InfeasibleConfiguration(const std::string& what) : std::runtime_error(what) {}
};

/// The half-angle form of the closure solution degenerates (C == B).
struct SingularConfiguration : std::runtime_error {
    explicit SingularConfiguration(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative root search failed to bracket or converge.
struct NoConvergence : std::runtime_error {
    explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

/// Neither closure branch reproduces the assembly configuration.
struct NoValidBranch : std::runtime_error {
    explicit NoValidBranch(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sph4r
