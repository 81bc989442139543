#pragma once

// DE/rand/1/bin with per-generation dither, domain-aware bound handling and
// order repair on the input-angle block of free-timing design vectors.
//
// Determinism contract: for a fixed seed the whole run, including the
// recorded history, is bit-identical across platforms. All randomness comes
// from one mt19937_64 stream consumed in a fixed order, mapped to doubles
// and indices without platform-dependent distributions.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "sph4r/objective.hpp"

namespace sph4r {

struct DEConfig {
    int population_size = 100;  // m, must be >= 4
    int max_generations = 1000;
    /// Scale factor policy: F drawn uniformly from [f_lo, f_hi) once per
    /// generation (dither); set f_lo == f_hi for a fixed F.
    double f_lo = 0.4;
    double f_hi = 0.8;
    double cr = 0.9;
    std::uint64_t seed = 1;
    /// Ordering block [theta_begin, theta_end): kept ascending by repair.
    /// Empty (begin == end) in prescribed mode.
    int theta_begin = 0;
    int theta_end = 0;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<CoordKind> kinds;  // empty -> reflect everywhere

    int dimension() const { return static_cast<int>(lower.size()); }
    void validate() const;  // throws std::invalid_argument
};

struct Population {
    int generation = 0;
    std::vector<std::vector<double>> individuals;
    std::vector<double> fitnesses;
    int best_index = 0;
};

struct GenerationRecord {
    int generation = 0;
    double best_f = 0.0;
    double mean_f = 0.0;
};

struct DEResult {
    std::vector<double> best;
    double best_fitness = 0.0;
    std::vector<GenerationRecord> history;
};

using ObjectiveFn = std::function<double(const std::vector<double>&)>;
/// Called after every generation's selection; used by audits and logging.
using AuditHook = std::function<void(const Population&)>;

/// Uniform double in [0, 1) from the top 53 bits; portable across platforms.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform index in [0, n) by rejection; portable.
int uniform_index(std::mt19937_64& rng, int n);

/// Uniform population in [lower, upper) per coordinate, repaired and
/// evaluated.
Population initialize(const DEConfig& config, const ObjectiveFn& objective, std::mt19937_64& rng);

/// Donor vector x_r0 + F (x_r1 - x_r2) with r0, r1, r2 distinct and != target_index.
std::vector<double> mutate(const Population& population, int target_index, double scale,
                           std::mt19937_64& rng);

/// Binomial crossover; coordinate j_rand always comes from the donor.
std::vector<double> crossover(const std::vector<double>& target, const std::vector<double>& donor,
                              double cr, std::mt19937_64& rng);

/// Wrap/reflect every coordinate into its domain, then sort the ordering
/// block ascending (multiset of values preserved).
void repair(std::vector<double>& trial, const DEConfig& config);

/// Trial replaces target when trial_fitness <= target_fitness (ties go to
/// the trial).
inline bool select_trial(double target_fitness, double trial_fitness) {
    return trial_fitness <= target_fitness;
}

/// Full generational run; history records best/mean fitness per generation
/// (entry 0 is the initial population), best_f non-increasing.
DEResult run(const ObjectiveFn& objective, const DEConfig& config, const AuditHook& audit = {});

}  // namespace sph4r
