#include "sph4r/de.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace sph4r {

void DEConfig::validate() const {
    if (population_size < 4) {
        throw std::invalid_argument("DEConfig: population_size must be >= 4");
    }
    if (max_generations < 0) throw std::invalid_argument("DEConfig: max_generations < 0");
    if (!(f_lo > 0.0) || f_hi < f_lo) {
        throw std::invalid_argument("DEConfig: require 0 < f_lo <= f_hi");
    }
    if (cr < 0.0 || cr > 1.0) throw std::invalid_argument("DEConfig: cr outside [0, 1]");
    if (lower.size() != upper.size() || lower.empty()) {
        throw std::invalid_argument("DEConfig: bounds missing or mismatched");
    }
    if (!kinds.empty() && kinds.size() != lower.size()) {
        throw std::invalid_argument("DEConfig: kinds size mismatched");
    }
    for (std::size_t j = 0; j < lower.size(); ++j) {
        if (!(lower[j] <= upper[j]) || !std::isfinite(lower[j]) || !std::isfinite(upper[j])) {
            throw std::invalid_argument("DEConfig: bounds must be finite with lower <= upper");
        }
    }
    if (theta_begin < 0 || theta_end < theta_begin || theta_end > dimension()) {
        throw std::invalid_argument("DEConfig: ordering block out of range");
    }
}

int uniform_index(std::mt19937_64& rng, int n) {
    // Rejection keeps the mapping exactly uniform and platform-independent.
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return static_cast<int>(r % un);
}

Population initialize(const DEConfig& config, const ObjectiveFn& objective, std::mt19937_64& rng) {
    config.validate();
    const int m = config.population_size;
    const int dim = config.dimension();
    Population pop;
    pop.generation = 0;
    pop.individuals.resize(static_cast<std::size_t>(m));
    pop.fitnesses.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        auto& x = pop.individuals[static_cast<std::size_t>(i)];
        x.resize(static_cast<std::size_t>(dim));
        for (int j = 0; j < dim; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            x[ju] = config.lower[ju] + uniform01(rng) * (config.upper[ju] - config.lower[ju]);
        }
        repair(x, config);
        pop.fitnesses[static_cast<std::size_t>(i)] = objective(x);
    }
    pop.best_index = static_cast<int>(
        std::min_element(pop.fitnesses.begin(), pop.fitnesses.end()) - pop.fitnesses.begin());
    return pop;
}

std::vector<double> mutate(const Population& population, int target_index, double scale,
                           std::mt19937_64& rng) {
    const int m = static_cast<int>(population.individuals.size());
    if (m < 4) throw std::invalid_argument("mutate: population too small");
    int r0, r1, r2;
    do {
        r0 = uniform_index(rng, m);
    } while (r0 == target_index);
    do {
        r1 = uniform_index(rng, m);
    } while (r1 == target_index || r1 == r0);
    do {
        r2 = uniform_index(rng, m);
    } while (r2 == target_index || r2 == r0 || r2 == r1);
    assert(r0 != target_index && r1 != target_index && r2 != target_index && r0 != r1 &&
           r0 != r2 && r1 != r2);

    const auto& base = population.individuals[static_cast<std::size_t>(r0)];
    const auto& p1 = population.individuals[static_cast<std::size_t>(r1)];
    const auto& p2 = population.individuals[static_cast<std::size_t>(r2)];
    std::vector<double> donor(base.size());
    for (std::size_t j = 0; j < base.size(); ++j) {
        donor[j] = base[j] + scale * (p1[j] - p2[j]);
    }
    return donor;
}

std::vector<double> crossover(const std::vector<double>& target, const std::vector<double>& donor,
                              double cr, std::mt19937_64& rng) {
    if (target.size() != donor.size()) {
        throw std::invalid_argument("crossover: length mismatch");
    }
    const int dim = static_cast<int>(target.size());
    const int j_rand = uniform_index(rng, dim);
    std::vector<double> trial(target.size());
    for (int j = 0; j < dim; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        trial[ju] = (uniform01(rng) <= cr || j == j_rand) ? donor[ju] : target[ju];
    }
    return trial;
}

namespace {

double wrap_into(double v, double lo, double hi) {
    const double period = hi - lo;
    if (period <= 0.0) return lo;
    double r = std::fmod(v - lo, period);
    if (r < 0.0) r += period;
    return lo + r;
}

double reflect_into(double v, double lo, double hi) {
    const double period = hi - lo;
    if (period <= 0.0) return lo;
    double r = std::fmod(v - lo, 2.0 * period);
    if (r < 0.0) r += 2.0 * period;
    return lo + (r <= period ? r : 2.0 * period - r);
}

}  // namespace

void repair(std::vector<double>& trial, const DEConfig& config) {
    for (std::size_t j = 0; j < trial.size(); ++j) {
        const CoordKind kind = config.kinds.empty() ? CoordKind::reflect : config.kinds[j];
        trial[j] = kind == CoordKind::periodic ? wrap_into(trial[j], config.lower[j], config.upper[j])
                                               : reflect_into(trial[j], config.lower[j], config.upper[j]);
    }
    if (config.theta_end > config.theta_begin) {
        std::sort(trial.begin() + config.theta_begin, trial.begin() + config.theta_end);
    }
}

DEResult run(const ObjectiveFn& objective, const DEConfig& config, const AuditHook& audit) {
    config.validate();
    std::mt19937_64 rng(config.seed);
    Population pop = initialize(config, objective, rng);

    const auto record = [](const Population& p) {
        double sum = 0.0;
        for (double f : p.fitnesses) sum += f;
        return GenerationRecord{p.generation, p.fitnesses[static_cast<std::size_t>(p.best_index)],
                                sum / static_cast<double>(p.fitnesses.size())};
    };

    DEResult result;
    result.history.reserve(static_cast<std::size_t>(config.max_generations) + 1);
    result.history.push_back(record(pop));
    if (audit) audit(pop);

    const int m = config.population_size;
    std::vector<std::vector<double>> trials(static_cast<std::size_t>(m));
    std::vector<double> trial_fitness(static_cast<std::size_t>(m));

    for (int g = 1; g <= config.max_generations; ++g) {
        const double scale =
            config.f_hi > config.f_lo
                ? config.f_lo + uniform01(rng) * (config.f_hi - config.f_lo)
                : config.f_lo;
        // Trials are produced (and all randomness consumed) before any
        // evaluation; selection is generational.
        for (int i = 0; i < m; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            std::vector<double> donor = mutate(pop, i, scale, rng);
            trials[iu] = crossover(pop.individuals[iu], donor, config.cr, rng);
            repair(trials[iu], config);
        }
        for (int i = 0; i < m; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            trial_fitness[iu] = objective(trials[iu]);
        }
        for (int i = 0; i < m; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            if (select_trial(pop.fitnesses[iu], trial_fitness[iu])) {
                pop.individuals[iu].swap(trials[iu]);
                pop.fitnesses[iu] = trial_fitness[iu];
            }
        }
        pop.generation = g;
        pop.best_index = static_cast<int>(
            std::min_element(pop.fitnesses.begin(), pop.fitnesses.end()) - pop.fitnesses.begin());
        result.history.push_back(record(pop));
        if (audit) audit(pop);
    }

    result.best = pop.individuals[static_cast<std::size_t>(pop.best_index)];
    result.best_fitness = pop.fitnesses[static_cast<std::size_t>(pop.best_index)];
    return result;
}

}  // namespace sph4r
