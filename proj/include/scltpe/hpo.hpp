#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "scltpe/rng.hpp"

namespace scltpe {

// One objective evaluation. objective = -AUC (lower is better); a failed
// training run is recorded with objective 0 (coin-flip AUC).
struct Trial {
    double tau = 0.0;
    double objective = 0.0;
    double elapsed_s = 0.0;
    std::uint64_t seed = 0;
    bool failed = false;
};

using TrialHistory = std::vector<Trial>;

// Returns the index of the best (lowest-objective) trial; earliest wins ties.
std::size_t best_trial(const TrialHistory& history);

struct TpeConfig {
    double lo = 0.01;
    double hi = 1.0;
    double gamma = 0.25;
    std::size_t n_startup = 10;
    std::size_t n_candidates = 24;

    void validate() const;
};

// The gamma-quantile split of the history: `below` holds the tau values of
// the max(1, ceil(gamma*t)) best trials, `above` the rest. Ties break by
// evaluation order.
struct HistorySplit {
    std::vector<double> below;
    std::vector<double> above;
};

HistorySplit split_history(const TrialHistory& history, double gamma);

// Equal-weight mixture of per-observation truncated Gaussians plus one
// uniform component over [lo, hi]. Bandwidths follow the adjacent-gap rule:
// max of the distances to the two neighboring observations in sorted order,
// clamped to [0.01*(hi-lo), hi-lo].
class ParzenDensity {
public:
    ParzenDensity(std::vector<double> observations, double lo, double hi);

    double value(double x) const;
    double sample(Rng& rng) const;

    const std::vector<double>& bandwidths() const { return sigma_; }

private:
    std::vector<double> mu_;
    std::vector<double> sigma_;
    std::vector<double> norm_;  // truncated-Gaussian mass of each component
    double lo_, hi_;
};

double parzen_density(const std::vector<double>& observations, double lo, double hi,
                      double x);

// Next tau: uniform during startup, afterwards the candidate (drawn from the
// below-density l) with the highest l(x)/g(x), equivalently the highest
// expected-improvement proxy (gamma + (g/l)(1-gamma))^-1.
double tpe_suggest(const TrialHistory& history, const TpeConfig& cfg, Rng& rng,
                   std::vector<double>* candidates_out = nullptr);

// objective(tau, trial_index) -> value to minimize.
using Objective = std::function<double(double, std::size_t)>;

struct HpoResult {
    Trial best;
    TrialHistory history;
};

HpoResult tpe_optimize(const Objective& objective, const TpeConfig& cfg,
                       std::size_t iterations, std::uint64_t seed);

// Evaluates lo, lo+step, ... up to hi inclusive. `seed` is recorded on the
// trials (the walk itself is deterministic).
HpoResult grid_search(const Objective& objective, double lo, double hi, double step,
                      std::uint64_t seed = 0);

HpoResult random_search(const Objective& objective, double lo, double hi,
                        std::size_t iterations, std::uint64_t seed);

// Real-coded GA over the single parameter: tournament selection of size 2,
// blend crossover, Gaussian mutation, one elite. Every individual of every
// generation is evaluated and appended, so the budget is exactly
// population * generations.
struct GaConfig {
    std::size_t population = 15;
    std::size_t generations = 5;
    double crossover_alpha = 0.5;
    double mutation_sigma = 0.1;
    double mutation_rate = 0.2;
};

HpoResult ga_search(const Objective& objective, double lo, double hi,
                    const GaConfig& ga, std::uint64_t seed);

}  // namespace scltpe
