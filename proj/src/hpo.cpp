#include "scltpe/hpo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>

#include "scltpe/errors.hpp"

namespace scltpe {

namespace {

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

Trial run_trial(const Objective& objective, double tau, std::size_t index,
                std::uint64_t seed) {
    Trial t;
    t.tau = tau;
    t.seed = seed + index;
    const double t0 = now_s();
    t.objective = objective(tau, index);
    t.elapsed_s = now_s() - t0;
    return t;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

std::size_t best_trial(const TrialHistory& history) {
    if (history.empty()) throw config_error("best_trial: empty history");
    std::size_t best = 0;
    for (std::size_t i = 1; i < history.size(); ++i)
        if (history[i].objective < history[best].objective) best = i;
    return best;
}

void TpeConfig::validate() const {
    if (!(lo < hi)) throw config_error("tpe: bounds must satisfy lo < hi");
    if (!(gamma > 0.0 && gamma < 1.0)) throw config_error("tpe: gamma must be in (0,1)");
    if (n_candidates < 1) throw config_error("tpe: need at least one candidate");
}

HistorySplit split_history(const TrialHistory& history, double gamma) {
    if (history.empty()) throw config_error("split_history: empty history");
    const std::size_t t = history.size();
    const std::size_t n_below = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(gamma * static_cast<double>(t))));

    std::vector<std::size_t> order(t);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return history[a].objective < history[b].objective;
    });

    HistorySplit split;
    for (std::size_t i = 0; i < t; ++i)
        (i < n_below ? split.below : split.above).push_back(history[order[i]].tau);
    return split;
}

ParzenDensity::ParzenDensity(std::vector<double> observations, double lo, double hi)
    : mu_(std::move(observations)), lo_(lo), hi_(hi) {
    if (!(lo < hi)) throw config_error("parzen: bounds must satisfy lo < hi");
    std::sort(mu_.begin(), mu_.end());
    const double range = hi_ - lo_;

    // Neighbor gaps are computed with the prior location (the bounds
    // midpoint) inserted as a virtual point, as in the original construction.
    // This keeps the edge components of a tight cluster wide enough that the
    // sampler can still reach unexplored regions.
    const double prior_mu = 0.5 * (lo_ + hi_);
    std::vector<double> pts = mu_;
    pts.insert(std::upper_bound(pts.begin(), pts.end(), prior_mu), prior_mu);

    // The floor shrinks as components accumulate (reference-TPE rule); a
    // fixed tight floor lets an over-drilled cluster dominate both densities
    // at micro-resolution and the sampler never saturates out of it.
    const double floor =
        range / std::min(100.0, static_cast<double>(mu_.size()) + 2.0);
    sigma_.resize(mu_.size());
    std::size_t k = 0;  // index of mu_[i] within pts; duplicates stay ordered
    for (std::size_t i = 0; i < mu_.size(); ++i) {
        while (pts[k] != mu_[i]) ++k;
        double bw = range;
        if (pts.size() > 1) {
            const double left = k > 0 ? pts[k] - pts[k - 1] : 0.0;
            const double right = k + 1 < pts.size() ? pts[k + 1] - pts[k] : 0.0;
            bw = std::max(left, right);
        }
        sigma_[i] = std::clamp(bw, floor, range);
        ++k;
    }
    norm_.resize(mu_.size());
    for (std::size_t i = 0; i < mu_.size(); ++i)
        norm_[i] = normal_cdf((hi_ - mu_[i]) / sigma_[i]) -
                   normal_cdf((lo_ - mu_[i]) / sigma_[i]);
}

double ParzenDensity::value(double x) const {
    if (x < lo_ || x > hi_) return 0.0;
    const double w = 1.0 / static_cast<double>(mu_.size() + 1);
    double density = w / (hi_ - lo_);  // the uniform prior component
    for (std::size_t i = 0; i < mu_.size(); ++i)
        density += w * normal_pdf((x - mu_[i]) / sigma_[i]) / (sigma_[i] * norm_[i]);
    return density;
}

double ParzenDensity::sample(Rng& rng) const {
    const std::size_t component = rng.uniform_index(mu_.size() + 1);
    if (component == mu_.size()) return rng.uniform(lo_, hi_);
    // Rejection sampling of the truncated Gaussian; bandwidth clamping keeps
    // the acceptance rate bounded away from zero.
    for (;;) {
        const double x = mu_[component] + sigma_[component] * rng.normal();
        if (x >= lo_ && x <= hi_) return x;
    }
}

double parzen_density(const std::vector<double>& observations, double lo, double hi,
                      double x) {
    return ParzenDensity(observations, lo, hi).value(x);
}

double tpe_suggest(const TrialHistory& history, const TpeConfig& cfg, Rng& rng,
                   std::vector<double>* candidates_out) {
    cfg.validate();
    if (candidates_out) candidates_out->clear();
    if (history.size() < cfg.n_startup) return rng.uniform(cfg.lo, cfg.hi);

    const HistorySplit split = split_history(history, cfg.gamma);
    const ParzenDensity good(split.below, cfg.lo, cfg.hi);
    const ParzenDensity bad(split.above, cfg.lo, cfg.hi);

    double best_tau = cfg.lo;
    double best_ratio = -1.0;
    for (std::size_t c = 0; c < cfg.n_candidates; ++c) {
        const double x = good.sample(rng);
        if (candidates_out) candidates_out->push_back(x);
        const double ratio = good.value(x) / std::max(bad.value(x), 1e-300);
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best_tau = x;
        }
    }
    return best_tau;
}

HpoResult tpe_optimize(const Objective& objective, const TpeConfig& cfg,
                       std::size_t iterations, std::uint64_t seed) {
    cfg.validate();
    if (iterations < 1) throw config_error("tpe_optimize: need at least one iteration");
    Rng rng = Rng::substream(seed, "hpo");
    HpoResult res;
    for (std::size_t i = 0; i < iterations; ++i) {
        const double tau = tpe_suggest(res.history, cfg, rng);
        res.history.push_back(run_trial(objective, tau, i, seed));
    }
    res.best = res.history[best_trial(res.history)];
    return res;
}

HpoResult grid_search(const Objective& objective, double lo, double hi, double step,
                      std::uint64_t seed) {
    if (!(step > 0.0)) throw config_error("grid_search: step must be positive");
    if (!(lo > 0.0)) throw config_error("grid_search: grid must start above 0");
    HpoResult res;
    std::size_t i = 0;
    // Index arithmetic avoids drift from repeated addition.
    for (;; ++i) {
        const double tau = lo + static_cast<double>(i) * step;
        if (tau > hi + 1e-12) break;
        res.history.push_back(run_trial(objective, std::min(tau, hi), i, seed));
    }
    res.best = res.history[best_trial(res.history)];
    return res;
}

HpoResult random_search(const Objective& objective, double lo, double hi,
                        std::size_t iterations, std::uint64_t seed) {
    if (iterations < 1) throw config_error("random_search: need at least one iteration");
    Rng rng = Rng::substream(seed, "hpo");
    HpoResult res;
    for (std::size_t i = 0; i < iterations; ++i)
        res.history.push_back(run_trial(objective, rng.uniform(lo, hi), i, seed));
    res.best = res.history[best_trial(res.history)];
    return res;
}

HpoResult ga_search(const Objective& objective, double lo, double hi,
                    const GaConfig& ga, std::uint64_t seed) {
    if (ga.population < 2) throw config_error("ga_search: population must be >= 2");
    if (ga.generations < 1) throw config_error("ga_search: need at least one generation");
    Rng rng = Rng::substream(seed, "hpo");
    HpoResult res;

    std::vector<double> pop(ga.population);
    for (double& tau : pop) tau = rng.uniform(lo, hi);
    std::vector<double> fitness(ga.population);

    std::size_t eval_index = 0;
    auto evaluate_population = [&] {
        for (std::size_t i = 0; i < pop.size(); ++i) {
            res.history.push_back(run_trial(objective, pop[i], eval_index++, seed));
            fitness[i] = res.history.back().objective;
        }
    };
    auto tournament = [&]() -> double {
        const std::size_t a = rng.uniform_index(pop.size());
        const std::size_t b = rng.uniform_index(pop.size());
        return fitness[a] <= fitness[b] ? pop[a] : pop[b];
    };

    evaluate_population();
    for (std::size_t gen = 1; gen < ga.generations; ++gen) {
        std::vector<double> next;
        next.reserve(pop.size());
        // Elite survives unchanged (and is re-evaluated with the rest).
        const std::size_t elite =
            std::min_element(fitness.begin(), fitness.end()) - fitness.begin();
        next.push_back(pop[elite]);
        while (next.size() < pop.size()) {
            const double p1 = tournament();
            const double p2 = tournament();
            // Blend crossover: uniform on the alpha-expanded parent interval.
            const double span = std::abs(p1 - p2);
            const double child_lo = std::min(p1, p2) - ga.crossover_alpha * span;
            const double child_hi = std::max(p1, p2) + ga.crossover_alpha * span;
            double child = child_lo == child_hi ? child_lo
                                                : rng.uniform(child_lo, child_hi);
            if (rng.uniform() < ga.mutation_rate)
                child += ga.mutation_sigma * rng.normal();
            next.push_back(std::clamp(child, lo, hi));
        }
        pop = std::move(next);
        evaluate_population();
    }
    res.best = res.history[best_trial(res.history)];
    return res;
}

}  // namespace scltpe
