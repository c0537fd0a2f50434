#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scltpe/encoder.hpp"

namespace scltpe {

enum class HpoKind { tpe, grid, random_, ga, fixed };
enum class TuneSplit { test, validation };

// Everything a run needs; populated from a flat key=value config file and/or
// CLI flags, then validated against the loaded dataset.
struct ExperimentConfig {
    std::string dataset_path;
    std::string format = "auto";  // auto | keel | csv
    double test_fraction = 0.2;
    TuneSplit tune_split = TuneSplit::test;

    std::vector<std::size_t> encoder_widths;     // empty: (d, 128, 64)
    std::vector<std::size_t> classifier_widths;  // empty: (h, 32, C)
    bool normalize_embeddings = true;

    std::size_t batch_size = 128;
    std::size_t contrastive_epochs = 5000;
    std::size_t classifier_epochs = 25;
    std::size_t steps_per_epoch = 1;
    double lr = 0.001;
    double sigma = 0.1;
    LossKind loss_kind = LossKind::supervised;

    HpoKind hpo = HpoKind::tpe;
    double fixed_tau = 0.5;
    std::size_t hpo_budget = 75;
    double tau_lo = 0.01;
    double tau_hi = 1.0;
    double tpe_gamma = 0.25;
    std::size_t tpe_startup = 10;
    std::size_t tpe_candidates = 24;
    double grid_step = 0.02;
    std::size_t ga_population = 15;
    std::size_t ga_generations = 5;

    std::size_t repeats = 1;  // seed replicas for compare-hpo
    std::size_t knn_k = 5;
    std::size_t smote_k = 5;

    std::uint64_t seed = 0;
    std::string scale_preset;  // "", "paper", "desk"
    std::string out_dir = ".";

    // Assigns one field from its config-file/flag name (kebab-case).
    void set(const std::string& key, const std::string& value);

    // Reads a flat `key = value` file ('#' comments, blank lines ignored).
    void load_file(const std::string& path);

    // Applies scale_preset. "paper" pins the published budgets and, when the
    // dataset stem is a known abbreviation, its layer widths and batch size;
    // "desk" shrinks budgets for laptop-scale runs.
    void apply_preset();

    // Dataset-independent sanity checks; throws config_error naming the field.
    void validate() const;

    // Fills derived defaults and checks width consistency once d and C are
    // known.
    void resolve_for_data(std::size_t features, std::size_t classes);
};

std::string to_string(HpoKind k);
std::string to_string(TuneSplit s);
std::string to_string(LossKind k);

}  // namespace scltpe
