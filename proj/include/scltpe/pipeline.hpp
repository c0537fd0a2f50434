#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scltpe/checkpoint.hpp"
#include "scltpe/config.hpp"
#include "scltpe/hpo.hpp"
#include "scltpe/metrics.hpp"

namespace scltpe {

// Normalized train/eval pair used by one objective evaluation or final fit.
struct DataSplit {
    Dataset train;
    Dataset eval;
    NormalizationStats stats;
    int positive_class = -1;  // minority class of the full dataset, binary only
};

// Train/eval material for a whole experiment. `tuning` is what the HPO
// objective sees; `final_fit` is what the reported model trains and tests
// on. In test-tuning mode the two coincide.
struct PreparedExperiment {
    Dataset full;
    DataSplit tuning;
    DataSplit final_fit;
};

PreparedExperiment prepare_experiment(const ExperimentConfig& cfg);

struct RunResult {
    EncoderParams encoder;
    ClassifierParams head;
    MetricsReport report;
    std::vector<double> encoder_loss;
    std::vector<double> classifier_loss;
};

// One full inner run: contrastive pretraining at the given temperature,
// frozen-encoder head training, evaluation on split.eval.
RunResult run_single(const ExperimentConfig& cfg, const DataSplit& split, double tau,
                     std::uint64_t run_seed);

// -AUC (binary) or -MAUC (multi-class) on split.eval. A training abort is
// caught, reported, and scored 0 (coin-flip AUC); `failed`, when given, is
// set accordingly.
double objective_eval(double tau, const ExperimentConfig& cfg, const DataSplit& split,
                      std::uint64_t run_seed, bool* failed = nullptr);

struct TuneResult {
    HpoResult hpo;
    std::vector<bool> failed;  // parallel to hpo.history
    double best_auc = 0.0;
    double wall_s = 0.0;
    Checkpoint best_model;
    MetricsReport best_report;
};

// The outer loop: run the configured optimizer over tau, then refit the
// best trial deterministically on the final split.
TuneResult tune(const ExperimentConfig& cfg);

// Writes `iter, tau, objective, auc, elapsed_s, seed` rows.
void write_history_csv(const std::string& path, const TrialHistory& history);

struct CompareEntry {
    std::string method;
    std::size_t replicate = 0;
    Trial best;
    TrialHistory history;
};

struct CompareResult {
    std::vector<CompareEntry> entries;  // methods x replicates
};

// Runs TPE, random, grid, and GA at their configured budgets over
// cfg.repeats seed replicas.
CompareResult compare_hpo(const ExperimentConfig& cfg);

struct BaselineResult {
    std::string sampler;  // none | ros | rus | smote
    MetricsReport report;
};

// KNN on the normalized final split, once per sampler.
std::vector<BaselineResult> run_baselines(const ExperimentConfig& cfg);

// Checkpoint scoring on an externally supplied dataset.
MetricsReport evaluate_checkpoint(const Checkpoint& ck, const Dataset& raw);

// (id, embedding..., label) rows for every dataset row.
void export_embeddings(const Checkpoint& ck, const Dataset& raw,
                       const std::string& path);

Dataset load_dataset(const ExperimentConfig& cfg);

}  // namespace scltpe
