#include "scltpe/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "scltpe/errors.hpp"
#include "scltpe/resample.hpp"

namespace scltpe {

namespace {

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

int minority_class(const Dataset& ds) {
    if (ds.num_classes() != 2) return -1;
    const auto counts = ds.class_counts();
    return counts[1] <= counts[0] ? 1 : 0;
}

DataSplit make_split(const Dataset& train_raw, const Dataset& eval_raw,
                     int positive_class) {
    DataSplit split;
    split.stats = zscore_fit(train_raw);
    split.train = zscore_apply(split.stats, train_raw);
    split.eval = zscore_apply(split.stats, eval_raw);
    split.positive_class = positive_class;
    return split;
}

}  // namespace

Dataset load_dataset(const ExperimentConfig& cfg) {
    if (cfg.format == "keel") return load_keel(cfg.dataset_path);
    if (cfg.format == "csv") return load_csv(cfg.dataset_path);
    return load_auto(cfg.dataset_path);
}

PreparedExperiment prepare_experiment(const ExperimentConfig& cfg) {
    PreparedExperiment prep;
    prep.full = load_dataset(cfg);
    const int positive = minority_class(prep.full);

    auto [train_raw, test_raw] = stratified_split(prep.full, cfg.test_fraction, cfg.seed);
    prep.final_fit = make_split(train_raw, test_raw, positive);

    if (cfg.tune_split == TuneSplit::validation) {
        auto [fit_raw, val_raw] =
            stratified_split(train_raw, 0.25, Rng::derive_seed(cfg.seed, "valsplit"));
        prep.tuning = make_split(fit_raw, val_raw, positive);
    } else {
        prep.tuning = prep.final_fit;
    }
    return prep;
}

RunResult run_single(const ExperimentConfig& cfg, const DataSplit& split, double tau,
                     std::uint64_t run_seed) {
    EncoderSpec enc_spec;
    enc_spec.layer_widths = cfg.encoder_widths;
    enc_spec.normalize_output = cfg.normalize_embeddings;
    enc_spec.tau = tau;

    ContrastiveTrainConfig enc_cfg;
    enc_cfg.epochs = cfg.contrastive_epochs;
    enc_cfg.batch_size = cfg.batch_size;
    enc_cfg.steps_per_epoch = cfg.steps_per_epoch;
    enc_cfg.lr = cfg.lr;
    enc_cfg.sigma = cfg.sigma;
    enc_cfg.seed = run_seed;
    enc_cfg.loss_kind = cfg.loss_kind;

    RunResult res;
    res.encoder = train_encoder(split.train, enc_spec, enc_cfg, &res.encoder_loss);

    ClassifierSpec clf_spec;
    clf_spec.layer_widths = cfg.classifier_widths;
    clf_spec.epochs = cfg.classifier_epochs;
    clf_spec.batch_size = std::min(cfg.batch_size, split.train.size());
    clf_spec.steps_per_epoch = cfg.steps_per_epoch;
    clf_spec.lr = cfg.lr;
    clf_spec.seed = run_seed;

    res.head = train_classifier(&res.encoder, split.train, clf_spec,
                                &res.classifier_loss);
    const Matrix proba = predict_proba(&res.encoder, res.head, split.eval.x);
    res.report = report(proba, split.eval.y, split.positive_class);
    return res;
}

double objective_eval(double tau, const ExperimentConfig& cfg, const DataSplit& split,
                      std::uint64_t run_seed, bool* failed) {
    if (failed) *failed = false;
    try {
        const RunResult res = run_single(cfg, split, tau, run_seed);
        return -res.report.auc_or_mauc;
    } catch (const numeric_error& e) {
        std::cerr << "warning: trial at tau=" << tau << " failed: " << e.what()
                  << " (scored as AUC 0.5)\n";
        if (failed) *failed = true;
        return 0.0;
    }
}

TuneResult tune(const ExperimentConfig& cfg) {
    const PreparedExperiment prep = prepare_experiment(cfg);
    TuneResult out;
    const double t0 = now_s();

    std::vector<bool> failed;
    const Objective objective = [&](double tau, std::size_t trial) {
        bool fail = false;
        const double value =
            objective_eval(tau, cfg, prep.tuning, cfg.seed + trial, &fail);
        failed.push_back(fail);
        return value;
    };

    TpeConfig tpe;
    tpe.lo = cfg.tau_lo;
    tpe.hi = cfg.tau_hi;
    tpe.gamma = cfg.tpe_gamma;
    tpe.n_startup = cfg.tpe_startup;
    tpe.n_candidates = cfg.tpe_candidates;

    switch (cfg.hpo) {
        case HpoKind::tpe:
            out.hpo = tpe_optimize(objective, tpe, cfg.hpo_budget, cfg.seed);
            break;
        case HpoKind::grid:
            // The published grid walks multiples of the step, never 0.
            out.hpo = grid_search(objective, std::max(cfg.tau_lo, cfg.grid_step),
                                  cfg.tau_hi, cfg.grid_step, cfg.seed);
            break;
        case HpoKind::random_:
            out.hpo = random_search(objective, cfg.tau_lo, cfg.tau_hi, cfg.hpo_budget,
                                    cfg.seed);
            break;
        case HpoKind::ga: {
            GaConfig ga;
            ga.population = cfg.ga_population;
            ga.generations = cfg.ga_generations;
            out.hpo = ga_search(objective, cfg.tau_lo, cfg.tau_hi, ga, cfg.seed);
            break;
        }
        case HpoKind::fixed: {
            HpoResult single;
            bool fail = false;
            Trial t;
            t.tau = cfg.fixed_tau;
            t.seed = cfg.seed;
            const double s0 = now_s();
            t.objective = objective_eval(cfg.fixed_tau, cfg, prep.tuning, cfg.seed, &fail);
            t.elapsed_s = now_s() - s0;
            failed.push_back(fail);
            single.history.push_back(t);
            single.best = t;
            out.hpo = single;
            break;
        }
    }
    for (std::size_t i = 0; i < out.hpo.history.size() && i < failed.size(); ++i)
        out.hpo.history[i].failed = failed[i];
    out.failed = failed;

    // Deterministic refit of the winning trial on the final split.
    RunResult best_run = run_single(cfg, prep.final_fit,
                                    out.hpo.best.tau, out.hpo.best.seed);
    out.best_report = best_run.report;
    out.best_auc = cfg.tune_split == TuneSplit::test ? -out.hpo.best.objective
                                                     : best_run.report.auc_or_mauc;
    out.best_model.tau = out.hpo.best.tau;
    out.best_model.stats = prep.final_fit.stats;
    out.best_model.class_names = prep.full.class_names;
    out.best_model.encoder = std::move(best_run.encoder);
    out.best_model.head = std::move(best_run.head);
    out.wall_s = now_s() - t0;
    return out;
}

void write_history_csv(const std::string& path, const TrialHistory& history) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write " + path);
    out << "iter,tau,objective,auc,elapsed_s,seed\n";
    char buf[160];
    for (std::size_t i = 0; i < history.size(); ++i) {
        const Trial& t = history[i];
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.6f,%llu\n", i + 1,
                      t.tau, t.objective, -t.objective, t.elapsed_s,
                      static_cast<unsigned long long>(t.seed));
        out << buf;
    }
}

CompareResult compare_hpo(const ExperimentConfig& cfg) {
    CompareResult out;
    for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
        const std::uint64_t rep_seed = Rng::derive_seed(cfg.seed, "replicate", rep);
        ExperimentConfig rep_cfg = cfg;
        rep_cfg.seed = rep_seed;
        const PreparedExperiment prep = prepare_experiment(rep_cfg);
        const Objective objective = [&](double tau, std::size_t trial) {
            return objective_eval(tau, rep_cfg, prep.tuning, rep_seed + trial);
        };

        TpeConfig tpe;
        tpe.lo = cfg.tau_lo;
        tpe.hi = cfg.tau_hi;
        tpe.gamma = cfg.tpe_gamma;
        tpe.n_startup = cfg.tpe_startup;
        tpe.n_candidates = cfg.tpe_candidates;
        GaConfig ga;
        ga.population = cfg.ga_population;
        ga.generations = cfg.ga_generations;

        // Published protocol: TPE and RS run the same iteration budget, the
        // grid walks 0.02..1.0 in 0.02 steps, GA runs population x generations.
        const auto add = [&](const std::string& method, HpoResult&& res) {
            out.entries.push_back({method, rep, res.best, std::move(res.history)});
        };
        add("tpe", tpe_optimize(objective, tpe, cfg.hpo_budget, rep_seed));
        add("random",
            random_search(objective, cfg.tau_lo, cfg.tau_hi, cfg.hpo_budget, rep_seed));
        add("grid", grid_search(objective, std::max(cfg.tau_lo, cfg.grid_step),
                                cfg.tau_hi, cfg.grid_step, rep_seed));
        add("ga", ga_search(objective, cfg.tau_lo, cfg.tau_hi, ga, rep_seed));
    }
    return out;
}

std::vector<BaselineResult> run_baselines(const ExperimentConfig& cfg) {
    const PreparedExperiment prep = prepare_experiment(cfg);
    const DataSplit& split = prep.final_fit;
    std::vector<BaselineResult> out;
    const auto eval_sampler = [&](const std::string& name, const Dataset& train) {
        const std::size_t k = std::min(cfg.knn_k, train.size());
        const KnnResult knn = knn_predict(train, split.eval.x, k);
        BaselineResult res;
        res.sampler = name;
        res.report = report(knn.vote_proba, split.eval.y, split.positive_class);
        out.push_back(std::move(res));
    };
    eval_sampler("none", split.train);
    eval_sampler("ros", ros(split.train, cfg.seed));
    eval_sampler("rus", rus(split.train, cfg.seed));
    eval_sampler("smote", smote(split.train, cfg.smote_k, cfg.seed));
    return out;
}

MetricsReport evaluate_checkpoint(const Checkpoint& ck, const Dataset& raw) {
    if (raw.features() != ck.stats.mean.size())
        throw dimension_error("eval: dataset has " + std::to_string(raw.features()) +
                              " features, checkpoint expects " +
                              std::to_string(ck.stats.mean.size()));
    const Dataset norm = zscore_apply(ck.stats, raw);
    const Matrix proba = predict_proba(&ck.encoder, ck.head, norm.x);
    int positive = -1;
    if (ck.class_names.size() == 2) {
        std::size_t n1 = 0;
        for (int label : norm.y) n1 += static_cast<std::size_t>(label == 1);
        positive = 2 * n1 <= norm.y.size() ? 1 : 0;
    }
    return report(proba, norm.y, positive);
}

void export_embeddings(const Checkpoint& ck, const Dataset& raw,
                       const std::string& path) {
    if (raw.features() != ck.stats.mean.size())
        throw dimension_error("export: dataset feature count mismatch");
    const Dataset norm = zscore_apply(ck.stats, raw);
    const Matrix z = encode(ck.encoder, norm.x);
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write " + path);
    out << "id";
    for (std::size_t j = 0; j < z.cols; ++j) out << ",e" << j;
    out << ",label\n";
    char buf[40];
    for (std::size_t i = 0; i < z.rows; ++i) {
        out << i;
        for (std::size_t j = 0; j < z.cols; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", z(i, j));
            out << ',' << buf;
        }
        out << ',' << norm.y[i] << '\n';
    }
}

}  // namespace scltpe
