#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "scltpe/errors.hpp"
#include "scltpe/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace scltpe;

namespace {

struct FlagStore {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
};

// Every ExperimentConfig field is exposed as a kebab-case flag; flags beat
// config-file values, which beat defaults.
void add_config_flags(CLI::App& app, FlagStore& store) {
    static const std::vector<std::pair<std::string, std::string>> kFlags = {
        {"dataset", "dataset file (.dat KEEL or .csv)"},
        {"format", "dataset format: auto|keel|csv"},
        {"test-fraction", "held-out test fraction (default 0.2)"},
        {"tune-split", "objective target: test|validation"},
        {"encoder-widths", "extractor widths, e.g. 9,96,48"},
        {"classifier-widths", "head widths, e.g. 48,24,2"},
        {"normalize-embeddings", "L2-normalize embeddings (1|0)"},
        {"batch-size", "contrastive batch size"},
        {"contrastive-epochs", "encoder training epochs"},
        {"classifier-epochs", "head training epochs"},
        {"steps-per-epoch", "batches per epoch"},
        {"lr", "Adam learning rate"},
        {"sigma", "augmentation noise scale"},
        {"loss", "contrastive loss: supervised|self_supervised"},
        {"hpo", "optimizer: tpe|grid|random|ga|fixed"},
        {"tau", "temperature for --hpo fixed (and `train`)"},
        {"budget", "HPO iterations T"},
        {"tau-lo", "search lower bound"},
        {"tau-hi", "search upper bound"},
        {"tpe-gamma", "TPE split quantile"},
        {"tpe-startup", "TPE startup trials"},
        {"tpe-candidates", "TPE candidates per suggestion"},
        {"grid-step", "grid search step"},
        {"ga-population", "GA population size"},
        {"ga-generations", "GA generations"},
        {"repeats", "seed replicas for compare-hpo"},
        {"knn-k", "baseline KNN neighbor count"},
        {"smote-k", "SMOTE neighbor count"},
        {"seed", "base seed"},
        {"scale-preset", "paper|desk"},
        {"out-dir", "output directory"},
    };
    for (const auto& [name, help] : kFlags)
        store.options[name] = app.add_option("--" + name, store.values[name], help);
}

ExperimentConfig build_config(const std::string& config_path, const FlagStore& store) {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg.load_file(config_path);
    // Preset first so explicit flags can still override its choices, except
    // the preset flag itself.
    const auto preset = store.options.find("scale-preset");
    if (preset != store.options.end() && preset->second->count() > 0)
        cfg.scale_preset = store.values.at("scale-preset");
    cfg.apply_preset();
    for (const auto& [name, opt] : store.options) {
        if (name == "scale-preset") continue;
        if (opt->count() > 0) cfg.set(name, store.values.at(name));
    }
    if (const char* env = std::getenv("SCLTPE_OUT_DIR")) {
        const auto out = store.options.find("out-dir");
        const bool flag_given = out != store.options.end() && out->second->count() > 0;
        if (!flag_given && cfg.out_dir == ".") cfg.out_dir = env;
    }
    cfg.validate();
    fs::create_directories(cfg.out_dir);
    return cfg;
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    return (fs::path(cfg.out_dir) / name).string();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write " + path);
    out << text << '\n';
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int cmd_tune(const ExperimentConfig& cfg) {
    const TuneResult res = tune(cfg);
    write_history_csv(out_path(cfg, "history.csv"), res.hpo.history);
    res.best_model.save(out_path(cfg, "best_model.ckpt"));

    json best;
    best["tau"] = res.hpo.best.tau;
    best["auc"] = res.best_auc;
    best["iterations"] = res.hpo.history.size();
    best["wall_s"] = res.wall_s;
    best["tune_split"] = to_string(cfg.tune_split);
    best["hpo"] = to_string(cfg.hpo);
    best["loss"] = to_string(cfg.loss_kind);
    best["seed"] = cfg.seed;
    write_text(out_path(cfg, "best.json"), best.dump(2));
    write_text(out_path(cfg, "best_report.json"), res.best_report.to_json());

    std::cout << "best tau=" << res.hpo.best.tau << " auc=" << res.best_auc << " after "
              << res.hpo.history.size() << " trials (" << res.wall_s << "s)\n";
    return 0;
}

void write_loss_csv(const std::string& path, const std::vector<double>& trace) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write " + path);
    out << "epoch,loss\n";
    out.precision(17);
    for (std::size_t i = 0; i < trace.size(); ++i) out << i + 1 << ',' << trace[i] << '\n';
}

int cmd_train(const ExperimentConfig& cfg, double tau) {
    if (!(tau > 0.0)) throw config_error("tau: must be positive");
    const PreparedExperiment prep = prepare_experiment(cfg);
    const RunResult run = run_single(cfg, prep.final_fit, tau, cfg.seed);

    Checkpoint ck;
    ck.tau = tau;
    ck.stats = prep.final_fit.stats;
    ck.class_names = prep.full.class_names;
    ck.encoder = run.encoder;
    ck.head = run.head;
    ck.save(out_path(cfg, "model.ckpt"));
    write_text(out_path(cfg, "report.json"), run.report.to_json());
    write_loss_csv(out_path(cfg, "encoder_loss.csv"), run.encoder_loss);
    write_loss_csv(out_path(cfg, "classifier_loss.csv"), run.classifier_loss);
    std::cout << "tau=" << tau << " test auc=" << run.report.auc_or_mauc
              << " accuracy=" << run.report.accuracy << '\n';
    return 0;
}

int cmd_eval(const ExperimentConfig& cfg, const std::string& checkpoint_path) {
    const Checkpoint ck = Checkpoint::load(checkpoint_path);
    const Dataset ds = load_dataset(cfg);
    const MetricsReport rep = evaluate_checkpoint(ck, ds);
    write_text(out_path(cfg, "report.json"), rep.to_json());
    std::cout << rep.to_json() << '\n';
    return 0;
}

int cmd_compare(const ExperimentConfig& cfg) {
    const CompareResult res = compare_hpo(cfg);
    std::map<std::string, std::vector<double>> best_by_method;
    std::ofstream box(out_path(cfg, "best_aucs.csv"));
    if (!box) throw parse_error("cannot write best_aucs.csv");
    box << "method,replicate,best_tau,best_auc\n";
    box.precision(17);
    for (const CompareEntry& e : res.entries) {
        write_history_csv(out_path(cfg, "hpo_" + e.method + "_rep" +
                                            std::to_string(e.replicate) + ".csv"),
                          e.history);
        box << e.method << ',' << e.replicate << ',' << e.best.tau << ','
            << -e.best.objective << '\n';
        best_by_method[e.method].push_back(-e.best.objective);
    }
    json summary;
    summary["tune_split"] = to_string(cfg.tune_split);
    summary["repeats"] = cfg.repeats;
    for (const auto& [method, aucs] : best_by_method) {
        json m;
        m["median_auc"] = median(aucs);
        m["min_auc"] = *std::min_element(aucs.begin(), aucs.end());
        m["max_auc"] = *std::max_element(aucs.begin(), aucs.end());
        summary["methods"][method] = m;
    }
    for (const CompareEntry& e : res.entries)
        summary["methods"][e.method]["evaluations"] = e.history.size();
    write_text(out_path(cfg, "summary.json"), summary.dump(2));
    for (const auto& [method, aucs] : best_by_method)
        std::cout << method << " median best auc = " << median(aucs) << '\n';
    return 0;
}

int cmd_baseline(const ExperimentConfig& cfg) {
    const std::vector<BaselineResult> results = run_baselines(cfg);
    for (const BaselineResult& r : results) {
        write_text(out_path(cfg, "baseline_" + r.sampler + ".json"), r.report.to_json());
        std::cout << r.sampler << ": auc=" << r.report.auc_or_mauc
                  << " gmean=" << r.report.macro_gmean << " f=" << r.report.macro_f
                  << '\n';
    }
    return 0;
}

int cmd_export(const ExperimentConfig& cfg, const std::string& checkpoint_path) {
    const Checkpoint ck = Checkpoint::load(checkpoint_path);
    const Dataset ds = load_dataset(cfg);
    export_embeddings(ck, ds, out_path(cfg, "embeddings.csv"));
    std::cout << "wrote " << ds.size() << " embeddings\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Supervised contrastive learning with TPE temperature tuning "
                 "for imbalanced tabular data"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "flat key=value config file")
        ->check(CLI::ExistingFile);
    FlagStore store;
    add_config_flags(app, store);

    CLI::App* tune_cmd = app.add_subcommand("tune", "search tau with the configured optimizer");
    CLI::App* train_cmd = app.add_subcommand("train", "single run at a fixed tau");
    CLI::App* eval_cmd = app.add_subcommand("eval", "score a checkpoint on a dataset");
    CLI::App* compare_cmd =
        app.add_subcommand("compare-hpo", "TPE vs grid/random/GA at matched budgets");
    CLI::App* baseline_cmd =
        app.add_subcommand("baseline", "resampling + KNN comparison baselines");
    CLI::App* export_cmd =
        app.add_subcommand("export-embeddings", "write encoder embeddings as CSV");

    std::string checkpoint_path;
    for (CLI::App* c : {eval_cmd, export_cmd})
        c->add_option("--checkpoint", checkpoint_path, "model checkpoint")->required();
    for (CLI::App* c : {tune_cmd, train_cmd, eval_cmd, compare_cmd, baseline_cmd, export_cmd})
        c->fallthrough();

    try {
        app.parse(argc, argv);
        const ExperimentConfig cfg = build_config(config_path, store);
        if (tune_cmd->parsed()) return cmd_tune(cfg);
        if (train_cmd->parsed()) return cmd_train(cfg, cfg.fixed_tau);
        if (eval_cmd->parsed()) return cmd_eval(cfg, checkpoint_path);
        if (compare_cmd->parsed()) return cmd_compare(cfg);
        if (baseline_cmd->parsed()) return cmd_baseline(cfg);
        if (export_cmd->parsed()) return cmd_export(cfg, checkpoint_path);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const parse_error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const dimension_error& e) {
        std::cerr << "dimension error: " << e.what() << '\n';
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    }
}
