#include "scltpe/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>

#include "scltpe/errors.hpp"

namespace scltpe {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double to_real(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size())
        throw config_error(key + ": expected a number, got '" + value + "'");
    return v;
}

std::size_t to_count(const std::string& key, const std::string& value) {
    const double v = to_real(key, value);
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
        throw config_error(key + ": expected a non-negative integer, got '" + value + "'");
    return static_cast<std::size_t>(v);
}

std::vector<std::size_t> to_widths(const std::string& key, const std::string& value) {
    std::vector<std::size_t> out;
    std::string cur;
    for (char c : value + ",") {
        if (c == ',') {
            if (!trim(cur).empty()) out.push_back(to_count(key, trim(cur)));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (out.empty()) throw config_error(key + ": expected a comma-separated width list");
    return out;
}

struct PaperRow {
    std::vector<std::size_t> encoder;
    std::vector<std::size_t> classifier;
    std::size_t batch;
};

// Published per-dataset extractor/classifier widths and batch sizes, keyed
// by the dataset file stem.
const std::map<std::string, PaperRow>& paper_rows() {
    static const std::map<std::string, PaperRow> rows = {
        {"gl0", {{9, 96, 48}, {48, 24, 2}, 160}},
        {"eo2", {{7, 96, 48}, {48, 10, 2}, 128}},
        {"yt3", {{8, 128, 64}, {64, 32, 2}, 240}},
        {"yt6", {{8, 96, 48}, {48, 24, 2}, 320}},
        {"vw0", {{13, 104, 52}, {52, 26, 2}, 160}},
        {"hb", {{3, 96, 48}, {48, 24, 2}, 128}},
        {"yt24", {{8, 128, 64}, {64, 32, 2}, 128}},
        {"pa0", {{10, 128, 64}, {64, 32, 2}, 160}},
        {"bal", {{4, 128, 64}, {64, 32, 3}, 128}},
        {"wine", {{13, 200, 100}, {100, 50, 3}, 150}},
        {"lym", {{18, 128, 64}, {64, 32, 4}, 150}},
        {"gla", {{9, 128, 64}, {64, 32, 6}, 128}},
        {"page", {{10, 128, 64}, {64, 32, 5}, 128}},
        {"dt", {{34, 128, 64}, {64, 32, 6}, 128}},
        {"pb", {{16, 128, 64}, {64, 32, 10}, 160}},
    };
    return rows;
}

std::string file_stem(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = name.find_last_of('.');
    if (dot != std::string::npos) name = name.substr(0, dot);
    return name;
}

}  // namespace

std::string to_string(HpoKind k) {
    switch (k) {
        case HpoKind::tpe: return "tpe";
        case HpoKind::grid: return "grid";
        case HpoKind::random_: return "random";
        case HpoKind::ga: return "ga";
        case HpoKind::fixed: return "fixed";
    }
    return "?";
}

std::string to_string(TuneSplit s) {
    return s == TuneSplit::test ? "test" : "validation";
}

std::string to_string(LossKind k) {
    return k == LossKind::supervised ? "supervised" : "self_supervised";
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (key == "dataset") dataset_path = value;
    else if (key == "format") format = value;
    else if (key == "test-fraction") test_fraction = to_real(key, value);
    else if (key == "tune-split") {
        if (value == "test") tune_split = TuneSplit::test;
        else if (value == "validation") tune_split = TuneSplit::validation;
        else throw config_error("tune-split: expected test|validation, got '" + value + "'");
    } else if (key == "encoder-widths") encoder_widths = to_widths(key, value);
    else if (key == "classifier-widths") classifier_widths = to_widths(key, value);
    else if (key == "normalize-embeddings") normalize_embeddings = to_count(key, value) != 0;
    else if (key == "batch-size") batch_size = to_count(key, value);
    else if (key == "contrastive-epochs") contrastive_epochs = to_count(key, value);
    else if (key == "classifier-epochs") classifier_epochs = to_count(key, value);
    else if (key == "steps-per-epoch") steps_per_epoch = to_count(key, value);
    else if (key == "lr") lr = to_real(key, value);
    else if (key == "sigma") sigma = to_real(key, value);
    else if (key == "loss") {
        if (value == "supervised") loss_kind = LossKind::supervised;
        else if (value == "self_supervised") loss_kind = LossKind::self_supervised;
        else throw config_error("loss: expected supervised|self_supervised, got '" + value + "'");
    } else if (key == "hpo") {
        if (value == "tpe") hpo = HpoKind::tpe;
        else if (value == "grid") hpo = HpoKind::grid;
        else if (value == "random") hpo = HpoKind::random_;
        else if (value == "ga") hpo = HpoKind::ga;
        else if (value == "fixed") hpo = HpoKind::fixed;
        else throw config_error("hpo: expected tpe|grid|random|ga|fixed, got '" + value + "'");
    } else if (key == "tau") fixed_tau = to_real(key, value);
    else if (key == "budget") hpo_budget = to_count(key, value);
    else if (key == "tau-lo") tau_lo = to_real(key, value);
    else if (key == "tau-hi") tau_hi = to_real(key, value);
    else if (key == "tpe-gamma") tpe_gamma = to_real(key, value);
    else if (key == "tpe-startup") tpe_startup = to_count(key, value);
    else if (key == "tpe-candidates") tpe_candidates = to_count(key, value);
    else if (key == "grid-step") grid_step = to_real(key, value);
    else if (key == "ga-population") ga_population = to_count(key, value);
    else if (key == "ga-generations") ga_generations = to_count(key, value);
    else if (key == "repeats") repeats = to_count(key, value);
    else if (key == "knn-k") knn_k = to_count(key, value);
    else if (key == "smote-k") smote_k = to_count(key, value);
    else if (key == "seed") seed = static_cast<std::uint64_t>(to_count(key, value));
    else if (key == "scale-preset") scale_preset = value;
    else if (key == "out-dir") out_dir = value;
    else throw config_error("unknown config key '" + key + "'");
}

void ExperimentConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(line_no) +
                               ": expected key = value");
        set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
}

void ExperimentConfig::apply_preset() {
    if (scale_preset.empty()) return;
    if (scale_preset == "paper") {
        contrastive_epochs = 5000;
        classifier_epochs = 25;
        hpo_budget = 75;
        lr = 0.001;
        const auto it = paper_rows().find(file_stem(dataset_path));
        if (it != paper_rows().end()) {
            encoder_widths = it->second.encoder;
            classifier_widths = it->second.classifier;
            batch_size = it->second.batch;
        }
    } else if (scale_preset == "desk") {
        contrastive_epochs = 1000;
        classifier_epochs = 25;
        hpo_budget = 20;
        repeats = 5;
    } else {
        throw config_error("scale-preset: expected paper|desk, got '" + scale_preset + "'");
    }
}

void ExperimentConfig::validate() const {
    if (dataset_path.empty()) throw config_error("dataset: path is required");
    if (format != "auto" && format != "keel" && format != "csv")
        throw config_error("format: expected auto|keel|csv, got '" + format + "'");
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw config_error("test-fraction: must be in (0,1)");
    if (batch_size < 2) throw config_error("batch-size: must be at least 2");
    if (steps_per_epoch < 1) throw config_error("steps-per-epoch: must be at least 1");
    if (!(lr > 0.0)) throw config_error("lr: must be positive");
    if (sigma < 0.0) throw config_error("sigma: must be non-negative");
    if (!(tau_lo > 0.0)) throw config_error("tau-lo: must be positive");
    if (!(tau_lo < tau_hi)) throw config_error("tau-lo/tau-hi: need tau-lo < tau-hi");
    if (!(tpe_gamma > 0.0 && tpe_gamma < 1.0))
        throw config_error("tpe-gamma: must be in (0,1)");
    if (tpe_candidates < 1) throw config_error("tpe-candidates: must be at least 1");
    if (hpo == HpoKind::fixed && !(fixed_tau > 0.0))
        throw config_error("tau: must be positive");
    if (hpo != HpoKind::fixed && hpo != HpoKind::grid && hpo_budget < 1)
        throw config_error("budget: must be at least 1");
    if (hpo == HpoKind::grid && !(grid_step > 0.0))
        throw config_error("grid-step: must be positive");
    if (hpo == HpoKind::ga && (ga_population < 2 || ga_generations < 1))
        throw config_error("ga-population/ga-generations: need population >= 2, generations >= 1");
    if (repeats < 1) throw config_error("repeats: must be at least 1");
    if (knn_k < 1) throw config_error("knn-k: must be at least 1");
    if (smote_k < 1) throw config_error("smote-k: must be at least 1");
}

void ExperimentConfig::resolve_for_data(std::size_t features, std::size_t classes) {
    if (encoder_widths.empty()) encoder_widths = {features, 128, 64};
    if (classifier_widths.empty())
        classifier_widths = {encoder_widths.back(), 32, classes};
    if (encoder_widths.front() != features)
        throw config_error("encoder-widths: first width " +
                           std::to_string(encoder_widths.front()) +
                           " != dataset feature count " + std::to_string(features));
    if (classifier_widths.front() != encoder_widths.back())
        throw config_error("classifier-widths: first width must equal encoder output " +
                           std::to_string(encoder_widths.back()));
    if (classifier_widths.back() != classes)
        throw config_error("classifier-widths: last width " +
                           std::to_string(classifier_widths.back()) +
                           " != class count " + std::to_string(classes));
}

}  // namespace scltpe
