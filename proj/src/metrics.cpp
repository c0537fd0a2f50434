#include "scltpe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <sstream>

#include "scltpe/errors.hpp"

namespace scltpe {

std::size_t ConfusionMatrix::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

std::size_t ConfusionMatrix::row_total(std::size_t t) const {
    std::size_t s = 0;
    for (std::size_t p = 0; p < num_classes; ++p) s += at(t, p);
    return s;
}

std::size_t ConfusionMatrix::col_total(std::size_t p) const {
    std::size_t s = 0;
    for (std::size_t t = 0; t < num_classes; ++t) s += at(t, p);
    return s;
}

ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                          std::size_t num_classes) {
    if (y_true.size() != y_pred.size())
        throw dimension_error("confusion: length mismatch");
    ConfusionMatrix cm(num_classes);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const int t = y_true[i], p = y_pred[i];
        if (t < 0 || p < 0 || static_cast<std::size_t>(t) >= num_classes ||
            static_cast<std::size_t>(p) >= num_classes)
            throw dimension_error("confusion: label out of range at index " +
                                  std::to_string(i));
        cm.at(static_cast<std::size_t>(t), static_cast<std::size_t>(p)) += 1;
    }
    return cm;
}

double accuracy(const ConfusionMatrix& cm) {
    const std::size_t n = cm.total();
    if (n == 0) throw config_error("accuracy: empty evaluation");
    std::size_t correct = 0;
    for (std::size_t c = 0; c < cm.num_classes; ++c) correct += cm.at(c, c);
    return static_cast<double>(correct) / static_cast<double>(n);
}

Prf precision_recall_f(const ConfusionMatrix& cm, std::size_t positive_class) {
    if (positive_class >= cm.num_classes)
        throw dimension_error("precision_recall_f: class out of range");
    const double tp = static_cast<double>(cm.at(positive_class, positive_class));
    const double pred_pos = static_cast<double>(cm.col_total(positive_class));
    const double actual_pos = static_cast<double>(cm.row_total(positive_class));
    Prf r;
    r.precision = pred_pos > 0.0 ? tp / pred_pos : 0.0;
    r.recall = actual_pos > 0.0 ? tp / actual_pos : 0.0;
    r.f = (r.precision + r.recall) > 0.0
              ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
              : 0.0;
    return r;
}

double gmean(const ConfusionMatrix& cm) {
    double product = 1.0;
    for (std::size_t c = 0; c < cm.num_classes; ++c) {
        const double actual = static_cast<double>(cm.row_total(c));
        const double recall =
            actual > 0.0 ? static_cast<double>(cm.at(c, c)) / actual : 0.0;
        product *= recall;
    }
    return std::pow(product, 1.0 / static_cast<double>(cm.num_classes));
}

double auc_binary(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw dimension_error("auc_binary: length mismatch");
    std::size_t n_pos = 0, n_neg = 0;
    for (int label : labels) (label == 1 ? n_pos : n_neg) += 1;
    if (n_pos == 0 || n_neg == 0)
        throw config_error("auc_binary: both classes must be present");

    // Rank formulation with midranks for ties equals the pairwise statistic.
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]] == 1) pos_rank_sum += midrank;
        i = j;
    }
    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);
    return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

namespace {

// AUC(j|k): class-j column scores on samples of classes j and k, j positive.
double auc_pair(const Matrix& proba, const std::vector<int>& labels, int j, int k) {
    std::vector<double> scores;
    std::vector<int> binary;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == j || labels[i] == k) {
            scores.push_back(proba(i, static_cast<std::size_t>(j)));
            binary.push_back(labels[i] == j ? 1 : 0);
        }
    }
    return auc_binary(scores, binary);
}

}  // namespace

double mauc(const Matrix& proba, const std::vector<int>& labels) {
    const std::size_t c = proba.cols;
    if (labels.size() != proba.rows) throw dimension_error("mauc: length mismatch");
    if (c < 2) throw config_error("mauc: need at least two classes");
    std::vector<bool> present(c, false);
    for (int label : labels) present[static_cast<std::size_t>(label)] = true;

    double sum = 0.0;
    std::size_t terms = 0;
    for (std::size_t j = 0; j < c; ++j) {
        for (std::size_t k = j + 1; k < c; ++k) {
            if (!present[j] || !present[k]) {
                std::cerr << "warning: mauc skipping class pair (" << j << "," << k
                          << "): class absent from evaluation set\n";
                continue;
            }
            sum += auc_pair(proba, labels, static_cast<int>(j), static_cast<int>(k));
            sum += auc_pair(proba, labels, static_cast<int>(k), static_cast<int>(j));
            terms += 2;
        }
    }
    if (terms == 0) throw config_error("mauc: fewer than two classes present");
    return sum / static_cast<double>(terms);
}

double mauc_one_vs_rest(const Matrix& proba, const std::vector<int>& labels) {
    const std::size_t c = proba.cols;
    if (labels.size() != proba.rows)
        throw dimension_error("mauc_one_vs_rest: length mismatch");
    double sum = 0.0;
    std::size_t terms = 0;
    for (std::size_t j = 0; j < c; ++j) {
        std::vector<double> scores(labels.size());
        std::vector<int> binary(labels.size());
        std::size_t n_pos = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            scores[i] = proba(i, j);
            binary[i] = labels[i] == static_cast<int>(j) ? 1 : 0;
            n_pos += static_cast<std::size_t>(binary[i]);
        }
        if (n_pos == 0 || n_pos == labels.size()) continue;
        sum += auc_binary(scores, binary);
        terms += 1;
    }
    if (terms == 0) throw config_error("mauc_one_vs_rest: no scoreable class");
    return sum / static_cast<double>(terms);
}

MetricsReport report(const Matrix& proba, const std::vector<int>& labels,
                     int positive_class) {
    const std::size_t c = proba.cols;
    if (c < 2) throw config_error("report: need at least two classes");
    MetricsReport rep;
    const std::vector<int> pred = [&] {
        std::vector<int> p(proba.rows);
        for (std::size_t i = 0; i < proba.rows; ++i) {
            const double* row = proba.row(i);
            std::size_t best = 0;
            for (std::size_t j = 1; j < c; ++j)
                if (row[j] > row[best]) best = j;
            p[i] = static_cast<int>(best);
        }
        return p;
    }();
    rep.confusion = confusion(labels, pred, c);
    rep.accuracy = accuracy(rep.confusion);
    rep.macro_gmean = gmean(rep.confusion);
    rep.per_class.reserve(c);
    double f_sum = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
        rep.per_class.push_back(precision_recall_f(rep.confusion, j));
        f_sum += rep.per_class.back().f;
    }
    rep.macro_f = f_sum / static_cast<double>(c);

    if (c == 2) {
        if (positive_class < 0) {
            // Default positive class: the minority class of the evaluated labels.
            std::size_t n1 = 0;
            for (int label : labels) n1 += static_cast<std::size_t>(label == 1);
            positive_class = 2 * n1 <= labels.size() ? 1 : 0;
        }
        std::vector<double> scores(labels.size());
        std::vector<int> binary(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            scores[i] = proba(i, static_cast<std::size_t>(positive_class));
            binary[i] = labels[i] == positive_class ? 1 : 0;
        }
        rep.positive_class = positive_class;
        rep.auc_or_mauc = auc_binary(scores, binary);
    } else {
        rep.auc_or_mauc = mauc(proba, labels);
    }
    return rep;
}

std::string MetricsReport::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"accuracy\":" << accuracy << ",\"macro_f\":" << macro_f
       << ",\"macro_gmean\":" << macro_gmean << ",\"auc_or_mauc\":" << auc_or_mauc
       << ",\"positive_class\":" << positive_class << ",\"per_class_precision\":[";
    for (std::size_t i = 0; i < per_class.size(); ++i)
        os << (i ? "," : "") << per_class[i].precision;
    os << "],\"per_class_recall\":[";
    for (std::size_t i = 0; i < per_class.size(); ++i)
        os << (i ? "," : "") << per_class[i].recall;
    os << "],\"per_class_f\":[";
    for (std::size_t i = 0; i < per_class.size(); ++i)
        os << (i ? "," : "") << per_class[i].f;
    os << "],\"confusion\":[";
    for (std::size_t t = 0; t < confusion.num_classes; ++t) {
        os << (t ? ",[" : "[");
        for (std::size_t p = 0; p < confusion.num_classes; ++p)
            os << (p ? "," : "") << confusion.at(t, p);
        os << "]";
    }
    os << "]}";
    return os.str();
}

}  // namespace scltpe
