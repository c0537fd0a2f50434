#pragma once

#include <string>
#include <vector>

#include "scltpe/matrix.hpp"

namespace scltpe {

// C x C counts; entry (t, p) = samples of true class t predicted as p.
struct ConfusionMatrix {
    std::size_t num_classes = 0;
    std::vector<std::size_t> counts;

    explicit ConfusionMatrix(std::size_t c = 0)
        : num_classes(c), counts(c * c, 0) {}

    std::size_t& at(std::size_t t, std::size_t p) { return counts[t * num_classes + p]; }
    std::size_t at(std::size_t t, std::size_t p) const {
        return counts[t * num_classes + p];
    }
    std::size_t total() const;
    std::size_t row_total(std::size_t t) const;
    std::size_t col_total(std::size_t p) const;
};

ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                          std::size_t num_classes);

double accuracy(const ConfusionMatrix& cm);

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f = 0.0;
};

// 0/0 cases return 0 by convention.
Prf precision_recall_f(const ConfusionMatrix& cm, std::size_t positive_class);

// Geometric mean of per-class recalls; zero if any class is entirely missed.
double gmean(const ConfusionMatrix& cm);

// Mann-Whitney AUC with exact tie handling: P(s+ > s-) + 0.5 P(s+ = s-).
// labels are 0/1 with 1 the positive class; both classes must be present.
double auc_binary(const std::vector<double>& scores, const std::vector<int>& labels);

// One-vs-one multi-class AUC: mean of AUC(j|k) + AUC(k|j) over unordered
// class pairs, where AUC(j|k) scores class-j probability on samples of
// classes j and k only. Pairs missing a class are skipped and the divisor
// adjusted.
double mauc(const Matrix& proba, const std::vector<int>& labels);

// One-vs-rest alternative: unweighted mean over present classes of the AUC
// of each class column against all other samples.
double mauc_one_vs_rest(const Matrix& proba, const std::vector<int>& labels);

struct MetricsReport {
    double accuracy = 0.0;
    double macro_f = 0.0;
    double macro_gmean = 0.0;
    double auc_or_mauc = 0.0;
    std::vector<Prf> per_class;
    ConfusionMatrix confusion;
    int positive_class = -1;  // binary runs only, -1 otherwise

    std::string to_json() const;
};

// Aggregates everything above. Binary problems report auc_binary on the
// positive-class column (default: the minority class of `labels`);
// multi-class problems report the one-vs-one MAUC.
MetricsReport report(const Matrix& proba, const std::vector<int>& labels,
                     int positive_class = -1);

}  // namespace scltpe
