#pragma once

#include <string>
#include <utility>
#include <vector>

#include "scltpe/matrix.hpp"
#include "scltpe/rng.hpp"

namespace scltpe {

// A tabular classification dataset: N x d features plus integer labels in
// 0..C-1. Class ids follow the order of first appearance in the source file.
struct Dataset {
    Matrix x;
    std::vector<int> y;
    std::vector<std::string> class_names;
    std::vector<std::string> feature_names;

    std::size_t size() const { return x.rows; }
    std::size_t features() const { return x.cols; }
    std::size_t num_classes() const { return class_names.size(); }

    // Per-class sample counts, length num_classes().
    std::vector<std::size_t> class_counts() const;

    // Subset by row indices (kept in the given order).
    Dataset subset(const std::vector<std::size_t>& idx) const;

    // Checks the structural invariants (finite features, labels in range,
    // no empty class). Throws on violation.
    void validate() const;
};

// Per-feature standardization statistics fitted on a training split.
struct NormalizationStats {
    std::vector<double> mean;
    std::vector<double> std;  // clamped below at 1e-12
};

// Two independently noised copies of each selected sample. Row pairs
// (2k, 2k+1) share source index k and its label.
struct AugmentedBatch {
    Matrix x;                        // 2B x d
    std::vector<int> y;              // 2B
    std::vector<std::size_t> source; // 2B, values in 0..B-1

    // pair_map[i] = index of the sibling view of row i.
    std::vector<std::size_t> pair_map() const;
};

Dataset load_keel(const std::string& path);
Dataset load_csv(const std::string& path, int label_column = -1);

// Loads by extension: ".dat" -> KEEL, otherwise CSV.
Dataset load_auto(const std::string& path);

void write_csv(const Dataset& ds, const std::string& path);

NormalizationStats zscore_fit(const Dataset& train);
Dataset zscore_apply(const NormalizationStats& stats, const Dataset& ds);

// Deterministic stratified split. Per-class test count is
// round(count * test_fraction), clamped to [1, count-1] for classes with at
// least two members; singleton classes go entirely to train with a warning.
std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double test_fraction,
                                             std::uint64_t seed);

// B indices drawn uniformly with replacement.
std::vector<std::size_t> sample_batch(const Dataset& ds, std::size_t batch_size,
                                      Rng& rng);

// Emits each selected row twice with independent additive N(0, sigma^2)
// noise per feature.
AugmentedBatch augment_two_views(const Dataset& ds,
                                 const std::vector<std::size_t>& indices,
                                 double sigma, Rng& rng);

}  // namespace scltpe
