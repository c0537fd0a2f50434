#pragma once

#include <cstdint>
#include <vector>

#include "scltpe/dataset.hpp"

namespace scltpe {

// Random oversampling: every class is upsampled with replacement to the
// majority count. Duplicates are exact row copies.
Dataset ros(const Dataset& ds, std::uint64_t seed);

// Random undersampling: every class is downsampled without replacement to
// the minority count.
Dataset rus(const Dataset& ds, std::uint64_t seed);

// Linear interpolation between a and b at fraction lambda in [0,1].
std::vector<double> smote_interpolate(const std::vector<double>& a,
                                      const std::vector<double>& b, double lambda);

// SMOTE: minority classes grow to the majority count with synthetic rows
// x + lambda*(nn - x), nn one of the k nearest same-class neighbors,
// lambda ~ U(0,1), cycling round-robin over the class members. k is clamped
// to class size - 1; a singleton class falls back to replication.
Dataset smote(const Dataset& ds, std::size_t k, std::uint64_t seed);

struct KnnResult {
    std::vector<int> labels;
    Matrix vote_proba;  // n x C neighbor vote fractions
};

// Euclidean k-nearest-neighbor vote; ties break toward the lowest class
// index. Vote fractions serve as scores for AUC.
KnnResult knn_predict(const Dataset& train, const Matrix& x, std::size_t k);

}  // namespace scltpe
