#include "scltpe/resample.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "scltpe/errors.hpp"

namespace scltpe {

namespace {

std::vector<std::vector<std::size_t>> indices_by_class(const Dataset& ds) {
    std::vector<std::vector<std::size_t>> by_class(ds.num_classes());
    for (std::size_t i = 0; i < ds.size(); ++i)
        by_class[static_cast<std::size_t>(ds.y[i])].push_back(i);
    return by_class;
}

Dataset from_rows(const Dataset& ds, const std::vector<std::size_t>& keep,
                  const std::vector<std::vector<double>>& synthetic,
                  const std::vector<int>& synthetic_labels) {
    Dataset out;
    out.x = Matrix(keep.size() + synthetic.size(), ds.features());
    out.y.reserve(keep.size() + synthetic.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        std::copy(ds.x.row(keep[i]), ds.x.row(keep[i]) + ds.features(), out.x.row(i));
        out.y.push_back(ds.y[keep[i]]);
    }
    for (std::size_t s = 0; s < synthetic.size(); ++s) {
        std::copy(synthetic[s].begin(), synthetic[s].end(),
                  out.x.row(keep.size() + s));
        out.y.push_back(synthetic_labels[s]);
    }
    out.class_names = ds.class_names;
    out.feature_names = ds.feature_names;
    out.validate();
    return out;
}

}  // namespace

Dataset ros(const Dataset& ds, std::uint64_t seed) {
    Rng rng = Rng::substream(seed, "resample");
    const auto by_class = indices_by_class(ds);
    const std::size_t target =
        std::max_element(by_class.begin(), by_class.end(),
                         [](const auto& a, const auto& b) { return a.size() < b.size(); })
            ->size();
    std::vector<std::size_t> keep;
    for (const auto& idx : by_class) {
        keep.insert(keep.end(), idx.begin(), idx.end());
        for (std::size_t n = idx.size(); n < target; ++n)
            keep.push_back(idx[rng.uniform_index(idx.size())]);
    }
    return from_rows(ds, keep, {}, {});
}

Dataset rus(const Dataset& ds, std::uint64_t seed) {
    Rng rng = Rng::substream(seed, "resample");
    auto by_class = indices_by_class(ds);
    const std::size_t target =
        std::min_element(by_class.begin(), by_class.end(),
                         [](const auto& a, const auto& b) { return a.size() < b.size(); })
            ->size();
    std::vector<std::size_t> keep;
    for (auto& idx : by_class) {
        for (std::size_t i = idx.size() - 1; i > 0; --i)
            std::swap(idx[i], idx[rng.uniform_index(i + 1)]);
        keep.insert(keep.end(), idx.begin(), idx.begin() + target);
    }
    std::sort(keep.begin(), keep.end());
    return from_rows(ds, keep, {}, {});
}

std::vector<double> smote_interpolate(const std::vector<double>& a,
                                      const std::vector<double>& b, double lambda) {
    if (a.size() != b.size()) throw dimension_error("smote_interpolate: size mismatch");
    std::vector<double> out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] + lambda * (b[j] - a[j]);
    return out;
}

Dataset smote(const Dataset& ds, std::size_t k, std::uint64_t seed) {
    if (k < 1) throw config_error("smote: k must be >= 1");
    Rng rng = Rng::substream(seed, "resample");
    const auto by_class = indices_by_class(ds);
    const std::size_t target =
        std::max_element(by_class.begin(), by_class.end(),
                         [](const auto& a, const auto& b) { return a.size() < b.size(); })
            ->size();
    const std::size_t d = ds.features();

    std::vector<std::size_t> keep(ds.size());
    std::iota(keep.begin(), keep.end(), 0);
    std::vector<std::vector<double>> synthetic;
    std::vector<int> synthetic_labels;

    for (std::size_t c = 0; c < by_class.size(); ++c) {
        const auto& idx = by_class[c];
        if (idx.size() >= target) continue;
        if (idx.size() == 1) {
            std::cerr << "warning: smote: class '" << ds.class_names[c]
                      << "' has a single member; replicating it instead\n";
            for (std::size_t n = idx.size(); n < target; ++n) {
                const double* row = ds.x.row(idx[0]);
                synthetic.emplace_back(row, row + d);
                synthetic_labels.push_back(static_cast<int>(c));
            }
            continue;
        }
        const std::size_t kc = std::min(k, idx.size() - 1);
        // Brute-force neighbor lists within the class; sizes stay small.
        std::vector<std::vector<std::size_t>> neighbors(idx.size());
        for (std::size_t a = 0; a < idx.size(); ++a) {
            std::vector<std::pair<double, std::size_t>> dist;
            dist.reserve(idx.size() - 1);
            for (std::size_t b = 0; b < idx.size(); ++b) {
                if (a == b) continue;
                double s = 0.0;
                const double* ra = ds.x.row(idx[a]);
                const double* rb = ds.x.row(idx[b]);
                for (std::size_t j = 0; j < d; ++j) {
                    const double delta = ra[j] - rb[j];
                    s += delta * delta;
                }
                dist.emplace_back(s, b);
            }
            std::sort(dist.begin(), dist.end());
            for (std::size_t m = 0; m < kc; ++m)
                neighbors[a].push_back(dist[m].second);
        }
        std::size_t cursor = 0;
        for (std::size_t n = idx.size(); n < target; ++n) {
            const std::size_t a = cursor++ % idx.size();
            const std::size_t b = neighbors[a][rng.uniform_index(kc)];
            const double lambda = rng.uniform();
            const double* ra = ds.x.row(idx[a]);
            const double* rb = ds.x.row(idx[b]);
            synthetic.push_back(smote_interpolate(std::vector<double>(ra, ra + d),
                                                  std::vector<double>(rb, rb + d),
                                                  lambda));
            synthetic_labels.push_back(static_cast<int>(c));
        }
    }
    return from_rows(ds, keep, synthetic, synthetic_labels);
}

KnnResult knn_predict(const Dataset& train, const Matrix& x, std::size_t k) {
    if (k < 1 || k > train.size())
        throw config_error("knn: k must be in [1, train size]");
    if (x.cols != train.features()) throw dimension_error("knn: feature count mismatch");
    const std::size_t c = train.num_classes();
    KnnResult res;
    res.labels.resize(x.rows);
    res.vote_proba = Matrix(x.rows, c);

    std::vector<std::pair<double, std::size_t>> dist(train.size());
    for (std::size_t q = 0; q < x.rows; ++q) {
        const double* xq = x.row(q);
        for (std::size_t i = 0; i < train.size(); ++i) {
            double s = 0.0;
            const double* ti = train.x.row(i);
            for (std::size_t j = 0; j < x.cols; ++j) {
                const double delta = xq[j] - ti[j];
                s += delta * delta;
            }
            dist[i] = {s, i};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k), dist.end());
        double* votes = res.vote_proba.row(q);
        for (std::size_t m = 0; m < k; ++m)
            votes[static_cast<std::size_t>(train.y[dist[m].second])] += 1.0;
        std::size_t best = 0;
        for (std::size_t j = 0; j < c; ++j) {
            votes[j] /= static_cast<double>(k);
            if (votes[j] > votes[best]) best = j;
        }
        res.labels[q] = static_cast<int>(best);
    }
    return res;
}

}  // namespace scltpe
