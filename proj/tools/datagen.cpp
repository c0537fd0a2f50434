// Generates the synthetic fixtures shipped under data/. Deterministic: the
// same invocation always produces byte-identical files.
//
//   datagen glass0 <path>   214 x 9 binary KEEL file, counts 144/70
//   datagen blobs3 <path>   150 x 4 three-class CSV, counts 20/60/70

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "scltpe/rng.hpp"

using scltpe::Rng;

namespace {

struct Row {
    std::vector<double> x;
    int label = 0;
};

// Two-class task shaped like a small oxide-chemistry table: 9 features,
// majority 144 / minority 70. Each class is a two-lobe Gaussian mixture in a
// 5-dimensional informative subspace; two features are nonlinear functions
// of the informative ones, two are pure noise. Difficulty is tuned so that
// plain KNN sits near AUC 0.8, leaving visible headroom for the learned
// embedding.
std::vector<Row> make_glass0(Rng& rng) {
    const std::size_t counts[2] = {144, 70};
    const double sep = 1.18;
    // Lobe centers per class in the informative subspace.
    const double centers[2][2][5] = {
        {{0, 0, 0, 0, 0}, {sep, -sep, 0.5 * sep, 0, -0.5 * sep}},
        {{sep, sep, -sep, 0.5 * sep, 0}, {-0.5 * sep, 2 * sep, sep, -sep, 0.5 * sep}},
    };
    const double lobe_prob[2] = {0.62, 0.55};
    const double spread[2] = {1.45, 1.28};

    std::vector<Row> rows;
    for (int c = 0; c < 2; ++c) {
        for (std::size_t i = 0; i < counts[c]; ++i) {
            const int lobe = rng.uniform() < lobe_prob[c] ? 0 : 1;
            double u[5];
            for (double& v : u) v = rng.normal();
            Row r;
            r.label = c;
            r.x.resize(9);
            for (int j = 0; j < 5; ++j)
                r.x[j] = centers[c][lobe][j] + spread[c] * u[j];
            r.x[5] = 0.6 * r.x[0] * r.x[1] + 1.1 * rng.normal();
            r.x[6] = std::abs(r.x[2]) - 0.4 * r.x[3] + 1.1 * rng.normal();
            r.x[7] = rng.normal();
            r.x[8] = rng.normal();
            rows.push_back(std::move(r));
        }
    }
    // Map to chemistry-like offsets/scales so normalization has real work.
    const double offset[9] = {1.5185, 13.4, 2.68, 1.44, 72.65, 0.50, 8.96, 0.18, 0.057};
    const double scale[9] = {0.0009, 0.82, 1.44, 0.50, 0.77, 0.65, 1.42, 0.49, 0.097};
    for (Row& r : rows)
        for (int j = 0; j < 9; ++j) r.x[j] = offset[j] + scale[j] * r.x[j];

    for (std::size_t i = rows.size() - 1; i > 0; --i)
        std::swap(rows[i], rows[rng.uniform_index(i + 1)]);
    return rows;
}

std::vector<Row> make_blobs3(Rng& rng) {
    const std::size_t counts[3] = {20, 60, 70};
    const double centers[3][4] = {
        {0, 0, 0, 0}, {2.2, 1.8, -0.5, 0.6}, {-1.6, 2.4, 1.2, -1.0}};
    std::vector<Row> rows;
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < counts[c]; ++i) {
            Row r;
            r.label = c;
            r.x.resize(4);
            for (int j = 0; j < 4; ++j) r.x[j] = centers[c][j] + 1.1 * rng.normal();
            rows.push_back(std::move(r));
        }
    }
    for (std::size_t i = rows.size() - 1; i > 0; --i)
        std::swap(rows[i], rows[rng.uniform_index(i + 1)]);
    return rows;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void write_keel(const std::vector<Row>& rows, const std::vector<std::string>& features,
                const std::vector<std::string>& classes, const std::string& relation,
                const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        std::cerr << "cannot write " << path << '\n';
        std::exit(1);
    }
    const std::size_t d = features.size();
    std::vector<double> lo(d, 1e300), hi(d, -1e300);
    for (const Row& r : rows)
        for (std::size_t j = 0; j < d; ++j) {
            lo[j] = std::min(lo[j], r.x[j]);
            hi[j] = std::max(hi[j], r.x[j]);
        }
    out << "@relation " << relation << '\n';
    for (std::size_t j = 0; j < d; ++j)
        out << "@attribute " << features[j] << " real [" << fmt(lo[j]) << ", "
            << fmt(hi[j]) << "]\n";
    out << "@attribute Class {" << classes[0];
    for (std::size_t c = 1; c < classes.size(); ++c) out << ", " << classes[c];
    out << "}\n@inputs " << features[0];
    for (std::size_t j = 1; j < d; ++j) out << ", " << features[j];
    out << "\n@outputs Class\n@data\n";
    for (const Row& r : rows) {
        for (std::size_t j = 0; j < d; ++j) out << fmt(r.x[j]) << ", ";
        out << classes[static_cast<std::size_t>(r.label)] << '\n';
    }
}

void write_csv(const std::vector<Row>& rows, const std::vector<std::string>& features,
               const std::vector<std::string>& classes, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        std::cerr << "cannot write " << path << '\n';
        std::exit(1);
    }
    for (const auto& f : features) out << f << ',';
    out << "class\n";
    for (const Row& r : rows) {
        for (double v : r.x) out << fmt(v) << ',';
        out << classes[static_cast<std::size_t>(r.label)] << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: datagen glass0|blobs3 <path>\n";
        return 2;
    }
    const std::string kind = argv[1];
    const std::string path = argv[2];
    if (kind == "glass0") {
        Rng rng(20240117);
        const auto rows = make_glass0(rng);
        write_keel(rows, {"RI", "Na", "Mg", "Al", "Si", "K", "Ca", "Ba", "Fe"},
                   {"negative", "positive"}, "glass0_synth", path);
        std::cout << "wrote " << rows.size() << " rows to " << path << '\n';
    } else if (kind == "blobs3") {
        Rng rng(57105);
        const auto rows = make_blobs3(rng);
        write_csv(rows, {"a", "b", "c", "d"}, {"small", "mid", "large"}, path);
        std::cout << "wrote " << rows.size() << " rows to " << path << '\n';
    } else {
        std::cerr << "unknown fixture kind '" << kind << "'\n";
        return 2;
    }
    return 0;
}
