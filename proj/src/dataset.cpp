#include "scltpe/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "scltpe/errors.hpp"

namespace scltpe {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

double parse_double(const std::string& tok, std::size_t line_no, std::size_t col_no) {
    const std::string t = trim(tok);
    if (t.empty())
        throw parse_error("missing value at line " + std::to_string(line_no) +
                          ", column " + std::to_string(col_no + 1));
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || !std::isfinite(v))
        throw parse_error("non-numeric feature '" + t + "' at line " +
                          std::to_string(line_no) + ", column " +
                          std::to_string(col_no + 1));
    return v;
}

int class_index(std::vector<std::string>& names, const std::string& token) {
    auto it = std::find(names.begin(), names.end(), token);
    if (it != names.end()) return static_cast<int>(it - names.begin());
    names.push_back(token);
    return static_cast<int>(names.size()) - 1;
}

Dataset finish_dataset(std::vector<std::vector<double>> rows, std::vector<int> y,
                       std::vector<std::string> class_names,
                       std::vector<std::string> feature_names,
                       const std::string& path) {
    if (rows.empty()) throw parse_error(path + ": no data rows");
    Dataset ds;
    ds.x = Matrix(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        std::copy(rows[i].begin(), rows[i].end(), ds.x.row(i));
    ds.y = std::move(y);
    ds.class_names = std::move(class_names);
    ds.feature_names = std::move(feature_names);
    if (ds.class_names.size() == 1)
        std::cerr << "warning: " << path << " contains a single class '"
                  << ds.class_names[0] << "'\n";
    ds.validate();
    return ds;
}

}  // namespace

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(num_classes(), 0);
    for (int label : y) counts[static_cast<std::size_t>(label)] += 1;
    return counts;
}

Dataset Dataset::subset(const std::vector<std::size_t>& idx) const {
    Dataset out;
    out.x = take_rows(x, idx);
    out.y.reserve(idx.size());
    for (std::size_t i : idx) out.y.push_back(y[i]);
    out.class_names = class_names;
    out.feature_names = feature_names;
    return out;
}

void Dataset::validate() const {
    if (x.rows != y.size()) throw dimension_error("dataset: row/label count mismatch");
    if (!x.all_finite()) throw numeric_error("dataset: non-finite feature value");
    const int c = static_cast<int>(num_classes());
    for (int label : y)
        if (label < 0 || label >= c)
            throw dimension_error("dataset: label out of range");
    for (std::size_t count : class_counts())
        if (count == 0) throw dimension_error("dataset: empty class");
}

std::vector<std::size_t> AugmentedBatch::pair_map() const {
    std::vector<std::size_t> pm(source.size());
    for (std::size_t i = 0; i < pm.size(); ++i) pm[i] = (i % 2 == 0) ? i + 1 : i - 1;
    return pm;
}

Dataset load_keel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);

    std::vector<std::string> attr_names;
    std::vector<bool> attr_nominal;
    std::vector<std::string> class_values;  // declared values of the class attribute
    bool in_data = false;
    std::size_t line_no = 0;

    std::vector<std::vector<double>> rows;
    std::vector<int> y;
    std::vector<std::string> class_names;

    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '%') continue;
        if (!in_data && t[0] == '@') {
            const std::string low = lower(t);
            if (low.rfind("@relation", 0) == 0 || low.rfind("@inputs", 0) == 0 ||
                low.rfind("@input", 0) == 0 || low.rfind("@outputs", 0) == 0 ||
                low.rfind("@output", 0) == 0)
                continue;
            if (low.rfind("@attribute", 0) == 0) {
                std::string rest = trim(t.substr(std::string("@attribute").size()));
                // name up to whitespace, '{' or '['
                std::size_t p = rest.find_first_of(" \t{[");
                std::string name = p == std::string::npos ? rest : rest.substr(0, p);
                std::string kind = p == std::string::npos ? "" : trim(rest.substr(p));
                attr_names.push_back(name);
                if (!kind.empty() && kind[0] == '{') {
                    attr_nominal.push_back(true);
                    std::size_t close = kind.find('}');
                    if (close == std::string::npos)
                        throw parse_error(path + ":" + std::to_string(line_no) +
                                          ": unterminated nominal attribute");
                    class_values = split_commas(kind.substr(1, close - 1));
                } else {
                    attr_nominal.push_back(false);
                }
                continue;
            }
            if (low.rfind("@data", 0) == 0) {
                if (attr_names.empty())
                    throw parse_error(path + ":" + std::to_string(line_no) +
                                      ": @data before any @attribute");
                for (std::size_t i = 0; i + 1 < attr_nominal.size(); ++i)
                    if (attr_nominal[i])
                        throw parse_error(path + ": nominal non-class attribute '" +
                                          attr_names[i] + "' is not supported");
                if (!attr_nominal.back())
                    throw parse_error(path + ": last attribute must be the nominal class");
                in_data = true;
                continue;
            }
            throw parse_error(path + ":" + std::to_string(line_no) +
                              ": unknown header directive '" + t + "'");
        }
        if (!in_data)
            throw parse_error(path + ":" + std::to_string(line_no) +
                              ": data row before @data");
        const std::vector<std::string> toks = split_commas(t);
        if (toks.size() != attr_names.size())
            throw parse_error(path + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(attr_names.size()) + " values, got " +
                              std::to_string(toks.size()));
        std::vector<double> row(toks.size() - 1);
        for (std::size_t j = 0; j + 1 < toks.size(); ++j)
            row[j] = parse_double(toks[j], line_no, j);
        const std::string cls = toks.back();
        if (!class_values.empty() &&
            std::find(class_values.begin(), class_values.end(), cls) == class_values.end())
            throw parse_error(path + ":" + std::to_string(line_no) +
                              ": unknown class token '" + cls + "'");
        y.push_back(class_index(class_names, cls));
        rows.push_back(std::move(row));
    }
    if (!in_data) throw parse_error(path + ": missing @data section");
    std::vector<std::string> feature_names(attr_names.begin(), attr_names.end() - 1);
    return finish_dataset(std::move(rows), std::move(y), std::move(class_names),
                          std::move(feature_names), path);
}

Dataset load_csv(const std::string& path, int label_column) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw parse_error(path + ": empty file");
    std::vector<std::string> header = split_commas(trim(line));
    const std::size_t ncols = header.size();
    if (ncols < 2) throw parse_error(path + ": need at least one feature and a label");
    const std::size_t label_idx =
        label_column < 0 ? ncols - 1 : static_cast<std::size_t>(label_column);
    if (label_idx >= ncols) throw parse_error(path + ": label column out of range");

    std::vector<std::string> feature_names;
    for (std::size_t j = 0; j < ncols; ++j)
        if (j != label_idx) feature_names.push_back(header[j]);

    std::vector<std::vector<double>> rows;
    std::vector<int> y;
    std::vector<std::string> class_names;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::vector<std::string> toks = split_commas(t);
        if (toks.size() != ncols)
            throw parse_error(path + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(ncols) + " values, got " +
                              std::to_string(toks.size()));
        std::vector<double> row;
        row.reserve(ncols - 1);
        for (std::size_t j = 0; j < ncols; ++j) {
            if (j == label_idx) continue;
            row.push_back(parse_double(toks[j], line_no, j));
        }
        const std::string cls = trim(toks[label_idx]);
        if (cls.empty())
            throw parse_error(path + ":" + std::to_string(line_no) +
                              ": missing class label in column " +
                              std::to_string(label_idx + 1));
        y.push_back(class_index(class_names, cls));
        rows.push_back(std::move(row));
    }
    return finish_dataset(std::move(rows), std::move(y), std::move(class_names),
                          std::move(feature_names), path);
}

Dataset load_auto(const std::string& path) {
    const std::size_t dot = path.find_last_of('.');
    const std::string ext = dot == std::string::npos ? "" : lower(path.substr(dot));
    if (ext == ".dat" || ext == ".keel" || ext == ".arff") return load_keel(path);
    return load_csv(path);
}

void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write " + path);
    for (std::size_t j = 0; j < ds.features(); ++j) {
        if (j < ds.feature_names.size() && !ds.feature_names[j].empty())
            out << ds.feature_names[j];
        else
            out << "f" << j;
        out << ',';
    }
    out << "class\n";
    char buf[40];
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t j = 0; j < ds.features(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", ds.x(i, j));
            out << buf << ',';
        }
        out << ds.class_names[static_cast<std::size_t>(ds.y[i])] << '\n';
    }
}

NormalizationStats zscore_fit(const Dataset& train) {
    const std::size_t d = train.features();
    const double n = static_cast<double>(train.size());
    NormalizationStats stats;
    stats.mean.assign(d, 0.0);
    stats.std.assign(d, 0.0);
    for (std::size_t i = 0; i < train.size(); ++i)
        for (std::size_t j = 0; j < d; ++j) stats.mean[j] += train.x(i, j);
    for (double& m : stats.mean) m /= n;
    for (std::size_t i = 0; i < train.size(); ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const double dlt = train.x(i, j) - stats.mean[j];
            stats.std[j] += dlt * dlt;
        }
    for (double& s : stats.std) s = std::max(std::sqrt(s / n), 1e-12);
    return stats;
}

Dataset zscore_apply(const NormalizationStats& stats, const Dataset& ds) {
    if (stats.mean.size() != ds.features())
        throw dimension_error("zscore_apply: stats feature count mismatch");
    Dataset out = ds;
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = 0; j < out.features(); ++j)
            out.x(i, j) = (out.x(i, j) - stats.mean[j]) / stats.std[j];
    return out;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double test_fraction,
                                             std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw config_error("test_fraction must be in (0,1)");
    Rng rng = Rng::substream(seed, "split");
    std::vector<std::vector<std::size_t>> by_class(ds.num_classes());
    for (std::size_t i = 0; i < ds.size(); ++i)
        by_class[static_cast<std::size_t>(ds.y[i])].push_back(i);

    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto& idx = by_class[c];
        if (idx.size() < 2) {
            std::cerr << "warning: class '" << ds.class_names[c]
                      << "' has one member; assigning it to train\n";
            train_idx.insert(train_idx.end(), idx.begin(), idx.end());
            continue;
        }
        // Fisher-Yates with the shared rng; deterministic given seed.
        for (std::size_t i = idx.size() - 1; i > 0; --i)
            std::swap(idx[i], idx[rng.uniform_index(i + 1)]);
        const double want = static_cast<double>(idx.size()) * test_fraction;
        std::size_t n_test = static_cast<std::size_t>(std::llround(want));
        n_test = std::clamp<std::size_t>(n_test, 1, idx.size() - 1);
        test_idx.insert(test_idx.end(), idx.begin(), idx.begin() + n_test);
        train_idx.insert(train_idx.end(), idx.begin() + n_test, idx.end());
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
    return {ds.subset(train_idx), ds.subset(test_idx)};
}

std::vector<std::size_t> sample_batch(const Dataset& ds, std::size_t batch_size,
                                      Rng& rng) {
    if (batch_size < 2) throw config_error("batch size must be at least 2");
    std::vector<std::size_t> idx(batch_size);
    for (std::size_t& i : idx) i = rng.uniform_index(ds.size());
    return idx;
}

AugmentedBatch augment_two_views(const Dataset& ds,
                                 const std::vector<std::size_t>& indices,
                                 double sigma, Rng& rng) {
    const std::size_t b = indices.size();
    const std::size_t d = ds.features();
    AugmentedBatch batch;
    batch.x = Matrix(2 * b, d);
    batch.y.resize(2 * b);
    batch.source.resize(2 * b);
    for (std::size_t k = 0; k < b; ++k) {
        const double* src = ds.x.row(indices[k]);
        for (std::size_t view = 0; view < 2; ++view) {
            const std::size_t r = 2 * k + view;
            double* dst = batch.x.row(r);
            for (std::size_t j = 0; j < d; ++j)
                dst[j] = src[j] + (sigma > 0.0 ? sigma * rng.normal() : 0.0);
            batch.y[r] = ds.y[indices[k]];
            batch.source[r] = k;
        }
    }
    return batch;
}

}  // namespace scltpe
