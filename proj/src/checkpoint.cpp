#include "scltpe/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "scltpe/errors.hpp"

namespace scltpe {

namespace {

constexpr const char* kMagic = "scltpe-checkpoint";
constexpr int kVersion = 1;

void write_value(std::ostream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

void write_vector(std::ostream& out, const char* tag, const std::vector<double>& v) {
    out << tag << ' ' << v.size();
    for (double x : v) {
        out << ' ';
        write_value(out, x);
    }
    out << '\n';
}

void write_tensor(std::ostream& out, const Matrix& m) {
    out << "tensor " << m.rows << ' ' << m.cols;
    for (double x : m.data) {
        out << ' ';
        write_value(out, x);
    }
    out << '\n';
}

void write_mlp(std::ostream& out, const char* tag, const MlpParams& p) {
    out << tag << ' ' << p.num_layers() << '\n';
    for (std::size_t l = 0; l < p.num_layers(); ++l) {
        write_tensor(out, p.weights[l].value);
        write_tensor(out, p.biases[l].value);
    }
}

void expect(std::istream& in, const std::string& tag, const std::string& path) {
    std::string got;
    if (!(in >> got) || got != tag)
        throw parse_error(path + ": checkpoint corrupt, expected '" + tag + "', got '" +
                          got + "'");
}

std::vector<double> read_vector(std::istream& in, const std::string& tag,
                                const std::string& path) {
    expect(in, tag, path);
    std::size_t n = 0;
    in >> n;
    std::vector<double> v(n);
    for (double& x : v)
        if (!(in >> x)) throw parse_error(path + ": truncated " + tag);
    return v;
}

Matrix read_tensor(std::istream& in, const std::string& path) {
    expect(in, "tensor", path);
    std::size_t r = 0, c = 0;
    in >> r >> c;
    Matrix m(r, c);
    for (double& x : m.data)
        if (!(in >> x)) throw parse_error(path + ": truncated tensor");
    return m;
}

MlpParams read_mlp(std::istream& in, const std::string& tag, const std::string& path) {
    expect(in, tag, path);
    std::size_t layers = 0;
    in >> layers;
    MlpParams p;
    for (std::size_t l = 0; l < layers; ++l) {
        p.weights.emplace_back(read_tensor(in, path));
        p.biases.emplace_back(read_tensor(in, path));
    }
    return p;
}

}  // namespace

void Checkpoint::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write checkpoint " + path);
    out << kMagic << ' ' << kVersion << '\n';
    out << "tau ";
    write_value(out, tau);
    out << '\n';
    out << "classes " << class_names.size() << '\n';
    for (const std::string& name : class_names) out << "class " << name << '\n';
    write_vector(out, "mean", stats.mean);
    write_vector(out, "std", stats.std);
    out << "normalize_embeddings " << (encoder.normalize_output ? 1 : 0) << '\n';
    write_mlp(out, "encoder", encoder.net);
    write_mlp(out, "classifier", head.net);
}

Checkpoint Checkpoint::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open checkpoint " + path);
    Checkpoint ck;
    expect(in, kMagic, path);
    int version = 0;
    in >> version;
    if (version != kVersion)
        throw parse_error(path + ": unsupported checkpoint version " +
                          std::to_string(version));
    expect(in, "tau", path);
    in >> ck.tau;
    expect(in, "classes", path);
    std::size_t n_classes = 0;
    in >> n_classes;
    for (std::size_t c = 0; c < n_classes; ++c) {
        expect(in, "class", path);
        std::string rest;
        std::getline(in >> std::ws, rest);
        ck.class_names.push_back(rest);
    }
    ck.stats.mean = read_vector(in, "mean", path);
    ck.stats.std = read_vector(in, "std", path);
    expect(in, "normalize_embeddings", path);
    int normalize = 1;
    in >> normalize;
    ck.encoder.normalize_output = normalize != 0;
    ck.encoder.net = read_mlp(in, "encoder", path);
    ck.head.net = read_mlp(in, "classifier", path);
    return ck;
}

}  // namespace scltpe
