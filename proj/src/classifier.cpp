#include "scltpe/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scltpe/errors.hpp"

namespace scltpe {

void ClassifierSpec::validate(std::size_t input_width, std::size_t num_classes) const {
    if (layer_widths.size() < 2)
        throw config_error("classifier: need at least input and output widths");
    if (layer_widths.front() != input_width)
        throw config_error("classifier: input width " +
                           std::to_string(layer_widths.front()) +
                           " != embedding width " + std::to_string(input_width));
    if (layer_widths.back() != num_classes)
        throw config_error("classifier: output width " +
                           std::to_string(layer_widths.back()) + " != class count " +
                           std::to_string(num_classes));
    for (std::size_t w : layer_widths)
        if (w == 0) throw config_error("classifier: zero layer width");
    if (batch_size < 1) throw config_error("classifier: batch size must be >= 1");
}

Matrix softmax_rows(const Matrix& logits) {
    Matrix p = logits;
    for (std::size_t i = 0; i < p.rows; ++i) {
        double* row = p.row(i);
        const double m = *std::max_element(row, row + p.cols);
        double sum = 0.0;
        for (std::size_t j = 0; j < p.cols; ++j) {
            row[j] = std::exp(row[j] - m);
            sum += row[j];
        }
        for (std::size_t j = 0; j < p.cols; ++j) row[j] /= sum;
    }
    return p;
}

CrossEntropyResult cross_entropy(const Matrix& logits, const std::vector<int>& labels) {
    if (labels.size() != logits.rows)
        throw dimension_error("cross_entropy: label count mismatch");
    const std::size_t n = logits.rows;
    const std::size_t c = logits.cols;
    for (int label : labels)
        if (label < 0 || static_cast<std::size_t>(label) >= c)
            throw dimension_error("cross_entropy: label out of range");

    CrossEntropyResult res;
    res.dlogits = softmax_rows(logits);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t t = static_cast<std::size_t>(labels[i]);
        res.loss -= std::log(std::max(res.dlogits(i, t), 1e-300)) * inv_n;
        res.dlogits(i, t) -= 1.0;
    }
    res.dlogits *= inv_n;
    return res;
}

ClassifierParams train_classifier_on_embeddings(const Matrix& emb,
                                                const std::vector<int>& labels,
                                                const ClassifierSpec& spec,
                                                std::vector<double>* loss_trace) {
    if (emb.rows != labels.size())
        throw dimension_error("train_classifier: label count mismatch");

    Rng init_rng = Rng::substream(spec.seed, "clf-init");
    Rng batch_rng = Rng::substream(spec.seed, "clf-batch");
    ClassifierParams head;
    head.net = MlpParams::init(spec.layer_widths, init_rng);

    AdamHyper adam;
    adam.lr = spec.lr;
    adam.validate();

    const std::size_t n = emb.rows;
    std::vector<std::size_t> idx(spec.batch_size);
    std::vector<int> batch_labels(spec.batch_size);
    for (std::size_t epoch = 0; epoch < spec.epochs; ++epoch) {
        double epoch_loss = 0.0;
        for (std::size_t step = 0; step < spec.steps_per_epoch; ++step) {
            for (std::size_t k = 0; k < spec.batch_size; ++k) {
                idx[k] = batch_rng.uniform_index(n);
                batch_labels[k] = labels[idx[k]];
            }
            const Matrix xb = take_rows(emb, idx);
            MlpCache cache;
            const Matrix logits = mlp_forward(head.net, xb, &cache);
            CrossEntropyResult ce = cross_entropy(logits, batch_labels);
            if (!std::isfinite(ce.loss))
                throw numeric_error("train_classifier: non-finite loss at epoch " +
                                    std::to_string(epoch));
            epoch_loss += ce.loss;
            mlp_backward(head.net, cache, ce.dlogits);
            for (std::size_t l = 0; l < head.net.num_layers(); ++l) {
                adam_step(head.net.weights[l], adam);
                adam_step(head.net.biases[l], adam);
            }
        }
        if (loss_trace)
            loss_trace->push_back(epoch_loss / static_cast<double>(spec.steps_per_epoch));
    }
    return head;
}

ClassifierParams train_classifier(const EncoderParams* encoder, const Dataset& train,
                                  const ClassifierSpec& spec,
                                  std::vector<double>* loss_trace) {
    spec.validate(encoder ? encoder->net.output_width() : train.features(),
                  train.num_classes());
    const Matrix emb = encoder ? encode(*encoder, train.x) : train.x;
    return train_classifier_on_embeddings(emb, train.y, spec, loss_trace);
}

Matrix predict_proba(const EncoderParams* encoder, const ClassifierParams& head,
                     const Matrix& x) {
    if (x.rows == 0) return Matrix(0, head.net.output_width());
    const Matrix emb = encoder ? encode(*encoder, x) : x;
    return softmax_rows(mlp_forward(head.net, emb));
}

std::vector<int> argmax_rows(const Matrix& proba) {
    std::vector<int> out(proba.rows);
    for (std::size_t i = 0; i < proba.rows; ++i) {
        const double* row = proba.row(i);
        std::size_t best = 0;
        for (std::size_t j = 1; j < proba.cols; ++j)
            if (row[j] > row[best]) best = j;
        out[i] = static_cast<int>(best);
    }
    return out;
}

std::vector<int> predict(const EncoderParams* encoder, const ClassifierParams& head,
                         const Matrix& x) {
    return argmax_rows(predict_proba(encoder, head, x));
}

}  // namespace scltpe
