#pragma once

#include <cstdint>
#include <vector>

#include "scltpe/dataset.hpp"
#include "scltpe/encoder.hpp"
#include "scltpe/matrix.hpp"

namespace scltpe {

// Softmax head trained on frozen-encoder embeddings:
// linear -> ReLU -> linear -> softmax, widths (h, m, C).
struct ClassifierSpec {
    std::vector<std::size_t> layer_widths;
    std::size_t epochs = 25;
    std::size_t batch_size = 128;
    std::size_t steps_per_epoch = 1;
    double lr = 0.001;
    std::uint64_t seed = 0;

    void validate(std::size_t input_width, std::size_t num_classes) const;
};

struct ClassifierParams {
    MlpParams net;
};

// Mean negative log-softmax of the true class; gradient (softmax-onehot)/n.
struct CrossEntropyResult {
    double loss = 0.0;
    Matrix dlogits;
};

CrossEntropyResult cross_entropy(const Matrix& logits, const std::vector<int>& labels);

Matrix softmax_rows(const Matrix& logits);

// Trains the head on a fixed embedding matrix (the encoder never sees
// gradients; embeddings of the training set are computed once up front).
ClassifierParams train_classifier_on_embeddings(const Matrix& emb,
                                                const std::vector<int>& labels,
                                                const ClassifierSpec& spec,
                                                std::vector<double>* loss_trace = nullptr);

// encoder == nullptr trains the head on raw (normalized) features, the
// no-contrastive baseline.
ClassifierParams train_classifier(const EncoderParams* encoder, const Dataset& train,
                                  const ClassifierSpec& spec,
                                  std::vector<double>* loss_trace = nullptr);

// Rows are softmax distributions over classes.
Matrix predict_proba(const EncoderParams* encoder, const ClassifierParams& head,
                     const Matrix& x);

// Argmax per row; ties break toward the lowest class index.
std::vector<int> predict(const EncoderParams* encoder, const ClassifierParams& head,
                         const Matrix& x);

std::vector<int> argmax_rows(const Matrix& proba);

}  // namespace scltpe
