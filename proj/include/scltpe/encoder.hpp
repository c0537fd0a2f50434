#pragma once

#include <cstdint>
#include <vector>

#include "scltpe/dataset.hpp"
#include "scltpe/matrix.hpp"
#include "scltpe/nn_ops.hpp"

namespace scltpe {

enum class LossKind { supervised, self_supervised };

// Feature extractor shape: layer_widths = (d, h1, ..., h_out), ReLU on the
// hidden layers, optional L2 normalization of the output rows.
struct EncoderSpec {
    std::vector<std::size_t> layer_widths;
    bool normalize_output = true;
    double tau = 0.5;

    void validate(std::size_t feature_count) const;
};

// A stack of linear layers with trainable weights and biases.
struct MlpParams {
    std::vector<ParamTensor> weights;  // layer l: widths[l] x widths[l+1]
    std::vector<ParamTensor> biases;   // layer l: 1 x widths[l+1]

    std::size_t num_layers() const { return weights.size(); }
    std::size_t input_width() const { return weights.front().value.rows; }
    std::size_t output_width() const { return weights.back().value.cols; }

    // Glorot-uniform initialization in +-sqrt(6/(fan_in+fan_out)).
    static MlpParams init(const std::vector<std::size_t>& widths, Rng& rng);

    bool same_values(const MlpParams& o) const;
};

// Forward pass with ReLU on all but the last layer. `cache`, when given,
// stores the layer inputs needed by mlp_backward.
struct MlpCache {
    std::vector<Matrix> inputs;     // input to each linear layer (post-activation)
    std::vector<Matrix> pre_relu;   // linear output of each hidden layer
};

Matrix mlp_forward(const MlpParams& p, const Matrix& x, MlpCache* cache = nullptr);

// Backpropagates d(loss)/d(output) through the stack, accumulating parameter
// gradients in place. Returns d(loss)/d(input).
Matrix mlp_backward(MlpParams& p, const MlpCache& cache, const Matrix& dout);

struct EncoderParams {
    MlpParams net;
    bool normalize_output = true;

    static EncoderParams init(const EncoderSpec& spec, Rng& rng);
};

// Embeds rows of x; output rows are unit-norm when normalization is on.
Matrix encode(const EncoderParams& enc, const Matrix& x);

struct LossResult {
    double loss = 0.0;
    Matrix dz;  // gradient with respect to the (normalized) embeddings
};

// Supervised contrastive loss over an augmented batch: every same-label row
// is a positive. Anchors with no positive contribute zero.
LossResult supcon_loss(const Matrix& z, const std::vector<int>& labels, double tau);

// Self-supervised variant: the only positive of row i is its sibling view
// pair_map[i].
LossResult selfsup_loss(const Matrix& z, const std::vector<std::size_t>& pair_map,
                        double tau);

struct ContrastiveTrainConfig {
    std::size_t epochs = 5000;
    std::size_t batch_size = 128;
    std::size_t steps_per_epoch = 1;
    double lr = 0.001;
    double sigma = 0.1;
    std::uint64_t seed = 0;
    LossKind loss_kind = LossKind::supervised;
};

// Contrastive pretraining: per step, sample a batch with replacement, emit
// two noised views, embed, backpropagate the contrastive loss, Adam-update.
// `loss_trace`, when given, receives the mean loss of each epoch.
EncoderParams train_encoder(const Dataset& train, const EncoderSpec& spec,
                            const ContrastiveTrainConfig& cfg,
                            std::vector<double>* loss_trace = nullptr);

}  // namespace scltpe
