#include "scltpe/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scltpe/errors.hpp"

namespace scltpe {

void EncoderSpec::validate(std::size_t feature_count) const {
    if (layer_widths.size() < 2)
        throw config_error("encoder: need at least input and output widths");
    if (layer_widths.front() != feature_count)
        throw config_error("encoder: input width " + std::to_string(layer_widths.front()) +
                           " != dataset feature count " + std::to_string(feature_count));
    for (std::size_t w : layer_widths)
        if (w == 0) throw config_error("encoder: zero layer width");
    if (!(tau > 0.0)) throw config_error("encoder: tau must be positive");
}

MlpParams MlpParams::init(const std::vector<std::size_t>& widths, Rng& rng) {
    MlpParams p;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        const double limit =
            std::sqrt(6.0 / static_cast<double>(widths[l] + widths[l + 1]));
        p.weights.emplace_back(Matrix::uniform(widths[l], widths[l + 1], limit, rng));
        p.biases.emplace_back(Matrix(1, widths[l + 1]));
    }
    return p;
}

bool MlpParams::same_values(const MlpParams& o) const {
    if (weights.size() != o.weights.size()) return false;
    for (std::size_t l = 0; l < weights.size(); ++l)
        if (!(weights[l].value == o.weights[l].value &&
              biases[l].value == o.biases[l].value))
            return false;
    return true;
}

Matrix mlp_forward(const MlpParams& p, const Matrix& x, MlpCache* cache) {
    Matrix h = x;
    if (cache) {
        cache->inputs.clear();
        cache->pre_relu.clear();
    }
    for (std::size_t l = 0; l < p.num_layers(); ++l) {
        if (cache) cache->inputs.push_back(h);
        Matrix z = linear_forward(h, p.weights[l].value, p.biases[l].value);
        if (l + 1 < p.num_layers()) {
            if (cache) cache->pre_relu.push_back(z);
            h = relu(z);
        } else {
            h = std::move(z);
        }
    }
    return h;
}

Matrix mlp_backward(MlpParams& p, const MlpCache& cache, const Matrix& dout) {
    Matrix d = dout;
    for (std::size_t l = p.num_layers(); l-- > 0;) {
        LinearGrads g = linear_backward(cache.inputs[l], p.weights[l].value, d);
        p.weights[l].accumulate_grad(g.dw);
        p.biases[l].accumulate_grad(g.db);
        d = std::move(g.dx);
        if (l > 0) d = relu_backward(cache.pre_relu[l - 1], d);
    }
    return d;
}

EncoderParams EncoderParams::init(const EncoderSpec& spec, Rng& rng) {
    EncoderParams enc;
    enc.net = MlpParams::init(spec.layer_widths, rng);
    enc.normalize_output = spec.normalize_output;
    return enc;
}

Matrix encode(const EncoderParams& enc, const Matrix& x) {
    Matrix h = mlp_forward(enc.net, x);
    return enc.normalize_output ? l2_normalize_rows(h) : h;
}

namespace {

// Shared core of both contrastive losses. positives(i) is encoded as a mask
// matrix lookup: pos_of(i, a) says whether a is a positive for anchor i.
template <typename PositivePredicate>
LossResult contrastive_loss(const Matrix& z, double tau, PositivePredicate&& is_pos) {
    if (!(tau > 0.0)) throw config_error("contrastive loss: tau must be positive");
    const std::size_t n = z.rows;
    if (n < 2) throw config_error("contrastive loss: batch must have at least 2 rows");

    // Pairwise similarities s_ia = z_i . z_a / tau.
    Matrix s = matmul_nt(z, z);
    s *= 1.0 / tau;

    Matrix grad_s(n, n);  // d(loss)/d(s), zero where skipped
    double loss = 0.0;
    std::vector<std::size_t> pos_idx;
    for (std::size_t i = 0; i < n; ++i) {
        pos_idx.clear();
        for (std::size_t a = 0; a < n; ++a)
            if (a != i && is_pos(i, a)) pos_idx.push_back(a);
        if (pos_idx.empty()) continue;  // singleton anchor, contributes nothing

        const double* si = s.row(i);
        double m = -HUGE_VAL;
        for (std::size_t a = 0; a < n; ++a)
            if (a != i) m = std::max(m, si[a]);
        double denom = 0.0;
        for (std::size_t a = 0; a < n; ++a)
            if (a != i) denom += std::exp(si[a] - m);
        const double log_denom = m + std::log(denom);

        const double inv_p = 1.0 / static_cast<double>(pos_idx.size());
        double* gi = grad_s.row(i);
        for (std::size_t a = 0; a < n; ++a)
            if (a != i) gi[a] = std::exp(si[a] - m) / denom;
        for (std::size_t p : pos_idx) {
            loss += -(si[p] - log_denom) * inv_p;
            gi[p] -= inv_p;
        }
    }

    // s = Z Z^T / tau  =>  dZ = (G + G^T) Z / tau.
    Matrix g_sym = grad_s;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g_sym(i, j) += grad_s(j, i);
    Matrix dz = matmul(g_sym, z);
    dz *= 1.0 / tau;

    LossResult res;
    res.loss = loss;
    res.dz = std::move(dz);
    if (!std::isfinite(res.loss) || !res.dz.all_finite())
        throw numeric_error("contrastive loss: non-finite result");
    return res;
}

}  // namespace

LossResult supcon_loss(const Matrix& z, const std::vector<int>& labels, double tau) {
    if (labels.size() != z.rows)
        throw dimension_error("supcon_loss: label count mismatch");
    return contrastive_loss(z, tau, [&](std::size_t i, std::size_t a) {
        return labels[i] == labels[a];
    });
}

LossResult selfsup_loss(const Matrix& z, const std::vector<std::size_t>& pair_map,
                        double tau) {
    if (pair_map.size() != z.rows)
        throw dimension_error("selfsup_loss: pair map size mismatch");
    return contrastive_loss(z, tau, [&](std::size_t i, std::size_t a) {
        return pair_map[i] == a;
    });
}

EncoderParams train_encoder(const Dataset& train, const EncoderSpec& spec,
                            const ContrastiveTrainConfig& cfg,
                            std::vector<double>* loss_trace) {
    spec.validate(train.features());
    if (cfg.batch_size < 2) throw config_error("train_encoder: batch size must be >= 2");
    if (cfg.steps_per_epoch < 1)
        throw config_error("train_encoder: steps_per_epoch must be >= 1");

    Rng init_rng = Rng::substream(cfg.seed, "init");
    Rng batch_rng = Rng::substream(cfg.seed, "batch");
    Rng augment_rng = Rng::substream(cfg.seed, "augment");
    EncoderParams enc = EncoderParams::init(spec, init_rng);

    AdamHyper adam;
    adam.lr = cfg.lr;
    adam.validate();

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        double epoch_loss = 0.0;
        for (std::size_t step = 0; step < cfg.steps_per_epoch; ++step) {
            const auto idx = sample_batch(train, cfg.batch_size, batch_rng);
            const AugmentedBatch batch =
                augment_two_views(train, idx, cfg.sigma, augment_rng);

            MlpCache cache;
            Matrix h = mlp_forward(enc.net, batch.x, &cache);
            Matrix z = enc.normalize_output ? l2_normalize_rows(h) : h;

            LossResult lr = cfg.loss_kind == LossKind::supervised
                                ? supcon_loss(z, batch.y, spec.tau)
                                : selfsup_loss(z, batch.pair_map(), spec.tau);
            if (!std::isfinite(lr.loss))
                throw numeric_error("train_encoder: non-finite loss at epoch " +
                                    std::to_string(epoch));
            epoch_loss += lr.loss;

            Matrix dh = enc.normalize_output
                            ? l2_normalize_rows_backward(h, lr.dz)
                            : std::move(lr.dz);
            mlp_backward(enc.net, cache, dh);
            for (std::size_t l = 0; l < enc.net.num_layers(); ++l) {
                adam_step(enc.net.weights[l], adam);
                adam_step(enc.net.biases[l], adam);
            }
        }
        if (loss_trace)
            loss_trace->push_back(epoch_loss / static_cast<double>(cfg.steps_per_epoch));
    }
    return enc;
}

}  // namespace scltpe
