#include "scltpe/nn_ops.hpp"

#include <algorithm>
#include <cmath>

#include "scltpe/errors.hpp"

namespace scltpe {

void AdamHyper::validate() const {
    if (!(lr > 0.0)) throw config_error("adam: lr must be positive");
    if (!(beta1 > 0.0 && beta1 < 1.0)) throw config_error("adam: beta1 must be in (0,1)");
    if (!(beta2 > 0.0 && beta2 < 1.0)) throw config_error("adam: beta2 must be in (0,1)");
    if (!(eps > 0.0)) throw config_error("adam: eps must be positive");
}

void ParamTensor::accumulate_grad(const Matrix& g) {
    if (!grad.same_shape(g)) throw dimension_error("param grad shape mismatch");
    grad += g;
}

Matrix linear_forward(const Matrix& x, const Matrix& w, const Matrix& b) {
    if (x.cols != w.rows)
        throw dimension_error("linear_forward: x.cols != w.rows");
    if (b.rows != 1 || b.cols != w.cols)
        throw dimension_error("linear_forward: bias must be 1 x out");
    Matrix y = matmul(x, w);
    for (std::size_t i = 0; i < y.rows; ++i) {
        double* yi = y.row(i);
        for (std::size_t j = 0; j < y.cols; ++j) yi[j] += b.data[j];
    }
    return y;
}

LinearGrads linear_backward(const Matrix& x, const Matrix& w, const Matrix& dy) {
    if (dy.rows != x.rows || dy.cols != w.cols || x.cols != w.rows)
        throw dimension_error("linear_backward: shapes do not conform");
    LinearGrads g;
    g.dx = matmul_nt(dy, w);   // dy . W^T
    g.dw = matmul_tn(x, dy);   // x^T . dy
    g.db = Matrix(1, dy.cols);
    for (std::size_t i = 0; i < dy.rows; ++i) {
        const double* di = dy.row(i);
        for (std::size_t j = 0; j < dy.cols; ++j) g.db.data[j] += di[j];
    }
    return g;
}

Matrix relu(const Matrix& x) {
    Matrix y = x;
    for (double& v : y.data) v = std::max(v, 0.0);
    return y;
}

Matrix relu_backward(const Matrix& x, const Matrix& dy) {
    if (!x.same_shape(dy)) throw dimension_error("relu_backward: shape mismatch");
    Matrix dx(x.rows, x.cols);
    for (std::size_t i = 0; i < x.data.size(); ++i)
        dx.data[i] = x.data[i] > 0.0 ? dy.data[i] : 0.0;
    return dx;
}

Matrix l2_normalize_rows(const Matrix& x, double min_norm) {
    Matrix y = x;
    for (std::size_t i = 0; i < x.rows; ++i) {
        double s = 0.0;
        const double* xi = x.row(i);
        for (std::size_t j = 0; j < x.cols; ++j) s += xi[j] * xi[j];
        const double norm = std::sqrt(s);
        if (norm < min_norm)
            throw numeric_error("l2_normalize_rows: degenerate row " + std::to_string(i));
        double* yi = y.row(i);
        for (std::size_t j = 0; j < x.cols; ++j) yi[j] /= norm;
    }
    return y;
}

Matrix l2_normalize_rows_backward(const Matrix& x, const Matrix& dy, double min_norm) {
    if (!x.same_shape(dy)) throw dimension_error("l2_normalize backward: shape mismatch");
    Matrix dx(x.rows, x.cols);
    // y = x/|x|  =>  dx = (dy - y (y . dy)) / |x|
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double* xi = x.row(i);
        const double* di = dy.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < x.cols; ++j) s += xi[j] * xi[j];
        const double norm = std::sqrt(s);
        if (norm < min_norm)
            throw numeric_error("l2_normalize_rows: degenerate row " + std::to_string(i));
        double dot = 0.0;
        for (std::size_t j = 0; j < x.cols; ++j) dot += xi[j] * di[j];
        dot /= s;  // (y . dy) / |x|
        double* oi = dx.row(i);
        for (std::size_t j = 0; j < x.cols; ++j)
            oi[j] = di[j] / norm - xi[j] * dot / norm;
    }
    return dx;
}

void adam_step(ParamTensor& p, const AdamHyper& h) {
    if (!p.grad.all_finite()) throw numeric_error("adam_step: non-finite gradient");
    p.step += 1;
    const double bc1 = 1.0 - std::pow(h.beta1, static_cast<double>(p.step));
    const double bc2 = 1.0 - std::pow(h.beta2, static_cast<double>(p.step));
    for (std::size_t i = 0; i < p.value.data.size(); ++i) {
        const double g = p.grad.data[i];
        p.adam_m.data[i] = h.beta1 * p.adam_m.data[i] + (1.0 - h.beta1) * g;
        p.adam_v.data[i] = h.beta2 * p.adam_v.data[i] + (1.0 - h.beta2) * g * g;
        const double mhat = p.adam_m.data[i] / bc1;
        const double vhat = p.adam_v.data[i] / bc2;
        p.value.data[i] -= h.lr * mhat / (std::sqrt(vhat) + h.eps);
    }
    std::fill(p.grad.data.begin(), p.grad.data.end(), 0.0);
}

double grad_check(const std::function<double(const Matrix&)>& f, const Matrix& x,
                  const Matrix& analytic_grad, double eps) {
    if (!x.same_shape(analytic_grad))
        throw dimension_error("grad_check: gradient shape mismatch");
    Matrix probe = x;
    double worst = 0.0;
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        const double orig = probe.data[i];
        probe.data[i] = orig + eps;
        const double fp = f(probe);
        probe.data[i] = orig - eps;
        const double fm = f(probe);
        probe.data[i] = orig;
        const double fd = (fp - fm) / (2.0 * eps);
        const double an = analytic_grad.data[i];
        const double denom = std::max(1e-8, std::abs(fd) + std::abs(an));
        worst = std::max(worst, std::abs(fd - an) / denom);
    }
    return worst;
}

}  // namespace scltpe
