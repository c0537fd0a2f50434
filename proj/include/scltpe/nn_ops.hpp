#pragma once

#include <functional>

#include "scltpe/matrix.hpp"

namespace scltpe {

struct AdamHyper {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    void validate() const;
};

// A trainable tensor: value plus accumulated gradient and Adam moments,
// all sharing one shape.
struct ParamTensor {
    Matrix value;
    Matrix grad;
    Matrix adam_m;
    Matrix adam_v;
    std::size_t step = 0;

    ParamTensor() = default;
    explicit ParamTensor(Matrix v)
        : value(std::move(v)),
          grad(value.rows, value.cols),
          adam_m(value.rows, value.cols),
          adam_v(value.rows, value.cols) {}

    void accumulate_grad(const Matrix& g);
};

// y = x.W + b, with b a 1 x out row vector broadcast over rows.
Matrix linear_forward(const Matrix& x, const Matrix& w, const Matrix& b);

struct LinearGrads {
    Matrix dx;  // B x in
    Matrix dw;  // in x out
    Matrix db;  // 1 x out
};

LinearGrads linear_backward(const Matrix& x, const Matrix& w, const Matrix& dy);

Matrix relu(const Matrix& x);
Matrix relu_backward(const Matrix& x, const Matrix& dy);

// Scales every row to unit Euclidean norm. Rows with norm below `min_norm`
// are rejected as degenerate.
Matrix l2_normalize_rows(const Matrix& x, double min_norm = 1e-12);

// Gradient of l2_normalize_rows with respect to the pre-normalization input x.
Matrix l2_normalize_rows_backward(const Matrix& x, const Matrix& dy,
                                  double min_norm = 1e-12);

// Bias-corrected Adam update; consumes and clears the accumulated gradient.
void adam_step(ParamTensor& p, const AdamHyper& h);

// Compares an analytic gradient against central finite differences of f at x
// with step eps. Returns the maximum elementwise relative error.
double grad_check(const std::function<double(const Matrix&)>& f, const Matrix& x,
                  const Matrix& analytic_grad, double eps);

}  // namespace scltpe
