#include "scltpe/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "scltpe/errors.hpp"

namespace scltpe {

Matrix Matrix::uniform(std::size_t r, std::size_t c, double limit, Rng& rng) {
    Matrix m(r, c);
    for (double& v : m.data) v = rng.uniform(-limit, limit);
    return m;
}

bool Matrix::all_finite() const {
    return std::all_of(data.begin(), data.end(),
                       [](double v) { return std::isfinite(v); });
}

Matrix& Matrix::operator+=(const Matrix& o) {
    if (!same_shape(o)) throw dimension_error("matrix += shape mismatch");
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& v : data) v *= s;
    return *this;
}

bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows)
        throw dimension_error("matmul: " + std::to_string(a.rows) + "x" +
                              std::to_string(a.cols) + " * " + std::to_string(b.rows) +
                              "x" + std::to_string(b.cols));
    Matrix out(a.rows, b.cols);
    // i-k-j order keeps the inner loop contiguous in both b and out.
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* ai = a.row(i);
        double* oi = out.row(i);
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = ai[k];
            const double* bk = b.row(k);
            for (std::size_t j = 0; j < b.cols; ++j) oi[j] += aik * bk[j];
        }
    }
    return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows) throw dimension_error("matmul_tn: row counts differ");
    Matrix out(a.cols, b.cols);
    for (std::size_t k = 0; k < a.rows; ++k) {
        const double* ak = a.row(k);
        const double* bk = b.row(k);
        for (std::size_t i = 0; i < a.cols; ++i) {
            const double aki = ak[i];
            double* oi = out.row(i);
            for (std::size_t j = 0; j < b.cols; ++j) oi[j] += aki * bk[j];
        }
    }
    return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols != b.cols) throw dimension_error("matmul_nt: col counts differ");
    Matrix out(a.rows, b.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* ai = a.row(i);
        double* oi = out.row(i);
        for (std::size_t j = 0; j < b.rows; ++j) {
            const double* bj = b.row(j);
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) s += ai[k] * bj[k];
            oi[j] = s;
        }
    }
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) out(j, i) = a(i, j);
    return out;
}

Matrix take_rows(const Matrix& a, const std::vector<std::size_t>& idx) {
    Matrix out(idx.size(), a.cols);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] >= a.rows) throw dimension_error("take_rows: index out of range");
        std::copy(a.row(idx[i]), a.row(idx[i]) + a.cols, out.row(i));
    }
    return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw dimension_error("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

}  // namespace scltpe
