#pragma once

#include <cstddef>
#include <vector>

#include "scltpe/rng.hpp"

namespace scltpe {

// Dense row-major matrix of 64-bit floats. Row vectors are 1xN matrices.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // rows * cols, row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    static Matrix zeros(std::size_t r, std::size_t c) { return Matrix(r, c, 0.0); }

    // Entries i.i.d. uniform in [-limit, limit].
    static Matrix uniform(std::size_t r, std::size_t c, double limit, Rng& rng);

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    double* row(std::size_t i) { return data.data() + i * cols; }
    const double* row(std::size_t i) const { return data.data() + i * cols; }

    std::size_t size() const { return data.size(); }
    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
    bool all_finite() const;

    Matrix& operator+=(const Matrix& o);
    Matrix& operator*=(double s);
};

bool operator==(const Matrix& a, const Matrix& b);

// a (m x k) times b (k x n).
Matrix matmul(const Matrix& a, const Matrix& b);

// a^T (k x m -> m rows of output from a's columns) times b: (a.cols x b.cols).
Matrix matmul_tn(const Matrix& a, const Matrix& b);

// a times b^T: (a.rows x b.rows).
Matrix matmul_nt(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

// Extracts the rows of a listed in idx, in order.
Matrix take_rows(const Matrix& a, const std::vector<std::size_t>& idx);

double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace scltpe
