#pragma once

#include <cstddef>
#include <vector>

#include "ltca/errors.hpp"

namespace ltca {

/// Dense row-major float64 matrix. The only values allowed to be non-finite
/// are -inf entries inside additive attention masks.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    double* row(std::size_t r) { return data.data() + r * cols; }
    const double* row(std::size_t r) const { return data.data() + r * cols; }

    static Matrix identity(std::size_t n);

    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

/// Standard product. The inner sum runs left to right over the shared
/// dimension; dense and sparse attention paths rely on this order.
Matrix matmul(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

/// Stable row softmax (max subtraction). -inf entries map to exactly 0.
/// Throws DegenerateRowError on a row with no finite entry.
Matrix row_softmax(const Matrix& logits);

enum class Activation { Relu, Identity };

/// Sequence of affine layers with an inter-layer nonlinearity; the last
/// layer is affine only.
struct MlpParams {
    struct Layer {
        Matrix weight;             // in x out
        std::vector<double> bias;  // out
    };
    std::vector<Layer> layers;
    Activation activation = Activation::Relu;

    std::size_t in_width() const { return layers.front().weight.rows; }
    std::size_t out_width() const { return layers.back().weight.cols; }

    static MlpParams identity(std::size_t width);
};

Matrix mlp_apply(const MlpParams& p, const Matrix& x);

double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace ltca
