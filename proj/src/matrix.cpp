#include "ltca/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ltca {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw ShapeError("matrix add: shape mismatch");
    Matrix out(a.rows, a.cols);
    for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = a.data[i] + b.data[i];
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw ShapeError("matrix sub: shape mismatch");
    Matrix out(a.rows, a.cols);
    for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = a.data[i] - b.data[i];
    return out;
}

Matrix operator*(double s, const Matrix& a) {
    Matrix out(a.rows, a.cols);
    for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = s * a.data[i];
    return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows)
        throw ShapeError("matmul: " + std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                         " * " + std::to_string(b.rows) + "x" + std::to_string(b.cols));
    Matrix out(a.rows, b.cols, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = a.row(i);
        double* orow = out.row(i);
        for (std::size_t j = 0; j < b.cols; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) acc += arow[k] * b.at(k, j);
            orow[j] = acc;
        }
    }
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) out.at(j, i) = a.at(i, j);
    return out;
}

Matrix row_softmax(const Matrix& logits) {
    Matrix out(logits.rows, logits.cols);
    for (std::size_t i = 0; i < logits.rows; ++i) {
        const double* in = logits.row(i);
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < logits.cols; ++j) m = std::max(m, in[j]);
        if (!std::isfinite(m))
            throw DegenerateRowError("row_softmax: row " + std::to_string(i) +
                                     " has no finite entry");
        double denom = 0.0;
        double* o = out.row(i);
        for (std::size_t j = 0; j < logits.cols; ++j) {
            o[j] = std::exp(in[j] - m);  // exp(-inf) == 0 exactly
            denom += o[j];
        }
        for (std::size_t j = 0; j < logits.cols; ++j) o[j] /= denom;
    }
    return out;
}

MlpParams MlpParams::identity(std::size_t width) {
    MlpParams p;
    p.layers.push_back({Matrix::identity(width), std::vector<double>(width, 0.0)});
    return p;
}

Matrix mlp_apply(const MlpParams& p, const Matrix& x) {
    if (p.layers.empty()) throw ParamError("mlp_apply: no layers");
    Matrix cur = x;
    for (std::size_t li = 0; li < p.layers.size(); ++li) {
        const auto& layer = p.layers[li];
        if (cur.cols != layer.weight.rows)
            throw ShapeError("mlp_apply: layer " + std::to_string(li) + " expects width " +
                             std::to_string(layer.weight.rows) + ", got " +
                             std::to_string(cur.cols));
        if (layer.bias.size() != layer.weight.cols)
            throw ShapeError("mlp_apply: layer " + std::to_string(li) + " bias width mismatch");
        Matrix next = matmul(cur, layer.weight);
        for (std::size_t r = 0; r < next.rows; ++r)
            for (std::size_t c = 0; c < next.cols; ++c) next.at(r, c) += layer.bias[c];
        if (li + 1 < p.layers.size() && p.activation == Activation::Relu) {
            for (double& v : next.data) v = std::max(v, 0.0);
        }
        cur = std::move(next);
    }
    return cur;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw ShapeError("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

}  // namespace ltca
