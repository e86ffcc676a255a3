#pragma once

#include "ltca/geometry.hpp"
#include "ltca/matrix.hpp"

namespace ltca {

/// The concatenated encoder input [global queries | flattened frame object
/// queries], rows in layout order.
struct QueryBundle {
    GeometrySpec geometry;
    Matrix features;  // (N2 + T*N1) x D

    std::size_t width() const { return features.cols; }
};

struct PositionalEmbeddings {
    Matrix object_pe;  // N1 x D, learnable-role, supplied as input
    Matrix frame_pe;   // T x D, sinusoidal
};

/// Canonical sinusoidal table: row t, channel pair (2c, 2c+1) =
/// (sin(t / 10000^(2c/D)), cos(t / 10000^(2c/D))), t zero-based.
Matrix sinusoidal_pe(std::size_t frames, std::size_t width);

/// Object row for (frame i, slot j) = embedding row + object_pe[j] +
/// frame_pe[i]; global rows pass through untouched ahead of them.
QueryBundle assemble(const Matrix& frame_embeddings, const PositionalEmbeddings& pe,
                     const Matrix& global_init, const GeometrySpec& g);

/// n identical rows repeating the sentence feature.
Matrix init_queries_from_sentence(const std::vector<double>& sentence_feature, std::size_t n);

/// Sentence feature from word embeddings: column-wise mean.
std::vector<double> mean_rows(const Matrix& word_embeddings);

}  // namespace ltca
