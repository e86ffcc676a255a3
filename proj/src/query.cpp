#include "ltca/query.hpp"

#include <cmath>
#include <string>

namespace ltca {

Matrix sinusoidal_pe(std::size_t frames, std::size_t width) {
    if (width % 2 != 0) throw ParamError("sinusoidal_pe: width must be even");
    Matrix pe(frames, width);
    for (std::size_t t = 0; t < frames; ++t) {
        for (std::size_t c = 0; 2 * c < width; ++c) {
            double rate = std::pow(10000.0, 2.0 * static_cast<double>(c) /
                                                static_cast<double>(width));
            double angle = static_cast<double>(t) / rate;
            pe.at(t, 2 * c) = std::sin(angle);
            pe.at(t, 2 * c + 1) = std::cos(angle);
        }
    }
    return pe;
}

QueryBundle assemble(const Matrix& frame_embeddings, const PositionalEmbeddings& pe,
                     const Matrix& global_init, const GeometrySpec& g) {
    g.validate();
    std::size_t width = frame_embeddings.cols;
    if (frame_embeddings.rows != g.frames * g.objects_per_frame)
        throw ShapeError("assemble: embeddings rows != T*N1");
    if (pe.object_pe.rows != g.objects_per_frame || pe.object_pe.cols != width)
        throw ShapeError("assemble: object PE must be N1 x D");
    if (pe.frame_pe.rows != g.frames || pe.frame_pe.cols != width)
        throw ShapeError("assemble: frame PE must be T x D");
    if (global_init.rows != g.global_queries || (g.global_queries > 0 && global_init.cols != width))
        throw ShapeError("assemble: global init must be N2 x D");

    QueryBundle q;
    q.geometry = g;
    q.features = Matrix(g.total(), width);
    for (std::size_t i = 0; i < g.global_queries; ++i)
        for (std::size_t c = 0; c < width; ++c) q.features.at(i, c) = global_init.at(i, c);
    for (std::size_t f = 0; f < g.frames; ++f) {
        for (std::size_t s = 0; s < g.objects_per_frame; ++s) {
            std::size_t src = f * g.objects_per_frame + s;
            std::size_t dst = g.global_queries + src;
            for (std::size_t c = 0; c < width; ++c)
                q.features.at(dst, c) =
                    frame_embeddings.at(src, c) + pe.object_pe.at(s, c) + pe.frame_pe.at(f, c);
        }
    }
    return q;
}

Matrix init_queries_from_sentence(const std::vector<double>& sentence_feature, std::size_t n) {
    Matrix out(n, sentence_feature.size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < sentence_feature.size(); ++c)
            out.at(i, c) = sentence_feature[c];
    return out;
}

std::vector<double> mean_rows(const Matrix& word_embeddings) {
    if (word_embeddings.rows == 0) throw ParamError("mean_rows: empty matrix");
    std::vector<double> mean(word_embeddings.cols, 0.0);
    for (std::size_t r = 0; r < word_embeddings.rows; ++r)
        for (std::size_t c = 0; c < word_embeddings.cols; ++c)
            mean[c] += word_embeddings.at(r, c);
    for (double& v : mean) v /= static_cast<double>(word_embeddings.rows);
    return mean;
}

}  // namespace ltca
