#include "ltca/heads.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

namespace ltca {

void MaskFeatureVolume::validate() const {
    if (per_frame.size() != frames) throw ShapeError("mask features: frame count mismatch");
    for (const auto& m : per_frame)
        if (m.rows != height * width || m.cols != channels)
            throw ShapeError("mask features: each frame must be (H*W) x D");
}

std::vector<double> segment(const MaskFeatureVolume& fm, const Matrix& global_out,
                            const MlpParams& hs) {
    fm.validate();
    if (global_out.cols != hs.in_width())
        throw ShapeError("segment: query width does not match head input");
    if (hs.out_width() != fm.channels)
        throw ShapeError("segment: head output width does not match feature channels");
    Matrix kernels = mlp_apply(hs, global_out);  // queries x channels
    std::size_t pixels = fm.height * fm.width;
    std::vector<double> logits(global_out.rows * fm.frames * pixels);
    std::size_t idx = 0;
    for (std::size_t q = 0; q < global_out.rows; ++q) {
        for (std::size_t t = 0; t < fm.frames; ++t) {
            const Matrix& frame = fm.per_frame[t];
            for (std::size_t px = 0; px < pixels; ++px) {
                double dot = 0.0;
                for (std::size_t c = 0; c < fm.channels; ++c)
                    dot += frame.at(px, c) * kernels.at(q, c);
                logits[idx++] = dot;
            }
        }
    }
    return logits;
}

std::vector<double> classify_logits(const Matrix& global_out,
                                    const std::vector<double>& sentence_feature,
                                    const MlpParams& hc) {
    if (hc.in_width() != global_out.cols + sentence_feature.size())
        throw ShapeError("classify: head expects width " + std::to_string(hc.in_width()) +
                         ", concatenation has " +
                         std::to_string(global_out.cols + sentence_feature.size()));
    if (hc.out_width() != 1) throw ShapeError("classify: head must emit one value per query");
    Matrix cat(global_out.rows, global_out.cols + sentence_feature.size());
    for (std::size_t q = 0; q < global_out.rows; ++q) {
        for (std::size_t c = 0; c < global_out.cols; ++c) cat.at(q, c) = global_out.at(q, c);
        for (std::size_t c = 0; c < sentence_feature.size(); ++c)
            cat.at(q, global_out.cols + c) = sentence_feature[c];
    }
    Matrix out = mlp_apply(hc, cat);
    std::vector<double> raw(global_out.rows);
    for (std::size_t q = 0; q < global_out.rows; ++q) raw[q] = out.at(q, 0);
    return raw;
}

std::vector<double> classify(const Matrix& global_out,
                             const std::vector<double>& sentence_feature, const MlpParams& hc) {
    std::vector<double> raw = classify_logits(global_out, sentence_feature, hc);
    for (double& v : raw) v = logistic(v);
    return raw;
}

std::vector<std::size_t> select(const PredictionSet& p, SelectMode mode, double sigma) {
    if (p.scores.empty()) throw ParamError("select: empty prediction set");
    if (mode == SelectMode::Single) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < p.scores.size(); ++i)
            if (p.scores[i] > p.scores[best]) best = i;
        return {best};
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < p.scores.size(); ++i)
        if (p.scores[i] > sigma) out.push_back(i);
    return out;
}

std::vector<bool> binarize(const PredictionSet& p, std::size_t q, std::size_t t) {
    std::vector<bool> mask(p.height * p.width);
    for (std::size_t y = 0; y < p.height; ++y)
        for (std::size_t x = 0; x < p.width; ++x)
            mask[y * p.width + x] = logistic(p.logit(q, t, y, x)) > 0.5;
    return mask;
}

void write_pgm(const std::filesystem::path& path, const PredictionSet& p, std::size_t q,
               std::size_t t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for write: " + path.string());
    out << "P5\n" << p.width << " " << p.height << "\n255\n";
    std::vector<bool> mask = binarize(p, q, t);
    for (std::size_t i = 0; i < mask.size(); ++i)
        out.put(mask[i] ? static_cast<char>(255) : static_cast<char>(0));
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace ltca
