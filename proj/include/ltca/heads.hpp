#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <vector>

#include "ltca/matrix.hpp"

namespace ltca {

/// Per-frame mask features at stride S below the input resolution: one
/// (height*width) x channels matrix per frame.
struct MaskFeatureVolume {
    std::size_t frames = 0;
    std::size_t height = 0;
    std::size_t width = 0;
    std::size_t channels = 0;
    std::size_t stride = 1;
    std::vector<Matrix> per_frame;  // frames entries, each (height*width) x channels

    void validate() const;
};

/// Segmentation logits for every (query, frame, pixel) plus per-query
/// confidence scores in (0, 1).
struct PredictionSet {
    std::size_t queries = 0;
    std::size_t frames = 0;
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> logits;  // queries * frames * height * width
    std::vector<double> scores;  // queries

    double logit(std::size_t q, std::size_t t, std::size_t y, std::size_t x) const {
        return logits[((q * frames + t) * height + y) * width + x];
    }
    double& logit(std::size_t q, std::size_t t, std::size_t y, std::size_t x) {
        return logits[((q * frames + t) * height + y) * width + x];
    }
};

/// Per-pixel logit = dot(mask feature, H_s(global query)). The MLP maps
/// query width to channel width.
std::vector<double> segment(const MaskFeatureVolume& fm, const Matrix& global_out,
                            const MlpParams& hs);

/// Confidence score = logistic(H_c([query ; sentence feature])); the head's
/// first layer takes width 2D and emits one value.
std::vector<double> classify(const Matrix& global_out, const std::vector<double>& sentence_feature,
                             const MlpParams& hc);

/// Raw head outputs pre-logistic, for callers that want unbounded scores.
std::vector<double> classify_logits(const Matrix& global_out,
                                    const std::vector<double>& sentence_feature,
                                    const MlpParams& hc);

enum class SelectMode { Single, Multi };

/// Single: argmax score, lowest index on ties. Multi: all scores strictly
/// greater than sigma.
std::vector<std::size_t> select(const PredictionSet& p, SelectMode mode, double sigma);

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Binarized view of one mask: sigmoid(logit) > 0.5 strict, so a zero logit
/// is background.
std::vector<bool> binarize(const PredictionSet& p, std::size_t q, std::size_t t);

/// 8-bit binary PGM, foreground 255.
void write_pgm(const std::filesystem::path& path, const PredictionSet& p, std::size_t q,
               std::size_t t);

}  // namespace ltca
