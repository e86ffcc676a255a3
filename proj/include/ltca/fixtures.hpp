#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "ltca/heads.hpp"
#include "ltca/matrix.hpp"

namespace ltca {

/// Synthetic stand-in for extractor outputs: one object whose feature
/// vector is a fixed random unit direction, moving along an elliptical path
/// that keeps the blob inside the grid.
struct SyntheticScene {
    std::size_t frames = 8;
    std::size_t height = 16;
    std::size_t width = 16;
    std::size_t channels = 8;
    std::uint64_t seed = 0;
    double noise_amplitude = 0.01;
    double bump_sigma = 1.5;
};

struct SceneData {
    MaskFeatureVolume features;
    Matrix frame_embeddings;  // T x D, one object slot per frame
    std::vector<double> sentence_feature;
    std::vector<std::pair<std::size_t, std::size_t>> blob_centers;  // (y, x) per frame
};

/// Mask-feature pixel = unit direction scaled by a Gaussian bump around the
/// frame's blob center, plus seeded uniform noise.
SceneData gen_scene(const SyntheticScene& s);

/// LTF tensors plus a manifest recording the generator identity and the
/// blob path.
void write_scene(const std::filesystem::path& dir, const SyntheticScene& s,
                 const SceneData& data);
SceneData read_scene(const std::filesystem::path& dir);

}  // namespace ltca
