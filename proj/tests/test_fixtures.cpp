#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "ltca/fixtures.hpp"

using namespace ltca;

TEST_CASE("scene generation is deterministic in the seed") {
    SyntheticScene s;
    s.seed = 42;
    SceneData a = gen_scene(s);
    SceneData b = gen_scene(s);
    CHECK(a.frame_embeddings.data == b.frame_embeddings.data);
    for (std::size_t t = 0; t < s.frames; ++t)
        CHECK(a.features.per_frame[t].data == b.features.per_frame[t].data);

    s.seed = 43;
    SceneData c = gen_scene(s);
    bool differs = c.frame_embeddings.data != a.frame_embeddings.data;
    for (std::size_t t = 0; t < s.frames && !differs; ++t)
        differs = c.features.per_frame[t].data != a.features.per_frame[t].data;
    CHECK(differs);
}

TEST_CASE("blob path stays inside the grid and the direction is unit norm") {
    SyntheticScene s;
    s.frames = 12;
    s.height = 9;
    s.width = 17;
    s.seed = 7;
    SceneData data = gen_scene(s);
    for (auto [y, x] : data.blob_centers) {
        CHECK(y < s.height);
        CHECK(x < s.width);
    }
    double norm = 0.0;
    for (double v : data.sentence_feature) norm += v * v;
    CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-12));
    // Embeddings are aligned with the sentence direction.
    for (std::size_t t = 0; t < s.frames; ++t)
        for (std::size_t c = 0; c < s.channels; ++c)
            CHECK(data.frame_embeddings.at(t, c) == data.sentence_feature[c]);
}

TEST_CASE("noise-free logits peak exactly at the blob centers") {
    SyntheticScene s;
    s.seed = 5;
    s.noise_amplitude = 0.0;
    SceneData data = gen_scene(s);

    Matrix query(1, s.channels);
    for (std::size_t c = 0; c < s.channels; ++c) query.at(0, c) = data.sentence_feature[c];
    auto logits = segment(data.features, query, MlpParams::identity(s.channels));
    for (std::size_t t = 0; t < s.frames; ++t) {
        std::size_t best = 0;
        for (std::size_t px = 1; px < s.height * s.width; ++px)
            if (logits[t * s.height * s.width + px] > logits[t * s.height * s.width + best])
                best = px;
        CHECK(best / s.width == data.blob_centers[t].first);
        CHECK(best % s.width == data.blob_centers[t].second);
    }
}

TEST_CASE("scene files round trip through the manifest") {
    SyntheticScene s;
    s.frames = 3;
    s.height = 6;
    s.width = 6;
    s.channels = 4;
    s.seed = 99;
    SceneData data = gen_scene(s);
    auto dir = std::filesystem::temp_directory_path() / "ltca_test_scene";
    std::filesystem::remove_all(dir);
    write_scene(dir, s, data);
    SceneData back = read_scene(dir);
    CHECK(back.frame_embeddings.data == data.frame_embeddings.data);
    CHECK(back.sentence_feature == data.sentence_feature);
    CHECK(back.blob_centers == data.blob_centers);
    for (std::size_t t = 0; t < s.frames; ++t)
        CHECK(back.features.per_frame[t].data == data.features.per_frame[t].data);
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(read_scene(dir), IoError);
}
