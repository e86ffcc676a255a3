#include "ltca/fixtures.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ltca/ltf.hpp"
#include "ltca/rng.hpp"

namespace ltca {

using nlohmann::json;

namespace {

constexpr double kTau = 6.283185307179586;

std::vector<double> unit_direction(std::uint64_t seed, std::size_t channels) {
    SplitMix64 rng = SplitMix64::split(seed, 0);
    std::vector<double> dir(channels);
    double norm = 0.0;
    for (double& v : dir) {
        v = rng.next_gauss();
        norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) {
        dir[0] = 1.0;
        return dir;
    }
    for (double& v : dir) v /= norm;
    return dir;
}

}  // namespace

SceneData gen_scene(const SyntheticScene& s) {
    if (s.height < 5 || s.width < 5) throw ParamError("gen_scene: grid too small for the path");
    SceneData data;
    std::vector<double> dir = unit_direction(s.seed, s.channels);

    SplitMix64 phase_rng = SplitMix64::split(s.seed, 1);
    double phase = phase_rng.next_double() * kTau;
    double cy0 = static_cast<double>(s.height) / 2.0;
    double cx0 = static_cast<double>(s.width) / 2.0;
    double ry = cy0 - 2.0;
    double rx = cx0 - 2.0;

    data.features.frames = s.frames;
    data.features.height = s.height;
    data.features.width = s.width;
    data.features.channels = s.channels;
    data.features.per_frame.reserve(s.frames);
    data.frame_embeddings = Matrix(s.frames, s.channels);
    data.sentence_feature = dir;

    double two_sigma_sq = 2.0 * s.bump_sigma * s.bump_sigma;
    for (std::size_t t = 0; t < s.frames; ++t) {
        double theta = phase + kTau * static_cast<double>(t) / static_cast<double>(s.frames);
        auto cy = static_cast<std::size_t>(std::lround(cy0 + ry * std::sin(theta)));
        auto cx = static_cast<std::size_t>(std::lround(cx0 + rx * std::cos(theta)));
        data.blob_centers.emplace_back(cy, cx);

        SplitMix64 noise = SplitMix64::split(s.seed, 2 + t);
        Matrix frame(s.height * s.width, s.channels);
        for (std::size_t y = 0; y < s.height; ++y) {
            for (std::size_t x = 0; x < s.width; ++x) {
                double dy = static_cast<double>(y) - static_cast<double>(cy);
                double dx = static_cast<double>(x) - static_cast<double>(cx);
                double bump = std::exp(-(dy * dy + dx * dx) / two_sigma_sq);
                for (std::size_t c = 0; c < s.channels; ++c)
                    frame.at(y * s.width + x, c) =
                        dir[c] * bump + s.noise_amplitude * (2.0 * noise.next_double() - 1.0);
            }
        }
        data.features.per_frame.push_back(std::move(frame));
        for (std::size_t c = 0; c < s.channels; ++c) data.frame_embeddings.at(t, c) = dir[c];
    }
    return data;
}

void write_scene(const std::filesystem::path& dir, const SyntheticScene& s,
                 const SceneData& data) {
    std::filesystem::create_directories(dir);
    json manifest;
    manifest["generator"] = "splitmix64";
    manifest["seed"] = s.seed;
    manifest["T"] = s.frames;
    manifest["H"] = s.height;
    manifest["W"] = s.width;
    manifest["D"] = s.channels;
    manifest["noise_amplitude"] = s.noise_amplitude;
    manifest["bump_sigma"] = s.bump_sigma;
    manifest["embeddings"] = "embeddings.ltf";
    manifest["sentence"] = "sentence.ltf";
    json frames = json::array();
    json centers = json::array();
    for (std::size_t t = 0; t < s.frames; ++t) {
        std::ostringstream name;
        name << "fm_" << t << ".ltf";
        write_ltf(dir / name.str(), data.features.per_frame[t]);
        frames.push_back(name.str());
        centers.push_back({data.blob_centers[t].first, data.blob_centers[t].second});
    }
    manifest["mask_features"] = frames;
    manifest["blob_centers"] = centers;
    write_ltf(dir / "embeddings.ltf", data.frame_embeddings);
    Matrix sentence(1, data.sentence_feature.size());
    for (std::size_t c = 0; c < data.sentence_feature.size(); ++c)
        sentence.at(0, c) = data.sentence_feature[c];
    write_ltf(dir / "sentence.ltf", sentence);
    std::ofstream out(dir / "manifest.json");
    if (!out) throw IoError("cannot write manifest in " + dir.string());
    out << manifest.dump(2) << "\n";
}

SceneData read_scene(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw IoError("missing manifest: " + (dir / "manifest.json").string());
    json manifest;
    try {
        in >> manifest;
    } catch (const json::parse_error& e) {
        throw IoError(std::string("bad manifest: ") + e.what());
    }
    SceneData data;
    data.features.frames = manifest.at("T").get<std::size_t>();
    data.features.height = manifest.at("H").get<std::size_t>();
    data.features.width = manifest.at("W").get<std::size_t>();
    data.features.channels = manifest.at("D").get<std::size_t>();
    for (const auto& name : manifest.at("mask_features"))
        data.features.per_frame.push_back(read_ltf(dir / name.get<std::string>()));
    data.features.validate();
    data.frame_embeddings = read_ltf(dir / manifest.at("embeddings").get<std::string>());
    Matrix sentence = read_ltf(dir / manifest.at("sentence").get<std::string>());
    data.sentence_feature.assign(sentence.data.begin(), sentence.data.end());
    for (const auto& c : manifest.at("blob_centers"))
        data.blob_centers.emplace_back(c.at(0).get<std::size_t>(), c.at(1).get<std::size_t>());
    return data;
}

}  // namespace ltca
