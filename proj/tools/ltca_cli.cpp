#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ltca/analysis.hpp"
#include "ltca/attention.hpp"
#include "ltca/fixtures.hpp"
#include "ltca/heads.hpp"
#include "ltca/ltf.hpp"
#include "ltca/mask.hpp"
#include "ltca/query.hpp"
#include "ltca/rng.hpp"

using namespace ltca;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

GeometrySpec parse_geometry(const std::string& text) {
    GeometrySpec g;
    if (std::sscanf(text.c_str(), "%zu,%zu,%zu", &g.frames, &g.objects_per_frame,
                    &g.global_queries) != 3)
        throw ParamError("--geometry expects T,N1,N2");
    g.validate();
    return g;
}

std::vector<std::size_t> parse_sweep(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoul(item));
    if (out.empty()) throw ParamError("--sweep expects a comma list of frame counts");
    return out;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Matrix random_matrix(SplitMix64& rng, std::size_t rows, std::size_t cols, double scale = 1.0) {
    Matrix m(rows, cols);
    for (double& v : m.data) v = scale * (2.0 * rng.next_double() - 1.0);
    return m;
}

LayerParams random_params(SplitMix64& rng, std::size_t width) {
    LayerParams p;
    p.wq = random_matrix(rng, width, width, 0.5);
    p.wk = random_matrix(rng, width, width, 0.5);
    p.wv = random_matrix(rng, width, width, 0.5);
    p.bq.resize(width);
    p.bk.resize(width);
    p.bv.resize(width);
    for (auto* b : {&p.bq, &p.bk, &p.bv})
        for (double& v : *b) v = rng.next_double() - 0.5;
    return p;
}

std::vector<double> read_bias(const std::filesystem::path& path) {
    Matrix m = read_ltf(path);
    return std::vector<double>(m.data.begin(), m.data.end());
}

MlpParams mlp_from_json(const json& j, const std::filesystem::path& base, std::size_t in_width,
                        std::size_t out_width) {
    MlpParams p;
    if (j.contains("preset")) {
        std::string preset = j.at("preset").get<std::string>();
        if (preset == "identity") {
            if (in_width != out_width) throw ParamError("identity head needs equal widths");
            return MlpParams::identity(in_width);
        }
        if (preset == "zero") {
            p.layers.push_back({Matrix(in_width, out_width, 0.0),
                                std::vector<double>(out_width, 0.0)});
            return p;
        }
        throw ParamError("unknown mlp preset \"" + preset + "\"");
    }
    if (j.contains("activation")) {
        std::string act = j.at("activation").get<std::string>();
        if (act == "relu")
            p.activation = Activation::Relu;
        else if (act == "identity")
            p.activation = Activation::Identity;
        else
            throw ParamError("unknown activation \"" + act + "\"");
    }
    for (const auto& layer : j.at("layers")) {
        Matrix w = read_ltf(base / layer.at("weight").get<std::string>());
        std::vector<double> b(w.cols, 0.0);
        if (layer.contains("bias")) b = read_bias(base / layer.at("bias").get<std::string>());
        p.layers.push_back({std::move(w), std::move(b)});
    }
    if (p.layers.empty()) throw ParamError("mlp config has no layers");
    if (p.in_width() != in_width || p.out_width() != out_width)
        throw ParamError("mlp config widths do not match the pipeline");
    return p;
}

struct InferSetup {
    LtcaConfig cfg;
    MlpParams hs;
    MlpParams hc;
};

LayerParams layer_params_from_json(const json& j, const std::filesystem::path& base,
                                   std::size_t width) {
    if (j.contains("preset")) {
        std::string preset = j.at("preset").get<std::string>();
        if (preset == "identity") return LayerParams::identity(width);
        if (preset == "zero_value") return LayerParams::zero_value(width);
        throw ParamError("unknown layer preset \"" + preset + "\"");
    }
    LayerParams p;
    p.wq = read_ltf(base / j.at("wq").get<std::string>());
    p.wk = read_ltf(base / j.at("wk").get<std::string>());
    p.wv = read_ltf(base / j.at("wv").get<std::string>());
    p.bq.assign(width, 0.0);
    p.bk.assign(width, 0.0);
    p.bv.assign(width, 0.0);
    if (j.contains("bq")) p.bq = read_bias(base / j.at("bq").get<std::string>());
    if (j.contains("bk")) p.bk = read_bias(base / j.at("bk").get<std::string>());
    if (j.contains("bv")) p.bv = read_bias(base / j.at("bv").get<std::string>());
    p.validate();
    if (p.width() != width) throw ParamError("layer params width does not match pipeline");
    return p;
}

/// Default untrained setup: two identity-parameter layers over the standard
/// dilated + random + global union, identity segmentation head, zero
/// classification head.
InferSetup default_setup(std::size_t width, std::uint64_t seed) {
    InferSetup s;
    MaskSpec mask = MaskSpec::union_of(
        {MaskSpec::dilated(2, 2), MaskSpec::random(2, seed), MaskSpec::global()});
    s.cfg.default_seed = seed;
    s.cfg.layers.push_back({LayerParams::identity(width), mask, std::nullopt});
    s.cfg.layers.push_back({LayerParams::identity(width), mask, std::nullopt});
    s.hs = MlpParams::identity(width);
    s.hc.layers.push_back({Matrix(2 * width, 1, 0.0), std::vector<double>(1, 0.0)});
    return s;
}

InferSetup setup_from_json(const std::filesystem::path& path, std::size_t width,
                           std::uint64_t seed) {
    json j;
    try {
        j = json::parse(slurp(path));
    } catch (const json::parse_error& e) {
        throw ParamError(std::string("layers json: ") + e.what());
    }
    std::filesystem::path base = path.parent_path();
    InferSetup s = default_setup(width, seed);
    s.cfg.layers.clear();
    s.cfg.opts.scale_scores = j.value("scale_scores", true);
    s.cfg.opts.heads = j.value("heads", std::size_t{1});
    s.cfg.standard_sublayers = j.value("standard_sublayers", false);
    s.cfg.default_seed = seed;
    for (const auto& layer : j.at("layers")) {
        LtcaLayerSpec ls;
        ls.mask = MaskSpec::from_json(layer.at("mask").dump());
        ls.params = layer_params_from_json(layer.at("params"), base, width);
        if (layer.contains("ffn"))
            ls.ffn = mlp_from_json(layer.at("ffn"), base, width, width);
        s.cfg.layers.push_back(std::move(ls));
    }
    if (j.contains("hs")) s.hs = mlp_from_json(j.at("hs"), base, width, width);
    if (j.contains("hc")) s.hc = mlp_from_json(j.at("hc"), base, 2 * width, 1);
    return s;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for write: " + path.string());
    out << text;
}

// ---------------------------------------------------------------- verify

struct VerifyFlags {
    std::uint64_t seed = 0;
    std::size_t mask_trials = 1000;
    std::size_t attn_trials = 200;
    double tolerance = 1e-9;
    bool inject_mutation = false;
    std::string out_dir;
};

int cmd_verify(const VerifyFlags& flags) {
    if (flags.tolerance <= 0.0) throw ParamError("--tolerance must be > 0");
    SplitMix64 rng(flags.seed);
    std::size_t mask_failures = 0;
    bool mutated_once = !flags.inject_mutation;

    for (std::size_t trial = 0; trial < flags.mask_trials; ++trial) {
        GeometrySpec g{1 + rng.next_below(32), 1 + rng.next_below(4), rng.next_below(5)};
        std::uint64_t seed = rng.next_u64();
        std::vector<MaskSpec> specs;
        specs.push_back(MaskSpec::window(rng.next_below(2 * g.frames)));
        specs.push_back(MaskSpec::dilated(rng.next_below(8), 1 + rng.next_below(4)));
        specs.push_back(MaskSpec::random(rng.next_below(g.frames + 1), seed));
        specs.push_back(MaskSpec::shift_window(1 + rng.next_below(g.frames), rng.next_below(4)));
        if (g.global_queries > 0) {
            specs.push_back(MaskSpec::global());
            specs.push_back(MaskSpec::union_of(
                {MaskSpec::dilated(2, 2), MaskSpec::random(1, seed), MaskSpec::global()}));
        }
        for (const auto& spec : specs) {
            AllowList a = realize(spec, g, seed);
            if (!mutated_once) {
                // Test hook: flip one mask bit to prove the oracle notices.
                for (auto& row : a.rows) {
                    if (!row.empty()) {
                        row.erase(row.begin());
                        break;
                    }
                }
                mutated_once = true;
            }
            if (!verify_against_formula(a, spec, seed)) ++mask_failures;
        }
    }

    double max_dev = 0.0;
    for (std::size_t trial = 0; trial < flags.attn_trials; ++trial) {
        GeometrySpec g{1 + rng.next_below(24), 1 + rng.next_below(3), 1 + rng.next_below(3)};
        std::size_t width = 2 * (1 + rng.next_below(8));
        std::uint64_t seed = rng.next_u64();
        MaskSpec spec = MaskSpec::union_of({MaskSpec::dilated(rng.next_below(6), 1 + rng.next_below(3)),
                                            MaskSpec::random(rng.next_below(g.frames + 1), seed),
                                            MaskSpec::global()});
        AllowList m = realize(spec, g, seed);
        QueryBundle q;
        q.geometry = g;
        q.features = random_matrix(rng, g.total(), width);
        LayerParams p = random_params(rng, width);
        QueryBundle dense = attention_dense(q, p, m);
        QueryBundle sparse = attention_sparse(q, p, m);
        max_dev = std::max(max_dev, max_abs_diff(dense.features, sparse.features));
    }

    bool pass = mask_failures == 0 && max_dev <= flags.tolerance;
    json report;
    report["mask_trials"] = flags.mask_trials;
    report["mask_failures"] = mask_failures;
    report["attention_trials"] = flags.attn_trials;
    report["max_abs_deviation"] = max_dev;
    report["tolerance"] = flags.tolerance;
    report["pass"] = pass;
    std::string text = report.dump(2) + "\n";
    if (!flags.out_dir.empty()) {
        std::filesystem::create_directories(flags.out_dir);
        write_text(std::filesystem::path(flags.out_dir) / "verify.json", text);
    }
    std::cout << text;
    return pass ? kExitOk : kExitVerifyFail;
}

// ---------------------------------------------------------------- inspect

int cmd_inspect(const std::string& geometry, const std::string& mask_path, std::uint64_t seed,
                const std::string& out_dir) {
    GeometrySpec g = parse_geometry(geometry);
    MaskSpec spec = MaskSpec::from_json(slurp(mask_path));
    AllowList a = realize(spec, g, seed);

    std::size_t min_row = a.geometry.total(), max_row = 0, empty_rows = 0;
    for (const auto& row : a.rows) {
        min_row = std::min(min_row, row.size());
        max_row = std::max(max_row, row.size());
        if (row.empty()) ++empty_rows;
    }
    json stats;
    stats["total_queries"] = g.total();
    stats["pairs"] = a.pair_count();
    stats["min_row"] = min_row;
    stats["max_row"] = max_row;
    stats["empty_rows"] = empty_rows;
    std::cout << stats.dump(2) << "\n";

    if (g.total() <= 80) {
        for (std::size_t i = 0; i < g.total(); ++i) {
            std::string line(g.total(), '.');
            for (std::size_t j : a.rows[i]) line[j] = '#';
            std::cout << line << "\n";
        }
    }
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_allowlist_file(std::filesystem::path(out_dir) / "allowlist.txt", a);
    }
    return kExitOk;
}

// ---------------------------------------------------------------- reach

int cmd_reach(const std::string& geometry, const std::string& mask_path, std::size_t depth,
              std::uint64_t seed, std::size_t seeds, const std::string& out_dir) {
    GeometrySpec g = parse_geometry(geometry);
    json j;
    try {
        j = json::parse(slurp(mask_path));
    } catch (const json::parse_error& e) {
        throw ParamError(std::string("mask json: ") + e.what());
    }
    std::vector<MaskSpec> specs;
    if (j.is_array())
        for (const auto& item : j) specs.push_back(MaskSpec::from_json(item.dump()));
    else
        specs.push_back(MaskSpec::from_json(j.dump()));
    if (seeds < 1) throw ParamError("--seeds must be >= 1");

    ReachabilityReport rep = reachability(specs, g, depth, seed);
    json out_json = json::parse(report_to_json(rep));
    if (seeds > 1) {
        // Per-seed aggregate for random masks: diameters across the sweep.
        json diameters = json::array();
        std::size_t reached = 0, min_d = depth + 1, max_d = 0;
        double mean = 0.0;
        for (std::size_t s = 0; s < seeds; ++s) {
            ReachabilityReport r = reachability(specs, g, depth, seed + s);
            if (r.diameter) {
                diameters.push_back(*r.diameter);
                min_d = std::min(min_d, *r.diameter);
                max_d = std::max(max_d, *r.diameter);
                mean += static_cast<double>(*r.diameter);
                ++reached;
            } else {
                diameters.push_back("unreachable");
            }
        }
        json agg;
        agg["seeds"] = seeds;
        agg["diameters"] = diameters;
        if (reached > 0) {
            agg["min_diameter"] = min_d;
            agg["max_diameter"] = max_d;
            agg["mean_diameter"] = mean / static_cast<double>(reached);
        }
        out_json["seed_sweep"] = agg;
    }
    std::string js = out_json.dump(2) + "\n";
    std::string grid = report_to_ascii(rep);
    std::cout << js << grid;
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_text(std::filesystem::path(out_dir) / "reach.json", js);
        write_text(std::filesystem::path(out_dir) / "reach.txt", grid);
    }
    return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchFlags {
    std::string geometry = "32,4,1";
    std::size_t width = 8;
    std::string sweep = "32,64,128,256";
    std::uint64_t seed = 0;
    std::size_t repeats = 5;
    std::size_t w = 2, d = 2, r = 2, ws = 8;
    bool no_wall = false;
    std::string out_path;
};

int cmd_bench(const BenchFlags& flags) {
    GeometrySpec base = parse_geometry(flags.geometry);
    if (base.global_queries == 0) throw ParamError("bench requires N2 >= 1");
    if (flags.repeats < 1) throw ParamError("--repeats must be >= 1");
    std::vector<std::size_t> sweep = parse_sweep(flags.sweep);

    std::ostringstream csv;
    csv << "T,spec,pairs,macs,wall_ns\n";
    for (std::size_t frames : sweep) {
        GeometrySpec g{frames, base.objects_per_frame, base.global_queries};
        struct Entry {
            const char* name;
            MaskSpec spec;
        };
        std::vector<Entry> entries = {
            {"full", MaskSpec::union_of({MaskSpec::window(2 * frames), MaskSpec::global()})},
            {"shift_window",
             MaskSpec::union_of({MaskSpec::shift_window(flags.ws, 0), MaskSpec::global()})},
            {"ltca", MaskSpec::union_of({MaskSpec::dilated(flags.w, flags.d),
                                         MaskSpec::random(flags.r, flags.seed),
                                         MaskSpec::global()})},
        };
        SplitMix64 rng(flags.seed ^ frames);
        QueryBundle q;
        q.geometry = g;
        q.features = random_matrix(rng, g.total(), flags.width);
        LayerParams p = random_params(rng, flags.width);
        for (const auto& entry : entries) {
            AllowList m = realize(entry.spec, g, flags.seed);
            CostReport cost = cost_report({entry.spec}, g, flags.width, {}, flags.seed);
            std::uint64_t wall = 0;
            if (!flags.no_wall) {
                std::vector<std::uint64_t> times;
                for (std::size_t rep = 0; rep < flags.repeats; ++rep) {
                    auto t0 = std::chrono::steady_clock::now();
                    attention_sparse(q, p, m);
                    auto t1 = std::chrono::steady_clock::now();
                    times.push_back(static_cast<std::uint64_t>(
                        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
                }
                std::sort(times.begin(), times.end());
                wall = times[times.size() / 2];
            }
            csv << frames << "," << entry.name << "," << m.pair_count() << ","
                << cost.total_macs << "," << wall << "\n";
        }
    }
    if (!flags.out_path.empty()) {
        std::filesystem::path out(flags.out_path);
        if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
        write_text(out, csv.str());
    }
    std::cout << csv.str();
    return kExitOk;
}

// ---------------------------------------------------------------- infer

struct InferFlags {
    std::string fixtures_dir;
    std::uint64_t scene_seed = 0;
    bool has_scene_seed = false;
    std::string layers_path;
    std::string object_pe_path;
    std::size_t global_queries = 2;
    std::string mode = "single";
    double sigma = 0.5;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    bool save_fixtures = false;
};

int cmd_infer(const InferFlags& flags) {
    if (flags.mode != "single" && flags.mode != "multi")
        throw ParamError("--mode must be single or multi");
    SceneData scene;
    SyntheticScene gen;
    if (!flags.fixtures_dir.empty()) {
        scene = read_scene(flags.fixtures_dir);
    } else {
        gen.seed = flags.has_scene_seed ? flags.scene_seed : flags.seed;
        scene = gen_scene(gen);
    }
    const std::size_t width = scene.features.channels;
    const std::size_t frames = scene.features.frames;
    GeometrySpec g{frames, 1, flags.global_queries};

    InferSetup setup = flags.layers_path.empty()
                           ? default_setup(width, flags.seed)
                           : setup_from_json(flags.layers_path, width, flags.seed);

    PositionalEmbeddings pe;
    pe.object_pe = flags.object_pe_path.empty()
                       ? Matrix(1, width, 0.0)  // untrained object PE
                       : read_ltf(flags.object_pe_path);
    pe.frame_pe = sinusoidal_pe(frames, width);
    Matrix global_init = init_queries_from_sentence(scene.sentence_feature, g.global_queries);
    QueryBundle q = assemble(scene.frame_embeddings, pe, global_init, g);

    MacCounter mac;
    auto [global_out, object_out] = ltca_forward(q, setup.cfg, &mac);

    PredictionSet pred;
    pred.queries = g.global_queries;
    pred.frames = frames;
    pred.height = scene.features.height;
    pred.width = scene.features.width;
    pred.logits = segment(scene.features, global_out, setup.hs);
    pred.scores = classify(global_out, scene.sentence_feature, setup.hc);
    SelectMode mode = flags.mode == "single" ? SelectMode::Single : SelectMode::Multi;
    std::vector<std::size_t> selected = select(pred, mode, flags.sigma);

    std::filesystem::path out(flags.out_dir);
    std::filesystem::create_directories(out);
    if (flags.save_fixtures && flags.fixtures_dir.empty())
        write_scene(out / "fixtures", gen, scene);
    for (std::size_t i = 0; i < pred.queries; ++i) {
        for (std::size_t t = 0; t < frames; ++t) {
            std::ostringstream stem;
            stem << "q" << i << "_t" << t;
            write_pgm(out / ("mask_" + stem.str() + ".pgm"), pred, i, t);
            Matrix logits(pred.height, pred.width);
            for (std::size_t y = 0; y < pred.height; ++y)
                for (std::size_t x = 0; x < pred.width; ++x)
                    logits.at(y, x) = pred.logit(i, t, y, x);
            write_ltf(out / ("logits_" + stem.str() + ".ltf"), logits);
        }
    }
    write_text(out / "scores.json", json(pred.scores).dump(2) + "\n");
    json sel;
    sel["mode"] = flags.mode;
    sel["sigma"] = flags.sigma;
    sel["selected"] = selected;
    write_text(out / "selection.json", sel.dump(2) + "\n");
    json summary = sel;
    summary["forward_macs"] = mac.total();
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse long-range temporal attention engine"};
    app.require_subcommand(1);

    std::string geometry = "8,1,2";
    std::string mask_path;
    std::uint64_t seed = 0;
    std::string out_dir;

    VerifyFlags vf;
    auto* verify = app.add_subcommand("verify", "Run mask-formula and oracle-equivalence suites");
    verify->add_option("--seed", vf.seed, "Base seed for randomized suites");
    verify->add_option("--trials", vf.mask_trials, "Randomized mask geometries");
    verify->add_option("--attn-trials", vf.attn_trials, "Randomized attention configs");
    verify->add_option("--tolerance", vf.tolerance, "Max allowed dense/sparse deviation");
    verify->add_option("--out", vf.out_dir, "Directory for verify.json");
    verify->add_flag("--inject-mask-mutation", vf.inject_mutation,
                     "Flip one mask bit (mutation-sensitivity hook)")
        ->group("");

    auto* inspect = app.add_subcommand("inspect", "Realize a mask spec and dump stats + fixture");
    inspect->add_option("--geometry", geometry, "T,N1,N2");
    inspect->add_option("--mask", mask_path, "Mask spec JSON file")->required();
    inspect->add_option("--seed", seed, "Default seed for random masks");
    inspect->add_option("--out", out_dir, "Directory for allowlist.txt");

    std::size_t depth = 8;
    std::size_t seed_sweep = 1;
    auto* reach = app.add_subcommand("reach", "Receptive-field reachability report");
    reach->add_option("--geometry", geometry, "T,N1,N2");
    reach->add_option("--mask", mask_path, "Mask spec JSON file (object or per-layer array)")
        ->required();
    reach->add_option("--depth", depth, "Layer count K");
    reach->add_option("--seed", seed, "Default seed for random masks");
    reach->add_option("--seeds", seed_sweep, "Aggregate diameters over this many seeds");
    reach->add_option("--out", out_dir, "Directory for reach.json / reach.txt");

    BenchFlags bf;
    auto* bench = app.add_subcommand("bench", "Pair-count / MAC / wall-time sweep CSV");
    bench->add_option("--geometry", bf.geometry, "T,N1,N2 (T replaced by sweep values)");
    bench->add_option("--d", bf.width, "Feature width D");
    bench->add_option("--sweep", bf.sweep, "Comma list of frame counts");
    bench->add_option("--seed", bf.seed, "Seed for params and random masks");
    bench->add_option("--repeats", bf.repeats, "Wall-time repeats (median reported)");
    bench->add_option("--w", bf.w, "LTCA window budget");
    bench->add_option("--dilation", bf.d, "LTCA dilation");
    bench->add_option("--r", bf.r, "LTCA random frames per query");
    bench->add_option("--ws", bf.ws, "Baseline shift-window length");
    bench->add_flag("--no-wall", bf.no_wall, "Skip timing; write wall_ns = 0");
    bench->add_option("--out", bf.out_path, "CSV output path");

    InferFlags inf;
    auto* infer = app.add_subcommand("infer", "Assemble -> LTCA -> heads -> selection");
    infer->add_option("--fixtures", inf.fixtures_dir, "Scene fixture directory (manifest.json)");
    auto* scene_seed_opt =
        infer->add_option("--scene-seed", inf.scene_seed, "Generate the golden scene from this seed");
    infer->add_option("--layers", inf.layers_path, "LtcaConfig JSON");
    infer->add_option("--object-pe", inf.object_pe_path, "Learnable object PE as an LTF file");
    infer->add_option("--n2", inf.global_queries, "Global query count");
    infer->add_option("--mode", inf.mode, "single | multi");
    infer->add_option("--sigma", inf.sigma, "Confidence threshold for multi mode");
    infer->add_option("--seed", inf.seed, "Default seed for random masks");
    infer->add_option("--out", inf.out_dir, "Output directory");
    infer->add_flag("--save-fixtures", inf.save_fixtures, "Also write the generated scene");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*verify) return cmd_verify(vf);
        if (*inspect) return cmd_inspect(geometry, mask_path, seed, out_dir);
        if (*reach) return cmd_reach(geometry, mask_path, depth, seed, seed_sweep, out_dir);
        if (*bench) return cmd_bench(bf);
        if (*infer) {
            inf.has_scene_seed = scene_seed_opt->count() > 0;
            return cmd_infer(inf);
        }
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
