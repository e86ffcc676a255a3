#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ltca/analysis.hpp"
#include "ltca/attention.hpp"
#include "ltca/fixtures.hpp"
#include "ltca/heads.hpp"
#include "ltca/mask.hpp"
#include "ltca/query.hpp"

namespace py = pybind11;
using namespace ltca;

namespace {

Matrix to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw ShapeError("expected a 2-D array");
    Matrix m(static_cast<std::size_t>(arr.shape(0)), static_cast<std::size_t>(arr.shape(1)));
    std::memcpy(m.data.data(), arr.data(), m.data.size() * sizeof(double));
    return m;
}

py::array_t<double> to_array(const Matrix& m) {
    py::array_t<double> arr({m.rows, m.cols});
    std::memcpy(arr.mutable_data(), m.data.data(), m.data.size() * sizeof(double));
    return arr;
}

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    return std::vector<double>(arr.data(), arr.data() + arr.size());
}

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

MaskFeatureVolume volume_from_array(const DoubleArray& arr) {
    if (arr.ndim() != 4) throw ShapeError("mask features must be (T, H, W, D)");
    MaskFeatureVolume fm;
    fm.frames = static_cast<std::size_t>(arr.shape(0));
    fm.height = static_cast<std::size_t>(arr.shape(1));
    fm.width = static_cast<std::size_t>(arr.shape(2));
    fm.channels = static_cast<std::size_t>(arr.shape(3));
    const double* src = arr.data();
    std::size_t per = fm.height * fm.width * fm.channels;
    for (std::size_t t = 0; t < fm.frames; ++t) {
        Matrix frame(fm.height * fm.width, fm.channels);
        std::memcpy(frame.data.data(), src + t * per, per * sizeof(double));
        fm.per_frame.push_back(std::move(frame));
    }
    return fm;
}

MlpParams mlp_from_lists(const std::vector<DoubleArray>& weights,
                         const std::vector<DoubleArray>& biases, const std::string& activation) {
    if (weights.size() != biases.size()) throw ShapeError("weights/biases length mismatch");
    MlpParams p;
    if (activation == "relu")
        p.activation = Activation::Relu;
    else if (activation == "identity")
        p.activation = Activation::Identity;
    else
        throw ParamError("unknown activation \"" + activation + "\"");
    for (std::size_t i = 0; i < weights.size(); ++i)
        p.layers.push_back({to_matrix(weights[i]), to_vector(biases[i])});
    return p;
}

}  // namespace

PYBIND11_MODULE(_ltca, m) {
    m.doc() = "Sparse long-range temporal attention engine";

    py::register_exception<ShapeError>(m, "ShapeError");
    py::register_exception<ParamError>(m, "ParamError");
    py::register_exception<ltca::IndexError>(m, "QueryIndexError");
    py::register_exception<DegenerateRowError>(m, "DegenerateRowError");

    py::class_<GeometrySpec>(m, "Geometry")
        .def(py::init([](std::size_t t, std::size_t n1, std::size_t n2) {
                 GeometrySpec g{t, n1, n2};
                 g.validate();
                 return g;
             }),
             py::arg("frames"), py::arg("objects_per_frame"), py::arg("global_queries"))
        .def_readonly("frames", &GeometrySpec::frames)
        .def_readonly("objects_per_frame", &GeometrySpec::objects_per_frame)
        .def_readonly("global_queries", &GeometrySpec::global_queries)
        .def("total", &GeometrySpec::total)
        .def("frame_of", [](const GeometrySpec& g, std::size_t q) { return frame_of(g, q); })
        .def("__repr__", [](const GeometrySpec& g) {
            return "Geometry(T=" + std::to_string(g.frames) + ", N1=" +
                   std::to_string(g.objects_per_frame) + ", N2=" +
                   std::to_string(g.global_queries) + ")";
        });

    py::class_<MaskSpec>(m, "MaskSpec")
        .def_static("window", &MaskSpec::window, py::arg("w"))
        .def_static("dilated", &MaskSpec::dilated, py::arg("w"), py::arg("d"))
        .def_static("random", &MaskSpec::random, py::arg("r"), py::arg("seed") = std::nullopt)
        .def_static("global_", &MaskSpec::global)
        .def_static("shift_window", &MaskSpec::shift_window, py::arg("ws"),
                    py::arg("offset") = std::nullopt)
        .def_static("union_of", &MaskSpec::union_of, py::arg("parts"))
        .def_static("from_json", &MaskSpec::from_json, py::arg("text"))
        .def("to_json", &MaskSpec::to_json);

    py::class_<AllowList>(m, "AllowList")
        .def_property_readonly("geometry", [](const AllowList& a) { return a.geometry; })
        .def_property_readonly("rows", [](const AllowList& a) { return a.rows; })
        .def("allows", &AllowList::allows, py::arg("i"), py::arg("j"))
        .def("pair_count", &AllowList::pair_count)
        .def("to_additive", [](const AllowList& a) { return to_array(to_additive(a)); })
        .def("__eq__", [](const AllowList& a, const AllowList& b) { return a == b; });

    m.def("realize", &realize, py::arg("spec"), py::arg("geometry"), py::arg("seed") = 0,
          py::arg("layer") = 0);
    m.def("compose_union", &compose_union, py::arg("parts"));
    m.def("verify_against_formula", &verify_against_formula, py::arg("allow"), py::arg("spec"),
          py::arg("seed") = 0, py::arg("layer") = 0);
    m.def("pair_count", &pair_count, py::arg("spec"), py::arg("geometry"), py::arg("seed") = 0,
          py::arg("layer") = 0);
    m.def("random_frame_set", &random_frame_set, py::arg("frames"), py::arg("r"), py::arg("seed"),
          py::arg("frame"));

    m.def("sinusoidal_pe",
          [](std::size_t t, std::size_t d) { return to_array(sinusoidal_pe(t, d)); },
          py::arg("frames"), py::arg("width"));
    m.def(
        "assemble",
        [](const DoubleArray& emb, const DoubleArray& object_pe, const DoubleArray& frame_pe,
           const DoubleArray& global_init, const GeometrySpec& g) {
            PositionalEmbeddings pe{to_matrix(object_pe), to_matrix(frame_pe)};
            QueryBundle q = assemble(to_matrix(emb), pe, to_matrix(global_init), g);
            return to_array(q.features);
        },
        py::arg("frame_embeddings"), py::arg("object_pe"), py::arg("frame_pe"),
        py::arg("global_init"), py::arg("geometry"));
    m.def(
        "init_queries_from_sentence",
        [](const DoubleArray& sentence, std::size_t n) {
            return to_array(init_queries_from_sentence(to_vector(sentence), n));
        },
        py::arg("sentence"), py::arg("n"));

    py::class_<LayerParams>(m, "LayerParams")
        .def(py::init([](const DoubleArray& wq, const DoubleArray& wk, const DoubleArray& wv) {
                 LayerParams p;
                 p.wq = to_matrix(wq);
                 p.wk = to_matrix(wk);
                 p.wv = to_matrix(wv);
                 p.bq.assign(p.wq.cols, 0.0);
                 p.bk.assign(p.wq.cols, 0.0);
                 p.bv.assign(p.wq.cols, 0.0);
                 p.validate();
                 return p;
             }),
             py::arg("wq"), py::arg("wk"), py::arg("wv"))
        .def_static("identity", &LayerParams::identity, py::arg("width"))
        .def_static("zero_value", &LayerParams::zero_value, py::arg("width"))
        .def("with_biases", [](LayerParams p, const DoubleArray& bq, const DoubleArray& bk,
                               const DoubleArray& bv) {
            p.bq = to_vector(bq);
            p.bk = to_vector(bk);
            p.bv = to_vector(bv);
            p.validate();
            return p;
        });

    auto run_attention = [](const DoubleArray& features, const GeometrySpec& g,
                            const AllowList& mask, const LayerParams& p, bool scale,
                            std::size_t heads, bool dense) {
        QueryBundle q;
        q.geometry = g;
        q.features = to_matrix(features);
        AttentionOptions opts{scale, heads};
        QueryBundle out = dense ? attention_dense(q, p, mask, opts)
                                : attention_sparse(q, p, mask, opts, nullptr);
        return to_array(out.features);
    };
    m.def(
        "attention_dense",
        [run_attention](const DoubleArray& f, const GeometrySpec& g, const AllowList& mask,
                        const LayerParams& p, bool scale, std::size_t heads) {
            return run_attention(f, g, mask, p, scale, heads, true);
        },
        py::arg("features"), py::arg("geometry"), py::arg("mask"), py::arg("params"),
        py::arg("scale") = true, py::arg("heads") = 1);
    m.def(
        "attention_sparse",
        [run_attention](const DoubleArray& f, const GeometrySpec& g, const AllowList& mask,
                        const LayerParams& p, bool scale, std::size_t heads) {
            return run_attention(f, g, mask, p, scale, heads, false);
        },
        py::arg("features"), py::arg("geometry"), py::arg("mask"), py::arg("params"),
        py::arg("scale") = true, py::arg("heads") = 1);

    m.def(
        "ltca_forward",
        [](const DoubleArray& features, const GeometrySpec& g,
           const std::vector<std::pair<LayerParams, MaskSpec>>& layers, bool scale,
           std::size_t heads, std::uint64_t seed) {
            QueryBundle q;
            q.geometry = g;
            q.features = to_matrix(features);
            LtcaConfig cfg;
            cfg.opts = AttentionOptions{scale, heads};
            cfg.default_seed = seed;
            for (const auto& [p, spec] : layers) cfg.layers.push_back({p, spec, std::nullopt});
            MacCounter mac;
            auto [global_out, object_out] = ltca_forward(q, cfg, &mac);
            return py::make_tuple(to_array(global_out), to_array(object_out), mac.total());
        },
        py::arg("features"), py::arg("geometry"), py::arg("layers"), py::arg("scale") = true,
        py::arg("heads") = 1, py::arg("seed") = 0);

    py::class_<MlpParams>(m, "Mlp")
        .def(py::init(&mlp_from_lists), py::arg("weights"), py::arg("biases"),
             py::arg("activation") = "relu")
        .def_static("identity", &MlpParams::identity, py::arg("width"));

    m.def(
        "segment",
        [](const DoubleArray& mask_features, const DoubleArray& global_out, const MlpParams& hs) {
            MaskFeatureVolume fm = volume_from_array(mask_features);
            Matrix q = to_matrix(global_out);
            std::vector<double> logits = segment(fm, q, hs);
            py::array_t<double> arr({q.rows, fm.frames, fm.height, fm.width});
            std::memcpy(arr.mutable_data(), logits.data(), logits.size() * sizeof(double));
            return arr;
        },
        py::arg("mask_features"), py::arg("global_out"), py::arg("hs"));
    m.def(
        "classify",
        [](const DoubleArray& global_out, const DoubleArray& sentence, const MlpParams& hc) {
            return classify(to_matrix(global_out), to_vector(sentence), hc);
        },
        py::arg("global_out"), py::arg("sentence"), py::arg("hc"));
    m.def(
        "select",
        [](const std::vector<double>& scores, const std::string& mode, double sigma) {
            PredictionSet p;
            p.queries = scores.size();
            p.scores = scores;
            if (mode != "single" && mode != "multi")
                throw ParamError("mode must be single or multi");
            return select(p, mode == "single" ? SelectMode::Single : SelectMode::Multi, sigma);
        },
        py::arg("scores"), py::arg("mode"), py::arg("sigma") = 0.5);

    m.def(
        "reachability",
        [](const std::vector<MaskSpec>& specs, const GeometrySpec& g, std::size_t layers,
           std::uint64_t seed) {
            ReachabilityReport rep = reachability(specs, g, layers, seed);
            py::dict out;
            out["diameter"] = rep.diameter ? py::cast(*rep.diameter) : py::none();
            out["max_frame_span"] = rep.max_frame_span;
            std::size_t n = g.total();
            py::array_t<bool> last({n, n});
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    last.mutable_at(i, j) = rep.reached.back()[i * n + j];
            out["reached"] = last;
            return out;
        },
        py::arg("layer_specs"), py::arg("geometry"), py::arg("layers"), py::arg("seed") = 0);
    m.def(
        "cost_report",
        [](const std::vector<MaskSpec>& specs, const GeometrySpec& g, std::size_t width,
           bool scale, std::size_t heads, std::uint64_t seed) {
            CostReport rep = cost_report(specs, g, width, AttentionOptions{scale, heads}, seed);
            py::list layers;
            for (const auto& c : rep.layers) {
                py::dict d;
                d["pairs"] = c.pairs;
                d["macs"] = c.total();
                layers.append(d);
            }
            py::dict out;
            out["layers"] = layers;
            out["total_macs"] = rep.total_macs;
            out["total_pairs"] = rep.total_pairs;
            return out;
        },
        py::arg("layer_specs"), py::arg("geometry"), py::arg("width"), py::arg("scale") = true,
        py::arg("heads") = 1, py::arg("seed") = 0);

    m.def(
        "gen_scene",
        [](std::size_t frames, std::size_t height, std::size_t width, std::size_t channels,
           std::uint64_t seed, double noise_amplitude) {
            SyntheticScene s{frames, height, width, channels, seed, noise_amplitude};
            SceneData data = gen_scene(s);
            py::array_t<double> fm({frames, height, width, channels});
            std::size_t per = height * width * channels;
            for (std::size_t t = 0; t < frames; ++t)
                std::memcpy(fm.mutable_data() + t * per, data.features.per_frame[t].data.data(),
                            per * sizeof(double));
            py::dict out;
            out["mask_features"] = fm;
            out["frame_embeddings"] = to_array(data.frame_embeddings);
            out["sentence"] = py::cast(data.sentence_feature);
            out["blob_centers"] = py::cast(data.blob_centers);
            return out;
        },
        py::arg("frames") = 8, py::arg("height") = 16, py::arg("width") = 16,
        py::arg("channels") = 8, py::arg("seed") = 0, py::arg("noise_amplitude") = 0.01);
}
