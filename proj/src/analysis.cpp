#include "ltca/analysis.hpp"

#include <sstream>

#include <json.hpp>

namespace ltca {

using nlohmann::json;

namespace {

// 64-bit packed bit rows; set[j] holds the queries whose content reached j.
struct BitColumns {
    std::size_t n = 0;
    std::size_t words = 0;
    std::vector<std::uint64_t> bits;  // n columns x words

    explicit BitColumns(std::size_t count)
        : n(count), words((count + 63) / 64), bits(count * ((count + 63) / 64), 0) {}

    std::uint64_t* col(std::size_t j) { return bits.data() + j * words; }
    const std::uint64_t* col(std::size_t j) const { return bits.data() + j * words; }

    void set(std::size_t j, std::size_t i) { col(j)[i / 64] |= 1ULL << (i % 64); }
    bool get(std::size_t j, std::size_t i) const {
        return (col(j)[i / 64] >> (i % 64)) & 1ULL;
    }
};

}  // namespace

ReachabilityReport reachability(const std::vector<MaskSpec>& layer_specs, const GeometrySpec& g,
                                std::size_t layer_count, std::uint64_t default_seed) {
    if (layer_count < 1) throw ParamError("reachability: layer count must be >= 1");
    if (layer_specs.empty()) throw ParamError("reachability: no layer specs");
    g.validate();
    std::size_t n = g.total();

    ReachabilityReport rep;
    rep.geometry = g;
    rep.layer_count = layer_count;
    rep.reached.reserve(layer_count);
    rep.max_frame_span.reserve(layer_count);

    BitColumns cols(n);
    for (std::size_t j = 0; j < n; ++j) cols.set(j, j);

    for (std::size_t k = 1; k <= layer_count; ++k) {
        const MaskSpec& spec = layer_specs[(k - 1) % layer_specs.size()];
        AllowList allow = realize(spec, g, default_seed, k - 1);
        BitColumns next = cols;  // residual: column j keeps its own content
        for (std::size_t j = 0; j < n; ++j) {
            std::uint64_t* dst = next.col(j);
            for (std::size_t m : allow.rows[j]) {
                const std::uint64_t* src = cols.col(m);
                for (std::size_t wi = 0; wi < cols.words; ++wi) dst[wi] |= src[wi];
            }
        }
        cols = std::move(next);

        std::vector<bool> flat(n * n, false);
        bool full = true;
        std::size_t span = 0;
        for (std::size_t i = 0; i < n; ++i) {
            auto fi = frame_of(g, i);
            for (std::size_t j = 0; j < n; ++j) {
                bool v = cols.get(i, j);  // content of j reached i
                flat[i * n + j] = v;
                if (!v) {
                    full = false;
                    continue;
                }
                auto fj = frame_of(g, j);
                if (fi && fj) {
                    std::size_t delta = *fi > *fj ? *fi - *fj : *fj - *fi;
                    span = std::max(span, delta);
                }
            }
        }
        rep.reached.push_back(std::move(flat));
        rep.max_frame_span.push_back(span);
        if (full && !rep.diameter) rep.diameter = k;
    }
    return rep;
}

CostReport cost_report(const std::vector<MaskSpec>& layer_specs, const GeometrySpec& g,
                       std::size_t width, const AttentionOptions& opts,
                       std::uint64_t default_seed) {
    g.validate();
    if (opts.heads < 1 || width % opts.heads != 0)
        throw ParamError("cost_report: heads must divide the feature width");
    std::uint64_t n = g.total();
    std::uint64_t d = width;
    std::uint64_t per_pair = 2 * d + opts.heads * (opts.scale_scores ? 3 : 2);

    CostReport rep;
    for (std::size_t l = 0; l < layer_specs.size(); ++l) {
        LayerCost c;
        c.pairs = pair_count(layer_specs[l], g, default_seed, l);
        c.transform_macs = 3 * n * d * d;
        c.pair_macs = static_cast<std::uint64_t>(c.pairs) * per_pair;
        c.residual_macs = n * d;
        rep.total_macs += c.total();
        rep.total_pairs += c.pairs;
        rep.layers.push_back(c);
    }
    return rep;
}

std::string report_to_json(const ReachabilityReport& rep) {
    json j;
    j["geometry"] = {{"T", rep.geometry.frames},
                     {"N1", rep.geometry.objects_per_frame},
                     {"N2", rep.geometry.global_queries}};
    j["layers"] = rep.layer_count;
    if (rep.diameter)
        j["diameter"] = *rep.diameter;
    else
        j["diameter"] = "unreachable";
    j["max_frame_span"] = rep.max_frame_span;
    return j.dump(2);
}

std::string report_to_ascii(const ReachabilityReport& rep) {
    std::ostringstream out;
    std::size_t n = rep.geometry.total();
    out << "reachability after " << rep.layer_count << " layer(s), "
        << (rep.diameter ? "diameter " + std::to_string(*rep.diameter) : std::string("unreachable"))
        << "\n";
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            out << (rep.reached.back()[i * n + j] ? '#' : '.');
        out << "\n";
    }
    return out.str();
}

}  // namespace ltca
