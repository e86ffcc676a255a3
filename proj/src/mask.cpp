#include "ltca/mask.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "ltca/rng.hpp"

namespace ltca {

using nlohmann::json;

MaskSpec MaskSpec::window(std::size_t w) {
    MaskSpec s;
    s.kind = MaskKind::Window;
    s.w = w;
    return s;
}

MaskSpec MaskSpec::dilated(std::size_t w, std::size_t d) {
    MaskSpec s;
    s.kind = MaskKind::DilatedWindow;
    s.w = w;
    s.d = d;
    return s;
}

MaskSpec MaskSpec::random(std::size_t r, std::optional<std::uint64_t> seed) {
    MaskSpec s;
    s.kind = MaskKind::Random;
    s.r = r;
    s.seed = seed;
    return s;
}

MaskSpec MaskSpec::global() {
    MaskSpec s;
    s.kind = MaskKind::Global;
    return s;
}

MaskSpec MaskSpec::shift_window(std::size_t ws, std::optional<std::size_t> offset) {
    MaskSpec s;
    s.kind = MaskKind::ShiftWindow;
    s.ws = ws;
    s.shift_offset = offset;
    return s;
}

MaskSpec MaskSpec::union_of(std::vector<MaskSpec> parts) {
    MaskSpec s;
    s.kind = MaskKind::Union;
    s.parts = std::move(parts);
    return s;
}

void MaskSpec::validate() const {
    switch (kind) {
        case MaskKind::DilatedWindow:
            if (d < 1) throw ParamError("mask: dilation d must be >= 1");
            break;
        case MaskKind::ShiftWindow:
            if (ws < 1) throw ParamError("mask: shift-window length must be >= 1");
            break;
        case MaskKind::Union:
            if (parts.empty()) throw ParamError("mask: union must be non-empty");
            for (const auto& p : parts) {
                if (p.kind == MaskKind::Union) throw ParamError("mask: nested union");
                p.validate();
            }
            break;
        default:
            break;
    }
}

bool AllowList::allows(std::size_t i, std::size_t j) const {
    const auto& row = rows[i];
    return std::binary_search(row.begin(), row.end(), j);
}

std::size_t AllowList::pair_count() const {
    std::size_t n = 0;
    for (const auto& row : rows) n += row.size();
    return n;
}

namespace {

AllowList empty_list(const GeometrySpec& g) {
    g.validate();
    AllowList a;
    a.geometry = g;
    a.rows.assign(g.total(), {});
    return a;
}

// Appends the object-query indices of 1-based frame f in layout order.
void append_frame_keys(const GeometrySpec& g, std::size_t f, std::vector<std::size_t>& row) {
    std::size_t base = g.global_queries + (f - 1) * g.objects_per_frame;
    for (std::size_t s = 0; s < g.objects_per_frame; ++s) row.push_back(base + s);
}

}  // namespace

AllowList build_window(const GeometrySpec& g, std::size_t w) {
    return build_dilated(g, w, 1);
}

AllowList build_dilated(const GeometrySpec& g, std::size_t w, std::size_t d) {
    if (d < 1) throw ParamError("build_dilated: d must be >= 1");
    AllowList a = empty_list(g);
    // 2|df(i)-df(j)| <= d*w with step d reduces to offsets k*d, |k| <= w/2.
    std::size_t radius = w / 2;
    for (std::size_t f = 1; f <= g.frames; ++f) {
        std::vector<std::size_t> keys;
        for (std::size_t k = radius; k >= 1; --k) {
            std::size_t off = k * d;
            if (f > off) append_frame_keys(g, f - off, keys);
        }
        append_frame_keys(g, f, keys);
        for (std::size_t k = 1; k <= radius; ++k) {
            std::size_t off = k * d;
            if (f + off <= g.frames) append_frame_keys(g, f + off, keys);
        }
        std::size_t base = g.global_queries + (f - 1) * g.objects_per_frame;
        for (std::size_t s = 0; s < g.objects_per_frame; ++s) a.rows[base + s] = keys;
    }
    return a;
}

std::vector<std::size_t> random_frame_set(std::size_t frames, std::size_t r,
                                          std::uint64_t seed, std::size_t frame) {
    SplitMix64 rng = SplitMix64::split(seed, frame);
    auto zero_based = sample_distinct(rng, frames, r);
    std::vector<std::size_t> out(zero_based.size());
    for (std::size_t i = 0; i < zero_based.size(); ++i)
        out[i] = static_cast<std::size_t>(zero_based[i]) + 1;
    std::sort(out.begin(), out.end());
    return out;
}

AllowList build_random(const GeometrySpec& g, std::size_t r, std::uint64_t seed) {
    if (r > g.frames) throw ParamError("build_random: r exceeds frame count");
    AllowList a = empty_list(g);
    for (std::size_t f = 1; f <= g.frames; ++f) {
        std::vector<std::size_t> keys;
        for (std::size_t target : random_frame_set(g.frames, r, seed, f))
            append_frame_keys(g, target, keys);
        std::size_t base = g.global_queries + (f - 1) * g.objects_per_frame;
        for (std::size_t s = 0; s < g.objects_per_frame; ++s) a.rows[base + s] = keys;
    }
    return a;
}

AllowList build_global(const GeometrySpec& g) {
    if (g.global_queries == 0) throw ParamError("build_global: N2 must be >= 1");
    AllowList a = empty_list(g);
    std::size_t n = g.total();
    std::vector<std::size_t> full(n);
    for (std::size_t j = 0; j < n; ++j) full[j] = j;
    std::vector<std::size_t> globals(g.global_queries);
    for (std::size_t j = 0; j < g.global_queries; ++j) globals[j] = j;
    for (std::size_t i = 0; i < n; ++i) a.rows[i] = g.is_global(i) ? full : globals;
    return a;
}

AllowList build_shift_window(const GeometrySpec& g, std::size_t ws, std::size_t shift_offset) {
    if (ws < 1) throw ParamError("build_shift_window: ws must be >= 1");
    AllowList a = empty_list(g);
    std::size_t off = shift_offset % ws;
    // Block id of 1-based frame f; frames [1, off] form a short first block.
    auto block_of = [&](std::size_t f) { return (f - 1 + ws - off) / ws; };
    std::size_t f = 1;
    while (f <= g.frames) {
        std::size_t block = block_of(f);
        std::size_t last = f;
        while (last + 1 <= g.frames && block_of(last + 1) == block) ++last;
        std::vector<std::size_t> keys;
        for (std::size_t t = f; t <= last; ++t) append_frame_keys(g, t, keys);
        for (std::size_t t = f; t <= last; ++t) {
            std::size_t base = g.global_queries + (t - 1) * g.objects_per_frame;
            for (std::size_t s = 0; s < g.objects_per_frame; ++s) a.rows[base + s] = keys;
        }
        f = last + 1;
    }
    return a;
}

AllowList compose_union(const std::vector<AllowList>& parts) {
    if (parts.empty()) throw ParamError("compose_union: no parts");
    for (const auto& p : parts)
        if (!(p.geometry == parts.front().geometry))
            throw ShapeError("compose_union: geometry mismatch");
    AllowList out = empty_list(parts.front().geometry);
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
        std::vector<std::size_t> merged;
        for (const auto& p : parts)
            merged.insert(merged.end(), p.rows[i].begin(), p.rows[i].end());
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        out.rows[i] = std::move(merged);
    }
    return out;
}

AllowList realize(const MaskSpec& spec, const GeometrySpec& g, std::uint64_t default_seed,
                  std::size_t layer_index) {
    spec.validate();
    switch (spec.kind) {
        case MaskKind::Window:
            return build_window(g, spec.w);
        case MaskKind::DilatedWindow:
            return build_dilated(g, spec.w, spec.d);
        case MaskKind::Random:
            return build_random(g, spec.r, spec.seed.value_or(default_seed));
        case MaskKind::Global:
            return build_global(g);
        case MaskKind::ShiftWindow:
            return build_shift_window(
                g, spec.ws, spec.shift_offset.value_or((layer_index % 2) * (spec.ws / 2)));
        case MaskKind::Union: {
            std::vector<AllowList> parts;
            parts.reserve(spec.parts.size());
            for (const auto& p : spec.parts)
                parts.push_back(realize(p, g, default_seed, layer_index));
            return compose_union(parts);
        }
    }
    throw ParamError("realize: unknown mask kind");
}

Matrix to_additive(const AllowList& a) {
    std::size_t n = a.geometry.total();
    const double ninf = -std::numeric_limits<double>::infinity();
    Matrix m(n, n, ninf);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j : a.rows[i]) m.at(i, j) = 0.0;
    return m;
}

AllowList from_additive(const Matrix& m, const GeometrySpec& g) {
    if (m.rows != g.total() || m.cols != g.total())
        throw ShapeError("from_additive: matrix does not match geometry");
    AllowList a = empty_list(g);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            if (m.at(i, j) == 0.0) a.rows[i].push_back(j);
    return a;
}

namespace {

// Per-pair membership predicate, straight from the mask definitions.
// Deliberately independent of the builders' per-row range construction.
struct PairPredicate {
    const GeometrySpec& g;
    std::uint64_t default_seed;
    std::size_t layer_index;
    // psi sets per (spec instance) cache, keyed by source frame. Rebuilt per
    // random spec because unions may hold several with distinct seeds.
    bool eval(const MaskSpec& spec, std::size_t i, std::size_t j,
              const std::vector<std::vector<std::size_t>>* psi) const {
        auto fi = frame_of(g, i);
        auto fj = frame_of(g, j);
        switch (spec.kind) {
            case MaskKind::Window: {
                if (!fi || !fj) return false;
                std::size_t delta = *fi > *fj ? *fi - *fj : *fj - *fi;
                return 2 * delta <= spec.w;
            }
            case MaskKind::DilatedWindow: {
                if (!fi || !fj) return false;
                std::size_t delta = *fi > *fj ? *fi - *fj : *fj - *fi;
                return delta % spec.d == 0 && 2 * delta <= spec.d * spec.w;
            }
            case MaskKind::Random: {
                if (!fi || !fj) return false;
                const auto& set = (*psi)[*fi - 1];
                return std::binary_search(set.begin(), set.end(), *fj);
            }
            case MaskKind::Global:
                return g.is_global(i) || g.is_global(j);
            case MaskKind::ShiftWindow: {
                if (!fi || !fj) return false;
                std::size_t off =
                    spec.shift_offset.value_or((layer_index % 2) * (spec.ws / 2)) % spec.ws;
                auto block = [&](std::size_t f) { return (f - 1 + spec.ws - off) / spec.ws; };
                return block(*fi) == block(*fj);
            }
            case MaskKind::Union:
                return false;  // handled by the caller
        }
        return false;
    }
};

std::vector<std::vector<std::size_t>> psi_table(const MaskSpec& spec, const GeometrySpec& g,
                                                std::uint64_t default_seed) {
    std::vector<std::vector<std::size_t>> psi(g.frames);
    std::uint64_t seed = spec.seed.value_or(default_seed);
    for (std::size_t f = 1; f <= g.frames; ++f)
        psi[f - 1] = random_frame_set(g.frames, spec.r, seed, f);
    return psi;
}

}  // namespace

bool verify_against_formula(const AllowList& a, const MaskSpec& spec,
                            std::uint64_t default_seed, std::size_t layer_index) {
    spec.validate();
    const GeometrySpec& g = a.geometry;
    std::size_t n = g.total();
    if (a.rows.size() != n) return false;

    std::vector<const MaskSpec*> leaves;
    if (spec.kind == MaskKind::Union)
        for (const auto& p : spec.parts) leaves.push_back(&p);
    else
        leaves.push_back(&spec);

    std::vector<std::vector<std::vector<std::size_t>>> psis(leaves.size());
    for (std::size_t li = 0; li < leaves.size(); ++li)
        if (leaves[li]->kind == MaskKind::Random)
            psis[li] = psi_table(*leaves[li], g, default_seed);

    PairPredicate pred{g, default_seed, layer_index};
    std::vector<std::size_t> expected;
    for (std::size_t i = 0; i < n; ++i) {
        expected.clear();
        for (std::size_t j = 0; j < n; ++j) {
            bool ok = false;
            for (std::size_t li = 0; li < leaves.size() && !ok; ++li)
                ok = pred.eval(*leaves[li], i, j, &psis[li]);
            if (ok) expected.push_back(j);
        }
        if (expected != a.rows[i]) return false;
    }
    return true;
}

std::string MaskSpec::to_json() const {
    json j;
    switch (kind) {
        case MaskKind::Window:
            j = {{"kind", "window"}, {"w", w}};
            break;
        case MaskKind::DilatedWindow:
            j = {{"kind", "dilated"}, {"w", w}, {"d", d}};
            break;
        case MaskKind::Random:
            j = {{"kind", "random"}, {"r", r}};
            if (seed) j["seed"] = *seed;
            break;
        case MaskKind::Global:
            j = {{"kind", "global"}};
            break;
        case MaskKind::ShiftWindow:
            j = {{"kind", "shift_window"}, {"ws", ws}};
            if (shift_offset) j["offset"] = *shift_offset;
            break;
        case MaskKind::Union: {
            j["kind"] = "union";
            j["parts"] = json::array();
            for (const auto& p : parts) j["parts"].push_back(json::parse(p.to_json()));
            break;
        }
    }
    return j.dump();
}

namespace {

MaskSpec spec_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ParamError("mask json: expected object with \"kind\"");
    std::string kind = j.at("kind").get<std::string>();
    MaskSpec s;
    if (kind == "window") {
        s = MaskSpec::window(j.at("w").get<std::size_t>());
    } else if (kind == "dilated") {
        s = MaskSpec::dilated(j.at("w").get<std::size_t>(), j.at("d").get<std::size_t>());
    } else if (kind == "random") {
        std::optional<std::uint64_t> seed;
        if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
        s = MaskSpec::random(j.at("r").get<std::size_t>(), seed);
    } else if (kind == "global") {
        s = MaskSpec::global();
    } else if (kind == "shift_window") {
        std::optional<std::size_t> off;
        if (j.contains("offset")) off = j.at("offset").get<std::size_t>();
        s = MaskSpec::shift_window(j.at("ws").get<std::size_t>(), off);
    } else if (kind == "union") {
        std::vector<MaskSpec> parts;
        for (const auto& p : j.at("parts")) parts.push_back(spec_from_json(p));
        s = MaskSpec::union_of(std::move(parts));
    } else {
        throw ParamError("mask json: unknown kind \"" + kind + "\"");
    }
    s.validate();
    return s;
}

}  // namespace

MaskSpec MaskSpec::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParamError(std::string("mask json: ") + e.what());
    }
    return spec_from_json(j);
}

void write_allowlist(std::ostream& out, const AllowList& a) {
    out << "geom " << a.geometry.frames << " " << a.geometry.objects_per_frame << " "
        << a.geometry.global_queries << "\n";
    for (const auto& row : a.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out << " ";
            out << row[k];
        }
        out << "\n";
    }
}

AllowList read_allowlist(std::istream& in) {
    std::string tag;
    GeometrySpec g;
    in >> tag >> g.frames >> g.objects_per_frame >> g.global_queries;
    if (!in || tag != "geom") throw IoError("allowlist: bad geometry header");
    std::string line;
    std::getline(in, line);  // rest of header line
    AllowList a;
    a.geometry = g;
    a.rows.reserve(g.total());
    for (std::size_t i = 0; i < g.total(); ++i) {
        if (!std::getline(in, line)) throw IoError("allowlist: truncated row list");
        std::istringstream ls(line);
        std::vector<std::size_t> row;
        std::size_t v;
        while (ls >> v) row.push_back(v);
        a.rows.push_back(std::move(row));
    }
    return a;
}

void write_allowlist_file(const std::filesystem::path& path, const AllowList& a) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for write: " + path.string());
    write_allowlist(out, a);
}

AllowList read_allowlist_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    return read_allowlist(in);
}

}  // namespace ltca
