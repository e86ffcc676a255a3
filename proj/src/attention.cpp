#include "ltca/attention.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ltca {

LayerParams LayerParams::identity(std::size_t width) {
    LayerParams p;
    p.wq = Matrix::identity(width);
    p.wk = Matrix::identity(width);
    p.wv = Matrix::identity(width);
    p.bq.assign(width, 0.0);
    p.bk.assign(width, 0.0);
    p.bv.assign(width, 0.0);
    return p;
}

LayerParams LayerParams::zero_value(std::size_t width) {
    LayerParams p = identity(width);
    p.wv = Matrix(width, width, 0.0);
    return p;
}

void LayerParams::validate() const {
    std::size_t d = wq.rows;
    auto square = [&](const Matrix& m) { return m.rows == d && m.cols == d; };
    if (!square(wq) || !square(wk) || !square(wv))
        throw ShapeError("layer params: wq/wk/wv must be square of equal width");
    if (bq.size() != d || bk.size() != d || bv.size() != d)
        throw ShapeError("layer params: bias width mismatch");
}

namespace {

Matrix affine(const Matrix& x, const Matrix& w, const std::vector<double>& b,
              MacCounter* mac) {
    Matrix out = matmul(x, w);
    for (std::size_t r = 0; r < out.rows; ++r)
        for (std::size_t c = 0; c < out.cols; ++c) out.at(r, c) += b[c];
    if (mac) mac->transform += out.rows * w.rows * w.cols;
    return out;
}

void check_inputs(const QueryBundle& q, const LayerParams& p, const AttentionOptions& opts) {
    p.validate();
    if (q.features.rows != q.geometry.total())
        throw ShapeError("attention: bundle rows do not match geometry");
    if (q.features.cols != p.width()) throw ShapeError("attention: feature width mismatch");
    if (opts.heads < 1 || p.width() % opts.heads != 0)
        throw ParamError("attention: heads must divide the feature width");
}

}  // namespace

QueryBundle attention_dense(const QueryBundle& q, const LayerParams& p, const AllowList& m,
                            const AttentionOptions& opts) {
    check_inputs(q, p, opts);
    if (!(m.geometry == q.geometry)) throw ShapeError("attention: mask geometry mismatch");
    const std::size_t n = q.features.rows;
    const std::size_t width = q.features.cols;
    const std::size_t head_dim = width / opts.heads;

    Matrix qm = affine(q.features, p.wq, p.bq, nullptr);
    Matrix km = affine(q.features, p.wk, p.bk, nullptr);
    Matrix vm = affine(q.features, p.wv, p.bv, nullptr);
    Matrix additive = to_additive(m);
    double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(head_dim));

    QueryBundle out;
    out.geometry = q.geometry;
    out.features = q.features;  // start from the residual
    for (std::size_t h = 0; h < opts.heads; ++h) {
        std::size_t c0 = h * head_dim;
        Matrix logits(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                double dot = 0.0;
                for (std::size_t c = 0; c < head_dim; ++c)
                    dot += qm.at(i, c0 + c) * km.at(j, c0 + c);
                if (opts.scale_scores) dot *= inv_sqrt;
                logits.at(i, j) = dot + additive.at(i, j);
            }
        }
        Matrix weights = row_softmax(logits);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < head_dim; ++c) {
                double acc = 0.0;
                for (std::size_t j = 0; j < n; ++j)
                    acc += weights.at(i, j) * vm.at(j, c0 + c);
                out.features.at(i, c0 + c) += acc;
            }
        }
    }
    return out;
}

QueryBundle attention_sparse(const QueryBundle& q, const LayerParams& p, const AllowList& m,
                             const AttentionOptions& opts, MacCounter* mac) {
    check_inputs(q, p, opts);
    if (!(m.geometry == q.geometry)) throw ShapeError("attention: mask geometry mismatch");
    const std::size_t n = q.features.rows;
    const std::size_t width = q.features.cols;
    const std::size_t head_dim = width / opts.heads;

    Matrix qm = affine(q.features, p.wq, p.bq, mac);
    Matrix km = affine(q.features, p.wk, p.bk, mac);
    Matrix vm = affine(q.features, p.wv, p.bv, mac);
    double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(head_dim));

    QueryBundle out;
    out.geometry = q.geometry;
    out.features = q.features;
    std::vector<double> logits;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& keys = m.rows[i];
        if (keys.empty())
            throw DegenerateRowError("attention: empty allow row " + std::to_string(i));
        logits.resize(keys.size());
        for (std::size_t h = 0; h < opts.heads; ++h) {
            std::size_t c0 = h * head_dim;
            double maxv = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < keys.size(); ++k) {
                double dot = 0.0;
                for (std::size_t c = 0; c < head_dim; ++c)
                    dot += qm.at(i, c0 + c) * km.at(keys[k], c0 + c);
                if (opts.scale_scores) dot *= inv_sqrt;
                logits[k] = dot;
                if (dot > maxv) maxv = dot;
            }
            double denom = 0.0;
            for (std::size_t k = 0; k < keys.size(); ++k) {
                logits[k] = std::exp(logits[k] - maxv);
                denom += logits[k];
            }
            for (std::size_t k = 0; k < keys.size(); ++k) {
                double weight = logits[k] / denom;
                const double* vrow = vm.row(keys[k]);
                double* orow = out.features.row(i);
                for (std::size_t c = 0; c < head_dim; ++c)
                    orow[c0 + c] += weight * vrow[c0 + c];
            }
        }
        if (mac)
            mac->pair += keys.size() * (2 * width + opts.heads * (opts.scale_scores ? 3 : 2));
    }
    if (mac) mac->residual += n * width;
    return out;
}

QueryBundle attention_rolled(const QueryBundle& q, const LayerParams& p, std::size_t w,
                             std::size_t d, const AttentionOptions& opts, MacCounter* mac) {
    check_inputs(q, p, opts);
    const GeometrySpec& g = q.geometry;
    if (g.global_queries != 0)
        throw ParamError("attention_rolled: uniform pattern requires N2 = 0");
    if (d < 1) throw ParamError("attention_rolled: d must be >= 1");
    const std::size_t n = q.features.rows;
    const std::size_t width = q.features.cols;
    const std::size_t head_dim = width / opts.heads;
    const std::size_t n1 = g.objects_per_frame;
    const long radius = static_cast<long>(w / 2);
    const long frames = static_cast<long>(g.frames);

    Matrix qm = affine(q.features, p.wq, p.bq, mac);
    Matrix km = affine(q.features, p.wk, p.bk, mac);
    Matrix vm = affine(q.features, p.wv, p.bv, mac);
    double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(head_dim));

    QueryBundle out;
    out.geometry = g;
    out.features = q.features;
    std::vector<double> logits((2 * static_cast<std::size_t>(radius) + 1) * n1);
    for (std::size_t i = 0; i < n; ++i) {
        long f = static_cast<long>(i / n1) + 1;
        std::size_t row_pairs = 0;
        for (std::size_t h = 0; h < opts.heads; ++h) {
            std::size_t c0 = h * head_dim;
            double maxv = -std::numeric_limits<double>::infinity();
            std::size_t count = 0;
            // Offsets ascend, so keys are visited in the gather path's order.
            for (long k = -radius; k <= radius; ++k) {
                long fk = f + k * static_cast<long>(d);
                if (fk < 1 || fk > frames) continue;
                std::size_t base = static_cast<std::size_t>(fk - 1) * n1;
                for (std::size_t s = 0; s < n1; ++s) {
                    double dot = 0.0;
                    for (std::size_t c = 0; c < head_dim; ++c)
                        dot += qm.at(i, c0 + c) * km.at(base + s, c0 + c);
                    if (opts.scale_scores) dot *= inv_sqrt;
                    logits[count++] = dot;
                    if (dot > maxv) maxv = dot;
                }
            }
            double denom = 0.0;
            for (std::size_t k = 0; k < count; ++k) {
                logits[k] = std::exp(logits[k] - maxv);
                denom += logits[k];
            }
            std::size_t slot = 0;
            for (long k = -radius; k <= radius; ++k) {
                long fk = f + k * static_cast<long>(d);
                if (fk < 1 || fk > frames) continue;
                std::size_t base = static_cast<std::size_t>(fk - 1) * n1;
                for (std::size_t s = 0; s < n1; ++s) {
                    double weight = logits[slot++] / denom;
                    const double* vrow = vm.row(base + s);
                    double* orow = out.features.row(i);
                    for (std::size_t c = 0; c < head_dim; ++c)
                        orow[c0 + c] += weight * vrow[c0 + c];
                }
            }
            row_pairs = count;
        }
        if (mac)
            mac->pair += row_pairs * (2 * width + opts.heads * (opts.scale_scores ? 3 : 2));
    }
    if (mac) mac->residual += n * width;
    return out;
}

namespace {

Matrix layer_norm(const Matrix& x, double eps = 1e-5) {
    Matrix out(x.rows, x.cols);
    for (std::size_t r = 0; r < x.rows; ++r) {
        double mean = 0.0;
        for (std::size_t c = 0; c < x.cols; ++c) mean += x.at(r, c);
        mean /= static_cast<double>(x.cols);
        double var = 0.0;
        for (std::size_t c = 0; c < x.cols; ++c) {
            double dv = x.at(r, c) - mean;
            var += dv * dv;
        }
        var /= static_cast<double>(x.cols);
        double inv = 1.0 / std::sqrt(var + eps);
        for (std::size_t c = 0; c < x.cols; ++c) out.at(r, c) = (x.at(r, c) - mean) * inv;
    }
    return out;
}

}  // namespace

std::vector<AllowList> LtcaConfig::realize_layers(const GeometrySpec& g) const {
    std::vector<AllowList> masks;
    masks.reserve(layers.size());
    for (std::size_t l = 0; l < layers.size(); ++l) {
        AllowList a = realize(layers[l].mask, g, default_seed, l);
        for (std::size_t i = 0; i < a.rows.size(); ++i)
            if (a.rows[i].empty())
                throw DegenerateRowError("ltca config: layer " + std::to_string(l) +
                                         " leaves row " + std::to_string(i) +
                                         " with an empty allow set");
        masks.push_back(std::move(a));
    }
    return masks;
}

std::pair<Matrix, Matrix> ltca_forward(const QueryBundle& q, const LtcaConfig& cfg,
                                       MacCounter* mac) {
    std::vector<AllowList> masks = cfg.realize_layers(q.geometry);
    QueryBundle cur = q;
    for (std::size_t l = 0; l < cfg.layers.size(); ++l) {
        cur = attention_sparse(cur, cfg.layers[l].params, masks[l], cfg.opts, mac);
        if (cfg.standard_sublayers) {
            if (!cfg.layers[l].ffn)
                throw ParamError("ltca config: standard sublayers need ffn params");
            Matrix normed = layer_norm(cur.features);
            Matrix ff = mlp_apply(*cfg.layers[l].ffn, normed);
            cur.features = layer_norm(normed + ff);
        }
    }
    const GeometrySpec& g = q.geometry;
    Matrix global_out(g.global_queries, cur.width());
    Matrix object_out(g.frames * g.objects_per_frame, cur.width());
    for (std::size_t i = 0; i < g.global_queries; ++i)
        for (std::size_t c = 0; c < cur.width(); ++c)
            global_out.at(i, c) = cur.features.at(i, c);
    for (std::size_t i = 0; i < object_out.rows; ++i)
        for (std::size_t c = 0; c < cur.width(); ++c)
            object_out.at(i, c) = cur.features.at(g.global_queries + i, c);
    return {std::move(global_out), std::move(object_out)};
}

std::size_t pair_count(const MaskSpec& spec, const GeometrySpec& g, std::uint64_t default_seed,
                       std::size_t layer_index) {
    return realize(spec, g, default_seed, layer_index).pair_count();
}

}  // namespace ltca
