#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ltca/mask.hpp"
#include "ltca/matrix.hpp"
#include "ltca/query.hpp"

namespace ltca {

/// Per-layer linear transforms f_Q, f_K, f_V.
struct LayerParams {
    Matrix wq, wk, wv;               // D x D
    std::vector<double> bq, bk, bv;  // D

    static LayerParams identity(std::size_t width);
    /// wv = 0, bv = 0: the layer collapses to the identity map (pure residual).
    static LayerParams zero_value(std::size_t width);

    std::size_t width() const { return wq.rows; }
    void validate() const;
};

struct AttentionOptions {
    bool scale_scores = true;  // divide logits by sqrt(D/heads)
    std::size_t heads = 1;
};

/// Instrumentation for the multiply-accumulate cost model:
///   transform: multiplies inside f_Q/f_K/f_V (3*n*D^2)
///   pair:      per allowed pair, QK dot + scale + exp + normalize + PV
///              accumulate (2D + heads*(2 + scale) each)
///   residual:  adds restoring the layer input (n*D)
struct MacCounter {
    std::uint64_t transform = 0;
    std::uint64_t pair = 0;
    std::uint64_t residual = 0;
    std::uint64_t total() const { return transform + pair + residual; }
};

/// Masked attention with residual via the dense additive-mask route:
/// out = softmax(M + Q K^T [/ sqrt(D)]) V + input. The O(n^2) oracle.
QueryBundle attention_dense(const QueryBundle& q, const LayerParams& p, const AllowList& m,
                            const AttentionOptions& opts = {});

/// Same map computed per row over the allowed keys only; arithmetic cost is
/// proportional to the allowed-pair count. Matches attention_dense within
/// 1e-9 max-abs (same per-row summation order).
QueryBundle attention_sparse(const QueryBundle& q, const LayerParams& p, const AllowList& m,
                             const AttentionOptions& opts = {}, MacCounter* mac = nullptr);

/// Roll-based fast path for a uniform dilated pattern: keys are visited by
/// frame offset (-w/2*d .. +w/2*d step d), the banded equivalent of rolling
/// K/V. Requires a geometry without global queries.
QueryBundle attention_rolled(const QueryBundle& q, const LayerParams& p, std::size_t w,
                             std::size_t d, const AttentionOptions& opts = {},
                             MacCounter* mac = nullptr);

struct LtcaLayerSpec {
    LayerParams params;
    MaskSpec mask;
    /// Standard feed-forward sublayer; used only when
    /// LtcaConfig::standard_sublayers is on.
    std::optional<MlpParams> ffn;
};

struct LtcaConfig {
    std::vector<LtcaLayerSpec> layers;
    AttentionOptions opts;
    /// Off: each layer is the literal masked-attention + residual map.
    /// On: post-norm encoder layout, LN after attention, then FFN + LN.
    bool standard_sublayers = false;
    std::uint64_t default_seed = 0;

    /// Realizes every layer mask and rejects empty rows up front.
    std::vector<AllowList> realize_layers(const GeometrySpec& g) const;
};

/// Stacked sparse layers; the final bundle splits at N2 into
/// (global rows, object rows).
std::pair<Matrix, Matrix> ltca_forward(const QueryBundle& q, const LtcaConfig& cfg,
                                       MacCounter* mac = nullptr);

/// Exact allowed-pair count of the realized mask.
std::size_t pair_count(const MaskSpec& spec, const GeometrySpec& g,
                       std::uint64_t default_seed = 0, std::size_t layer_index = 0);

}  // namespace ltca
