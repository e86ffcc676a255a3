#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ltca/attention.hpp"
#include "ltca/mask.hpp"

namespace ltca {

/// Reachability of information flow across stacked masked layers. Content
/// moves key -> query: after one layer, query i holds content of j exactly
/// when (i, j) is allowed or i == j (the residual keeps self-content).
struct ReachabilityReport {
    GeometrySpec geometry;
    std::size_t layer_count = 0;
    /// reached[k-1] is the k-layer relation, packed row-major: entry
    /// (i, j) answers "has content of j arrived at i".
    std::vector<std::vector<bool>> reached;
    /// Minimal k with full reachability, or nullopt within layer_count.
    std::optional<std::size_t> diameter;
    /// Largest |frame(i) - frame(j)| over reachable object pairs, per k.
    std::vector<std::size_t> max_frame_span;

    bool reaches(std::size_t k, std::size_t i, std::size_t j) const {
        return reached[k - 1][i * geometry.total() + j];
    }
};

/// layer_specs supplies the per-layer masks; a list shorter than the layer
/// count is cycled (index k uses layer_specs[k % size]).
ReachabilityReport reachability(const std::vector<MaskSpec>& layer_specs, const GeometrySpec& g,
                                std::size_t layer_count, std::uint64_t default_seed = 0);

struct LayerCost {
    std::size_t pairs = 0;
    std::uint64_t transform_macs = 0;
    std::uint64_t pair_macs = 0;
    std::uint64_t residual_macs = 0;
    std::uint64_t total() const { return transform_macs + pair_macs + residual_macs; }
};

struct CostReport {
    std::vector<LayerCost> layers;
    std::uint64_t total_macs = 0;
    std::size_t total_pairs = 0;
};

/// Analytic multiply-accumulate count per layer:
///   3*n*D^2 (transforms) + pairs*(2D + heads*(2 + scale)) + n*D (residual).
/// Mirrors the engine's MacCounter exactly.
CostReport cost_report(const std::vector<MaskSpec>& layer_specs, const GeometrySpec& g,
                       std::size_t width, const AttentionOptions& opts = {},
                       std::uint64_t default_seed = 0);

std::string report_to_json(const ReachabilityReport& rep);

/// ASCII heat grid of the final-layer relation ('#' reached, '.' not),
/// queries in layout order; intended for quick terminal inspection.
std::string report_to_ascii(const ReachabilityReport& rep);

}  // namespace ltca
