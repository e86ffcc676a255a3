#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "ltca/errors.hpp"

namespace ltca {

/// Query layout for one video: global queries occupy indices [0, n2);
/// the object query of frame i (1-based), slot j (1-based) sits at
/// n2 + (i-1)*n1 + (j-1).
struct GeometrySpec {
    std::size_t frames = 1;          // T
    std::size_t objects_per_frame = 1;  // N1
    std::size_t global_queries = 0;  // N2

    std::size_t total() const { return global_queries + frames * objects_per_frame; }

    void validate() const {
        if (frames < 1 || objects_per_frame < 1)
            throw ParamError("geometry: T and N1 must be >= 1");
    }

    bool is_global(std::size_t q) const { return q < global_queries; }

    bool operator==(const GeometrySpec&) const = default;
};

/// 1-based frame index of query q, or nullopt for global queries.
inline std::optional<std::size_t> frame_of(const GeometrySpec& g, std::size_t q) {
    if (q >= g.total()) throw IndexError("frame_of: query index " + std::to_string(q) +
                                         " out of range " + std::to_string(g.total()));
    if (q < g.global_queries) return std::nullopt;
    return (q - g.global_queries) / g.objects_per_frame + 1;
}

}  // namespace ltca
