#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ltca/geometry.hpp"
#include "ltca/matrix.hpp"

namespace ltca {

enum class MaskKind { Window, DilatedWindow, Random, Global, ShiftWindow, Union };

/// Declarative description of one attention pattern. Realized against a
/// GeometrySpec to yield an AllowList.
struct MaskSpec {
    MaskKind kind = MaskKind::Window;
    std::size_t w = 0;   // Window / DilatedWindow: neighbor budget (distance <= w/2)
    std::size_t d = 1;   // DilatedWindow stride
    std::size_t r = 0;   // Random: frames drawn per source frame
    std::optional<std::uint64_t> seed;      // Random: absent -> caller default
    std::size_t ws = 1;  // ShiftWindow block length
    std::optional<std::size_t> shift_offset;  // absent -> alternate 0, ws/2 by layer
    std::vector<MaskSpec> parts;  // Union members (no nested unions)

    static MaskSpec window(std::size_t w);
    static MaskSpec dilated(std::size_t w, std::size_t d);
    static MaskSpec random(std::size_t r, std::optional<std::uint64_t> seed = std::nullopt);
    static MaskSpec global();
    static MaskSpec shift_window(std::size_t ws,
                                 std::optional<std::size_t> offset = std::nullopt);
    static MaskSpec union_of(std::vector<MaskSpec> parts);

    void validate() const;

    std::string to_json() const;
    static MaskSpec from_json(const std::string& text);
};

/// Sparse attention mask: per query row, the sorted set of permitted key
/// indices. Semantically equal to the additive {0, -inf} matrix.
struct AllowList {
    GeometrySpec geometry;
    std::vector<std::vector<std::size_t>> rows;

    bool allows(std::size_t i, std::size_t j) const;
    std::size_t pair_count() const;
    bool operator==(const AllowList&) const = default;
};

AllowList build_window(const GeometrySpec& g, std::size_t w);
AllowList build_dilated(const GeometrySpec& g, std::size_t w, std::size_t d);
AllowList build_random(const GeometrySpec& g, std::size_t r, std::uint64_t seed);
AllowList build_global(const GeometrySpec& g);
AllowList build_shift_window(const GeometrySpec& g, std::size_t ws, std::size_t shift_offset);
AllowList compose_union(const std::vector<AllowList>& parts);

/// The per-frame random draw psi_f(T, r): r distinct 1-based frames for
/// source frame f, shared by all of that frame's object queries.
std::vector<std::size_t> random_frame_set(std::size_t frames, std::size_t r,
                                          std::uint64_t seed, std::size_t frame);

/// Realize a spec. `default_seed` backs Random specs with no seed of their
/// own; `layer_index` drives the alternating ShiftWindow offset when the
/// spec does not pin one.
AllowList realize(const MaskSpec& spec, const GeometrySpec& g,
                  std::uint64_t default_seed = 0, std::size_t layer_index = 0);

/// Dense additive mask: 0 where allowed, -inf elsewhere.
Matrix to_additive(const AllowList& a);
AllowList from_additive(const Matrix& m, const GeometrySpec& g);

/// Brute-force check: evaluates the mask-family membership predicate for
/// every (i, j) pair and compares with the allow list's key sets.
bool verify_against_formula(const AllowList& a, const MaskSpec& spec,
                            std::uint64_t default_seed = 0, std::size_t layer_index = 0);

/// Text fixture format: "geom T N1 N2" header, then one line of
/// space-separated key indices per row.
void write_allowlist(std::ostream& out, const AllowList& a);
AllowList read_allowlist(std::istream& in);
void write_allowlist_file(const std::filesystem::path& path, const AllowList& a);
AllowList read_allowlist_file(const std::filesystem::path& path);

}  // namespace ltca
