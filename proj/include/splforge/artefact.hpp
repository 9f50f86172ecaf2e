#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "splforge/minilang.hpp"

namespace splforge {

using minilang::NodeKind;

/// Identity of an artefact. `base` is the recursive content hash; `twin` separates equal
/// statements under one parent inside a product; `dup` separates copies minted while merging.
struct ArtefactId {
    std::uint64_t base = 0;
    std::uint32_t twin = 1;
    std::uint32_t dup = 1;

    /// `A<16 hex>`, then `_t<twin>` when twin > 1, then `_d<dup>` when dup > 1.
    std::string str() const;
    /// Inverse of str(). Throws Error(InvalidInput).
    static ArtefactId parse(std::string_view rendered);

    /// Hash that children are derived from. Equals `base` unless this artefact is a duplicate.
    std::uint64_t seed() const;

    bool same_twin(const ArtefactId& other) const noexcept { return base == other.base && twin == other.twin; }

    friend auto operator<=>(const ArtefactId&, const ArtefactId&) = default;
};

/// H(value ∥ 0x1f ∥ hex(parent seed) [∥ 0x1f ∥ "t" twin]) for non-root artefacts; twin only
/// participates for statement kinds.
std::uint64_t artefact_base(std::string_view value, std::uint64_t parent_seed, std::optional<std::uint32_t> twin);

/// Root id: H(relative path).
std::uint64_t root_base(std::string_view path);

struct Artefact {
    ArtefactId id;
    NodeKind kind = NodeKind::CompilationUnit;
    // Normalized node text; the root's value is the file's relative path.
    std::string value;
    std::vector<Artefact> children;
    std::set<std::string> origin;

    friend bool operator==(const Artefact&, const Artefact&) = default;
};

struct ArtefactTree {
    std::string path;
    Artefact root;

    friend bool operator==(const ArtefactTree&, const ArtefactTree&) = default;
};

/// Mirrors `ast` one-to-one with hashed ids. Equal statements under the same parent get
/// twin = 1, 2, ... in order of appearance.
ArtefactTree identify(const minilang::AstNode& ast, std::string_view path);

/// Rebuilds the AST that an artefact subtree stands for (root value is dropped).
minilang::AstNode to_ast(const Artefact& artefact);

/// Pre-order visit.
template <typename Fn>
void for_each_artefact(const Artefact& root, Fn&& fn) {
    fn(root);
    for (const auto& c : root.children) for_each_artefact(c, fn);
}

/// Rendered ids in pre-order.
std::vector<std::string> rendered_ids(const ArtefactTree& tree);

/// {path, nodes: [{childCount, id, kind, origin, value}, ...]} in pre-order.
nlohmann::json to_json(const ArtefactTree& tree);
ArtefactTree art_from_json(const nlohmann::json& doc);

/// Byte-reproducible document text (sorted keys, two-space indent, LF, trailing newline).
std::string serialize(const ArtefactTree& tree);

} // namespace splforge
