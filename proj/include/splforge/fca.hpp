#pragma once

// Formal Concept Analysis restricted to introducer concepts (AOC-poset), plus extraction of
// commonality, co-occurrence groups, implications and mutual exclusions.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace splforge::fca {

using Bits = boost::dynamic_bitset<>;

/// Binary context; rows are objects, columns attributes. Every attribute must be held by at
/// least one object.
struct FormalContext {
    std::vector<std::string> objects;
    std::vector<std::string> attributes;
    std::vector<std::vector<bool>> incidence;

    FormalContext() = default;
    FormalContext(std::vector<std::string> objects, std::vector<std::string> attributes);

    bool has(std::size_t object, std::size_t attribute) const { return incidence[object][attribute]; }
    void set(std::size_t object, std::size_t attribute, bool value = true) { incidence[object][attribute] = value; }

    /// Throws EmptyContext (no objects) or InvalidContext (duplicate names, ragged rows,
    /// attribute held by no object).
    void validate() const;
};

/// Index lists are sorted ascending and refer to the context's objects/attributes.
struct Concept {
    std::vector<std::size_t> extent;
    std::vector<std::size_t> intent;
    std::vector<std::size_t> introduced_objects;
    std::vector<std::size_t> introduced_attributes;

    friend bool operator==(const Concept&, const Concept&) = default;
};

struct AocPoset {
    // Sorted by extent size ascending, then intent size descending, then lexicographically.
    std::vector<Concept> concepts;
    // Hasse edges (parent, child): parent's extent strictly contains child's.
    std::vector<std::pair<std::size_t, std::size_t>> order;

    /// Concept whose extent holds every object, if present.
    std::optional<std::size_t> top(std::size_t object_count) const;
    /// Strict ancestor test through extent inclusion.
    bool is_ancestor(std::size_t ancestor, std::size_t descendant) const;
};

AocPoset build_aoc_poset(const FormalContext& ctx);

struct Group {
    std::size_t concept_index = 0;
    std::vector<std::string> attributes;
    std::vector<std::size_t> extent;

    friend bool operator==(const Group&, const Group&) = default;
};

struct ConstraintSet {
    std::vector<std::string> common;
    // Variable attributes partitioned by identical object sets, in concept order.
    std::vector<Group> groups;
    // (from, to) group indices: selecting `from` requires `to`. Transitively reduced.
    std::vector<std::pair<std::size_t, std::size_t>> implications;
    // (a, b) group indices with a < b: never held together by any object.
    std::vector<std::pair<std::size_t, std::size_t>> mutual_exclusions;
};

ConstraintSet extract_constraints(const AocPoset& poset, const FormalContext& ctx);

/// Transitive reduction of a strict partial order given as a dense "implies" relation.
std::vector<std::pair<std::size_t, std::size_t>> transitive_reduction(const std::vector<std::vector<bool>>& relation);

/// CSV: header row is an empty cell followed by attribute names; each further row is an object
/// name followed by 1/0 cells.
std::string to_csv(const FormalContext& ctx);
FormalContext context_from_csv(std::string_view text);

} // namespace splforge::fca
