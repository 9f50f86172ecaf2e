#pragma once

// Acquisition of product variants into the SPL's super-ARTs: LCS-based super-sequences,
// duplicate-id minting and the on-disk repository.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "splforge/artefact.hpp"
#include "splforge/fca.hpp"
#include "splforge/minilang.hpp"

namespace splforge {

/// Longest common subsequence as index pairs (i into `a`, j into `b`), using forward
/// reconstruction over suffix lengths. On ties the element of `a` is skipped, which keeps the
/// earliest possible match in `b`.
template <typename T, typename Eq>
std::vector<std::pair<std::size_t, std::size_t>> lcs_pairs(std::span<const T> a, std::span<const T> b, Eq eq) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    std::vector<std::uint32_t> suffix((n + 1) * (m + 1), 0);
    const auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return suffix[i * (m + 1) + j]; };
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = m; j-- > 0;) {
            at(i, j) = eq(a[i], b[j]) ? at(i + 1, j + 1) + 1 : std::max(at(i + 1, j), at(i, j + 1));
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < n && j < m) {
        if (eq(a[i], b[j])) {
            pairs.emplace_back(i++, j++);
        } else if (at(i + 1, j) >= at(i, j + 1)) {
            ++i;
        } else {
            ++j;
        }
    }
    return pairs;
}

/// One slot of a merged sequence: which input(s) the element comes from.
struct MergeSlot {
    std::optional<std::size_t> first;
    std::optional<std::size_t> second;
};

/// Interleaves two sequences around their LCS anchors. Between consecutive anchors, and before
/// the first and after the last, the gap of the first sequence precedes the gap of the second.
/// Both inputs embed in order into the result.
template <typename T, typename Eq>
std::vector<MergeSlot> merge_plan(std::span<const T> s1, std::span<const T> s2, Eq eq) {
    const auto anchors = lcs_pairs(s1, s2, eq);
    std::vector<MergeSlot> plan;
    plan.reserve(s1.size() + s2.size() - anchors.size());
    std::size_t i = 0;
    std::size_t j = 0;
    const auto flush = [&](std::size_t i_end, std::size_t j_end) {
        for (; i < i_end; ++i) plan.push_back({i, std::nullopt});
        for (; j < j_end; ++j) plan.push_back({std::nullopt, j});
    };
    for (const auto& [ai, aj] : anchors) {
        flush(ai, aj);
        plan.push_back({ai, aj});
        ++i;
        ++j;
    }
    flush(s1.size(), s2.size());
    return plan;
}

/// Super-sequence of two id sequences matched on (base, twin). Elements coming from `s1` keep
/// their ids; unmatched elements of `s2` are appended as-is (repeats are possible).
std::vector<ArtefactId> super_sequence(std::span<const ArtefactId> s1, std::span<const ArtefactId> s2);

/// The k-th occurrence of each (base, twin) pair receives dup = k.
std::vector<ArtefactId> mint_duplicates(std::span<const ArtefactId> seq);

struct ProductRecord {
    std::string name;
    std::vector<std::string> features;
    // Rendered post-merge ids of every artefact identified in the product.
    std::set<std::string> configuration;

    friend bool operator==(const ProductRecord&, const ProductRecord&) = default;
};

/// Artefact group name -> conjunction of feature names.
struct FeatureTraceTable {
    std::map<std::string, std::vector<std::string>> entries;

    friend bool operator==(const FeatureTraceTable&, const FeatureTraceTable&) = default;
};

struct SplRepository {
    std::string name;
    std::size_t iteration = 0;
    std::map<std::string, ArtefactTree> arts;
    std::vector<ProductRecord> products;
    FeatureTraceTable traces;

    const ProductRecord* find_product(std::string_view product) const;
    /// Every rendered id across all super-ARTs.
    std::set<std::string> all_ids() const;
    /// Products x artefact ids (pre-order over super-ARTs in path order).
    fca::FormalContext artefact_context() const;
    /// Products x feature names (first-appearance order).
    fca::FormalContext feature_context() const;
    /// Union of declared feature names.
    std::set<std::string> known_features() const;
};

struct Product {
    std::string name;
    std::vector<minilang::SourceFile> files;
};

/// Returns the repository at iteration i+1 with `product` merged in. Throws
/// DuplicateProductName, SyntaxError, InvalidPath, InvalidInput or InternalCollision; the input
/// repository is left untouched on failure.
SplRepository integrate(SplRepository repo, const Product& product, std::vector<std::string> features);

/// Repository directory: meta.json, arts/<hex(H(path))>.json, pcm.csv, traces.json.
void save_repository(const SplRepository& repo, const std::filesystem::path& dir);
SplRepository load_repository(const std::filesystem::path& dir);
bool is_repository(const std::filesystem::path& dir);

/// Reads every `*.java` file under `dir` (recursively) as a product file.
Product read_product_dir(const std::filesystem::path& dir, std::string name);
/// Writes files under `dir`, creating parent directories.
void write_files(const std::vector<minilang::SourceFile>& files, const std::filesystem::path& dir);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace splforge
