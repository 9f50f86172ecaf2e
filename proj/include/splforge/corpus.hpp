#pragma once

// Product families with known features: a shared skeleton plus per-feature fragments attached
// at named anchors.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "splforge/fca.hpp"
#include "splforge/validation.hpp"

namespace splforge::corpus {

/// Skeleton element. Class bodies hold anchors, code and methods; method bodies hold anchors and
/// code only. A method with a feature exists only in products selecting it.
struct SkeletonItem {
    enum class Kind { Anchor, Code, Method };
    Kind kind = Kind::Code;
    // Anchor name, code text, or method signature.
    std::string text;
    std::optional<std::string> feature;
    std::vector<SkeletonItem> body;
};

struct SkeletonFile {
    std::string path;
    std::vector<std::string> imports;
    std::string class_header;
    std::optional<std::string> feature;
    std::vector<SkeletonItem> body;
};

struct Fragment {
    std::string feature;
    std::string file;
    std::string anchor;
    // May span several lines.
    std::string code;
};

struct FeatureConstraint {
    enum class Kind { Requires, Excludes };
    Kind kind = Kind::Requires;
    std::string first;
    std::string second;
};

struct ProductSpec {
    std::string name;
    std::vector<std::string> features;
};

/// How fragments of different features are ordered at one anchor. `None` keeps feature-pool
/// order; `PerAnchor` shuffles once per anchor; `PerProduct` shuffles per anchor and product.
enum class Shuffle { None, PerAnchor, PerProduct };

struct FamilySpec {
    std::string name;
    std::vector<std::string> feature_pool;
    std::vector<SkeletonFile> files;
    std::vector<Fragment> fragments;
    std::vector<FeatureConstraint> constraints;
    std::vector<ProductSpec> products;
    Shuffle shuffle = Shuffle::None;

    /// Throws InvalidInput for unknown features or files, duplicate names, or products breaking a
    /// declared constraint; CompositionError for fragments naming a missing anchor.
    void validate() const;
};

FamilySpec family_from_json(std::string_view text);
std::string family_to_json(const FamilySpec& spec);
FamilySpec load_family(const std::filesystem::path& path);

/// Weaves the fragments of each product's features into the skeleton. Deterministic for a given
/// (spec, seed). Throws CompositionError when a product's file fails to parse or declares the
/// same member twice.
std::vector<ProductSource> synthesize(const FamilySpec& spec, std::uint64_t seed);

/// Constraints computed straight from the products' feature sets (no lattice involved). Groups
/// are ordered by extent size, then extent; concept_index is the group's position.
fca::ConstraintSet ground_truth_constraints(const FamilySpec& spec);

struct RandomFamilyParams {
    std::size_t products = 4;
    std::size_t features = 5;
    std::size_t files = 4;
    std::size_t methods_per_file = 2;
    std::size_t statements_per_method = 3;
    std::size_t fragments_per_feature = 6;
    // Chance that a file or a skeleton method belongs to a feature.
    double feature_file_chance = 0.15;
    double feature_method_chance = 0.2;
};

/// Random family over a small statement vocabulary so that twins and duplicates occur. Uses
/// per-product shuffling.
FamilySpec random_family(const RandomFamilyParams& params, std::uint64_t seed);

/// Number of statements across all products' sources.
std::size_t statement_count(const std::vector<ProductSource>& products);

} // namespace splforge::corpus
