#pragma once

// Annotated SPL output (`//#if` / `//#endif`), its simplification, and product generation.

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "splforge/integration.hpp"
#include "splforge/minilang.hpp"

namespace splforge {

enum class LabelMode { Features, ArtefactGroups, ArtefactIds };

/// Conjunction of names; equality ignores order.
struct Condition {
    std::vector<std::string> terms;

    /// `A && B`
    std::string str() const;
    static Condition parse(std::string_view text);
    bool satisfied_by(const std::set<std::string>& selection) const;
    bool same_as(const Condition& other) const;
};

inline constexpr std::string_view kIfDirective = "//#if ";
inline constexpr std::string_view kEndifDirective = "//#endif";

struct AnnotatedFile {
    std::string path;
    std::vector<std::string> lines;

    std::string text() const { return minilang::join_lines(lines); }
    friend bool operator==(const AnnotatedFile&, const AnnotatedFile&) = default;
};

/// Counts `//#if` directives.
std::size_t annotation_count(const AnnotatedFile& file);

struct SplOutput {
    std::vector<AnnotatedFile> files;
    std::vector<std::string> warnings;
};

/// Naive annotated print of every super-ART: each variable artefact is wrapped in its own
/// annotation. Common artefacts stay bare unless, in Features mode, the common group is traced.
SplOutput generate_spl(const SplRepository& repo, LabelMode mode);

/// S1 drops annotations repeating an enclosing condition, S2 fuses adjacent sibling annotations
/// with the same condition; empty annotations are dropped. Iterated to a fixed point.
AnnotatedFile simplify(const AnnotatedFile& file);
std::vector<AnnotatedFile> simplify(const std::vector<AnnotatedFile>& files);

/// Keeps lines whose enclosing conditions are all satisfied and strips directives. Files left
/// without lines are omitted. Throws MalformedAnnotation on unbalanced directives.
std::vector<minilang::SourceFile> evaluate(const std::vector<AnnotatedFile>& files,
                                           const std::set<std::string>& selection);

struct ProductOutput {
    std::vector<minilang::SourceFile> files;
    std::vector<std::string> warnings;
};

/// Features-mode annotated code, simplified, evaluated against `features`. Selecting features
/// that never co-occurred yields a `mutual-exclusion` warning, not an error. Throws
/// UnknownFeature.
ProductOutput generate_product_by_features(const SplRepository& repo, const std::set<std::string>& features);

/// Prunes the super-ARTs to `configuration` and prints with the canonical printer. Throws
/// UnknownArtefactId or OrphanSelection.
std::vector<minilang::SourceFile> generate_product_by_artefacts(const SplRepository& repo,
                                                                const std::set<std::string>& configuration);

} // namespace splforge
