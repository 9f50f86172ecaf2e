#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "splforge/fca.hpp"
#include "splforge/integration.hpp"

namespace splforge {

enum class ModelLevel { Artefact, Feature };

struct VmNode {
    // `grp-<concept number>`
    std::string name;
    std::vector<std::string> members;
    std::vector<std::string> products;
    bool common = false;

    friend bool operator==(const VmNode&, const VmNode&) = default;
};

/// A ConstraintSet re-expressed as a graph. Implications are transitively reduced and include
/// edges from maximal variable groups to the common node.
struct VariabilityModel {
    ModelLevel level = ModelLevel::Artefact;
    std::vector<VmNode> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> implications;
    std::vector<std::pair<std::size_t, std::size_t>> exclusions;

    std::optional<std::size_t> common_node() const;
    std::optional<std::size_t> find(std::string_view name) const;
    /// Node holding `member`, if any.
    std::optional<std::size_t> node_of(std::string_view member) const;
    bool excluded(std::size_t a, std::size_t b) const;
};

/// Builds a model from any context (used by both AVM and FVM).
VariabilityModel build_model(const fca::FormalContext& ctx, ModelLevel level);

/// Throws EmptyRepository when no product is integrated.
VariabilityModel build_avm(const SplRepository& repo);
VariabilityModel build_fvm(const SplRepository& repo);

/// Validates against the current AVM and stores the table. Throws UnknownGroup, UnknownFeature
/// or InvalidInput (empty conjunction).
void apply_traces(SplRepository& repo, FeatureTraceTable table);

FeatureTraceTable traces_from_json(std::string_view text);
std::string traces_to_json(const FeatureTraceTable& table);

/// DOT digraph: common node as a doubled box, implications as solid arrows, exclusions as dashed
/// edges without arrowheads.
std::string export_dot(const VariabilityModel& model);

} // namespace splforge
