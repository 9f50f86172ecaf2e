#include "splforge/variability.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "splforge/error.hpp"

namespace splforge {

std::optional<std::size_t> VariabilityModel::common_node() const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].common) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> VariabilityModel::find(std::string_view name) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].name == name) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> VariabilityModel::node_of(std::string_view member) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& m = nodes[i].members;
        if (std::find(m.begin(), m.end(), member) != m.end()) return i;
    }
    return std::nullopt;
}

bool VariabilityModel::excluded(std::size_t a, std::size_t b) const {
    return std::find(exclusions.begin(), exclusions.end(), std::pair{std::min(a, b), std::max(a, b)}) !=
           exclusions.end();
}

VariabilityModel build_model(const fca::FormalContext& ctx, ModelLevel level) {
    const auto poset = fca::build_aoc_poset(ctx);
    const auto constraints = fca::extract_constraints(poset, ctx);

    VariabilityModel model;
    model.level = level;
    // Nodes follow concept numbering so that names and order agree.
    std::map<std::size_t, std::size_t> node_of_group;
    std::optional<std::size_t> common;
    const auto top = poset.top(ctx.objects.size());
    const auto products_of = [&](const std::vector<std::size_t>& extent) {
        std::vector<std::string> out;
        for (auto o : extent) out.push_back(ctx.objects[o]);
        return out;
    };
    std::vector<std::pair<std::size_t, std::optional<std::size_t>>> ordered;  // concept, group index
    for (std::size_t g = 0; g < constraints.groups.size(); ++g) ordered.emplace_back(constraints.groups[g].concept_index, g);
    if (top && !constraints.common.empty()) ordered.emplace_back(*top, std::nullopt);
    std::sort(ordered.begin(), ordered.end());
    for (const auto& [concept_index, group] : ordered) {
        VmNode node;
        node.name = "grp-" + std::to_string(concept_index);
        node.products = products_of(poset.concepts[concept_index].extent);
        if (group) {
            node.members = constraints.groups[*group].attributes;
            node_of_group[*group] = model.nodes.size();
        } else {
            node.members = constraints.common;
            node.common = true;
            common = model.nodes.size();
        }
        model.nodes.push_back(std::move(node));
    }

    std::vector<bool> has_outgoing(constraints.groups.size(), false);
    for (const auto& [from, to] : constraints.implications) {
        model.implications.emplace_back(node_of_group.at(from), node_of_group.at(to));
        has_outgoing[from] = true;
    }
    if (common) {
        for (std::size_t g = 0; g < constraints.groups.size(); ++g) {
            if (!has_outgoing[g]) model.implications.emplace_back(node_of_group.at(g), *common);
        }
    }
    for (const auto& [a, b] : constraints.mutual_exclusions) {
        const auto x = node_of_group.at(a);
        const auto y = node_of_group.at(b);
        model.exclusions.emplace_back(std::min(x, y), std::max(x, y));
    }
    std::sort(model.implications.begin(), model.implications.end());
    std::sort(model.exclusions.begin(), model.exclusions.end());
    return model;
}

VariabilityModel build_avm(const SplRepository& repo) {
    if (repo.products.empty()) throw Error(ErrorCode::EmptyRepository, "repository has no integrated product");
    return build_model(repo.artefact_context(), ModelLevel::Artefact);
}

VariabilityModel build_fvm(const SplRepository& repo) {
    if (repo.products.empty()) throw Error(ErrorCode::EmptyRepository, "repository has no integrated product");
    return build_model(repo.feature_context(), ModelLevel::Feature);
}

void apply_traces(SplRepository& repo, FeatureTraceTable table) {
    if (!table.entries.empty()) {
        const auto avm = build_avm(repo);
        const auto features = repo.known_features();
        for (const auto& [group, conjunction] : table.entries) {
            if (!avm.find(group)) throw Error(ErrorCode::UnknownGroup, "no artefact group named '" + group + "'");
            if (conjunction.empty()) throw Error(ErrorCode::InvalidInput, "group '" + group + "' maps to no feature");
            for (const auto& f : conjunction) {
                if (!features.count(f)) throw Error(ErrorCode::UnknownFeature, "feature '" + f + "' is not declared");
            }
        }
    }
    repo.traces = std::move(table);
}

FeatureTraceTable traces_from_json(std::string_view text) {
    FeatureTraceTable table;
    try {
        const auto doc = nlohmann::json::parse(text);
        if (!doc.is_object()) throw Error(ErrorCode::InvalidInput, "trace table must be a JSON object");
        for (const auto& [group, value] : doc.items()) {
            if (value.is_string()) {
                table.entries[group] = {value.get<std::string>()};
            } else {
                table.entries[group] = value.get<std::vector<std::string>>();
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("malformed trace table: ") + e.what());
    }
    return table;
}

std::string traces_to_json(const FeatureTraceTable& table) {
    nlohmann::json doc = nlohmann::json::object();
    for (const auto& [group, features] : table.entries) doc[group] = features;
    return doc.dump(2) + "\n";
}

namespace {

std::string dot_id(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string export_dot(const VariabilityModel& model) {
    const bool features = model.level == ModelLevel::Feature;
    std::string out = features ? "digraph FVM {\n" : "digraph AVM {\n";
    out += "  rankdir=BT;\n  node [shape=box];\n";
    for (const auto& n : model.nodes) {
        std::string label = n.name;
        if (features) {
            for (const auto& m : n.members) label += "\\n" + m;
        } else {
            label += "\\n" + std::to_string(n.members.size()) + (n.members.size() == 1 ? " artefact" : " artefacts");
        }
        if (n.common) label += "\\n(common)";
        // Labels carry literal "\n" escapes for DOT, so only quotes need escaping here.
        std::string escaped;
        for (char c : label) {
            if (c == '"') escaped += '\\';
            escaped += c;
        }
        out += "  " + dot_id(n.name) + " [label=\"" + escaped + "\"";
        if (n.common) out += ", peripheries=2";
        out += "];\n";
    }
    for (const auto& [from, to] : model.implications) {
        out += "  " + dot_id(model.nodes[from].name) + " -> " + dot_id(model.nodes[to].name) + ";\n";
    }
    for (const auto& [a, b] : model.exclusions) {
        out += "  " + dot_id(model.nodes[a].name) + " -> " + dot_id(model.nodes[b].name) +
               " [style=dashed, dir=none, label=\"excludes\"];\n";
    }
    out += "}\n";
    return out;
}

} // namespace splforge
