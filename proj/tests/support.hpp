#pragma once

// Shared fixtures and small oracles for the test programs.

#include <algorithm>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "splforge/codegen.hpp"
#include "splforge/corpus.hpp"
#include "splforge/integration.hpp"
#include "splforge/minilang.hpp"
#include "splforge/validation.hpp"
#include "splforge/variability.hpp"

namespace splforge::testing {

inline std::filesystem::path fixtures_dir() { return SPLFORGE_FIXTURES_DIR; }
inline std::filesystem::path data_dir() { return SPLFORGE_DATA_DIR; }

inline ProductSource product_from_dir(const std::string& name, std::vector<std::string> features) {
    auto p = read_product_dir(fixtures_dir() / "hello" / name, name);
    return {name, std::move(features), std::move(p.files)};
}

/// Px {Hello, World}, Py {Hello, All}, Pz {Hello, All, People}, read from the fixture sources.
inline std::vector<ProductSource> hello_products() {
    return {product_from_dir("Px", {"Hello", "World"}), product_from_dir("Py", {"Hello", "All"}),
            product_from_dir("Pz", {"Hello", "All", "People"})};
}

inline SplRepository integrate_all(const std::vector<ProductSource>& products, const std::string& name = "spl") {
    SplRepository repo;
    repo.name = name;
    for (const auto& p : products) repo = integrate(std::move(repo), Product{p.name, p.files}, p.features);
    return repo;
}

inline SplRepository hello_repo() { return integrate_all(hello_products(), "hello"); }

/// Group names follow concept numbering: People, World, All, then the common Hello group.
inline FeatureTraceTable hello_traces() {
    return {{{"grp-0", {"People"}}, {"grp-1", {"World"}}, {"grp-2", {"All"}}, {"grp-3", {"Hello"}}}};
}

inline std::vector<std::string> token_texts(const std::string& text) {
    std::vector<std::string> out;
    for (const auto& t : minilang::tokenize(text)) {
        if (t.kind != minilang::TokenKind::End) out.push_back(t.text);
    }
    return out;
}

/// Per-path token streams; files without tokens are dropped.
inline std::map<std::string, std::vector<std::string>> token_map(const std::vector<minilang::SourceFile>& files) {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& f : files) {
        auto tokens = token_texts(f.text);
        if (!tokens.empty()) out[f.path] = std::move(tokens);
    }
    return out;
}

inline std::vector<minilang::SourceFile> canonical(const std::vector<minilang::SourceFile>& files) {
    std::vector<minilang::SourceFile> out;
    for (const auto& f : files) out.push_back({f.path, minilang::print(minilang::parse(f))});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
    return out;
}

inline std::set<std::string> ids_of(const ArtefactTree& tree) {
    const auto ids = rendered_ids(tree);
    return {ids.begin(), ids.end()};
}

/// Order-independent view of a variability model: nodes by member set, edges by member sets.
struct CanonicalModel {
    std::set<std::string> common;
    std::set<std::set<std::string>> groups;
    std::set<std::pair<std::set<std::string>, std::set<std::string>>> implications;
    std::set<std::set<std::set<std::string>>> exclusions;

    friend bool operator==(const CanonicalModel&, const CanonicalModel&) = default;
};

inline CanonicalModel canonical_model(const VariabilityModel& model) {
    CanonicalModel out;
    const auto members = [&](std::size_t i) {
        return std::set<std::string>(model.nodes[i].members.begin(), model.nodes[i].members.end());
    };
    for (std::size_t i = 0; i < model.nodes.size(); ++i) {
        if (model.nodes[i].common) {
            out.common = members(i);
        } else {
            out.groups.insert(members(i));
        }
    }
    for (const auto& [a, b] : model.implications) out.implications.insert({members(a), members(b)});
    for (const auto& [a, b] : model.exclusions) out.exclusions.insert({members(a), members(b)});
    return out;
}

/// The same view for a constraint set; maximal groups point at the common set when it exists,
/// as the model builder does.
inline CanonicalModel canonical_model(const fca::ConstraintSet& cs) {
    CanonicalModel out;
    out.common = {cs.common.begin(), cs.common.end()};
    const auto members = [&](std::size_t g) {
        return std::set<std::string>(cs.groups[g].attributes.begin(), cs.groups[g].attributes.end());
    };
    std::vector<bool> outgoing(cs.groups.size(), false);
    for (std::size_t g = 0; g < cs.groups.size(); ++g) out.groups.insert(members(g));
    for (const auto& [a, b] : cs.implications) {
        out.implications.insert({members(a), members(b)});
        outgoing[a] = true;
    }
    if (!cs.common.empty()) {
        for (std::size_t g = 0; g < cs.groups.size(); ++g) {
            if (!outgoing[g]) out.implications.insert({members(g), out.common});
        }
    }
    for (const auto& [a, b] : cs.mutual_exclusions) out.exclusions.insert({members(a), members(b)});
    return out;
}

} // namespace splforge::testing
