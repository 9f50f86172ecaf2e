#include "splforge/artefact.hpp"

#include <charconv>
#include <algorithm>
#include <map>

#include "splforge/error.hpp"
#include "splforge/hash.hpp"

namespace splforge {

std::string ArtefactId::str() const {
    std::string out = "A" + to_hex16(base);
    if (twin > 1) out += "_t" + std::to_string(twin);
    if (dup > 1) out += "_d" + std::to_string(dup);
    return out;
}

namespace {

std::uint32_t parse_counter(std::string_view digits, std::string_view whole) {
    std::uint32_t value = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || value < 2) {
        throw Error(ErrorCode::InvalidInput, "malformed artefact id '" + std::string(whole) + "'");
    }
    return value;
}

} // namespace

ArtefactId ArtefactId::parse(std::string_view rendered) {
    const auto bad = [&] {
        return Error(ErrorCode::InvalidInput, "malformed artefact id '" + std::string(rendered) + "'");
    };
    if (rendered.size() < 17 || rendered[0] != 'A') throw bad();
    ArtefactId id;
    const auto hex = rendered.substr(1, 16);
    for (char c : hex) {
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) throw bad();
    }
    std::from_chars(hex.data(), hex.data() + hex.size(), id.base, 16);
    auto rest = rendered.substr(17);
    if (rest.starts_with("_t")) {
        const auto end = std::min(rest.find("_d"), rest.size());
        id.twin = parse_counter(rest.substr(2, end - 2), rendered);
        rest = rest.substr(end);
    }
    if (rest.starts_with("_d")) {
        id.dup = parse_counter(rest.substr(2), rendered);
        rest = {};
    }
    if (!rest.empty()) throw bad();
    return id;
}

std::uint64_t ArtefactId::seed() const {
    if (dup == 1) return base;
    return content_hash(to_hex16(base) + "_d" + std::to_string(dup));
}

std::uint64_t artefact_base(std::string_view value, std::uint64_t parent_seed, std::optional<std::uint32_t> twin) {
    std::string bytes;
    bytes.reserve(value.size() + 32);
    bytes.append(value);
    bytes.push_back('\x1f');
    bytes.append(to_hex16(parent_seed));
    if (twin) {
        bytes.push_back('\x1f');
        bytes.push_back('t');
        bytes.append(std::to_string(*twin));
    }
    return content_hash(bytes);
}

std::uint64_t root_base(std::string_view path) { return content_hash(path); }

namespace {

void identify_children(const minilang::AstNode& node, Artefact& parent) {
    std::map<std::string_view, std::uint32_t> seen;
    parent.children.reserve(node.children.size());
    for (const auto& child : node.children) {
        Artefact a;
        a.kind = child.kind;
        a.value = child.text;
        std::optional<std::uint32_t> twin;
        if (minilang::is_statement(child.kind)) {
            twin = ++seen[child.text];
            a.id.twin = *twin;
        }
        a.id.base = artefact_base(a.value, parent.id.seed(), twin);
        identify_children(child, a);
        parent.children.push_back(std::move(a));
    }
}

} // namespace

ArtefactTree identify(const minilang::AstNode& ast, std::string_view path) {
    minilang::validate_relative_path(path);
    ArtefactTree tree;
    tree.path = std::string(path);
    tree.root.kind = ast.kind;
    tree.root.value = tree.path;
    tree.root.id.base = root_base(path);
    identify_children(ast, tree.root);

    std::map<ArtefactId, const Artefact*> index;
    for_each_artefact(tree.root, [&](const Artefact& a) {
        auto [it, inserted] = index.emplace(a.id, &a);
        if (!inserted) {
            throw Error(ErrorCode::InternalCollision, "id " + a.id.str() + " shared by '" + it->second->value +
                                                          "' and '" + a.value + "' in " + tree.path);
        }
    });
    return tree;
}

minilang::AstNode to_ast(const Artefact& artefact) {
    minilang::AstNode node;
    node.kind = artefact.kind;
    node.text = artefact.kind == NodeKind::CompilationUnit ? std::string() : artefact.value;
    node.children.reserve(artefact.children.size());
    for (const auto& c : artefact.children) node.children.push_back(to_ast(c));
    return node;
}

std::vector<std::string> rendered_ids(const ArtefactTree& tree) {
    std::vector<std::string> out;
    for_each_artefact(tree.root, [&](const Artefact& a) { out.push_back(a.id.str()); });
    return out;
}

nlohmann::json to_json(const ArtefactTree& tree) {
    nlohmann::json nodes = nlohmann::json::array();
    for_each_artefact(tree.root, [&](const Artefact& a) {
        nodes.push_back({
            {"childCount", a.children.size()},
            {"id", a.id.str()},
            {"kind", std::string(minilang::to_string(a.kind))},
            {"origin", a.origin},
            {"value", a.value},
        });
    });
    return {{"nodes", std::move(nodes)}, {"path", tree.path}};
}

namespace {

Artefact read_node(const nlohmann::json& nodes, std::size_t& pos) {
    if (pos >= nodes.size()) throw Error(ErrorCode::RepositoryError, "truncated ART node list");
    const auto& n = nodes[pos++];
    Artefact a;
    a.id = ArtefactId::parse(n.at("id").get<std::string>());
    a.kind = minilang::node_kind_from_string(n.at("kind").get<std::string>());
    a.value = n.at("value").get<std::string>();
    for (const auto& o : n.at("origin")) a.origin.insert(o.get<std::string>());
    const auto count = n.at("childCount").get<std::size_t>();
    a.children.reserve(count);
    for (std::size_t i = 0; i < count; ++i) a.children.push_back(read_node(nodes, pos));
    return a;
}

} // namespace

ArtefactTree art_from_json(const nlohmann::json& doc) {
    try {
        ArtefactTree tree;
        tree.path = doc.at("path").get<std::string>();
        const auto& nodes = doc.at("nodes");
        std::size_t pos = 0;
        tree.root = read_node(nodes, pos);
        if (pos != nodes.size()) throw Error(ErrorCode::RepositoryError, "trailing ART nodes in " + tree.path);
        return tree;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::RepositoryError, std::string("malformed ART document: ") + e.what());
    }
}

std::string serialize(const ArtefactTree& tree) { return to_json(tree).dump(2) + "\n"; }

} // namespace splforge
