#include "splforge/codegen.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_map>

#include "splforge/error.hpp"
#include "splforge/variability.hpp"

namespace splforge {

std::string Condition::str() const {
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) out += " && ";
        out += terms[i];
    }
    return out;
}

Condition Condition::parse(std::string_view text) {
    Condition c;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto pos = std::min(text.find("&&", start), text.size());
        auto term = text.substr(start, pos - start);
        while (!term.empty() && term.front() == ' ') term.remove_prefix(1);
        while (!term.empty() && term.back() == ' ') term.remove_suffix(1);
        if (term.empty()) throw Error(ErrorCode::MalformedAnnotation, "empty term in condition '" + std::string(text) + "'");
        c.terms.emplace_back(term);
        start = pos + 2;
    }
    return c;
}

bool Condition::satisfied_by(const std::set<std::string>& selection) const {
    return std::all_of(terms.begin(), terms.end(), [&](const auto& t) { return selection.count(t) > 0; });
}

bool Condition::same_as(const Condition& other) const {
    return std::set<std::string>(terms.begin(), terms.end()) ==
           std::set<std::string>(other.terms.begin(), other.terms.end());
}

namespace {

std::string_view trim_left(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
}

enum class LineType { Code, If, Endif };

LineType classify(std::string_view line, std::string_view path, std::size_t number) {
    const auto t = trim_left(line);
    if (t.starts_with(kIfDirective)) return LineType::If;
    if (t == kEndifDirective) return LineType::Endif;
    if (t.starts_with("//#")) {
        throw Error(ErrorCode::MalformedAnnotation,
                    std::string(path) + ":" + std::to_string(number) + ": unsupported directive '" + std::string(t) + "'");
    }
    return LineType::Code;
}

Condition condition_of(std::string_view directive) { return Condition::parse(trim_left(directive).substr(kIfDirective.size())); }

struct Item {
    bool block = false;
    std::string line;  // code line, or the opening directive
    std::string close; // closing directive
    Condition condition;
    std::vector<Item> children;
};

std::vector<Item> parse_items(const AnnotatedFile& file) {
    std::vector<Item> root;
    std::vector<std::vector<Item>*> stack{&root};
    std::vector<Item> open;
    for (std::size_t n = 0; n < file.lines.size(); ++n) {
        const auto& line = file.lines[n];
        switch (classify(line, file.path, n + 1)) {
            case LineType::Code:
                stack.back()->push_back(Item{false, line, {}, {}, {}});
                break;
            case LineType::If: {
                Item it;
                it.block = true;
                it.line = line;
                it.condition = condition_of(line);
                stack.back()->push_back(std::move(it));
                stack.push_back(&stack.back()->back().children);
                break;
            }
            case LineType::Endif:
                if (stack.size() == 1) {
                    throw Error(ErrorCode::MalformedAnnotation, file.path + ":" + std::to_string(n + 1) + ": unmatched //#endif");
                }
                stack.pop_back();
                stack.back()->back().close = line;
                break;
        }
    }
    if (stack.size() != 1) throw Error(ErrorCode::MalformedAnnotation, file.path + ": unterminated //#if");
    return root;
}

void render(const std::vector<Item>& items, std::vector<std::string>& out) {
    for (const auto& it : items) {
        out.push_back(it.line);
        if (it.block) {
            render(it.children, out);
            out.push_back(it.close);
        }
    }
}

bool contains_code(const std::vector<Item>& items) {
    return std::any_of(items.begin(), items.end(),
                       [](const Item& it) { return !it.block || contains_code(it.children); });
}

std::vector<Item> simplify_items(std::vector<Item> items, std::vector<const Condition*>& enclosing) {
    std::vector<Item> out;
    for (auto& it : items) {
        if (!it.block) {
            out.push_back(std::move(it));
            continue;
        }
        if (!contains_code(it.children)) continue;
        const bool redundant = std::any_of(enclosing.begin(), enclosing.end(),
                                           [&](const Condition* c) { return c->same_as(it.condition); });
        if (redundant) {
            // S1
            auto inner = simplify_items(std::move(it.children), enclosing);
            std::move(inner.begin(), inner.end(), std::back_inserter(out));
            continue;
        }
        enclosing.push_back(&it.condition);
        it.children = simplify_items(std::move(it.children), enclosing);
        enclosing.pop_back();
        if (!out.empty() && out.back().block && out.back().condition.same_as(it.condition)) {
            // S2
            auto& prev = out.back().children;
            std::move(it.children.begin(), it.children.end(), std::back_inserter(prev));
            continue;
        }
        out.push_back(std::move(it));
    }
    return out;
}

struct Labeller {
    std::unordered_map<std::string, std::optional<Condition>> by_id;
};

void build_ast(const Artefact& artefact, minilang::AstNode& node, const Labeller& labels,
               std::unordered_map<const minilang::AstNode*, const Condition*>& conditions) {
    node.kind = artefact.kind;
    node.text = artefact.kind == NodeKind::CompilationUnit ? std::string() : artefact.value;
    if (auto it = labels.by_id.find(artefact.id.str()); it != labels.by_id.end() && it->second) {
        conditions.emplace(&node, &*it->second);
    }
    node.children.resize(artefact.children.size());
    for (std::size_t i = 0; i < artefact.children.size(); ++i) {
        build_ast(artefact.children[i], node.children[i], labels, conditions);
    }
}

// Returns true when something in the subtree is selected.
bool prune(const Artefact& artefact, const std::set<std::string>& configuration, Artefact& out) {
    out.id = artefact.id;
    out.kind = artefact.kind;
    out.value = artefact.value;
    for (const auto& child : artefact.children) {
        Artefact kept;
        const bool selected = configuration.count(child.id.str()) > 0;
        const bool below = prune(child, configuration, kept);
        if (selected) {
            out.children.push_back(std::move(kept));
        } else if (below) {
            throw Error(ErrorCode::OrphanSelection,
                        "artefact below " + child.id.str() + " ('" + child.value + "') is selected without it");
        }
    }
    return !out.children.empty() || configuration.count(artefact.id.str()) > 0;
}

} // namespace

std::size_t annotation_count(const AnnotatedFile& file) {
    return static_cast<std::size_t>(std::count_if(file.lines.begin(), file.lines.end(), [](const std::string& l) {
        return trim_left(l).starts_with(kIfDirective);
    }));
}

SplOutput generate_spl(const SplRepository& repo, LabelMode mode) {
    SplOutput out;
    if (repo.products.empty()) return out;
    const auto avm = build_avm(repo);

    for (const auto& [group, features] : repo.traces.entries) {
        if (!avm.find(group)) out.warnings.push_back("stale-trace: group " + group + " no longer exists; entry ignored");
    }

    Labeller labels;
    for (const auto& node : avm.nodes) {
        std::optional<Condition> condition;
        const auto trace = repo.traces.entries.find(node.name);
        if (node.common) {
            if (mode == LabelMode::Features && trace != repo.traces.entries.end()) condition = Condition{trace->second};
        } else if (mode == LabelMode::Features && trace != repo.traces.entries.end()) {
            condition = Condition{trace->second};
        } else if (mode == LabelMode::Features || mode == LabelMode::ArtefactGroups) {
            if (mode == LabelMode::Features) {
                out.warnings.push_back("untraced-group: " + node.name + " has no feature trace; labelled by group name");
            }
            condition = Condition{{node.name}};
        }
        for (const auto& member : node.members) {
            if (mode == LabelMode::ArtefactIds && !node.common) {
                labels.by_id.emplace(member, Condition{{member}});
            } else {
                labels.by_id.emplace(member, condition);
            }
        }
    }

    for (const auto& [path, tree] : repo.arts) {
        minilang::AstNode ast;
        std::unordered_map<const minilang::AstNode*, const Condition*> conditions;
        build_ast(tree.root, ast, labels, conditions);

        std::vector<std::size_t> opened;
        minilang::PrintHooks hooks;
        hooks.before = [&](const minilang::AstNode& n, int depth, std::vector<std::string>& lines) {
            if (auto it = conditions.find(&n); it != conditions.end()) {
                opened.push_back(lines.size());
                lines.push_back(std::string(static_cast<std::size_t>(depth) * 4, ' ') + std::string(kIfDirective) +
                                it->second->str());
            }
        };
        hooks.after = [&](const minilang::AstNode& n, int depth, std::vector<std::string>& lines) {
            if (!conditions.count(&n)) return;
            const auto at = opened.back();
            opened.pop_back();
            if (lines.size() == at + 1) {
                lines.pop_back();
            } else {
                lines.push_back(std::string(static_cast<std::size_t>(depth) * 4, ' ') + std::string(kEndifDirective));
            }
        };
        out.files.push_back({path, minilang::print_lines(ast, &hooks).lines});
    }
    return out;
}

AnnotatedFile simplify(const AnnotatedFile& file) {
    auto items = parse_items(file);
    std::vector<std::string> current = file.lines;
    for (;;) {
        std::vector<const Condition*> enclosing;
        items = simplify_items(std::move(items), enclosing);
        std::vector<std::string> next;
        render(items, next);
        if (next == current) break;
        current = std::move(next);
    }
    return {file.path, std::move(current)};
}

std::vector<AnnotatedFile> simplify(const std::vector<AnnotatedFile>& files) {
    std::vector<AnnotatedFile> out;
    out.reserve(files.size());
    for (const auto& f : files) out.push_back(simplify(f));
    return out;
}

std::vector<minilang::SourceFile> evaluate(const std::vector<AnnotatedFile>& files,
                                           const std::set<std::string>& selection) {
    std::vector<minilang::SourceFile> out;
    for (const auto& file : files) {
        std::vector<bool> active{true};
        std::vector<std::string> kept;
        for (std::size_t n = 0; n < file.lines.size(); ++n) {
            const auto& line = file.lines[n];
            switch (classify(line, file.path, n + 1)) {
                case LineType::Code:
                    if (active.back()) kept.push_back(line);
                    break;
                case LineType::If:
                    active.push_back(active.back() && condition_of(line).satisfied_by(selection));
                    break;
                case LineType::Endif:
                    if (active.size() == 1) {
                        throw Error(ErrorCode::MalformedAnnotation,
                                    file.path + ":" + std::to_string(n + 1) + ": unmatched //#endif");
                    }
                    active.pop_back();
                    break;
            }
        }
        if (active.size() != 1) throw Error(ErrorCode::MalformedAnnotation, file.path + ": unterminated //#if");
        if (!kept.empty()) out.push_back({file.path, minilang::join_lines(kept)});
    }
    return out;
}

ProductOutput generate_product_by_features(const SplRepository& repo, const std::set<std::string>& features) {
    ProductOutput out;
    const auto known = repo.known_features();
    for (const auto& f : features) {
        if (!known.count(f)) throw Error(ErrorCode::UnknownFeature, "feature '" + f + "' is not declared by any product");
    }
    if (!repo.products.empty()) {
        const auto fvm = build_fvm(repo);
        const std::vector<std::string> selected(features.begin(), features.end());
        for (std::size_t i = 0; i < selected.size(); ++i) {
            for (std::size_t j = i + 1; j < selected.size(); ++j) {
                const auto a = fvm.node_of(selected[i]);
                const auto b = fvm.node_of(selected[j]);
                if (a && b && fvm.excluded(*a, *b)) {
                    out.warnings.push_back("mutual-exclusion: " + selected[i] + " and " + selected[j] +
                                           " never appear together in an integrated product");
                }
            }
        }
    }
    auto spl = generate_spl(repo, LabelMode::Features);
    out.warnings.insert(out.warnings.end(), spl.warnings.begin(), spl.warnings.end());
    out.files = evaluate(simplify(spl.files), features);
    return out;
}

std::vector<minilang::SourceFile> generate_product_by_artefacts(const SplRepository& repo,
                                                                const std::set<std::string>& configuration) {
    const auto ids = repo.all_ids();
    for (const auto& id : configuration) {
        if (!ids.count(id)) throw Error(ErrorCode::UnknownArtefactId, "no artefact with id " + id);
    }
    std::vector<minilang::SourceFile> out;
    for (const auto& [path, tree] : repo.arts) {
        Artefact kept;
        const bool any = prune(tree.root, configuration, kept);
        if (!any) continue;
        if (!configuration.count(tree.root.id.str())) {
            throw Error(ErrorCode::OrphanSelection, "artefacts of " + path + " are selected without the file root");
        }
        out.push_back({path, minilang::print(to_ast(kept))});
    }
    return out;
}

} // namespace splforge
