#include "splforge/corpus.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "splforge/error.hpp"
#include "splforge/hash.hpp"
#include "splforge/integration.hpp"
#include "splforge/minilang.hpp"

namespace splforge::corpus {

namespace {

using nlohmann::json;

// Library distributions are implementation-defined; modulo over mt19937_64 keeps families
// identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
    bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

void collect_anchors(const std::vector<SkeletonItem>& items, std::vector<std::string>& out) {
    for (const auto& it : items) {
        if (it.kind == SkeletonItem::Kind::Anchor) out.push_back(it.text);
        if (it.kind == SkeletonItem::Kind::Method) collect_anchors(it.body, out);
    }
}

bool selected(const std::optional<std::string>& feature, const std::set<std::string>& features) {
    return !feature || features.count(*feature) > 0;
}

void emit(std::vector<std::string>& lines, const std::string& code, std::size_t depth) {
    std::istringstream in(code);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line.empty() ? line : std::string(depth * 4, ' ') + line);
}

std::string field_name(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> tokens;
    for (std::string t; in >> t;) tokens.push_back(t);
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        if (tokens[i] == "=" || tokens[i] == ";" || tokens[i] == ",") return tokens[i - 1];
    }
    return text;
}

void check_members(const minilang::AstNode& unit, const std::string& product, const std::string& path) {
    for (const auto& cls : unit.children) {
        if (cls.kind != NodeKind::ClassDecl) continue;
        std::set<std::string> seen;
        for (const auto& m : cls.children) {
            const auto key = m.kind == NodeKind::FieldDecl ? "field " + field_name(m.text) : "method " + m.text;
            if (!seen.insert(key).second) {
                throw Error(ErrorCode::CompositionError,
                            product + "/" + path + ": " + key + " is declared twice by the selected fragments");
            }
        }
    }
}

class Composer {
public:
    Composer(const FamilySpec& spec, std::uint64_t seed) : spec_(spec), seed_(seed) {
        for (std::size_t i = 0; i < spec.fragments.size(); ++i) {
            const auto& f = spec.fragments[i];
            at_[{f.file, f.anchor}].push_back(i);
        }
    }

    ProductSource compose(const ProductSpec& product) const {
        const std::set<std::string> features(product.features.begin(), product.features.end());
        ProductSource out{product.name, product.features, {}};
        for (const auto& file : spec_.files) {
            if (!selected(file.feature, features)) continue;
            std::vector<std::string> lines;
            for (const auto& imp : file.imports) lines.push_back("import " + imp + ";");
            if (!file.imports.empty()) lines.emplace_back();
            lines.push_back(file.class_header + " {");
            items(file, file.body, features, product.name, 1, lines);
            lines.push_back("}");
            minilang::SourceFile source{file.path, minilang::join_lines(lines)};
            try {
                check_members(minilang::parse(source), product.name, file.path);
            } catch (const SyntaxError& e) {
                throw Error(ErrorCode::CompositionError, product.name + ": " + e.what());
            }
            out.files.push_back(std::move(source));
        }
        return out;
    }

private:
    void items(const SkeletonFile& file, const std::vector<SkeletonItem>& body, const std::set<std::string>& features,
               const std::string& product, std::size_t depth, std::vector<std::string>& lines) const {
        for (const auto& it : body) {
            switch (it.kind) {
                case SkeletonItem::Kind::Code:
                    emit(lines, it.text, depth);
                    break;
                case SkeletonItem::Kind::Method:
                    if (!selected(it.feature, features)) break;
                    lines.push_back(std::string(depth * 4, ' ') + it.text + " {");
                    items(file, it.body, features, product, depth + 1, lines);
                    lines.push_back(std::string(depth * 4, ' ') + "}");
                    break;
                case SkeletonItem::Kind::Anchor:
                    for (auto i : fragments(file.path, it.text, features, product)) {
                        emit(lines, spec_.fragments[i].code, depth);
                    }
                    break;
            }
        }
    }

    std::vector<std::size_t> fragments(const std::string& path, const std::string& anchor,
                                       const std::set<std::string>& features, const std::string& product) const {
        const auto found = at_.find({path, anchor});
        if (found == at_.end()) return {};
        std::vector<std::string> order = spec_.feature_pool;
        if (spec_.shuffle != Shuffle::None) {
            std::string key = to_hex16(seed_) + '\x1f' + path + '\x1f' + anchor;
            if (spec_.shuffle == Shuffle::PerProduct) key += '\x1f' + product;
            Rng rng(content_hash(key));
            rng.shuffle(order);
        }
        std::vector<std::size_t> out;
        for (const auto& feature : order) {
            if (!features.count(feature)) continue;
            for (auto i : found->second) {
                if (spec_.fragments[i].feature == feature) out.push_back(i);
            }
        }
        return out;
    }

    const FamilySpec& spec_;
    std::uint64_t seed_;
    std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> at_;
};

SkeletonItem item_from_json(const json& j, bool in_method) {
    SkeletonItem it;
    if (j.contains("anchor")) {
        it.kind = SkeletonItem::Kind::Anchor;
        it.text = j.at("anchor").get<std::string>();
    } else if (j.contains("code")) {
        it.kind = SkeletonItem::Kind::Code;
        it.text = j.at("code").get<std::string>();
    } else if (j.contains("method") && !in_method) {
        it.kind = SkeletonItem::Kind::Method;
        it.text = j.at("method").get<std::string>();
        if (j.contains("feature")) it.feature = j.at("feature").get<std::string>();
        for (const auto& b : j.value("body", json::array())) it.body.push_back(item_from_json(b, true));
    } else {
        throw Error(ErrorCode::InvalidInput, "skeleton item needs 'anchor', 'code' or 'method': " + j.dump());
    }
    return it;
}

json item_to_json(const SkeletonItem& it) {
    json j;
    switch (it.kind) {
        case SkeletonItem::Kind::Anchor:
            j["anchor"] = it.text;
            break;
        case SkeletonItem::Kind::Code:
            j["code"] = it.text;
            break;
        case SkeletonItem::Kind::Method: {
            j["method"] = it.text;
            if (it.feature) j["feature"] = *it.feature;
            json body = json::array();
            for (const auto& b : it.body) body.push_back(item_to_json(b));
            j["body"] = std::move(body);
            break;
        }
    }
    return j;
}

constexpr const char* kShuffleNames[] = {"none", "anchor", "product"};

} // namespace

void FamilySpec::validate() const {
    const std::set<std::string> pool(feature_pool.begin(), feature_pool.end());
    if (pool.size() != feature_pool.size()) throw Error(ErrorCode::InvalidInput, "feature pool lists a name twice");
    if (pool.count("")) throw Error(ErrorCode::InvalidInput, "empty feature name");
    const auto known = [&](const std::string& f, const std::string& where) {
        if (!pool.count(f)) throw Error(ErrorCode::InvalidInput, where + " names unknown feature '" + f + "'");
    };

    std::map<std::string, std::set<std::string>> anchors;
    for (const auto& file : files) {
        minilang::validate_relative_path(file.path);
        if (anchors.count(file.path)) throw Error(ErrorCode::InvalidInput, "file " + file.path + " is declared twice");
        if (file.feature) known(*file.feature, "file " + file.path);
        for (const auto& it : file.body) {
            if (it.kind == SkeletonItem::Kind::Method && it.feature) known(*it.feature, "method " + it.text);
        }
        std::vector<std::string> names;
        collect_anchors(file.body, names);
        auto& set = anchors[file.path];
        for (const auto& n : names) {
            if (!set.insert(n).second) throw Error(ErrorCode::InvalidInput, file.path + ": anchor '" + n + "' repeated");
        }
    }
    for (const auto& f : fragments) {
        known(f.feature, "fragment");
        const auto it = anchors.find(f.file);
        if (it == anchors.end()) throw Error(ErrorCode::CompositionError, "fragment targets unknown file " + f.file);
        if (!it->second.count(f.anchor)) {
            throw Error(ErrorCode::CompositionError, "fragment targets unknown anchor " + f.file + "#" + f.anchor);
        }
    }
    for (const auto& c : constraints) {
        known(c.first, "constraint");
        known(c.second, "constraint");
    }
    std::set<std::string> names;
    for (const auto& p : products) {
        if (p.name.empty() || !names.insert(p.name).second) {
            throw Error(ErrorCode::InvalidInput, "product name '" + p.name + "' is empty or repeated");
        }
        const std::set<std::string> chosen(p.features.begin(), p.features.end());
        for (const auto& f : chosen) known(f, "product " + p.name);
        for (const auto& c : constraints) {
            const bool a = chosen.count(c.first) > 0;
            const bool b = chosen.count(c.second) > 0;
            if (c.kind == FeatureConstraint::Kind::Requires && a && !b) {
                throw Error(ErrorCode::InvalidInput, "product " + p.name + ": " + c.first + " requires " + c.second);
            }
            if (c.kind == FeatureConstraint::Kind::Excludes && a && b) {
                throw Error(ErrorCode::InvalidInput, "product " + p.name + ": " + c.first + " excludes " + c.second);
            }
        }
    }
}

FamilySpec family_from_json(std::string_view text) {
    FamilySpec spec;
    try {
        const auto doc = json::parse(text);
        spec.name = doc.value("name", std::string("family"));
        spec.feature_pool = doc.at("featurePool").get<std::vector<std::string>>();
        const auto shuffle = doc.value("shuffle", std::string("none"));
        const auto* found = std::find(std::begin(kShuffleNames), std::end(kShuffleNames), shuffle);
        if (found == std::end(kShuffleNames)) throw Error(ErrorCode::InvalidInput, "unknown shuffle mode '" + shuffle + "'");
        spec.shuffle = static_cast<Shuffle>(found - std::begin(kShuffleNames));
        for (const auto& f : doc.at("files")) {
            SkeletonFile file;
            file.path = f.at("path").get<std::string>();
            file.imports = f.value("imports", std::vector<std::string>{});
            file.class_header = f.at("class").get<std::string>();
            if (f.contains("feature")) file.feature = f.at("feature").get<std::string>();
            for (const auto& it : f.value("body", json::array())) file.body.push_back(item_from_json(it, false));
            spec.files.push_back(std::move(file));
        }
        for (const auto& f : doc.value("fragments", json::array())) {
            spec.fragments.push_back({f.at("feature").get<std::string>(), f.at("file").get<std::string>(),
                                      f.at("anchor").get<std::string>(), f.at("code").get<std::string>()});
        }
        for (const auto& c : doc.value("constraints", json::array())) {
            FeatureConstraint fc;
            const char* key = c.contains("requires") ? "requires" : "excludes";
            fc.kind = c.contains("requires") ? FeatureConstraint::Kind::Requires : FeatureConstraint::Kind::Excludes;
            const auto pair = c.at(key).get<std::vector<std::string>>();
            if (pair.size() != 2) throw Error(ErrorCode::InvalidInput, std::string(key) + " takes two feature names");
            fc.first = pair[0];
            fc.second = pair[1];
            spec.constraints.push_back(std::move(fc));
        }
        for (const auto& p : doc.at("products")) {
            spec.products.push_back({p.at("name").get<std::string>(), p.at("features").get<std::vector<std::string>>()});
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("malformed family file: ") + e.what());
    }
    spec.validate();
    return spec;
}

std::string family_to_json(const FamilySpec& spec) {
    json doc;
    doc["name"] = spec.name;
    doc["featurePool"] = spec.feature_pool;
    doc["shuffle"] = kShuffleNames[static_cast<int>(spec.shuffle)];
    doc["files"] = json::array();
    for (const auto& f : spec.files) {
        json j;
        j["path"] = f.path;
        if (!f.imports.empty()) j["imports"] = f.imports;
        j["class"] = f.class_header;
        if (f.feature) j["feature"] = *f.feature;
        j["body"] = json::array();
        for (const auto& it : f.body) j["body"].push_back(item_to_json(it));
        doc["files"].push_back(std::move(j));
    }
    doc["fragments"] = json::array();
    for (const auto& f : spec.fragments) {
        doc["fragments"].push_back({{"feature", f.feature}, {"file", f.file}, {"anchor", f.anchor}, {"code", f.code}});
    }
    doc["constraints"] = json::array();
    for (const auto& c : spec.constraints) {
        const char* key = c.kind == FeatureConstraint::Kind::Requires ? "requires" : "excludes";
        doc["constraints"].push_back({{key, {c.first, c.second}}});
    }
    doc["products"] = json::array();
    for (const auto& p : spec.products) doc["products"].push_back({{"name", p.name}, {"features", p.features}});
    return doc.dump(2) + "\n";
}

FamilySpec load_family(const std::filesystem::path& path) { return family_from_json(read_text_file(path)); }

std::vector<ProductSource> synthesize(const FamilySpec& spec, std::uint64_t seed) {
    spec.validate();
    const Composer composer(spec, seed);
    std::vector<ProductSource> out;
    out.reserve(spec.products.size());
    for (const auto& p : spec.products) out.push_back(composer.compose(p));
    return out;
}

fca::ConstraintSet ground_truth_constraints(const FamilySpec& spec) {
    const auto n = spec.products.size();
    std::map<std::string, std::vector<std::size_t>> extent;
    for (std::size_t p = 0; p < n; ++p) {
        for (const auto& f : spec.products[p].features) {
            auto& e = extent[f];
            if (e.empty() || e.back() != p) e.push_back(p);
        }
    }
    fca::ConstraintSet out;
    std::map<std::vector<std::size_t>, std::vector<std::string>> by_extent;
    for (const auto& f : spec.feature_pool) {
        const auto it = extent.find(f);
        if (it == extent.end()) continue;
        if (it->second.size() == n) {
            out.common.push_back(f);
        } else {
            by_extent[it->second].push_back(f);
        }
    }
    for (auto& [e, features] : by_extent) out.groups.push_back({0, std::move(features), e});
    std::stable_sort(out.groups.begin(), out.groups.end(),
                     [](const fca::Group& a, const fca::Group& b) { return a.extent.size() < b.extent.size(); });
    const auto g = out.groups.size();
    std::vector<std::vector<bool>> implies(g, std::vector<bool>(g, false));
    for (std::size_t a = 0; a < g; ++a) {
        out.groups[a].concept_index = a;
        for (std::size_t b = 0; b < g; ++b) {
            const auto& ea = out.groups[a].extent;
            const auto& eb = out.groups[b].extent;
            if (a != b && ea.size() < eb.size() && std::includes(eb.begin(), eb.end(), ea.begin(), ea.end())) {
                implies[a][b] = true;
            }
            if (a < b) {
                std::vector<std::size_t> both;
                std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(both));
                if (both.empty()) out.mutual_exclusions.emplace_back(a, b);
            }
        }
    }
    out.implications = fca::transitive_reduction(implies);
    return out;
}

FamilySpec random_family(const RandomFamilyParams& params, std::uint64_t seed) {
    static const std::vector<std::string> vocabulary = {
        "y = y + 1;",
        "y = y * 2;",
        "x = x - 1;",
        "y = y + x;",
        "System.out.println(y);",
        "if (y > 3) {\n    y = y - 3;\n}",
        "while (x > 0) {\n    x = x - 1;\n    y = y + 2;\n}",
        "if (x == 1) {\n    y = 0;\n} else {\n    y = 1;\n}",
        "for (int i = 0; i < 3; i++) {\n    y = y + i;\n}",
    };
    Rng rng(seed);
    FamilySpec spec;
    spec.name = "random-" + std::to_string(seed);
    spec.shuffle = Shuffle::PerProduct;
    for (std::size_t f = 0; f < std::max<std::size_t>(params.features, 1); ++f) spec.feature_pool.push_back("F" + std::to_string(f));
    const auto pick_feature = [&] { return spec.feature_pool[rng.below(spec.feature_pool.size())]; };

    std::vector<std::vector<std::string>> statement_anchors;
    for (std::size_t i = 0; i < std::max<std::size_t>(params.files, 1); ++i) {
        SkeletonFile file;
        file.path = "src/pkg" + std::to_string(i % 3) + "/Unit" + std::to_string(i) + ".java";
        if (rng.chance(0.3)) file.imports.push_back("java.util.List");
        file.class_header = "class Unit" + std::to_string(i);
        // The first file stays unconditional so that no product ends up empty.
        if (i > 0 && rng.chance(params.feature_file_chance)) file.feature = pick_feature();
        file.body.push_back({SkeletonItem::Kind::Anchor, "fields", std::nullopt, {}});
        file.body.push_back({SkeletonItem::Kind::Code, "int base = " + std::to_string(i) + ";", std::nullopt, {}});
        std::vector<std::string> anchors;
        for (std::size_t m = 0; m < params.methods_per_file; ++m) {
            SkeletonItem method{SkeletonItem::Kind::Method, "int run" + std::to_string(m) + "(int x)", std::nullopt, {}};
            if (rng.chance(params.feature_method_chance)) method.feature = pick_feature();
            method.body.push_back({SkeletonItem::Kind::Code, "int y = x + base;", std::nullopt, {}});
            for (std::size_t s = 0; s < params.statements_per_method; ++s) {
                const auto anchor = "m" + std::to_string(m) + "s" + std::to_string(s);
                method.body.push_back({SkeletonItem::Kind::Anchor, anchor, std::nullopt, {}});
                anchors.push_back(anchor);
                method.body.push_back({SkeletonItem::Kind::Code, vocabulary[rng.below(vocabulary.size())], std::nullopt, {}});
            }
            const auto tail = "m" + std::to_string(m) + "end";
            method.body.push_back({SkeletonItem::Kind::Anchor, tail, std::nullopt, {}});
            anchors.push_back(tail);
            method.body.push_back({SkeletonItem::Kind::Code, "return y;", std::nullopt, {}});
            file.body.push_back(std::move(method));
        }
        file.body.push_back({SkeletonItem::Kind::Anchor, "members", std::nullopt, {}});
        statement_anchors.push_back(std::move(anchors));
        spec.files.push_back(std::move(file));
    }

    std::map<std::string, std::size_t> member_counter;
    for (const auto& feature : spec.feature_pool) {
        for (std::size_t k = 0; k < params.fragments_per_feature; ++k) {
            const auto fi = rng.below(spec.files.size());
            const auto& path = spec.files[fi].path;
            const auto roll = rng.below(100);
            if (roll < 70 && !statement_anchors[fi].empty()) {
                const auto& anchors = statement_anchors[fi];
                std::string code = vocabulary[rng.below(vocabulary.size())];
                if (rng.chance(0.3)) code += "\n" + vocabulary[rng.below(vocabulary.size())];
                spec.fragments.push_back({feature, path, anchors[rng.below(anchors.size())], code});
            } else {
                const auto n = std::to_string(member_counter[feature]++);
                const auto name = feature + "_" + n;
                if (roll < 85) {
                    spec.fragments.push_back({feature, path, "fields", "int f" + name + " = " + n + ";"});
                } else {
                    spec.fragments.push_back({feature, path, "members",
                                              "int g" + name + "(int x) {\n    int y = x;\n    " +
                                                  vocabulary[rng.below(5)] + "\n    return y;\n}"});
                }
            }
        }
    }

    for (std::size_t p = 0; p < std::max<std::size_t>(params.products, 1); ++p) {
        ProductSpec product{"P" + std::to_string(p), {}};
        for (const auto& f : spec.feature_pool) {
            if (rng.chance(0.5)) product.features.push_back(f);
        }
        if (product.features.empty()) product.features.push_back(pick_feature());
        spec.products.push_back(std::move(product));
    }
    return spec;
}

std::size_t statement_count(const std::vector<ProductSource>& products) {
    std::size_t count = 0;
    const auto visit = [&](const auto& self, const minilang::AstNode& n) -> void {
        if (minilang::is_statement(n.kind)) ++count;
        for (const auto& c : n.children) self(self, c);
    };
    for (const auto& p : products) {
        for (const auto& f : p.files) visit(visit, minilang::parse(f));
    }
    return count;
}

} // namespace splforge::corpus
