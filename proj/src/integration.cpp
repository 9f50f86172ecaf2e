#include "splforge/integration.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "splforge/error.hpp"
#include "splforge/hash.hpp"

namespace splforge {

namespace fs = std::filesystem;

std::vector<ArtefactId> super_sequence(std::span<const ArtefactId> s1, std::span<const ArtefactId> s2) {
    const auto plan = merge_plan(s1, s2, [](const ArtefactId& a, const ArtefactId& b) { return a.same_twin(b); });
    std::vector<ArtefactId> out;
    out.reserve(plan.size());
    for (const auto& slot : plan) out.push_back(slot.first ? s1[*slot.first] : s2[*slot.second]);
    return out;
}

std::vector<ArtefactId> mint_duplicates(std::span<const ArtefactId> seq) {
    std::map<std::pair<std::uint64_t, std::uint32_t>, std::uint32_t> seen;
    std::vector<ArtefactId> out(seq.begin(), seq.end());
    for (auto& id : out) id.dup = ++seen[{id.base, id.twin}];
    return out;
}

namespace {

class Merger {
public:
    Merger(const std::string& product, const std::string& path, std::set<std::string>& configuration,
           const Artefact& existing_root)
        : product_(product), path_(path), configuration_(configuration) {
        for_each_artefact(existing_root, [&](const Artefact& a) { index_.insert(a.id); });
    }

    // `target` and `incoming` denote the same artefact.
    void adopt(Artefact& target, const Artefact& incoming) {
        if (target.kind != incoming.kind || target.value != incoming.value) {
            throw Error(ErrorCode::InternalCollision, "id " + target.id.str() + " already names '" + target.value +
                                                          "', cannot unify with '" + incoming.value + "' in " + path_);
        }
        target.origin.insert(product_);
        configuration_.insert(target.id.str());
        merge_children(target, incoming);
    }

private:
    Artefact fresh(const ArtefactId& id, const Artefact& incoming) {
        if (!index_.insert(id).second) {
            throw Error(ErrorCode::InternalCollision,
                        "id " + id.str() + " for '" + incoming.value + "' is already taken in " + path_);
        }
        Artefact a;
        a.id = id;
        a.kind = incoming.kind;
        a.value = incoming.value;
        adopt(a, incoming);
        return a;
    }

    void merge_children(Artefact& target, const Artefact& incoming) {
        if (incoming.children.empty()) return;
        const auto parent_seed = target.id.seed();
        std::vector<ArtefactId> existing;
        existing.reserve(target.children.size());
        for (const auto& c : target.children) existing.push_back(c.id);
        // Product ids were derived from the product's own parent; re-derive them under `target`.
        std::vector<ArtefactId> keys;
        keys.reserve(incoming.children.size());
        for (const auto& c : incoming.children) {
            const bool stmt = minilang::is_statement(c.kind);
            ArtefactId k;
            k.twin = c.id.twin;
            k.base = artefact_base(c.value, parent_seed, stmt ? std::optional<std::uint32_t>(c.id.twin) : std::nullopt);
            keys.push_back(k);
        }

        const auto plan = merge_plan(std::span<const ArtefactId>(existing), std::span<const ArtefactId>(keys),
                                     [](const ArtefactId& a, const ArtefactId& b) { return a.same_twin(b); });

        std::map<std::pair<std::uint64_t, std::uint32_t>, std::uint32_t> max_dup;
        std::unordered_map<std::uint64_t, std::size_t> member_slot;
        for (std::size_t i = 0; i < existing.size(); ++i) {
            auto& d = max_dup[{existing[i].base, existing[i].twin}];
            d = std::max(d, existing[i].dup);
            if (!minilang::is_statement(target.children[i].kind)) member_slot.emplace(existing[i].base, i);
        }

        std::vector<Artefact> old = std::move(target.children);
        std::vector<Artefact> merged;
        merged.reserve(plan.size());
        std::vector<std::size_t> new_position(old.size(), 0);
        std::vector<std::pair<std::size_t, std::size_t>> deferred;
        for (const auto& slot : plan) {
            if (slot.first) {
                new_position[*slot.first] = merged.size();
                merged.push_back(std::move(old[*slot.first]));
                if (slot.second) adopt(merged.back(), incoming.children[*slot.second]);
                continue;
            }
            const std::size_t j = *slot.second;
            const auto& inc = incoming.children[j];
            ArtefactId id = keys[j];
            if (!minilang::is_statement(inc.kind)) {
                // Members are unique per parent: an out-of-order match unifies instead of copying.
                if (auto it = member_slot.find(id.base); it != member_slot.end()) {
                    deferred.emplace_back(it->second, j);
                    continue;
                }
            } else {
                auto& d = max_dup[{id.base, id.twin}];
                id.dup = d + 1;
                d = id.dup;
            }
            merged.push_back(fresh(id, inc));
        }
        for (const auto& [i, j] : deferred) adopt(merged[new_position[i]], incoming.children[j]);
        target.children = std::move(merged);
    }

    const std::string& product_;
    const std::string& path_;
    std::set<std::string>& configuration_;
    std::set<ArtefactId> index_;
};

std::vector<std::string> unique_in_order(const std::vector<std::string>& names) {
    std::vector<std::string> out;
    for (const auto& n : names) {
        if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    }
    return out;
}

void check_name(const std::string& name, const char* what) {
    if (name.empty() || name.find_first_of(",\r\n") != std::string::npos) {
        throw Error(ErrorCode::InvalidInput, std::string("invalid ") + what + " name '" + name + "'");
    }
}

} // namespace

const ProductRecord* SplRepository::find_product(std::string_view product) const {
    for (const auto& p : products) {
        if (p.name == product) return &p;
    }
    return nullptr;
}

std::set<std::string> SplRepository::all_ids() const {
    std::set<std::string> out;
    for (const auto& [path, tree] : arts) {
        for_each_artefact(tree.root, [&](const Artefact& a) { out.insert(a.id.str()); });
    }
    return out;
}

fca::FormalContext SplRepository::artefact_context() const {
    std::vector<std::string> objects;
    for (const auto& p : products) objects.push_back(p.name);
    std::vector<std::string> attributes;
    for (const auto& [path, tree] : arts) {
        for_each_artefact(tree.root, [&](const Artefact& a) { attributes.push_back(a.id.str()); });
    }
    fca::FormalContext ctx(std::move(objects), std::move(attributes));
    std::unordered_map<std::string, std::size_t> column;
    column.reserve(ctx.attributes.size());
    for (std::size_t a = 0; a < ctx.attributes.size(); ++a) column.emplace(ctx.attributes[a], a);
    for (std::size_t o = 0; o < products.size(); ++o) {
        for (const auto& id : products[o].configuration) {
            if (auto it = column.find(id); it != column.end()) ctx.set(o, it->second);
        }
    }
    return ctx;
}

fca::FormalContext SplRepository::feature_context() const {
    std::vector<std::string> objects;
    std::vector<std::string> features;
    for (const auto& p : products) {
        objects.push_back(p.name);
        for (const auto& f : p.features) {
            if (std::find(features.begin(), features.end(), f) == features.end()) features.push_back(f);
        }
    }
    fca::FormalContext ctx(std::move(objects), features);
    for (std::size_t o = 0; o < products.size(); ++o) {
        for (const auto& f : products[o].features) {
            ctx.set(o, static_cast<std::size_t>(std::find(features.begin(), features.end(), f) - features.begin()));
        }
    }
    return ctx;
}

std::set<std::string> SplRepository::known_features() const {
    std::set<std::string> out;
    for (const auto& p : products) out.insert(p.features.begin(), p.features.end());
    return out;
}

SplRepository integrate(SplRepository repo, const Product& product, std::vector<std::string> features) {
    check_name(product.name, "product");
    if (repo.find_product(product.name)) {
        throw Error(ErrorCode::DuplicateProductName, "product '" + product.name + "' is already integrated");
    }
    features = unique_in_order(features);
    if (features.empty()) throw Error(ErrorCode::InvalidInput, "product '" + product.name + "' declares no features");
    for (const auto& f : features) check_name(f, "feature");
    if (product.files.empty()) throw Error(ErrorCode::InvalidInput, "product '" + product.name + "' has no files");

    std::set<std::string> paths;
    for (const auto& f : product.files) {
        minilang::validate_relative_path(f.path);
        if (!paths.insert(f.path).second) throw Error(ErrorCode::InvalidInput, "duplicate file path " + f.path);
    }

    ProductRecord record{product.name, std::move(features), {}};
    for (const auto& file : product.files) {
        const auto art = identify(minilang::parse(file), file.path);
        auto it = repo.arts.find(file.path);
        if (it == repo.arts.end()) {
            ArtefactTree fresh_tree;
            fresh_tree.path = file.path;
            fresh_tree.root.id = art.root.id;
            fresh_tree.root.kind = art.root.kind;
            fresh_tree.root.value = art.root.value;
            it = repo.arts.emplace(file.path, std::move(fresh_tree)).first;
        }
        Merger merger(product.name, file.path, record.configuration, it->second.root);
        merger.adopt(it->second.root, art.root);
    }
    repo.products.push_back(std::move(record));
    repo.iteration = repo.products.size();
    return repo;
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::RepositoryError, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::RepositoryError, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::RepositoryError, "failed writing " + path.string());
}

void save_repository(const SplRepository& repo, const fs::path& dir) {
    nlohmann::json products = nlohmann::json::array();
    for (const auto& p : repo.products) {
        products.push_back({{"configuration", p.configuration}, {"features", p.features}, {"name", p.name}});
    }
    const nlohmann::json meta{{"iteration", repo.iteration}, {"name", repo.name}, {"products", std::move(products)}};
    fs::create_directories(dir / "arts");
    for (const auto& [path, tree] : repo.arts) {
        write_text_file(dir / "arts" / (to_hex16(content_hash(path)) + ".json"), serialize(tree));
    }
    std::string pcm;
    if (repo.products.empty()) {
        pcm = "\n";
    } else {
        pcm = fca::to_csv(repo.artefact_context());
    }
    write_text_file(dir / "pcm.csv", pcm);
    nlohmann::json traces = nlohmann::json::object();
    for (const auto& [group, features] : repo.traces.entries) traces[group] = features;
    write_text_file(dir / "traces.json", traces.dump(2) + "\n");
    write_text_file(dir / "meta.json", meta.dump(2) + "\n");
}

bool is_repository(const fs::path& dir) { return fs::is_regular_file(dir / "meta.json"); }

SplRepository load_repository(const fs::path& dir) {
    if (!is_repository(dir)) throw Error(ErrorCode::RepositoryError, dir.string() + " is not a repository");
    SplRepository repo;
    try {
        const auto meta = nlohmann::json::parse(read_text_file(dir / "meta.json"));
        repo.name = meta.at("name").get<std::string>();
        repo.iteration = meta.at("iteration").get<std::size_t>();
        for (const auto& p : meta.at("products")) {
            ProductRecord r;
            r.name = p.at("name").get<std::string>();
            r.features = p.at("features").get<std::vector<std::string>>();
            for (const auto& id : p.at("configuration")) r.configuration.insert(id.get<std::string>());
            repo.products.push_back(std::move(r));
        }
        if (fs::is_directory(dir / "arts")) {
            for (const auto& entry : fs::directory_iterator(dir / "arts")) {
                if (entry.path().extension() != ".json") continue;
                auto tree = art_from_json(nlohmann::json::parse(read_text_file(entry.path())));
                auto path = tree.path;
                repo.arts.emplace(std::move(path), std::move(tree));
            }
        }
        if (fs::is_regular_file(dir / "traces.json")) {
            const auto traces = nlohmann::json::parse(read_text_file(dir / "traces.json"));
            for (const auto& [group, features] : traces.items()) {
                repo.traces.entries[group] = features.get<std::vector<std::string>>();
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::RepositoryError, std::string("malformed repository file: ") + e.what());
    }
    if (repo.iteration != repo.products.size()) {
        throw Error(ErrorCode::RepositoryError, "iteration does not match the number of product records");
    }
    return repo;
}

Product read_product_dir(const fs::path& dir, std::string name) {
    if (!fs::is_directory(dir)) throw Error(ErrorCode::InvalidInput, dir.string() + " is not a directory");
    Product product{std::move(name), {}};
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".java") continue;
        product.files.push_back({fs::relative(entry.path(), dir).generic_string(), read_text_file(entry.path())});
    }
    std::sort(product.files.begin(), product.files.end(),
              [](const auto& a, const auto& b) { return a.path < b.path; });
    return product;
}

void write_files(const std::vector<minilang::SourceFile>& files, const fs::path& dir) {
    for (const auto& f : files) {
        minilang::validate_relative_path(f.path);
        write_text_file(dir / f.path, f.text);
    }
}

} // namespace splforge
