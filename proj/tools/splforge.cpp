// splforge: integrate product variants into an annotated product line and generate products
// back from it.
//
// Exit status: 0 on success, 1 on usage errors, 2 on domain errors.

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "splforge/codegen.hpp"
#include "splforge/corpus.hpp"
#include "splforge/error.hpp"
#include "splforge/integration.hpp"
#include "splforge/validation.hpp"
#include "splforge/variability.hpp"

namespace fs = std::filesystem;
using namespace splforge;

namespace {

// Held for the lifetime of a writing command.
class RepoLock {
public:
    explicit RepoLock(const fs::path& repo) : path_(repo / ".lock") {
        fs::create_directories(repo);
        fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd_ < 0) {
            if (errno == EEXIST) {
                throw Error(ErrorCode::RepositoryError,
                            repo.string() + " is locked by another writer (remove " + path_.string() + " if stale)");
            }
            throw Error(ErrorCode::RepositoryError, "cannot lock " + repo.string() + ": " + std::strerror(errno));
        }
        const auto pid = std::to_string(::getpid()) + "\n";
        [[maybe_unused]] auto n = ::write(fd_, pid.data(), pid.size());
    }
    RepoLock(const RepoLock&) = delete;
    RepoLock& operator=(const RepoLock&) = delete;
    ~RepoLock() {
        ::close(fd_);
        std::error_code ec;
        fs::remove(path_, ec);
    }

private:
    fs::path path_;
    int fd_ = -1;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

void warn(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "WARN: " << w << '\n';
}

// JSON array of ids, or ids separated by whitespace or commas.
std::set<std::string> read_config(const fs::path& path) {
    const auto text = read_text_file(path);
    std::set<std::string> ids;
    const auto start = text.find_first_not_of(" \t\r\n");
    if (start != std::string::npos && text[start] == '[') {
        try {
            for (const auto& id : nlohmann::json::parse(text)) ids.insert(id.get<std::string>());
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::InvalidInput, "malformed artefact configuration: " + std::string(e.what()));
        }
        return ids;
    }
    std::string token;
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            if (!token.empty()) ids.insert(std::exchange(token, {}));
        } else {
            token += c;
        }
    }
    if (!token.empty()) ids.insert(token);
    return ids;
}

void write_annotated(const std::vector<AnnotatedFile>& files, const fs::path& dir) {
    for (const auto& f : files) {
        minilang::validate_relative_path(f.path);
        write_text_file(dir / f.path, f.text());
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Integrate product variants into an annotated software product line."};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every command");

    std::string repo_dir, product_dir, name, features, mode = "features", out_dir, config_file, map_file;
    std::string level = "feature", dot_file, family_file;
    bool no_simplify = false, random = false;
    std::uint64_t seed = 0;
    corpus::RandomFamilyParams params;

    auto* init = app.add_subcommand("init", "Create an empty repository");
    init->add_option("repo", repo_dir, "Repository directory")->required();
    init->add_option("--name", name, "Product line name (default: directory name)");

    auto* integ = app.add_subcommand("integrate", "Integrate a product directory of .java files");
    integ->add_option("repo", repo_dir, "Repository directory")->required();
    integ->add_option("product", product_dir, "Product source directory")->required()->check(CLI::ExistingDirectory);
    integ->add_option("--name", name, "Product name")->required();
    integ->add_option("--features", features, "Comma-separated feature names")->required();

    auto* gen_spl = app.add_subcommand("gen-spl", "Write the annotated product line");
    gen_spl->add_option("repo", repo_dir, "Repository directory")->required();
    gen_spl->add_option("--mode", mode, "Annotation labels")
        ->check(CLI::IsMember({"features", "groups", "ids"}))
        ->capture_default_str();
    gen_spl->add_flag("--no-simplify", no_simplify, "Keep the naive annotations");
    gen_spl->add_option("-o,--output", out_dir, "Output directory")->required();

    auto* gen_product = app.add_subcommand("gen-product", "Generate a product by features or by artefact ids");
    gen_product->add_option("repo", repo_dir, "Repository directory")->required();
    auto* selection = gen_product->add_option_group("selection", "Exactly one of");
    selection->add_option("--features", features, "Comma-separated feature selection");
    selection->add_option("--artefact-config", config_file,
                          "File listing artefact ids (JSON array or whitespace separated)")
        ->check(CLI::ExistingFile);
    selection->require_option(1);
    gen_product->add_option("-o,--output", out_dir, "Output directory")->required();

    auto* trace = app.add_subcommand("trace", "Map artefact groups to features");
    trace->add_option("repo", repo_dir, "Repository directory")->required();
    trace->add_option("--map", map_file, "JSON object: group name -> feature or list of features")
        ->required()
        ->check(CLI::ExistingFile);

    auto* export_vm = app.add_subcommand("export-vm", "Export the artefact or feature variability model as DOT");
    export_vm->add_option("repo", repo_dir, "Repository directory")->required();
    export_vm->add_option("--level", level, "Model level")
        ->check(CLI::IsMember({"artefact", "feature"}))
        ->capture_default_str();
    export_vm->add_option("--dot", dot_file, "Output file (default: standard output)");

    auto* validate = app.add_subcommand("validate", "Round-trip a product family and report rep_err as CSV");
    validate->add_option("repo", repo_dir, "Directory for the resulting repository (must not hold one)")->required();
    validate->add_option("--family", family_file, "Family specification (JSON)")->required()->check(CLI::ExistingFile);
    validate->add_option("--seed", seed, "Composition seed")->capture_default_str();

    auto* synth = app.add_subcommand("synth", "Write the products of a family as source directories");
    auto* synth_family = synth->add_option("--family", family_file, "Family specification (JSON)")
                             ->check(CLI::ExistingFile);
    auto* synth_random = synth->add_flag("--random", random, "Generate a random family (written as family.json)");
    synth_family->excludes(synth_random);
    synth->add_option("--seed", seed, "Composition and generation seed")->capture_default_str();
    synth->add_option("--products", params.products, "Random family: products")->capture_default_str();
    synth->add_option("--features", params.features, "Random family: features")->capture_default_str();
    synth->add_option("--files", params.files, "Random family: files")->capture_default_str();
    synth->add_option("--methods", params.methods_per_file, "Random family: methods per file")->capture_default_str();
    synth->add_option("--statements", params.statements_per_method, "Random family: skeleton statements per method")
        ->capture_default_str();
    synth->add_option("--fragments", params.fragments_per_feature, "Random family: fragments per feature")
        ->capture_default_str();
    synth->add_option("-o,--output", out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*init) {
            if (is_repository(repo_dir)) throw Error(ErrorCode::RepositoryError, repo_dir + " already holds a repository");
            RepoLock lock(repo_dir);
            SplRepository repo;
            repo.name = name.empty() ? fs::absolute(repo_dir).lexically_normal().filename().string() : name;
            if (repo.name.empty()) repo.name = "spl";
            save_repository(repo, repo_dir);
            std::cout << "initialized " << repo.name << " at " << repo_dir << '\n';
        } else if (*integ) {
            RepoLock lock(repo_dir);
            auto repo = load_repository(repo_dir);
            const auto before = repo.all_ids().size();
            repo = integrate(std::move(repo), read_product_dir(product_dir, name), split_list(features));
            save_repository(repo, repo_dir);
            std::cout << "integrated " << name << ": iteration " << repo.iteration << ", "
                      << repo.all_ids().size() - before << " new artefacts\n";
        } else if (*gen_spl) {
            const auto repo = load_repository(repo_dir);
            const auto label = mode == "features" ? LabelMode::Features
                               : mode == "groups" ? LabelMode::ArtefactGroups
                                                  : LabelMode::ArtefactIds;
            auto spl = generate_spl(repo, label);
            warn(spl.warnings);
            write_annotated(no_simplify ? spl.files : simplify(spl.files), out_dir);
        } else if (*gen_product) {
            const auto repo = load_repository(repo_dir);
            if (!config_file.empty()) {
                write_files(generate_product_by_artefacts(repo, read_config(config_file)), out_dir);
            } else {
                const auto list = split_list(features);
                auto product = generate_product_by_features(repo, {list.begin(), list.end()});
                warn(product.warnings);
                write_files(product.files, out_dir);
            }
        } else if (*trace) {
            RepoLock lock(repo_dir);
            auto repo = load_repository(repo_dir);
            apply_traces(repo, traces_from_json(read_text_file(map_file)));
            save_repository(repo, repo_dir);
            std::cout << "traced " << repo.traces.entries.size() << " groups\n";
        } else if (*export_vm) {
            const auto repo = load_repository(repo_dir);
            const auto dot = export_dot(level == "artefact" ? build_avm(repo) : build_fvm(repo));
            if (dot_file.empty()) {
                std::cout << dot;
            } else {
                write_text_file(dot_file, dot);
            }
        } else if (*validate) {
            if (is_repository(repo_dir)) throw Error(ErrorCode::RepositoryError, repo_dir + " already holds a repository");
            RepoLock lock(repo_dir);
            const auto family = corpus::load_family(family_file);
            const auto result = round_trip(corpus::synthesize(family, seed), family.name);
            save_repository(result.repository, repo_dir);
            std::cout << report_csv(result.rows);
            for (const auto& row : result.rows) {
                if (row.rep_err != 0.0) return 2;
            }
        } else if (*synth) {
            if (family_file.empty() && !random) throw CLI::RequiredError("--family or --random");
            const auto family = random ? corpus::random_family(params, seed) : corpus::load_family(family_file);
            if (random) write_text_file(fs::path(out_dir) / "family.json", corpus::family_to_json(family));
            for (const auto& product : corpus::synthesize(family, seed)) {
                write_files(product.files, fs::path(out_dir) / product.name);
                std::cout << product.name;
                for (std::size_t i = 0; i < product.features.size(); ++i) {
                    std::cout << (i ? ',' : ' ') << product.features[i];
                }
                std::cout << '\n';
            }
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
