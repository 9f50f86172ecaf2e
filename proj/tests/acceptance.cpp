// Acceptance runner: one PASS/FAIL line per criterion. `acceptance N` runs criterion N only;
// without arguments every criterion runs. Exit status is 1 when any selected criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

#include "oracles.hpp"
#include "support.hpp"

using namespace splforge;
using namespace splforge::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    // Records a sub-check; failed ones are listed in the detail line.
    void expect(bool ok, const std::string& what) {
        if (!ok) {
            if (!pass) detail << "; ";
            if (pass) detail.str("");
            detail << "failed: " << what;
            pass = false;
        }
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Family {
    std::string label;
    std::vector<ProductSource> products;
};

// Hello plus three synthesized families within 10 products, 30 files and 2k statements.
std::vector<Family> corpus_families() {
    std::vector<Family> out;
    out.push_back({"hello", hello_products()});
    corpus::RandomFamilyParams small;
    small.products = 4;
    small.features = 5;
    small.files = 6;
    corpus::RandomFamilyParams medium;
    medium.products = 7;
    medium.features = 6;
    medium.files = 15;
    corpus::RandomFamilyParams large;
    large.products = 10;
    large.features = 8;
    large.files = 30;
    large.methods_per_file = 1;
    large.statements_per_method = 2;
    large.fragments_per_feature = 8;
    std::uint64_t seed = 11;
    for (const auto& params : {small, medium, large}) {
        out.push_back({"random-" + std::to_string(seed), corpus::synthesize(corpus::random_family(params, seed), seed)});
        seed += 11;
    }
    return out;
}

// Every order for families of at most four products, otherwise the given order and its reverse.
std::vector<std::vector<ProductSource>> integration_orders(const std::vector<ProductSource>& products) {
    std::vector<std::vector<ProductSource>> out;
    std::vector<std::size_t> order(products.size());
    std::iota(order.begin(), order.end(), 0);
    const auto take = [&] {
        std::vector<ProductSource> ordered;
        for (auto k : order) ordered.push_back(products[k]);
        out.push_back(std::move(ordered));
    };
    if (products.size() <= 4) {
        do take();
        while (std::next_permutation(order.begin(), order.end()));
    } else {
        take();
        std::reverse(order.begin(), order.end());
        take();
    }
    return out;
}

std::size_t file_count(const std::vector<ProductSource>& products) {
    std::set<std::string> paths;
    for (const auto& p : products) {
        for (const auto& f : p.files) paths.insert(f.path);
    }
    return paths.size();
}

void round_trip_reproduction(Outcome& o) {
    const auto start = Clock::now();
    std::size_t runs = 0, rows = 0, largest = 0;
    for (const auto& family : corpus_families()) {
        const auto statements = corpus::statement_count(family.products);
        largest = std::max(largest, statements);
        o.expect(family.products.size() <= 10, family.label + " has at most 10 products");
        o.expect(file_count(family.products) <= 30, family.label + " has at most 30 files");
        o.expect(statements <= 2000, family.label + " has at most 2000 statements (" + std::to_string(statements) + ")");
        for (const auto& ordered : integration_orders(family.products)) {
            ++runs;
            for (const auto& row : round_trip(ordered, family.label).rows) {
                ++rows;
                o.expect(row.rep_err == 0.0, family.label + "/" + row.product + " rep_err " + std::to_string(row.rep_err));
            }
        }
    }
    const auto elapsed = seconds_since(start);
    o.expect(elapsed < 10.0, "runtime under 10 s");
    if (o.pass) {
        o.detail << "4 families (largest " << largest << " statements), " << runs << " integration orders, " << rows
                 << " products, rep_err 0.0 throughout, " << elapsed << " s";
    }
}

void fca_oracle_equivalence(Outcome& o) {
    std::mt19937_64 rng(20251);
    std::size_t mismatches = 0;
    const int contexts = 500;
    for (int round = 0; round < contexts; ++round) {
        const auto ctx = random_context(rng);
        const auto got = extracted_view(fca::extract_constraints(fca::build_aoc_poset(ctx), ctx));
        const auto expected = definitional_constraints(ctx);
        mismatches += got.common != expected.common;
        mismatches += got.partition != expected.partition;
        mismatches += got.implies != expected.implies;
        mismatches += got.excludes != expected.excludes;
    }
    o.expect(mismatches == 0, std::to_string(mismatches) + " mismatches");
    if (o.pass) o.detail << contexts << " contexts (8 x 12 max), 0 mismatches";
}

void hello_variability(Outcome& o) {
    const auto repo = hello_repo();
    const auto fvm = build_fvm(repo);
    const auto avm = build_avm(repo);
    const auto node = [&](const std::string& feature) { return fvm.node_of(feature); };
    const auto hello = node("Hello"), all = node("All"), people = node("People");
    const auto has_edge = [](const auto& edges, std::size_t a, std::size_t b) {
        return std::find(edges.begin(), edges.end(), std::pair{a, b}) != edges.end() ||
               std::find(edges.begin(), edges.end(), std::pair{b, a}) != edges.end();
    };
    const auto implies = [&](std::size_t a, std::size_t b) {
        return std::find(fvm.implications.begin(), fvm.implications.end(), std::pair{a, b}) != fvm.implications.end();
    };
    o.expect(hello && fvm.nodes[*hello].common && fvm.nodes[*hello].members == std::vector<std::string>{"Hello"},
             "HELLO is the common node");
    o.expect(all && hello && implies(*all, *hello), "ALL implies the common node");
    o.expect(people && hello && implies(*people, *hello), "PEOPLE implies the common node");
    o.expect(all && people && has_edge(fvm.exclusions, *all, *people), "ALL/PEOPLE mutually excluded");

    bool isomorphic = avm.nodes.size() == fvm.nodes.size() && avm.implications == fvm.implications &&
                      avm.exclusions == fvm.exclusions;
    for (std::size_t i = 0; isomorphic && i < avm.nodes.size(); ++i) {
        isomorphic = avm.nodes[i].products == fvm.nodes[i].products && avm.nodes[i].common == fvm.nodes[i].common;
    }
    o.expect(isomorphic, "AVM isomorphic to FVM");

    const auto show = [&](const auto& edges) {
        std::string s;
        for (const auto& [a, b] : edges) {
            s += (s.empty() ? "" : " ") + fvm.nodes[a].members.front() + "-" + fvm.nodes[b].members.front();
        }
        return s;
    };
    o.detail << " (implications: " << show(fvm.implications) << "; exclusions: " << show(fvm.exclusions) << ")";
}

const Artefact& method_block(const Artefact& root) {
    for (const auto& m : root.children.at(0).children) {
        if (m.kind == NodeKind::MethodDecl) return m.children.back();
    }
    throw std::runtime_error("no method");
}

void super_sequence_properties(Outcome& o) {
    std::mt19937_64 rng(4242);
    std::size_t failures = 0;
    const int pairs = 1000;
    for (int round = 0; round < pairs; ++round) {
        const auto s1 = random_sequence(rng);
        const auto s2 = random_sequence(rng);
        const auto merged = super_sequence(s1, s2);
        const auto minted = mint_duplicates(merged);
        const bool ok = embeds(s1, merged) && embeds(s2, merged) && super_sequence(s1, s1) == s1 &&
                        std::set<ArtefactId>(minted.begin(), minted.end()).size() == minted.size();
        failures += !ok;
    }
    o.expect(failures == 0, std::to_string(failures) + " failing pairs");

    // Hello fixture: SPL after Px and Py against Pz.
    const auto products = hello_products();
    const auto spl = integrate_all({products[0], products[1]});
    const auto& spl_block = method_block(spl.arts.at("Welcome.java").root);
    const auto& pz_file = products[2].files.at(0);
    const auto pz_tree = identify(minilang::parse(pz_file), pz_file.path);
    const auto& pz_block = method_block(pz_tree.root);
    std::vector<ArtefactId> a, b;
    for (const auto& s : spl_block.children) a.push_back(s.id);
    for (const auto& s : pz_block.children) b.push_back(s.id);
    std::vector<std::string> lcs;
    const auto eq = [](const ArtefactId& x, const ArtefactId& y) { return x.same_twin(y); };
    for (const auto& [i, j] : lcs_pairs<ArtefactId>(a, b, eq)) lcs.push_back(spl_block.children[i].value);
    o.expect(lcs == std::vector<std::string>{"String s = hello ;", R"(s = s + " " ;)", "s = s + all ;",
                                             "System . out . println ( s ) ;"},
             "LCS is [hello, space, all, println]");

    const auto full = integrate_all(products);
    std::size_t who_dups = 0;
    for (const auto& s : method_block(full.arts.at("Welcome.java").root).children) {
        who_dups += s.value == "s = s + who ;" && s.id.dup == 2;
    }
    o.expect(who_dups == 1, "who statement duplicated with dup=2");
    if (o.pass) o.detail << pairs << " random pairs; Hello fixture LCS of 4 with who minted as dup=2";
}

void simplification(Outcome& o) {
    auto repo = hello_repo();
    apply_traces(repo, hello_traces());
    const auto naive = generate_spl(repo, LabelMode::Features).files;
    const auto simplified = simplify(naive);
    const auto lines = [](const std::vector<AnnotatedFile>& files) {
        std::size_t n = 0;
        for (const auto& f : files) n += f.lines.size();
        return n;
    };
    const auto before = lines(naive), after = lines(simplified);
    const double reduction = before ? static_cast<double>(before - after) / static_cast<double>(before) : 0.0;
    o.expect(after < before && reduction >= 0.25, "Hello reduction >= 25%");

    std::size_t files = 0, evaluations = 0, mismatches = 0;
    for (std::uint64_t seed = 5001; seed <= 5240; ++seed) {
        const std::size_t features = 1 + seed % 6;
        const auto file = AnnotatedGenerator(seed, features).file();
        const auto simple = simplify(file);
        ++files;
        for (const auto& selection : all_subsets(features)) {
            ++evaluations;
            mismatches += token_map(evaluate({file}, selection)) != token_map(evaluate({simple}, selection));
        }
    }
    o.expect(mismatches == 0, std::to_string(mismatches) + " token mismatches");
    o.detail << "Hello " << before << " -> " << after << " lines, " << static_cast<int>(reduction * 1000) / 10.0
             << "%; " << files << " random files, " << evaluations << " evaluations";
}

void monotonicity(Outcome& o) {
    std::size_t sequences = 0;
    for (const auto& family : corpus_families()) {
        for (const auto& ordered : integration_orders(family.products)) {
            ++sequences;
            SplRepository repo;
            std::set<std::string> previous;
            for (const auto& p : ordered) {
                repo = integrate(std::move(repo), Product{p.name, p.files}, p.features);
                const auto ids = repo.all_ids();
                o.expect(std::includes(ids.begin(), ids.end(), previous.begin(), previous.end()),
                         family.label + ": artefacts lost after " + p.name);
                previous = ids;
            }
            for (const auto& p : ordered) {
                const auto again = integrate(repo, Product{p.name + "-again", p.files}, p.features);
                o.expect(again.all_ids() == previous, family.label + ": re-integrating " + p.name + " added artefacts");
            }
        }
    }
    if (o.pass) o.detail << sequences << " integration sequences, growth monotone, re-integration adds nothing";
}

void performance(Outcome& o) {
    corpus::RandomFamilyParams params;
    params.products = 10;
    params.features = 8;
    params.files = 100;
    params.methods_per_file = 1;
    params.statements_per_method = 3;
    params.fragments_per_feature = 60;
    params.feature_file_chance = 0.05;
    const auto family = corpus::random_family(params, 77);
    const auto products = corpus::synthesize(family, 77);
    const auto statements = corpus::statement_count(products);
    o.expect(products.size() == 10 && file_count(products) == 100, "10 products x 100 files");
    o.expect(statements >= 8000 && statements <= 12000, "about 10k statements (" + std::to_string(statements) + ")");

    const auto start = Clock::now();
    const auto result = round_trip(products, family.name);
    const auto spl = simplify(generate_spl(result.repository, LabelMode::Features).files);
    const auto elapsed = seconds_since(start);
    double worst = 0.0;
    for (const auto& row : result.rows) worst = std::max(worst, row.rep_err);
    o.expect(elapsed < 60.0, "integrate+generate+validate under 60 s");
    o.detail << products.size() << " products, " << file_count(products) << " files, " << statements
             << " statements, " << spl.size() << " SPL files, max rep_err " << worst << ", " << elapsed << " s";
}

struct Criterion {
    const char* name;
    std::function<void(Outcome&)> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {"round-trip reproduction", round_trip_reproduction},
        {"FCA oracle equivalence", fca_oracle_equivalence},
        {"Hello variability models", hello_variability},
        {"super-sequence properties", super_sequence_properties},
        {"simplification soundness and effect", simplification},
        {"monotonicity and idempotence", monotonicity},
        {"scale", performance},
    };
    std::vector<std::size_t> selected;
    if (argc > 1) {
        const auto n = std::strtoul(argv[1], nullptr, 10);
        if (n < 1 || n > criteria.size()) {
            std::cerr << "usage: acceptance [1-" << criteria.size() << "]\n";
            return 2;
        }
        selected.push_back(n - 1);
    } else {
        selected.resize(criteria.size());
        std::iota(selected.begin(), selected.end(), 0);
    }
    bool all = true;
    for (auto i : selected) {
        Outcome o;
        try {
            criteria[i].run(o);
        } catch (const std::exception& e) {
            o.expect(false, std::string("exception: ") + e.what());
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].name << ": "
                  << o.detail.str() << std::endl;
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
