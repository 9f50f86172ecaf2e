#include "splforge/validation.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "splforge/codegen.hpp"
#include "splforge/csv.hpp"
#include "splforge/error.hpp"

namespace splforge {

namespace {

using minilang::AstNode;

struct Side {
    AstNode ast;
    minilang::PrintedFile printed;
};

Side load(const minilang::SourceFile& file) {
    Side side{minilang::parse(file), {}};
    side.printed = minilang::print_lines(side.ast);
    return side;
}

bool same_node(const AstNode& a, const AstNode& b) { return a.kind == b.kind && a.text == b.text; }

class Differ {
public:
    Differ(const Side& original, const Side& regenerated, DiffReport& report)
        : orig_(original.printed), regen_(regenerated.printed), report_(report) {}

    void diff(const AstNode& o, const AstNode& r) {
        if (o.text != r.text) {
            ++report_.updates;
            mark(orig_, o, orig_lines_);
        }
        std::vector<const AstNode*> os, rs, on, rn;
        for (const auto& c : o.children) (minilang::is_statement(c.kind) ? os : on).push_back(&c);
        for (const auto& c : r.children) (minilang::is_statement(c.kind) ? rs : rn).push_back(&c);
        statements(os, rs);
        members(on, rn);
    }

    std::size_t modified() const { return orig_lines_.size() + regen_lines_.size(); }

    void delete_subtree(const AstNode& n) {
        report_.deletions += minilang::subtree_size(n);
        mark_all(orig_, n, orig_lines_);
    }

    void insert_subtree(const AstNode& n) {
        report_.insertions += minilang::subtree_size(n);
        mark_all(regen_, n, regen_lines_);
    }

private:
    static void mark(const minilang::PrintedFile& p, const AstNode& n, std::set<std::size_t>& lines) {
        if (auto it = p.first_line.find(&n); it != p.first_line.end()) lines.insert(it->second);
    }

    static void mark_all(const minilang::PrintedFile& p, const AstNode& n, std::set<std::size_t>& lines) {
        mark(p, n, lines);
        for (const auto& c : n.children) mark_all(p, c, lines);
    }

    // Leftovers of equal kind are paired as updates, the rest are deletions and insertions.
    void pair_leftovers(const std::vector<const AstNode*>& o, const std::vector<const AstNode*>& r) {
        std::vector<bool> used(r.size(), false);
        for (const auto* a : o) {
            bool paired = false;
            for (std::size_t j = 0; j < r.size(); ++j) {
                if (!used[j] && r[j]->kind == a->kind) {
                    used[j] = true;
                    paired = true;
                    diff(*a, *r[j]);
                    break;
                }
            }
            if (!paired) delete_subtree(*a);
        }
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (!used[j]) insert_subtree(*r[j]);
        }
    }

    void statements(const std::vector<const AstNode*>& o, const std::vector<const AstNode*>& r) {
        const auto eq = [](const AstNode* a, const AstNode* b) { return same_node(*a, *b); };
        const auto pairs = lcs_pairs<const AstNode*>(o, r, eq);
        std::vector<bool> o_used(o.size(), false);
        std::vector<bool> r_used(r.size(), false);
        for (const auto& [i, j] : pairs) {
            o_used[i] = r_used[j] = true;
            diff(*o[i], *r[j]);
        }
        std::vector<const AstNode*> o_rest, r_rest;
        for (std::size_t i = 0; i < o.size(); ++i) {
            if (o_used[i]) continue;
            bool moved = false;
            for (std::size_t j = 0; j < r.size(); ++j) {
                if (!r_used[j] && same_node(*o[i], *r[j])) {
                    r_used[j] = true;
                    moved = true;
                    ++report_.statement_moves;
                    mark(orig_, *o[i], orig_lines_);
                    diff(*o[i], *r[j]);
                    break;
                }
            }
            if (!moved) o_rest.push_back(o[i]);
        }
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (!r_used[j]) r_rest.push_back(r[j]);
        }
        pair_leftovers(o_rest, r_rest);
    }

    void members(const std::vector<const AstNode*>& o, const std::vector<const AstNode*>& r) {
        std::vector<bool> r_used(r.size(), false);
        std::vector<const AstNode*> o_rest, r_rest;
        for (const auto* a : o) {
            bool matched = false;
            for (std::size_t j = 0; j < r.size(); ++j) {
                if (!r_used[j] && same_node(*a, *r[j])) {
                    r_used[j] = true;
                    matched = true;
                    diff(*a, *r[j]);
                    break;
                }
            }
            if (!matched) o_rest.push_back(a);
        }
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (!r_used[j]) r_rest.push_back(r[j]);
        }
        pair_leftovers(o_rest, r_rest);
    }

    const minilang::PrintedFile& orig_;
    const minilang::PrintedFile& regen_;
    DiffReport& report_;
    std::set<std::size_t> orig_lines_;
    std::set<std::size_t> regen_lines_;
};

} // namespace

DiffReport ast_diff(const std::vector<minilang::SourceFile>& original,
                    const std::vector<minilang::SourceFile>& regenerated) {
    std::map<std::string, const minilang::SourceFile*> regen_by_path;
    for (const auto& f : regenerated) regen_by_path[f.path] = &f;

    DiffReport report;
    std::set<std::string> seen;
    const Side empty{};
    for (const auto& f : original) {
        const auto o = load(f);
        report.total_loc_original += o.printed.lines.size();
        seen.insert(f.path);
        if (auto it = regen_by_path.find(f.path); it != regen_by_path.end()) {
            const auto r = load(*it->second);
            Differ d(o, r, report);
            d.diff(o.ast, r.ast);
            report.modified_loc += d.modified();
        } else {
            Differ d(o, empty, report);
            d.delete_subtree(o.ast);
            report.modified_loc += d.modified();
        }
    }
    for (const auto& [path, file] : regen_by_path) {
        if (seen.count(path)) continue;
        const auto r = load(*file);
        Differ d(empty, r, report);
        d.insert_subtree(r.ast);
        report.modified_loc += d.modified();
    }
    return report;
}

double rep_err(const DiffReport& report) {
    if (report.total_loc_original == 0) throw Error(ErrorCode::EmptyProduct, "original product has no line of code");
    return 100.0 * static_cast<double>(report.modified_loc) / static_cast<double>(report.total_loc_original);
}

RoundTripResult round_trip(const std::vector<ProductSource>& products, const std::string& repo_name) {
    RoundTripResult result;
    result.repository.name = repo_name;
    std::set<std::string> previous;
    for (const auto& p : products) {
        result.repository = integrate(std::move(result.repository), Product{p.name, p.files}, p.features);
        auto ids = result.repository.all_ids();
        if (!std::includes(ids.begin(), ids.end(), previous.begin(), previous.end())) {
            throw Error(ErrorCode::RepositoryError, "integrating '" + p.name + "' lost artefacts");
        }
        previous = std::move(ids);
    }
    for (const auto& p : products) {
        const auto* record = result.repository.find_product(p.name);
        const auto regenerated = generate_product_by_artefacts(result.repository, record->configuration);
        RoundTripRow row;
        row.product = p.name;
        row.report = ast_diff(p.files, regenerated);
        row.rep_err = rep_err(row.report);
        result.rows.push_back(std::move(row));
    }
    return result;
}

std::string report_csv(const std::vector<RoundTripRow>& rows) {
    std::string out =
        csv::row({"product", "insertions", "deletions", "updates", "statementMoves", "modifiedLoc", "totalLoc", "repErr"});
    for (const auto& r : rows) {
        char err[32];
        std::snprintf(err, sizeof err, "%.4f", r.rep_err);
        out += csv::row({r.product, std::to_string(r.report.insertions), std::to_string(r.report.deletions),
                         std::to_string(r.report.updates), std::to_string(r.report.statement_moves),
                         std::to_string(r.report.modified_loc), std::to_string(r.report.total_loc_original), err});
    }
    return out;
}

} // namespace splforge
