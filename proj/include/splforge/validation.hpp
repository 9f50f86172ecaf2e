#pragma once

// Round-trip protocol: integrate a family, regenerate each product from its artefact
// configuration, diff structurally against the original, report rep_err.

#include <cstddef>
#include <string>
#include <vector>

#include "splforge/integration.hpp"
#include "splforge/minilang.hpp"

namespace splforge {

struct DiffReport {
    std::size_t insertions = 0;
    std::size_t deletions = 0;
    std::size_t updates = 0;
    std::size_t statement_moves = 0;
    std::size_t modified_loc = 0;
    std::size_t total_loc_original = 0;

    bool identical() const noexcept { return insertions + deletions + updates + statement_moves == 0; }
    friend bool operator==(const DiffReport&, const DiffReport&) = default;
};

/// Both sides are parsed and canonically printed, then matched file by file (by path) and node
/// by node on (kind, text). Statement sequences are aligned with an LCS; leftover equal
/// statements count as moves. Other members match as a multiset, so their order never counts.
/// Insertions and deletions count whole subtrees. Throws SyntaxError.
DiffReport ast_diff(const std::vector<minilang::SourceFile>& original,
                    const std::vector<minilang::SourceFile>& regenerated);

/// 100 * modified_loc / total_loc_original. Throws EmptyProduct when the original has no line.
double rep_err(const DiffReport& report);

struct ProductSource {
    std::string name;
    std::vector<std::string> features;
    std::vector<minilang::SourceFile> files;
};

struct RoundTripRow {
    std::string product;
    DiffReport report;
    double rep_err = 0.0;
};

struct RoundTripResult {
    SplRepository repository;
    std::vector<RoundTripRow> rows;
};

/// Integrates `products` in order into a fresh repository, then regenerates and diffs each one.
/// Throws RepositoryError if an integration step loses an artefact id.
RoundTripResult round_trip(const std::vector<ProductSource>& products, const std::string& repo_name = "spl");

/// CSV with header `product,insertions,deletions,updates,statementMoves,modifiedLoc,totalLoc,repErr`.
std::string report_csv(const std::vector<RoundTripRow>& rows);

} // namespace splforge
