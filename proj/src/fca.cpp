#include "splforge/fca.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "splforge/csv.hpp"
#include "splforge/error.hpp"

namespace splforge::fca {

FormalContext::FormalContext(std::vector<std::string> objs, std::vector<std::string> attrs)
    : objects(std::move(objs)), attributes(std::move(attrs)),
      incidence(objects.size(), std::vector<bool>(attributes.size(), false)) {}

void FormalContext::validate() const {
    if (objects.empty()) throw Error(ErrorCode::EmptyContext, "formal context has no objects");
    if (std::set<std::string>(objects.begin(), objects.end()).size() != objects.size()) {
        throw Error(ErrorCode::InvalidContext, "duplicate object name");
    }
    if (std::set<std::string>(attributes.begin(), attributes.end()).size() != attributes.size()) {
        throw Error(ErrorCode::InvalidContext, "duplicate attribute name");
    }
    if (incidence.size() != objects.size()) throw Error(ErrorCode::InvalidContext, "row count mismatch");
    for (const auto& r : incidence) {
        if (r.size() != attributes.size()) throw Error(ErrorCode::InvalidContext, "ragged incidence row");
    }
    for (std::size_t a = 0; a < attributes.size(); ++a) {
        const bool held = std::any_of(incidence.begin(), incidence.end(), [&](const auto& r) { return r[a]; });
        if (!held) throw Error(ErrorCode::InvalidContext, "attribute '" + attributes[a] + "' is held by no object");
    }
}

namespace {

std::vector<std::size_t> indices(const Bits& bits) {
    std::vector<std::size_t> out;
    out.reserve(bits.count());
    for (auto i = bits.find_first(); i != Bits::npos; i = bits.find_next(i)) out.push_back(i);
    return out;
}

struct Building {
    Bits extent;
    Bits intent;
    std::vector<std::size_t> objects;
    std::vector<std::size_t> attributes;
};

bool strictly_contains(const std::vector<std::size_t>& outer, const std::vector<std::size_t>& inner) {
    return outer.size() > inner.size() && std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

bool disjoint(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) return false;
        if (*i < *j) ++i;
        else ++j;
    }
    return true;
}

} // namespace

std::optional<std::size_t> AocPoset::top(std::size_t object_count) const {
    for (std::size_t i = 0; i < concepts.size(); ++i) {
        if (concepts[i].extent.size() == object_count) return i;
    }
    return std::nullopt;
}

bool AocPoset::is_ancestor(std::size_t ancestor, std::size_t descendant) const {
    return strictly_contains(concepts[ancestor].extent, concepts[descendant].extent);
}

AocPoset build_aoc_poset(const FormalContext& ctx) {
    ctx.validate();
    const std::size_t n = ctx.objects.size();
    const std::size_t m = ctx.attributes.size();

    std::vector<Bits> rows(n, Bits(m));
    std::vector<Bits> cols(m, Bits(n));
    for (std::size_t o = 0; o < n; ++o) {
        for (std::size_t a = 0; a < m; ++a) {
            if (ctx.has(o, a)) {
                rows[o].set(a);
                cols[a].set(o);
            }
        }
    }

    const auto intent_of = [&](const Bits& extent) {
        Bits intent(m);
        intent.set();
        for (auto o = extent.find_first(); o != Bits::npos; o = extent.find_next(o)) intent &= rows[o];
        return intent;
    };
    const auto extent_of = [&](const Bits& intent) {
        Bits extent(n);
        extent.set();
        for (auto a = intent.find_first(); a != Bits::npos; a = intent.find_next(a)) extent &= cols[a];
        return extent;
    };

    std::map<Bits, Building> by_extent;
    const auto concept_for = [&](Bits extent) -> Building& {
        auto it = by_extent.find(extent);
        if (it == by_extent.end()) {
            Building b;
            b.intent = intent_of(extent);
            b.extent = extent;
            it = by_extent.emplace(std::move(extent), std::move(b)).first;
        }
        return it->second;
    };

    for (std::size_t o = 0; o < n; ++o) concept_for(extent_of(rows[o])).objects.push_back(o);
    // Attributes sharing a column share their concept, so close each distinct column once.
    std::map<Bits, std::vector<std::size_t>> columns;
    for (std::size_t a = 0; a < m; ++a) columns[cols[a]].push_back(a);
    for (auto& [extent, attrs] : columns) {
        auto& b = concept_for(extent);
        b.attributes.insert(b.attributes.end(), attrs.begin(), attrs.end());
    }

    AocPoset poset;
    poset.concepts.reserve(by_extent.size());
    for (auto& [extent, b] : by_extent) {
        Concept c;
        c.extent = indices(b.extent);
        c.intent = indices(b.intent);
        c.introduced_objects = std::move(b.objects);
        c.introduced_attributes = std::move(b.attributes);
        std::sort(c.introduced_objects.begin(), c.introduced_objects.end());
        std::sort(c.introduced_attributes.begin(), c.introduced_attributes.end());
        poset.concepts.push_back(std::move(c));
    }
    std::sort(poset.concepts.begin(), poset.concepts.end(), [](const Concept& x, const Concept& y) {
        if (x.extent.size() != y.extent.size()) return x.extent.size() < y.extent.size();
        if (x.intent.size() != y.intent.size()) return x.intent.size() > y.intent.size();
        if (x.extent != y.extent) return x.extent < y.extent;
        return x.intent < y.intent;
    });

    const std::size_t k = poset.concepts.size();
    std::vector<std::vector<bool>> below(k, std::vector<bool>(k, false));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) below[i][j] = poset.is_ancestor(j, i);
    }
    for (const auto& [child, parent] : transitive_reduction(below)) poset.order.emplace_back(parent, child);
    std::sort(poset.order.begin(), poset.order.end());
    return poset;
}

std::vector<std::pair<std::size_t, std::size_t>> transitive_reduction(const std::vector<std::vector<bool>>& relation) {
    const std::size_t k = relation.size();
    std::vector<Bits> out_rows(k, Bits(k));
    std::vector<Bits> in_cols(k, Bits(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (relation[i][j]) {
                out_rows[i].set(j);
                in_cols[j].set(i);
            }
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < k; ++i) {
        for (auto j = out_rows[i].find_first(); j != Bits::npos; j = out_rows[i].find_next(j)) {
            if (!out_rows[i].intersects(in_cols[j])) edges.emplace_back(i, j);
        }
    }
    return edges;
}

ConstraintSet extract_constraints(const AocPoset& poset, const FormalContext& ctx) {
    ConstraintSet out;
    const auto top = poset.top(ctx.objects.size());
    for (std::size_t c = 0; c < poset.concepts.size(); ++c) {
        const auto& con = poset.concepts[c];
        if (con.introduced_attributes.empty()) continue;
        std::vector<std::string> names;
        names.reserve(con.introduced_attributes.size());
        for (auto a : con.introduced_attributes) names.push_back(ctx.attributes[a]);
        if (top && c == *top) {
            out.common = std::move(names);
        } else {
            out.groups.push_back({c, std::move(names), con.extent});
        }
    }

    const std::size_t g = out.groups.size();
    std::vector<std::vector<bool>> implies(g, std::vector<bool>(g, false));
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < g; ++j) {
            implies[i][j] = poset.is_ancestor(out.groups[j].concept_index, out.groups[i].concept_index);
        }
    }
    out.implications = transitive_reduction(implies);
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = i + 1; j < g; ++j) {
            if (disjoint(out.groups[i].extent, out.groups[j].extent)) out.mutual_exclusions.emplace_back(i, j);
        }
    }
    return out;
}

std::string to_csv(const FormalContext& ctx) {
    std::vector<std::string> header{""};
    header.insert(header.end(), ctx.attributes.begin(), ctx.attributes.end());
    std::string out = csv::row(header);
    for (std::size_t o = 0; o < ctx.objects.size(); ++o) {
        std::vector<std::string> cells{ctx.objects[o]};
        cells.reserve(ctx.attributes.size() + 1);
        for (std::size_t a = 0; a < ctx.attributes.size(); ++a) cells.emplace_back(ctx.has(o, a) ? "1" : "0");
        out += csv::row(cells);
    }
    return out;
}

FormalContext context_from_csv(std::string_view text) {
    const auto rows = csv::parse(text);
    if (rows.empty()) throw Error(ErrorCode::InvalidInput, "empty formal context CSV");
    std::vector<std::string> attrs(rows[0].begin() + 1, rows[0].end());
    std::vector<std::string> objs;
    for (std::size_t r = 1; r < rows.size(); ++r) objs.push_back(rows[r].at(0));
    FormalContext ctx(std::move(objs), std::move(attrs));
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != ctx.attributes.size() + 1) {
            throw Error(ErrorCode::InvalidInput, "CSV row " + std::to_string(r + 1) + " has the wrong cell count");
        }
        for (std::size_t a = 0; a < ctx.attributes.size(); ++a) {
            const auto& cell = rows[r][a + 1];
            if (cell != "0" && cell != "1") {
                throw Error(ErrorCode::InvalidInput, "CSV cell must be 0 or 1, got '" + cell + "'");
            }
            ctx.set(r - 1, a, cell == "1");
        }
    }
    return ctx;
}

} // namespace splforge::fca
