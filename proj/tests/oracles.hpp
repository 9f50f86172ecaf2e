#pragma once

// Brute-force and generator helpers shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "splforge/artefact.hpp"
#include "splforge/codegen.hpp"
#include "splforge/fca.hpp"

namespace splforge::testing {

using Mask = std::uint32_t;

inline fca::FormalContext random_context(std::mt19937_64& rng) {
    const std::size_t n = 1 + rng() % 8;
    const std::size_t m = 1 + rng() % 12;
    std::vector<std::string> objects, attributes;
    for (std::size_t o = 0; o < n; ++o) objects.push_back("o" + std::to_string(o));
    for (std::size_t a = 0; a < m; ++a) attributes.push_back("a" + std::to_string(a));
    fca::FormalContext ctx(objects, attributes);
    const auto density = 20 + rng() % 70;
    for (std::size_t a = 0; a < m; ++a) {
        bool held = false;
        for (std::size_t o = 0; o < n; ++o) {
            if (rng() % 100 < density) {
                ctx.set(o, a);
                held = true;
            }
        }
        if (!held) ctx.set(rng() % n, a);
    }
    return ctx;
}

// Definitional derivation operators over bitmasks.
struct Oracle {
    const fca::FormalContext& ctx;

    Mask all_objects() const { return static_cast<Mask>((1ull << ctx.objects.size()) - 1); }
    Mask all_attributes() const { return static_cast<Mask>((1ull << ctx.attributes.size()) - 1); }

    Mask intent(Mask objects) const {
        Mask out = all_attributes();
        for (std::size_t o = 0; o < ctx.objects.size(); ++o) {
            if (!(objects >> o & 1)) continue;
            for (std::size_t a = 0; a < ctx.attributes.size(); ++a) {
                if (!ctx.has(o, a)) out &= ~(Mask{1} << a);
            }
        }
        return out;
    }

    Mask extent(Mask attributes) const {
        Mask out = all_objects();
        for (std::size_t a = 0; a < ctx.attributes.size(); ++a) {
            if (!(attributes >> a & 1)) continue;
            for (std::size_t o = 0; o < ctx.objects.size(); ++o) {
                if (!ctx.has(o, a)) out &= ~(Mask{1} << o);
            }
        }
        return out;
    }
};

inline Mask to_mask(const std::vector<std::size_t>& v) {
    Mask m = 0;
    for (auto i : v) m |= Mask{1} << i;
    return m;
}

inline bool strict_subset(Mask a, Mask b) { return (a & b) == a && a != b; }

// Attribute name sets for groups.
using Names = std::set<std::string>;

inline Names names(const fca::FormalContext& ctx, Mask attributes) {
    Names out;
    for (std::size_t a = 0; a < ctx.attributes.size(); ++a) {
        if (attributes >> a & 1) out.insert(ctx.attributes[a]);
    }
    return out;
}

/// Constraints in name-set form, independent of group numbering. Implications are transitively
/// closed.
struct ConstraintView {
    Names common;
    std::set<Names> partition;
    std::set<std::pair<Names, Names>> implies;
    std::set<std::set<Names>> excludes;

    friend bool operator==(const ConstraintView&, const ConstraintView&) = default;
};

/// Straight from the definitions: common attributes are held by every object, groups share an
/// extent, a group implies another when its extent is a strict subset, and exclusion means
/// disjoint extents.
inline ConstraintView definitional_constraints(const fca::FormalContext& ctx) {
    const Oracle o{ctx};
    std::map<Mask, Mask> by_extent;
    Mask common = 0;
    for (std::size_t a = 0; a < ctx.attributes.size(); ++a) {
        const Mask e = o.extent(Mask{1} << a);
        if (e == o.all_objects()) {
            common |= Mask{1} << a;
        } else {
            by_extent[e] |= Mask{1} << a;
        }
    }
    ConstraintView out;
    out.common = names(ctx, common);
    for (const auto& [ea, aa] : by_extent) {
        out.partition.insert(names(ctx, aa));
        for (const auto& [eb, ab] : by_extent) {
            if (strict_subset(ea, eb)) out.implies.insert({names(ctx, aa), names(ctx, ab)});
            if ((ea & eb) == 0 && ea < eb) out.excludes.insert({names(ctx, aa), names(ctx, ab)});
        }
    }
    return out;
}

inline ConstraintView extracted_view(const fca::ConstraintSet& cs) {
    ConstraintView out;
    out.common = Names(cs.common.begin(), cs.common.end());
    const auto group = [&](std::size_t i) { return Names(cs.groups[i].attributes.begin(), cs.groups[i].attributes.end()); };
    for (std::size_t i = 0; i < cs.groups.size(); ++i) out.partition.insert(group(i));
    const auto g = cs.groups.size();
    std::vector<std::vector<bool>> closure(g, std::vector<bool>(g, false));
    for (const auto& [a, b] : cs.implications) closure[a][b] = true;
    for (std::size_t k = 0; k < g; ++k) {
        for (std::size_t i = 0; i < g; ++i) {
            for (std::size_t j = 0; j < g; ++j) closure[i][j] = closure[i][j] || (closure[i][k] && closure[k][j]);
        }
    }
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < g; ++j) {
            if (closure[i][j]) out.implies.insert({group(i), group(j)});
        }
    }
    for (const auto& [a, b] : cs.mutual_exclusions) out.excludes.insert({group(a), group(b)});
    return out;
}

inline bool embeds(const std::vector<ArtefactId>& sub, const std::vector<ArtefactId>& super) {
    std::size_t i = 0;
    for (const auto& id : super) {
        if (i < sub.size() && sub[i].same_twin(id)) ++i;
    }
    return i == sub.size();
}

inline std::vector<ArtefactId> random_sequence(std::mt19937_64& rng) {
    const std::size_t alphabet = 1 + rng() % 10;
    std::vector<ArtefactId> seq(rng() % 31);
    for (auto& id : seq) id = ArtefactId{rng() % alphabet, static_cast<std::uint32_t>(1 + rng() % 2), 1};
    return seq;
}

// Random properly nested annotated file over `features` names, biased towards repeated
// conditions (nested and adjacent) and empty blocks.
class AnnotatedGenerator {
public:
    AnnotatedGenerator(std::uint64_t seed, std::size_t features) : rng_(seed), features_(features) {}

    AnnotatedFile file() {
        AnnotatedFile f{"R.java", {}};
        body(f.lines, 0, nullptr);
        return f;
    }

private:
    Condition random_condition() {
        Condition c;
        const auto terms = 1 + rng_() % 2;
        for (std::size_t i = 0; i < terms; ++i) {
            auto name = "F" + std::to_string(rng_() % features_);
            if (std::find(c.terms.begin(), c.terms.end(), name) == c.terms.end()) c.terms.push_back(std::move(name));
        }
        if (c.terms.size() == 2 && rng_() % 2) std::swap(c.terms[0], c.terms[1]);
        return c;
    }

    void body(std::vector<std::string>& lines, std::size_t depth, const Condition* parent) {
        const std::string indent(depth * 4, ' ');
        const auto items = 1 + rng_() % 5;
        std::optional<Condition> previous;
        for (std::size_t i = 0; i < items; ++i) {
            const auto roll = rng_() % 10;
            if (depth >= 4 || roll < 4) {
                lines.push_back(indent + "s" + std::to_string(counter_++) + "();");
                previous.reset();
                continue;
            }
            Condition c;
            if (parent && roll == 4) {
                c = *parent;
            } else if (previous && roll < 7) {
                c = *previous;
            } else {
                c = random_condition();
            }
            lines.push_back(indent + std::string(kIfDirective) + c.str());
            if (rng_() % 8 != 0) body(lines, depth + 1, &c);
            lines.push_back(indent + std::string(kEndifDirective));
            previous = c;
        }
    }

    std::mt19937_64 rng_;
    std::size_t features_;
    std::size_t counter_ = 0;
};

inline std::vector<std::set<std::string>> all_subsets(std::size_t n) {
    std::vector<std::set<std::string>> out;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::set<std::string> s;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask >> i & 1) s.insert("F" + std::to_string(i));
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace splforge::testing
