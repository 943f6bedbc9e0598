#pragma once

// Sound triple pruning: a database triple is retained iff some pattern
// edge of some union-free branch supports it under the solved candidate
// vectors (solver-variable names after renaming). Computed per label by
// masking adjacency rows.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "graph.hpp"
#include "soi.hpp"

namespace dualsim {

struct LabeledEdge {
    std::uint32_t label;
    std::uint32_t subject;
    std::uint32_t object;
    auto operator<=>(const LabeledEdge&) const = default;
};

inline void collect_pruned_triples(const std::vector<PatternEdge>& edges,
                                   const std::vector<BitVector>& chi, const GraphDatabase& db,
                                   std::vector<LabeledEdge>& out)
{
    for (const PatternEdge& e : edges) {
        auto lid = db.resolve_label(e.label);
        if (!lid) continue;
        const BitMatrix& fwd = db.adjacency(*lid, Direction::Forward);
        if (!e.s_const && !e.o_const) {
            const BitVector& sv = chi[e.s_var];
            const BitVector& ov = chi[e.o_var];
            sv.for_each_set([&](std::size_t x) {
                for (std::uint32_t y : fwd.row(x))
                    if (ov.test(y)) out.push_back({*lid, static_cast<std::uint32_t>(x), y});
            });
        } else if (!e.s_const && e.o_const) {
            if (!e.o_id) continue;
            const BitMatrix& bwd = db.adjacency(*lid, Direction::Backward);
            const BitVector& sv = chi[e.s_var];
            for (std::uint32_t x : bwd.row(*e.o_id))
                if (sv.test(x)) out.push_back({*lid, x, *e.o_id});
        } else if (e.s_const && !e.o_const) {
            if (!e.s_id) continue;
            const BitVector& ov = chi[e.o_var];
            for (std::uint32_t y : fwd.row(*e.s_id))
                if (ov.test(y)) out.push_back({*lid, *e.s_id, y});
        } else {
            if (e.s_id && e.o_id && db.has_triple(*e.s_id, *lid, *e.o_id))
                out.push_back({*lid, *e.s_id, *e.o_id});
        }
    }
}

inline std::vector<LabeledEdge> prune_triples(const Solution& sol, const Soi& soi,
                                              const GraphDatabase& db)
{
    std::vector<LabeledEdge> out;
    collect_pruned_triples(soi.pattern_edges(), sol.chi, db, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline std::string to_ntriples(const std::vector<LabeledEdge>& triples, const GraphDatabase& db)
{
    std::string out;
    for (const LabeledEdge& t : triples) {
        out += db.node_term(t.subject);
        out += ' ';
        out += db.label_term(t.label);
        out += ' ';
        out += db.node_term(t.object);
        out += " .\n";
    }
    return out;
}

} // namespace dualsim
