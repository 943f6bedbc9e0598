#pragma once

// Desk-scale reference implementations, used by tests and the CLI's
// --verify mode only: exact SPARQL-fragment match enumeration by
// backtracking, and the textbook pairwise dual-simulation fixpoint. Both
// are deliberately plain (sets and edge scans, no bit kernels) so they can
// serve as independent oracles for the solver.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ast.hpp"
#include "graph.hpp"

namespace dualsim {

struct OracleBoundError : std::runtime_error {
    OracleBoundError(std::size_t nodes, std::size_t bound)
        : std::runtime_error("oracle refused: database has " + std::to_string(nodes) +
                             " nodes, bound is " + std::to_string(bound))
    {
    }
};

// Partial match: dom(mu) is the key set.
using Match = std::map<std::string, std::uint32_t>;
using MatchSet = std::set<Match>;

inline bool compatible(const Match& a, const Match& b)
{
    const Match& small = a.size() <= b.size() ? a : b;
    const Match& large = a.size() <= b.size() ? b : a;
    for (const auto& [var, val] : small) {
        auto it = large.find(var);
        if (it != large.end() && it->second != val) return false;
    }
    return true;
}

inline Match merge(Match a, const Match& b)
{
    a.insert(b.begin(), b.end());
    return a;
}

namespace oracle_detail {

inline MatchSet enumerate_bgp(const std::vector<TriplePattern>& triples, const GraphDatabase& db)
{
    // Order triples so each one shares a variable with the prefix when
    // possible; keeps the backtracking joins narrow.
    std::vector<TriplePattern> order;
    std::vector<bool> used(triples.size(), false);
    VarSet bound_vars;
    auto triple_vars = [](const TriplePattern& t) {
        VarSet v;
        if (t.subject.is_variable()) v.insert(t.subject.text);
        if (t.object.is_variable()) v.insert(t.object.text);
        return v;
    };
    for (std::size_t step = 0; step < triples.size(); ++step) {
        std::size_t pick = triples.size();
        for (std::size_t i = 0; i < triples.size(); ++i) {
            if (used[i]) continue;
            VarSet tv = triple_vars(triples[i]);
            bool connected = std::any_of(tv.begin(), tv.end(), [&](const std::string& v) {
                return bound_vars.count(v) > 0;
            });
            if (connected || bound_vars.empty() || tv.empty()) {
                pick = i;
                break;
            }
            if (pick == triples.size()) pick = i;
        }
        // fall back to the first unused triple
        if (pick == triples.size())
            for (std::size_t i = 0; i < triples.size(); ++i)
                if (!used[i]) {
                    pick = i;
                    break;
                }
        used[pick] = true;
        order.push_back(triples[pick]);
        for (const auto& v : triple_vars(triples[pick])) bound_vars.insert(v);
    }

    MatchSet out;
    Match mu;
    struct Rec {
        const std::vector<TriplePattern>& order;
        const GraphDatabase& db;
        MatchSet& out;

        void run(std::size_t i, Match& mu) const
        {
            if (i == order.size()) {
                out.insert(mu);
                return;
            }
            const TriplePattern& t = order[i];
            auto lid = db.resolve_label(t.predicate);
            if (!lid) return;
            auto value_of = [&](const Term& term) -> std::optional<std::uint32_t> {
                if (term.is_variable()) {
                    auto it = mu.find(term.text);
                    if (it == mu.end()) return std::nullopt;
                    return it->second;
                }
                return db.resolve_term(term.text);
            };
            std::optional<std::uint32_t> s = value_of(t.subject);
            std::optional<std::uint32_t> o = value_of(t.object);
            if (!t.subject.is_variable() && !s) return;
            if (!t.object.is_variable() && !o) return;

            auto extend = [&](std::uint32_t sv, std::uint32_t ov) {
                bool bound_s = false, bound_o = false;
                if (t.subject.is_variable() && !s) {
                    mu.emplace(t.subject.text, sv);
                    bound_s = true;
                }
                if (t.object.is_variable() && !mu.count(t.object.text)) {
                    mu.emplace(t.object.text, ov);
                    bound_o = true;
                }
                run(i + 1, mu);
                if (bound_s) mu.erase(t.subject.text);
                if (bound_o) mu.erase(t.object.text);
            };

            const BitMatrix& fwd = db.adjacency(*lid, Direction::Forward);
            const BitMatrix& bwd = db.adjacency(*lid, Direction::Backward);
            if (s && o) {
                if (db.has_triple(*s, *lid, *o)) run(i + 1, mu);
            } else if (s) {
                for (std::uint32_t y : fwd.row(*s)) extend(*s, y);
            } else if (o) {
                for (std::uint32_t x : bwd.row(*o)) extend(x, *o);
            } else {
                for (std::uint32_t x = 0; x < db.node_count(); ++x) {
                    for (std::uint32_t y : fwd.row(x)) {
                        if (t.subject.text == t.object.text && x != y) continue;
                        extend(x, y);
                    }
                }
            }
        }
    };
    Rec{order, db, out}.run(0, mu);
    return out;
}

inline MatchSet evaluate(const QueryNode& node, const GraphDatabase& db)
{
    switch (node.kind) {
    case QueryNode::Kind::Bgp:
        return enumerate_bgp(node.triples, db);
    case QueryNode::Kind::Union: {
        MatchSet l = evaluate(*node.left, db);
        MatchSet r = evaluate(*node.right, db);
        l.insert(r.begin(), r.end());
        return l;
    }
    case QueryNode::Kind::And: {
        MatchSet l = evaluate(*node.left, db);
        MatchSet r = evaluate(*node.right, db);
        MatchSet out;
        for (const Match& a : l)
            for (const Match& b : r)
                if (compatible(a, b)) out.insert(merge(a, b));
        return out;
    }
    case QueryNode::Kind::Optional: {
        MatchSet l = evaluate(*node.left, db);
        MatchSet r = evaluate(*node.right, db);
        MatchSet out;
        for (const Match& a : l) {
            bool joined = false;
            for (const Match& b : r) {
                if (compatible(a, b)) {
                    out.insert(merge(a, b));
                    joined = true;
                }
            }
            if (!joined) out.insert(a);
        }
        return out;
    }
    }
    throw std::logic_error("unreachable");
}

} // namespace oracle_detail

// Exact [[Q]]_D. UNION is plain set union at any depth, OPTIONAL is the
// join set plus the unmatched left matches, also for non-well-designed
// queries. Guarded: refuses databases above the node bound.
inline MatchSet enumerate_matches(const QueryAst& ast, const GraphDatabase& db,
                                  std::size_t max_nodes = 64)
{
    if (db.node_count() > max_nodes) throw OracleBoundError(db.node_count(), max_nodes);
    return oracle_detail::evaluate(*ast.root(), db);
}

// Greatest pairwise dual-simulation relation between a BGP's query graph
// and the database: start from vars x O_D and remove pairs violating the
// forward or backward edge condition until stable. Constants are frozen
// singleton candidate sets and are not reported.
inline std::map<std::string, std::set<std::uint32_t>>
naive_dual_simulation(const std::vector<TriplePattern>& bgp, const GraphDatabase& db,
                      std::size_t max_nodes = 64)
{
    if (db.node_count() > max_nodes) throw OracleBoundError(db.node_count(), max_nodes);

    // Raw per-label edge lists, scanned directly.
    std::map<std::string, std::vector<std::pair<std::uint32_t, std::uint32_t>>> edges;
    db.for_each_triple([&](const GraphDatabase::Triple& t) {
        edges[db.label_term(t.label)].emplace_back(t.subject, t.object);
    });

    std::map<std::string, std::set<std::uint32_t>> cand;
    bool unsat = false;
    auto candidates_of = [&](const Term& term) -> std::set<std::uint32_t> {
        if (term.is_variable()) return cand.at(term.text);
        if (auto id = db.resolve_term(term.text)) return {*id};
        return {};
    };
    for (const TriplePattern& t : bgp) {
        for (const Term* term : {&t.subject, &t.object}) {
            if (!term->is_variable()) continue;
            auto [it, inserted] = cand.emplace(term->text, std::set<std::uint32_t>{});
            if (inserted)
                for (std::uint32_t i = 0; i < db.node_count(); ++i) it->second.insert(i);
        }
        if (!t.subject.is_variable() && !t.object.is_variable()) {
            auto s = db.resolve_term(t.subject.text);
            auto o = db.resolve_term(t.object.text);
            bool present = false;
            if (s && o)
                for (const auto& [x, y] : edges[t.predicate])
                    if (x == *s && y == *o) present = true;
            if (!present) unsat = true;
        }
    }
    if (unsat)
        for (auto& [name, c] : cand) c.clear();

    bool changed = true;
    while (changed) {
        changed = false;
        for (const TriplePattern& t : bgp) {
            const auto& es = edges[t.predicate];
            if (t.subject.is_variable()) {
                std::set<std::uint32_t> targets = candidates_of(t.object);
                auto& mine = cand.at(t.subject.text);
                for (auto it = mine.begin(); it != mine.end();) {
                    bool ok = false;
                    for (const auto& [x, y] : es)
                        if (x == *it && targets.count(y)) {
                            ok = true;
                            break;
                        }
                    if (!ok) {
                        it = mine.erase(it);
                        changed = true;
                    } else {
                        ++it;
                    }
                }
            }
            if (t.object.is_variable()) {
                std::set<std::uint32_t> sources = candidates_of(t.subject);
                auto& mine = cand.at(t.object.text);
                for (auto it = mine.begin(); it != mine.end();) {
                    bool ok = false;
                    for (const auto& [x, y] : es)
                        if (y == *it && sources.count(x)) {
                            ok = true;
                            break;
                        }
                    if (!ok) {
                        it = mine.erase(it);
                        changed = true;
                    } else {
                        ++it;
                    }
                }
            }
        }
    }
    return cand;
}

} // namespace dualsim
