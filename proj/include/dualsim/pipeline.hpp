#pragma once

// Whole-query execution shared by the CLI and the test suites:
// parse result -> union-free branches -> per-branch compile + solve ->
// union of pruned triples and per-variable candidate vectors, with an
// optional oracle soundness check.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ast.hpp"
#include "graph.hpp"
#include "oracle.hpp"
#include "parser.hpp"
#include "prune.hpp"
#include "soi.hpp"
#include "solver.hpp"

namespace dualsim {

enum class Algorithm { Soi, Ma, Naive };

struct VerifyFailure : std::runtime_error {
    explicit VerifyFailure(const std::string& what) : std::runtime_error(what) {}
};

struct RunOptions {
    Algorithm algorithm = Algorithm::Soi;
    Strategy strategy;
    bool verify = false;
    std::size_t oracle_max_nodes = 64;
};

struct QueryResult {
    std::size_t branch_count = 0;
    std::map<std::string, BitVector> candidates; // original variables, branch union
    std::vector<LabeledEdge> pruned;
    SolverStats stats;
    bool verified = false;
    bool overapproximation = false;
};

namespace pipeline_detail {

// The baselines take a single BGP; AND-trees of BGPs flatten into one
// (identical inequalities and init bounds), anything else is out of their
// declared scope.
inline void flatten_bgp(const QueryNode& node, std::vector<TriplePattern>& out)
{
    switch (node.kind) {
    case QueryNode::Kind::Bgp:
        out.insert(out.end(), node.triples.begin(), node.triples.end());
        return;
    case QueryNode::Kind::And:
        flatten_bgp(*node.left, out);
        flatten_bgp(*node.right, out);
        return;
    case QueryNode::Kind::Optional:
        throw UnsupportedFeatureError("OPTIONAL (baseline algorithms are BGP-only)");
    case QueryNode::Kind::Union:
        throw UnsupportedFeatureError("UNION (baseline algorithms are BGP-only)");
    }
}

inline std::vector<PatternEdge> bgp_pattern_edges(const std::vector<TriplePattern>& triples,
                                                  const GraphDatabase& db,
                                                  std::map<std::string, int>& var_index)
{
    std::vector<PatternEdge> edges;
    auto intern = [&](const std::string& name) {
        return var_index.emplace(name, static_cast<int>(var_index.size())).first->second;
    };
    for (const TriplePattern& t : triples) {
        PatternEdge e;
        e.label = t.predicate;
        if (t.subject.is_variable()) e.s_var = intern(t.subject.text);
        else {
            e.s_const = true;
            e.s_id = db.resolve_term(t.subject.text);
        }
        if (t.object.is_variable()) e.o_var = intern(t.object.text);
        else {
            e.o_const = true;
            e.o_id = db.resolve_term(t.object.text);
        }
        edges.push_back(std::move(e));
    }
    return edges;
}

} // namespace pipeline_detail

inline QueryResult run_query(const GraphDatabase& db, const QueryAst& ast, const RunOptions& opts)
{
    QueryResult result;
    std::vector<QueryAst> branches = to_union_free(ast);
    result.branch_count = branches.size();

    auto merge_candidates = [&](const std::map<std::string, BitVector>& part) {
        for (const auto& [name, vec] : part) {
            auto [it, inserted] = result.candidates.emplace(name, vec);
            if (!inserted) it->second.or_assign(vec);
        }
    };

    for (const QueryAst& branch : branches) {
        if (opts.algorithm == Algorithm::Soi) {
            Soi soi = compile(branch, db);
            auto [sol, stats] = solve(soi, db, opts.strategy);
            result.stats.accumulate(stats);
            merge_candidates(project_solution(sol, soi));
            std::vector<LabeledEdge> pruned = prune_triples(sol, soi, db);
            result.pruned.insert(result.pruned.end(), pruned.begin(), pruned.end());
        } else {
            std::vector<TriplePattern> triples;
            pipeline_detail::flatten_bgp(*branch.root(), triples);
            std::map<std::string, BitVector> chi;
            if (opts.algorithm == Algorithm::Ma) {
                auto [c, stats] = solve_ma_baseline(triples, db);
                chi = std::move(c);
                result.stats.accumulate(stats);
            } else {
                auto t0 = std::chrono::steady_clock::now();
                auto cand = naive_dual_simulation(triples, db, opts.oracle_max_nodes);
                SolverStats stats;
                stats.wall_ms = std::chrono::duration<double, std::milli>(
                                    std::chrono::steady_clock::now() - t0)
                                    .count();
                result.stats.accumulate(stats);
                for (const auto& [name, nodes] : cand) {
                    BitVector v(db.node_count());
                    for (std::uint32_t id : nodes) v.set(id);
                    chi.emplace(name, std::move(v));
                }
            }
            merge_candidates(chi);
            std::map<std::string, int> var_index;
            auto edges = pipeline_detail::bgp_pattern_edges(triples, db, var_index);
            std::vector<BitVector> chi_by_index(var_index.size(), BitVector(db.node_count()));
            for (const auto& [name, idx] : var_index) chi_by_index[idx] = chi.at(name);
            collect_pruned_triples(edges, chi_by_index, db, result.pruned);
        }
    }
    std::sort(result.pruned.begin(), result.pruned.end());
    result.pruned.erase(std::unique(result.pruned.begin(), result.pruned.end()),
                        result.pruned.end());

    if (opts.verify) {
        MatchSet matches = enumerate_matches(ast, db, opts.oracle_max_nodes);
        std::map<std::string, BitVector> bound; // union of oracle bindings
        for (const Match& mu : matches) {
            for (const auto& [var, node] : mu) {
                auto it = result.candidates.find(var);
                if (it == result.candidates.end() || !it->second.test(node))
                    throw VerifyFailure("binding ?" + var + " -> " + db.node_term(node) +
                                        " missing from the solved candidates");
                auto probe = bound.find(var);
                if (probe == bound.end())
                    probe = bound.emplace(var, BitVector(db.node_count())).first;
                probe->second.set(node);
            }
        }
        result.verified = true;
        for (const auto& [var, vec] : result.candidates) {
            BitVector b(db.node_count());
            auto it = bound.find(var);
            if (it != bound.end()) b = it->second;
            if (vec != b) result.overapproximation = true; // vec is a superset by the check above
        }
    }
    return result;
}

} // namespace dualsim
