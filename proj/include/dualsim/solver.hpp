#pragma once

// Stability-tracked worklist fixpoint over a compiled SOI, plus the naive
// pairwise baseline. Starting from the init bounds, an unstable inequality
// is picked per the strategy ordering, its right side evaluated, and the
// target vector intersected; every inequality fed by the shrunk variable is
// reset to unstable. The result is the unique largest valid assignment,
// independent of ordering and evaluation mode.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "graph.hpp"
#include "soi.hpp"

namespace dualsim {

enum class OrderingPolicy { Sparsity, Textual };
enum class EvalPolicy { Auto, ForceRow, ForceColumn };

struct Strategy {
    OrderingPolicy ordering = OrderingPolicy::Sparsity;
    EvalPolicy eval = EvalPolicy::Auto;
    std::uint64_t shuffle_seed = 0; // 0 = keep the policy order
};

struct SolverStats {
    std::uint64_t iterations = 0; // inequality evaluations (SOI) / pair checks (baseline)
    std::uint64_t updates = 0;    // evaluations that shrank a vector / pairs removed
    std::uint64_t row_evals = 0;
    std::uint64_t col_evals = 0;
    double wall_ms = 0.0;

    void accumulate(const SolverStats& other)
    {
        iterations += other.iterations;
        updates += other.updates;
        row_evals += other.row_evals;
        col_evals += other.col_evals;
        wall_ms += other.wall_ms;
    }
};

inline const char* to_string(OrderingPolicy p)
{
    return p == OrderingPolicy::Sparsity ? "sparsity" : "textual";
}

inline const char* to_string(EvalPolicy p)
{
    switch (p) {
    case EvalPolicy::Auto: return "auto";
    case EvalPolicy::ForceRow: return "row";
    default: return "col";
    }
}

// Row-wise iff the source has fewer bits set than the target; ties fall to
// column-wise ("not fewer").
inline EvalMode choose_eval_mode(const BitVector& source, const BitVector& target,
                                 EvalPolicy policy)
{
    switch (policy) {
    case EvalPolicy::ForceRow: return EvalMode::RowWise;
    case EvalPolicy::ForceColumn: return EvalMode::ColumnWise;
    default:
        return source.popcount() < target.popcount() ? EvalMode::RowWise : EvalMode::ColumnWise;
    }
}

// Schedulable inequalities (propagations and subsumptions; init bounds are
// folded into the start assignment). Sparsity-first prefers propagation
// matrices with more empty columns, i.e. a smaller opposite-direction
// summary; the sort is stable, so compile order breaks ties. Subsumptions
// follow the propagations.
inline std::vector<int> order_inequalities(const Soi& soi, const GraphDatabase& db,
                                           OrderingPolicy policy)
{
    const auto& ineqs = soi.inequalities();
    std::vector<int> order;
    order.reserve(ineqs.size());
    for (int i = 0; i < static_cast<int>(ineqs.size()); ++i) order.push_back(i);
    if (policy == OrderingPolicy::Textual) return order;

    auto rank = [&](int i) -> std::uint64_t {
        const Inequality& eq = ineqs[i];
        if (eq.kind == Inequality::Kind::Subsumption) return ~std::uint64_t{0};
        Direction opposite =
            eq.dir == Direction::Forward ? Direction::Backward : Direction::Forward;
        return db.summary(eq.label, opposite).popcount();
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return rank(a) < rank(b); });
    return order;
}

namespace solver_detail {

// result(j) = 1 iff transpose.row(j) intersects v; identical to the
// column-wise product with the matrix the transpose mirrors.
inline BitVector product_via_transpose(const BitVector& v, const BitMatrix& transpose)
{
    BitVector result(transpose.dim());
    for (std::size_t j = 0; j < transpose.dim(); ++j) {
        for (std::uint32_t i : transpose.row(j)) {
            if (v.test(i)) {
                result.set(j);
                break;
            }
        }
    }
    return result;
}

} // namespace solver_detail

inline std::pair<Solution, SolverStats> solve(const Soi& soi, const GraphDatabase& db,
                                              const Strategy& strategy = {})
{
    auto t0 = std::chrono::steady_clock::now();
    SolverStats stats;

    Solution sol;
    sol.chi = soi.init_bounds();

    const auto& ineqs = soi.inequalities();
    std::vector<const BitMatrix*> mats(ineqs.size(), nullptr);
    std::vector<const BitMatrix*> transposed(ineqs.size(), nullptr);
    for (std::size_t i = 0; i < ineqs.size(); ++i) {
        if (ineqs[i].kind != Inequality::Kind::Propagation) continue;
        Direction opposite = ineqs[i].dir == Direction::Forward ? Direction::Backward
                                                                : Direction::Forward;
        mats[i] = &db.adjacency(ineqs[i].label, ineqs[i].dir);
        transposed[i] = &db.adjacency(ineqs[i].label, opposite);
    }

    std::vector<int> order = order_inequalities(soi, db, strategy.ordering);
    if (strategy.shuffle_seed != 0) {
        std::mt19937_64 rng(strategy.shuffle_seed);
        std::shuffle(order.begin(), order.end(), rng);
    }
    std::vector<int> rank(ineqs.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<int>(r);

    std::set<int> unstable; // ranks
    for (std::size_t i = 0; i < ineqs.size(); ++i) unstable.insert(rank[i]);

    while (!unstable.empty()) {
        int idx = order[*unstable.begin()];
        unstable.erase(unstable.begin());
        const Inequality& eq = ineqs[idx];
        ++stats.iterations;

        BitVector& target = sol.chi[eq.target];
        if (target.none()) continue; // already minimal

        bool changed = false;
        if (eq.kind == Inequality::Kind::Propagation) {
            const BitVector& source = sol.chi[eq.source];
            EvalMode mode = choose_eval_mode(source, target, strategy.eval);
            BitVector r;
            if (mode == EvalMode::RowWise) {
                ++stats.row_evals;
                r = vec_mat_mul(source, *mats[idx], EvalMode::RowWise);
            } else {
                ++stats.col_evals;
                r = solver_detail::product_via_transpose(source, *transposed[idx]);
            }
            if (!target.subset_of(r)) changed = target.and_assign(r);
        } else {
            const BitVector& upper = sol.chi[eq.source];
            if (!target.subset_of(upper)) changed = target.and_assign(upper);
        }

        if (changed) {
            ++stats.updates;
            for (int dep : soi.dependents(eq.target)) unstable.insert(rank[dep]);
        }
    }

    stats.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    return {std::move(sol), stats};
}

// Direct check that an assignment satisfies every inequality of the SOI.
inline bool is_valid(const Solution& sol, const Soi& soi, const GraphDatabase& db)
{
    for (std::size_t i = 0; i < soi.vars().size(); ++i)
        if (!sol.chi[i].subset_of(soi.init_bounds()[i])) return false;
    for (const Inequality& eq : soi.inequalities()) {
        if (eq.kind == Inequality::Kind::Propagation) {
            BitVector r = vec_mat_mul(sol.chi[eq.source], db.adjacency(eq.label, eq.dir));
            if (!sol.chi[eq.target].subset_of(r)) return false;
        } else {
            if (!sol.chi[eq.target].subset_of(sol.chi[eq.source])) return false;
        }
    }
    return true;
}

// Naive baseline in the style of the prior pairwise algorithms: start from
// the full relation vars x O_D and sweep the pattern edges, disqualifying
// candidate pairs that lack a witnessing database edge, until stable.
// Constant endpoints act as frozen singleton candidate sets. iterations
// counts pair checks, updates counts removed pairs.
inline std::pair<std::map<std::string, BitVector>, SolverStats>
solve_ma_baseline(const std::vector<TriplePattern>& bgp, const GraphDatabase& db)
{
    auto t0 = std::chrono::steady_clock::now();
    SolverStats stats;
    const std::size_t n = db.node_count();

    std::map<std::string, BitVector> chi;
    bool unsat = false;
    for (const TriplePattern& t : bgp) {
        if (t.subject.is_variable()) chi.emplace(t.subject.text, BitVector::ones(n));
        if (t.object.is_variable()) chi.emplace(t.object.text, BitVector::ones(n));
        if (!t.subject.is_variable() && !t.object.is_variable()) {
            auto s = db.resolve_term(t.subject.text);
            auto o = db.resolve_term(t.object.text);
            auto l = db.resolve_label(t.predicate);
            if (!(s && o && l && db.has_triple(*s, *l, *o))) unsat = true;
        }
    }
    if (unsat)
        for (auto& [name, v] : chi) v.clear();

    auto constant_candidates = [&](const Term& term) {
        BitVector v(n);
        if (auto id = db.resolve_term(term.text)) v.set(*id);
        return v;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (const TriplePattern& t : bgp) {
            const BitMatrix& fwd = db.adjacency(t.predicate, Direction::Forward);
            const BitMatrix& bwd = db.adjacency(t.predicate, Direction::Backward);
            BitVector s_cand = t.subject.is_variable() ? chi.at(t.subject.text)
                                                       : constant_candidates(t.subject);
            BitVector o_cand = t.object.is_variable() ? chi.at(t.object.text)
                                                      : constant_candidates(t.object);
            if (t.subject.is_variable()) {
                BitVector& mine = chi.at(t.subject.text);
                std::vector<std::size_t> drop;
                mine.for_each_set([&](std::size_t x) {
                    ++stats.iterations;
                    bool witnessed = false;
                    for (std::uint32_t y : fwd.row(x))
                        if (o_cand.test(y)) {
                            witnessed = true;
                            break;
                        }
                    if (!witnessed) drop.push_back(x);
                });
                for (std::size_t x : drop) {
                    mine.reset(x);
                    ++stats.updates;
                    changed = true;
                }
            }
            if (t.object.is_variable()) {
                BitVector& mine = chi.at(t.object.text);
                std::vector<std::size_t> drop;
                mine.for_each_set([&](std::size_t y) {
                    ++stats.iterations;
                    bool witnessed = false;
                    for (std::uint32_t x : bwd.row(y))
                        if (s_cand.test(x)) {
                            witnessed = true;
                            break;
                        }
                    if (!witnessed) drop.push_back(y);
                });
                for (std::size_t y : drop) {
                    mine.reset(y);
                    ++stats.updates;
                    changed = true;
                }
            }
        }
    }

    stats.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    return {std::move(chi), stats};
}

} // namespace dualsim
