#pragma once

// Compiles a union-free query against a graph database into a system of
// inequalities (SOI) over bit-vector variables:
//
//   * per variable-variable triple (v,a,w): two propagation inequalities
//       w <= v x F[a]   and   v <= w x B[a]
//   * per variable: one init bound, the AND over the summary vectors of its
//     incident edges, further masked by adjacency rows of constant
//     neighbours;
//   * per renamed optional occurrence: a subsumption  v' <= v.
//
// Renaming: inside an OPTIONAL right side, every variable that is mandatory
// on the left is replaced by a fresh surrogate bounded by the original.
// Variables shared between two optional contexts (across AND, or between an
// optional left context and a nested right side) are renamed apart with no
// bound between the surrogates; a later mandatory occurrence adopts all of
// them, which yields the nested chains  v'' <= v' <= v.

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ast.hpp"
#include "graph.hpp"

namespace dualsim {

struct SolverVar {
    std::string base;        // original query variable
    int surrogate_node = -1; // AST node id tagging a surrogate; -1 = original

    bool is_surrogate() const { return surrogate_node >= 0; }

    std::string name() const
    {
        return is_surrogate() ? base + "@n" + std::to_string(surrogate_node) : base;
    }
};

struct Inequality {
    enum class Kind { Propagation, Subsumption };
    Kind kind;
    int target;                        // Propagation target / Subsumption lower
    int source;                        // Propagation source / Subsumption upper
    std::string label;                 // Propagation only, canonical "<iri>"
    Direction dir = Direction::Forward;
};

// One pattern triple as it entered the SOI, with solver-variable endpoints
// after renaming; drives triple pruning.
struct PatternEdge {
    std::string label;
    int s_var = -1, o_var = -1;                 // -1 when the endpoint is a constant
    std::optional<std::uint32_t> s_id, o_id;    // resolved constant ids
    bool s_const = false, o_const = false;
};

struct Solution {
    std::vector<BitVector> chi; // indexed like Soi::vars()
};

class Soi {
public:
    const std::vector<SolverVar>& vars() const { return vars_; }
    const std::vector<Inequality>& inequalities() const { return ineqs_; }
    const std::vector<BitVector>& init_bounds() const { return init_; }
    const std::vector<PatternEdge>& pattern_edges() const { return edges_; }

    // Inequalities to re-examine after the given variable shrank: those with
    // it as propagation source or subsumption upper.
    const std::vector<int>& dependents(int var) const { return reverse_[var]; }

    int var_index(const std::string& name) const
    {
        auto it = index_.find(name);
        return it == index_.end() ? -1 : it->second;
    }

    std::size_t universe() const { return universe_; }

    std::string dump() const
    {
        std::ostringstream out;
        for (const auto& eq : ineqs_) {
            if (eq.kind == Inequality::Kind::Propagation) {
                out << vars_[eq.target].name() << " <= " << vars_[eq.source].name() << " x "
                    << (eq.dir == Direction::Forward ? "F[" : "B[") << pretty_label(eq.label)
                    << "]\n";
            } else {
                out << vars_[eq.target].name() << " <= " << vars_[eq.source].name() << "\n";
            }
        }
        for (std::size_t i = 0; i < vars_.size(); ++i)
            out << vars_[i].name() << " <= init[popcount=" << init_[i].popcount() << "]\n";
        return out.str();
    }

private:
    static std::string pretty_label(const std::string& label)
    {
        if (label.size() >= 2 && label.front() == '<' && label.back() == '>')
            return label.substr(1, label.size() - 2);
        return label;
    }

    friend class SoiCompiler;

    std::vector<SolverVar> vars_;
    std::map<std::string, int> index_;
    std::vector<Inequality> ineqs_;
    std::vector<BitVector> init_;
    std::vector<PatternEdge> edges_;
    std::vector<std::vector<int>> reverse_;
    std::size_t universe_ = 0;

    // Compile-time bookkeeping, cleared on finalize.
    std::map<std::string, std::vector<int>> plain_occ_; // base -> BGP node ids
    std::map<std::string, std::vector<int>> unbound_;   // base -> surrogate var idxs
};

class SoiCompiler {
public:
    SoiCompiler(const QueryAst& ast, const GraphDatabase& db) : ast_(ast), db_(db) {}

    Soi compile() { return compile_node(*ast_.root().get()); }

    Soi compile_node(const QueryNode& node)
    {
        switch (node.kind) {
        case QueryNode::Kind::Bgp:
            return compile_bgp(node);
        case QueryNode::Kind::And:
        case QueryNode::Kind::Optional: {
            Soi left = compile_node(*node.left);
            Soi right = compile_node(*node.right);
            return combine(node, std::move(left), std::move(right));
        }
        case QueryNode::Kind::Union:
            throw std::logic_error("compile requires a union-free query");
        }
        throw std::logic_error("unreachable");
    }

    static void finalize(Soi& soi)
    {
        soi.reverse_.assign(soi.vars_.size(), {});
        for (std::size_t k = 0; k < soi.ineqs_.size(); ++k) {
            const Inequality& eq = soi.ineqs_[k];
            if (eq.kind == Inequality::Kind::Subsumption && eq.target == eq.source)
                throw std::logic_error("degenerate subsumption");
            soi.reverse_[eq.source].push_back(static_cast<int>(k));
        }
        soi.plain_occ_.clear();
        soi.unbound_.clear();
    }

private:
    int intern_plain(Soi& soi, const std::string& base, int bgp_node)
    {
        auto it = soi.index_.find(base);
        if (it != soi.index_.end()) {
            record_occurrence(soi, base, bgp_node);
            return it->second;
        }
        int idx = static_cast<int>(soi.vars_.size());
        soi.vars_.push_back({base, -1});
        soi.index_.emplace(base, idx);
        soi.init_.emplace_back(BitVector::ones(db_.node_count()));
        record_occurrence(soi, base, bgp_node);
        return idx;
    }

    static void record_occurrence(Soi& soi, const std::string& base, int bgp_node)
    {
        auto& occ = soi.plain_occ_[base];
        if (occ.empty() || occ.back() != bgp_node) occ.push_back(bgp_node);
    }

    BitVector adjacency_row(std::string_view label, Direction dir, std::uint32_t node) const
    {
        BitVector v(db_.node_count());
        for (std::uint32_t j : db_.adjacency(label, dir).row(node)) v.set(j);
        return v;
    }

    Soi compile_bgp(const QueryNode& node)
    {
        Soi soi;
        soi.universe_ = db_.node_count();
        bool unsat = false;
        for (const TriplePattern& t : node.triples) {
            PatternEdge edge;
            edge.label = t.predicate;
            const bool s_var = t.subject.is_variable();
            const bool o_var = t.object.is_variable();
            if (s_var) {
                int si = intern_plain(soi, t.subject.text, node.id);
                edge.s_var = si;
                soi.init_[si].and_assign(db_.summary(t.predicate, Direction::Forward));
            } else {
                edge.s_const = true;
                edge.s_id = db_.resolve_term(t.subject.text);
            }
            if (o_var) {
                int oi = intern_plain(soi, t.object.text, node.id);
                edge.o_var = oi;
                soi.init_[oi].and_assign(db_.summary(t.predicate, Direction::Backward));
            } else {
                edge.o_const = true;
                edge.o_id = db_.resolve_term(t.object.text);
            }
            if (s_var && o_var) {
                // w <= v x F[a]  and  v <= w x B[a]
                soi.ineqs_.push_back({Inequality::Kind::Propagation, edge.o_var, edge.s_var,
                                      t.predicate, Direction::Forward});
                soi.ineqs_.push_back({Inequality::Kind::Propagation, edge.s_var, edge.o_var,
                                      t.predicate, Direction::Backward});
            } else if (s_var && !o_var) {
                // candidates for v must be predecessors of the constant
                if (edge.o_id)
                    soi.init_[edge.s_var].and_assign(
                        adjacency_row(t.predicate, Direction::Backward, *edge.o_id));
                else
                    soi.init_[edge.s_var].clear();
            } else if (!s_var && o_var) {
                if (edge.s_id)
                    soi.init_[edge.o_var].and_assign(
                        adjacency_row(t.predicate, Direction::Forward, *edge.s_id));
                else
                    soi.init_[edge.o_var].clear();
            } else {
                auto lid = db_.resolve_label(t.predicate);
                bool present = edge.s_id && edge.o_id && lid &&
                               db_.has_triple(*edge.s_id, *lid, *edge.o_id);
                if (!present) unsat = true;
            }
            soi.edges_.push_back(std::move(edge));
        }
        if (unsat)
            for (auto& init : soi.init_) init.clear();
        return soi;
    }

    // Replace the plain variable `base` in `soi` by a fresh surrogate named
    // after the deepest AST node covering its remaining plain occurrences.
    // Inequalities, edges and the init bound reference the variable by index
    // and follow automatically. Returns the variable's index.
    int rename_plain(Soi& soi, const std::string& base)
    {
        auto occ = soi.plain_occ_.find(base);
        if (occ == soi.plain_occ_.end()) return -1;
        int tag = occ->second.front();
        for (int id : occ->second) tag = ast_.lowest_common_ancestor(tag, id);
        int idx = soi.index_.at(base);
        soi.vars_[idx] = {base, tag};
        soi.index_.erase(base);
        const std::string fresh = soi.vars_[idx].name();
        if (soi.index_.count(fresh))
            throw std::logic_error("surrogate name collision: " + fresh);
        soi.index_.emplace(fresh, idx);
        soi.plain_occ_.erase(occ);
        return idx;
    }

    Soi combine(const QueryNode& node, Soi left, Soi right)
    {
        const VarSet& lvars = ast_.vars(node.left->id);
        const VarSet& lmand = ast_.mand(node.left->id);
        const VarSet& rvars = ast_.vars(node.right->id);
        const VarSet& rmand = ast_.mand(node.right->id);

        // (surrogate index within its side, side, base) pending subsumptions
        struct Pending {
            int idx;
            bool in_left;
            std::string base;
        };
        std::vector<Pending> pending;

        auto bind_side = [&](Soi& side, bool in_left, const std::string& v) {
            int renamed = rename_plain(side, v);
            if (renamed >= 0) pending.push_back({renamed, in_left, v});
            auto ub = side.unbound_.find(v);
            if (ub != side.unbound_.end()) {
                for (int idx : ub->second) pending.push_back({idx, in_left, v});
                side.unbound_.erase(ub);
            }
        };
        auto float_side = [&](Soi& side, const std::string& v) {
            int renamed = rename_plain(side, v);
            if (renamed >= 0) side.unbound_[v].push_back(renamed);
        };

        if (node.kind == QueryNode::Kind::And) {
            for (const std::string& v : lvars) {
                if (!rvars.count(v)) continue;
                bool ml = lmand.count(v) > 0, mr = rmand.count(v) > 0;
                if (ml && mr) continue;     // inner join on a mandatory variable
                if (!ml && mr) bind_side(left, true, v);
                else if (ml && !mr) bind_side(right, false, v);
                else { // optional in both conjuncts: separate, unbounded roles
                    float_side(left, v);
                    float_side(right, v);
                }
            }
        } else { // Optional
            for (const std::string& v : rvars) {
                if (lmand.count(v)) bind_side(right, false, v);
                else if (lvars.count(v)) float_side(right, v);
            }
        }

        // Merge: plain variables with equal names unify (init bounds AND),
        // surrogate names are unique by construction.
        Soi out;
        out.universe_ = left.universe_;
        std::vector<int> lmap(left.vars_.size()), rmap(right.vars_.size());
        auto absorb = [&](Soi& side, std::vector<int>& map) {
            for (std::size_t i = 0; i < side.vars_.size(); ++i) {
                const std::string name = side.vars_[i].name();
                auto it = out.index_.find(name);
                if (it != out.index_.end()) {
                    map[i] = it->second;
                    out.init_[it->second].and_assign(side.init_[i]);
                } else {
                    int idx = static_cast<int>(out.vars_.size());
                    out.vars_.push_back(side.vars_[i]);
                    out.index_.emplace(name, idx);
                    out.init_.push_back(std::move(side.init_[i]));
                    map[i] = idx;
                }
            }
            for (Inequality eq : side.ineqs_) {
                eq.target = map[eq.target];
                eq.source = map[eq.source];
                out.ineqs_.push_back(std::move(eq));
            }
            for (PatternEdge e : side.edges_) {
                if (e.s_var >= 0) e.s_var = map[e.s_var];
                if (e.o_var >= 0) e.o_var = map[e.o_var];
                out.edges_.push_back(std::move(e));
            }
            for (auto& [base, ids] : side.plain_occ_)
                for (int id : ids) record_occurrence(out, base, id);
            for (auto& [base, idxs] : side.unbound_)
                for (int idx : idxs) out.unbound_[base].push_back(map[idx]);
        };
        absorb(left, lmap);
        absorb(right, rmap);

        for (const Pending& p : pending) {
            int lower = (p.in_left ? lmap : rmap)[p.idx];
            int upper = out.index_.at(p.base);
            out.ineqs_.push_back({Inequality::Kind::Subsumption, lower, upper, "", {}});
        }
        return out;
    }

    const QueryAst& ast_;
    const GraphDatabase& db_;
};

// Compile a union-free query into its system of inequalities.
inline Soi compile(const QueryAst& ast, const GraphDatabase& db)
{
    SoiCompiler c(ast, db);
    Soi soi = c.compile();
    SoiCompiler::finalize(soi);
    return soi;
}

// Solution restricted to original variable names. A variable's vector is the
// union over its solver variables; a subsumed surrogate adds nothing, while
// independent surrogates of a fully renamed variable each contribute.
inline std::map<std::string, BitVector> project_solution(const Solution& sol, const Soi& soi)
{
    std::map<std::string, BitVector> out;
    for (std::size_t i = 0; i < soi.vars().size(); ++i) {
        const std::string& base = soi.vars()[i].base;
        auto [it, inserted] = out.emplace(base, sol.chi[i]);
        if (!inserted) it->second.or_assign(sol.chi[i]);
    }
    return out;
}

} // namespace dualsim
