#pragma once

// Query AST for the supported SPARQL fragment: BGPs combined by AND,
// UNION and OPTIONAL. Nodes carry stable preorder ids (assigned by
// finalize) which the inequality compiler uses to name surrogates.

#include <algorithm>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace dualsim {

struct Term {
    enum class Kind { Variable, Constant };
    Kind kind = Kind::Variable;
    // Variable name without '?', or the constant's canonical N-Triples form.
    std::string text;

    bool is_variable() const { return kind == Kind::Variable; }

    static Term var(std::string name) { return {Kind::Variable, std::move(name)}; }
    static Term constant(std::string canonical) { return {Kind::Constant, std::move(canonical)}; }

    bool operator==(const Term&) const = default;
    auto operator<=>(const Term&) const = default;
};

struct TriplePattern {
    Term subject;
    std::string predicate; // always a constant, canonical "<iri>"
    Term object;

    bool operator==(const TriplePattern&) const = default;
    auto operator<=>(const TriplePattern&) const = default;
};

struct QueryNode;
using NodePtr = std::shared_ptr<QueryNode>;

struct QueryNode {
    enum class Kind { Bgp, And, Union, Optional };
    Kind kind;
    int id = -1; // preorder index, set by QueryAst::finalize
    std::vector<TriplePattern> triples; // Bgp only, kept sorted & deduplicated
    NodePtr left, right;                // And / Union / Optional
};

inline NodePtr make_bgp(std::vector<TriplePattern> triples)
{
    std::sort(triples.begin(), triples.end());
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
    auto n = std::make_shared<QueryNode>();
    n->kind = QueryNode::Kind::Bgp;
    n->triples = std::move(triples);
    return n;
}

inline NodePtr make_binary(QueryNode::Kind kind, NodePtr l, NodePtr r)
{
    auto n = std::make_shared<QueryNode>();
    n->kind = kind;
    n->left = std::move(l);
    n->right = std::move(r);
    return n;
}

inline NodePtr make_and(NodePtr l, NodePtr r)
{
    return make_binary(QueryNode::Kind::And, std::move(l), std::move(r));
}
inline NodePtr make_union(NodePtr l, NodePtr r)
{
    return make_binary(QueryNode::Kind::Union, std::move(l), std::move(r));
}
inline NodePtr make_optional(NodePtr l, NodePtr r)
{
    return make_binary(QueryNode::Kind::Optional, std::move(l), std::move(r));
}

inline NodePtr clone_tree(const NodePtr& n)
{
    auto c = std::make_shared<QueryNode>(*n);
    if (n->left) c->left = clone_tree(n->left);
    if (n->right) c->right = clone_tree(n->right);
    return c;
}

using VarSet = std::set<std::string>;

// Finalized query: ids assigned, per-node variable metadata precomputed.
class QueryAst {
public:
    QueryAst() = default;

    explicit QueryAst(NodePtr root) : root_(std::move(root)) { finalize(); }

    const NodePtr& root() const { return root_; }
    int node_count() const { return static_cast<int>(nodes_.size()); }
    const QueryNode& node(int id) const { return *nodes_[id]; }
    int parent(int id) const { return parents_[id]; }
    int depth(int id) const { return depths_[id]; }

    const VarSet& vars(int id) const { return vars_[id]; }
    const VarSet& mand(int id) const { return mand_[id]; }
    const VarSet& vars() const { return vars_[0]; }
    const VarSet& mand() const { return mand_[0]; }

    bool has_union() const
    {
        for (const auto* n : nodes_)
            if (n->kind == QueryNode::Kind::Union) return true;
        return false;
    }

    int lowest_common_ancestor(int a, int b) const
    {
        while (a != b) {
            if (depths_[a] < depths_[b])
                b = parents_[b];
            else
                a = parents_[a];
        }
        return a;
    }

private:
    void finalize()
    {
        nodes_.clear();
        parents_.clear();
        depths_.clear();
        assign(root_.get(), -1, 0);
        vars_.resize(nodes_.size());
        mand_.resize(nodes_.size());
        compute_meta(root_.get());
    }

    void assign(QueryNode* n, int parent, int depth)
    {
        n->id = static_cast<int>(nodes_.size());
        nodes_.push_back(n);
        parents_.push_back(parent);
        depths_.push_back(depth);
        if (n->left) assign(n->left.get(), n->id, depth + 1);
        if (n->right) assign(n->right.get(), n->id, depth + 1);
    }

    void compute_meta(const QueryNode* n)
    {
        VarSet& v = vars_[n->id];
        VarSet& m = mand_[n->id];
        switch (n->kind) {
        case QueryNode::Kind::Bgp:
            for (const auto& t : n->triples) {
                if (t.subject.is_variable()) v.insert(t.subject.text);
                if (t.object.is_variable()) v.insert(t.object.text);
            }
            m = v;
            break;
        case QueryNode::Kind::And:
        case QueryNode::Kind::Union:
            compute_meta(n->left.get());
            compute_meta(n->right.get());
            v = vars_[n->left->id];
            v.insert(vars_[n->right->id].begin(), vars_[n->right->id].end());
            // Under UNION a variable may be absent from a branch, so the
            // mandatory set is only used for union-free queries, where
            // And/Bgp/Optional rules apply.
            m = mand_[n->left->id];
            m.insert(mand_[n->right->id].begin(), mand_[n->right->id].end());
            break;
        case QueryNode::Kind::Optional:
            compute_meta(n->left.get());
            compute_meta(n->right.get());
            v = vars_[n->left->id];
            v.insert(vars_[n->right->id].begin(), vars_[n->right->id].end());
            m = mand_[n->left->id];
            break;
        }
    }

    NodePtr root_;
    std::vector<QueryNode*> nodes_;
    std::vector<int> parents_;
    std::vector<int> depths_;
    std::vector<VarSet> vars_;
    std::vector<VarSet> mand_;
};

// mand(Q) per the recursive definition; requires a union-free query.
inline VarSet mand(const QueryAst& ast) { return ast.mand(); }

// Diagnostic only: true iff for every sub-query L OPT R, every variable of
// R that also occurs outside the L OPT R subtree occurs in L.
inline bool well_designed(const QueryAst& ast)
{
    struct Walk {
        const QueryAst& ast;
        bool ok = true;

        // Count variable occurrences outside a given subtree by walking the
        // whole tree and skipping the subtree.
        void count_outside(const QueryNode* n, const QueryNode* skip, VarSet& out) const
        {
            if (n == skip) return;
            if (n->kind == QueryNode::Kind::Bgp) {
                for (const auto& t : n->triples) {
                    if (t.subject.is_variable()) out.insert(t.subject.text);
                    if (t.object.is_variable()) out.insert(t.object.text);
                }
                return;
            }
            count_outside(n->left.get(), skip, out);
            count_outside(n->right.get(), skip, out);
        }

        void visit(const QueryNode* n)
        {
            if (n->kind == QueryNode::Kind::Bgp) return;
            if (n->kind == QueryNode::Kind::Optional) {
                VarSet outside;
                count_outside(ast.root().get(), n, outside);
                const VarSet& rvars = ast.vars(n->right->id);
                const VarSet& lvars = ast.vars(n->left->id);
                for (const auto& v : rvars)
                    if (outside.count(v) && !lvars.count(v)) ok = false;
            }
            visit(n->left.get());
            visit(n->right.get());
        }
    };
    Walk w{ast};
    w.visit(ast.root().get());
    return w.ok;
}

// DNF-style rewrite: distributes UNION out of AND and OPTIONAL operands.
// A union-free input comes back as the singleton list holding itself.
inline std::vector<QueryAst> to_union_free(const QueryAst& ast)
{
    struct Rec {
        std::vector<NodePtr> operator()(const NodePtr& n) const
        {
            switch (n->kind) {
            case QueryNode::Kind::Bgp:
                return {n};
            case QueryNode::Kind::Union: {
                auto l = (*this)(n->left);
                auto r = (*this)(n->right);
                l.insert(l.end(), r.begin(), r.end());
                return l;
            }
            default: {
                auto l = (*this)(n->left);
                auto r = (*this)(n->right);
                std::vector<NodePtr> out;
                out.reserve(l.size() * r.size());
                for (const auto& a : l)
                    for (const auto& b : r) out.push_back(make_binary(n->kind, a, b));
                return out;
            }
            }
        }
    };
    if (!ast.has_union()) return {ast};
    std::vector<QueryAst> out;
    for (const auto& branch : Rec{}(ast.root())) out.emplace_back(clone_tree(branch));
    return out;
}

// Canonical text form; parsing it back yields a structurally identical AST.
inline std::string print_term(const Term& t)
{
    return t.is_variable() ? "?" + t.text : t.text;
}

inline void print_node(const QueryNode& n, std::string& out)
{
    switch (n.kind) {
    case QueryNode::Kind::Bgp:
        out += "{ ";
        for (const auto& t : n.triples) {
            out += print_term(t.subject) + " " + t.predicate + " " + print_term(t.object) + " . ";
        }
        out += "}";
        break;
    case QueryNode::Kind::And:
        out += "{ ";
        print_node(*n.left, out);
        out += " ";
        print_node(*n.right, out);
        out += " }";
        break;
    case QueryNode::Kind::Union:
        out += "{ ";
        print_node(*n.left, out);
        out += " UNION ";
        print_node(*n.right, out);
        out += " }";
        break;
    case QueryNode::Kind::Optional:
        out += "{ ";
        print_node(*n.left, out);
        out += " OPTIONAL ";
        print_node(*n.right, out);
        out += " }";
        break;
    }
}

inline std::string print_query(const QueryAst& ast)
{
    std::string out = "SELECT * WHERE ";
    print_node(*ast.root(), out);
    return out;
}

} // namespace dualsim
