#include <catch2/catch_amalgamated.hpp>

#include <dualsim/parser.hpp>
#include <dualsim/pipeline.hpp>

#include "testutil.hpp"

using namespace dualsim;

namespace {

using TermTriple = std::tuple<std::string, std::string, std::string>;

std::set<TermTriple> as_terms(const std::vector<LabeledEdge>& triples, const GraphDatabase& db)
{
    std::set<TermTriple> out;
    for (const auto& t : triples)
        out.insert({db.node_term(t.subject), db.label_term(t.label), db.node_term(t.object)});
    return out;
}

// The triples a sound pruning must keep: for every match of every
// union-free branch, the database edges used by some justification of the
// match. A bare left OPTIONAL match may coincidentally instantiate an
// optional-branch pattern edge it never used; such edges are NOT required.
struct Justified {
    Match mu;
    std::set<TermTriple> uses;
};

std::vector<Justified> justified_matches(const QueryNode& n, const GraphDatabase& db)
{
    std::vector<Justified> out;
    switch (n.kind) {
    case QueryNode::Kind::Bgp: {
        for (const Match& mu : oracle_detail::enumerate_bgp(n.triples, db)) {
            Justified j{mu, {}};
            for (const auto& t : n.triples) {
                auto value = [&](const Term& term) {
                    return term.is_variable() ? mu.at(term.text) : *db.resolve_term(term.text);
                };
                j.uses.insert({db.node_term(value(t.subject)), t.predicate,
                               db.node_term(value(t.object))});
            }
            out.push_back(std::move(j));
        }
        return out;
    }
    case QueryNode::Kind::Union: {
        out = justified_matches(*n.left, db);
        auto r = justified_matches(*n.right, db);
        out.insert(out.end(), r.begin(), r.end());
        return out;
    }
    case QueryNode::Kind::And:
    case QueryNode::Kind::Optional: {
        auto l = justified_matches(*n.left, db);
        auto r = justified_matches(*n.right, db);
        for (const Justified& a : l) {
            bool joined = false;
            for (const Justified& b : r) {
                if (!compatible(a.mu, b.mu)) continue;
                joined = true;
                Justified j{merge(a.mu, b.mu), a.uses};
                j.uses.insert(b.uses.begin(), b.uses.end());
                out.push_back(std::move(j));
            }
            if (n.kind == QueryNode::Kind::Optional && !joined) out.push_back(a);
        }
        return out;
    }
    }
    return out;
}

std::set<TermTriple> required_triples(const QueryAst& ast, const GraphDatabase& db)
{
    std::set<TermTriple> out;
    for (const QueryAst& branch : to_union_free(ast))
        for (const Justified& j : justified_matches(*branch.root(), db))
            out.insert(j.uses.begin(), j.uses.end());
    return out;
}

} // namespace

TEST_CASE("pruning the movie query keeps exactly the four bold edges", "[prune]")
{
    GraphDatabase db = testutil::load_fixture_db("movies.nt");
    Soi soi = compile(testutil::load_fixture_query("directors.rq"), db);
    auto [sol, stats] = solve(soi, db);
    auto pruned = prune_triples(sol, soi, db);
    CHECK(as_terms(pruned, db) ==
          std::set<TermTriple>{
              {"<B_De_Palma>", "<directed>", "<Mission_Impossible>"},
              {"<G_Hamilton>", "<directed>", "<Goldfinger>"},
              {"<B_De_Palma>", "<worked_with>", "<D_Koepp>"},
              {"<G_Hamilton>", "<worked_with>", "<H_Saltzman>"},
          });
}

TEST_CASE("an empty solution prunes everything away", "[prune]")
{
    GraphDatabase db = testutil::load_fixture_db("movies.nt");
    Soi soi = compile(parse_query("SELECT * WHERE { ?v <directed> ?m . ?v <no_label> ?w . }"), db);
    auto [sol, stats] = solve(soi, db);
    CHECK(prune_triples(sol, soi, db).empty());
}

TEST_CASE("constant endpoints prune through adjacency rows", "[prune]")
{
    GraphDatabase db = testutil::load_fixture_db("movies.nt");
    Soi soi = compile(parse_query("SELECT * WHERE { ?v <directed> <Goldfinger> . }"), db);
    auto [sol, stats] = solve(soi, db);
    CHECK(as_terms(prune_triples(sol, soi, db), db) ==
          std::set<TermTriple>{{"<G_Hamilton>", "<directed>", "<Goldfinger>"}});

    Soi cc = compile(parse_query("SELECT * WHERE { <Goldfinger> <genre> <Action> . }"), db);
    auto [ccsol, ccstats] = solve(cc, db);
    CHECK(as_terms(prune_triples(ccsol, cc, db), db) ==
          std::set<TermTriple>{{"<Goldfinger>", "<genre>", "<Action>"}});
}

TEST_CASE("a fully constant query prunes to its own edge", "[prune]")
{
    GraphDatabase db = testutil::load_fixture_db("movies.nt");
    QueryAst ast = parse_query("SELECT * WHERE { <Goldfinger> <genre> <Action> . }");
    RunOptions opts;
    opts.verify = true;
    QueryResult result = run_query(db, ast, opts);
    CHECK(result.candidates.empty());
    CHECK(as_terms(result.pruned, db) ==
          std::set<TermTriple>{{"<Goldfinger>", "<genre>", "<Action>"}});
    CHECK(result.verified);
}

TEST_CASE("pruned sets stay inside the database and cover oracle matches", "[prune]")
{
    testutil::Rng rng(901);
    for (int k = 0; k < 150; ++k) {
        GraphDatabase db = testutil::random_db(rng, 10, 4);
        QueryAst ast(testutil::random_query(rng, 3, 4, 3, db.node_count(), 10, 20));
        RunOptions opts;
        QueryResult result = run_query(db, ast, opts);

        std::set<TermTriple> db_triples;
        db.for_each_triple([&](const GraphDatabase::Triple& t) {
            db_triples.insert(
                {db.node_term(t.subject), db.label_term(t.label), db.node_term(t.object)});
        });
        std::set<TermTriple> pruned = as_terms(result.pruned, db);
        for (const auto& t : pruned) CHECK(db_triples.count(t) == 1);
        for (const auto& t : required_triples(ast, db)) {
            INFO(print_query(ast));
            CHECK(pruned.count(t) == 1);
        }
    }
}

TEST_CASE("pruned output is N-Triples that reloads as a subset", "[prune]")
{
    GraphDatabase db = testutil::load_fixture_db("movies.nt");
    Soi soi = compile(testutil::load_fixture_query("directors_optional.rq"), db);
    auto [sol, stats] = solve(soi, db);
    auto pruned = prune_triples(sol, soi, db);
    GraphDatabase again = GraphDatabase::load_ntriples(to_ntriples(pruned, db));
    CHECK(again.triple_count() == pruned.size());
    again.for_each_triple([&](const GraphDatabase::Triple& t) {
        auto s = db.resolve_term(again.node_term(t.subject));
        auto l = db.resolve_label(again.label_term(t.label));
        auto o = db.resolve_term(again.node_term(t.object));
        REQUIRE(s);
        REQUIRE(l);
        REQUIRE(o);
        CHECK(db.has_triple(*s, *l, *o));
    });
}

TEST_CASE("union branches prune under original variable names", "[prune]")
{
    GraphDatabase db = testutil::load_fixture_db("movies.nt");
    QueryAst ast = parse_query(
        "SELECT * WHERE { { ?m <genre> ?g . } UNION { ?m <awarded> ?g . } }");
    RunOptions opts;
    QueryResult result = run_query(db, ast, opts);
    CHECK(result.branch_count == 2);
    std::set<TermTriple> pruned = as_terms(result.pruned, db);
    CHECK(pruned.count({"<Goldfinger>", "<genre>", "<Action>"}) == 1);
    CHECK(pruned.count({"<Thunderball>", "<awarded>", "<Oscar>"}) == 1);
    // candidate vectors are united across branches under the original names
    CHECK(result.candidates.count("m") == 1);
    CHECK(result.candidates.count("g") == 1);
    auto m_terms = testutil::terms_of(result.candidates.at("m"), db);
    CHECK(m_terms.count("<Goldfinger>") == 1);      // genre branch
    CHECK(m_terms.count("<From_Russia_with_Love>")); // awarded branch
}
