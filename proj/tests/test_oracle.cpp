#include <catch2/catch_amalgamated.hpp>

#include <dualsim/oracle.hpp>
#include <dualsim/parser.hpp>

#include "testutil.hpp"

using namespace dualsim;

namespace {

Match make_match(const GraphDatabase& db,
                 std::initializer_list<std::pair<const char*, const char*>> binds)
{
    Match mu;
    for (const auto& [var, term] : binds) mu.emplace(var, *db.resolve_term(term));
    return mu;
}

// Second-opinion oracle for BGPs: try every total assignment vars -> nodes.
MatchSet all_assignments_bgp(const std::vector<TriplePattern>& triples, const GraphDatabase& db)
{
    std::vector<std::string> vars;
    {
        VarSet vs;
        for (const auto& t : triples) {
            if (t.subject.is_variable()) vs.insert(t.subject.text);
            if (t.object.is_variable()) vs.insert(t.object.text);
        }
        vars.assign(vs.begin(), vs.end());
    }
    MatchSet out;
    std::vector<std::uint32_t> assign(vars.size(), 0);
    const std::uint32_t n = static_cast<std::uint32_t>(db.node_count());
    if (n == 0) return out;
    for (;;) {
        Match mu;
        for (std::size_t i = 0; i < vars.size(); ++i) mu.emplace(vars[i], assign[i]);
        bool ok = true;
        for (const auto& t : triples) {
            auto value = [&](const Term& term) -> std::optional<std::uint32_t> {
                if (term.is_variable()) return mu.at(term.text);
                return db.resolve_term(term.text);
            };
            auto s = value(t.subject), o = value(t.object);
            auto l = db.resolve_label(t.predicate);
            if (!s || !o || !l || !db.has_triple(*s, *l, *o)) {
                ok = false;
                break;
            }
        }
        if (ok) out.insert(mu);
        std::size_t k = 0;
        for (; k < assign.size(); ++k) {
            if (++assign[k] < n) break;
            assign[k] = 0;
        }
        if (k == assign.size()) break;
    }
    return out;
}

} // namespace

TEST_CASE("the movie BGP has exactly the two bold matches", "[oracle]")
{
    GraphDatabase db = testutil::load_fixture_db("movies.nt");
    MatchSet matches = enumerate_matches(testutil::load_fixture_query("directors.rq"), db);
    MatchSet expected = {
        make_match(db, {{"director", "<B_De_Palma>"},
                        {"movie", "<Mission_Impossible>"},
                        {"coworker", "<D_Koepp>"}}),
        make_match(db, {{"director", "<G_Hamilton>"},
                        {"movie", "<Goldfinger>"},
                        {"coworker", "<H_Saltzman>"}}),
    };
    CHECK(matches == expected);
}

TEST_CASE("the optional movie query matches four directors, two without coworker",
          "[oracle]")
{
    GraphDatabase db = testutil::load_fixture_db("movies.nt");
    MatchSet matches = enumerate_matches(testutil::load_fixture_query("directors_optional.rq"), db);
    CHECK(matches.size() == 4);
    std::set<std::string> directors;
    std::size_t without_coworker = 0;
    for (const Match& mu : matches) {
        directors.insert(db.node_term(mu.at("director")));
        if (!mu.count("coworker")) ++without_coworker;
    }
    CHECK(directors == std::set<std::string>{"<B_De_Palma>", "<G_Hamilton>", "<T_Young>",
                                             "<D_Koepp>"});
    CHECK(without_coworker == 2);
}

TEST_CASE("the non-well-designed conjunction has exactly the two figure matches", "[oracle]")
{
    GraphDatabase db = testutil::load_fixture_db("six_nodes.nt");
    MatchSet matches = enumerate_matches(testutil::load_fixture_query("optional_conjunction.rq"), db);
    MatchSet expected = {
        make_match(db, {{"v1", "<1>"}, {"v2", "<2>"}, {"v3", "<4>"}, {"v4", "<5>"}}),
        make_match(db, {{"v1", "<1>"}, {"v2", "<3>"}, {"v3", "<4>"}, {"v4", "<5>"}}),
    };
    CHECK(matches == expected);
}

TEST_CASE("BGP enumeration equals the try-everything homomorphism check", "[oracle]")
{
    testutil::Rng rng(801);
    for (int k = 0; k < 120; ++k) {
        GraphDatabase db = testutil::random_db(rng, 6, 3);
        QueryAst ast(testutil::random_bgp(rng, 3, 3, db.node_count(), 15));
        CHECK(enumerate_matches(ast, db) == all_assignments_bgp(ast.root()->triples, db));
    }
}

TEST_CASE("AND of singleton BGPs equals the merged BGP", "[oracle]")
{
    testutil::Rng rng(802);
    for (int k = 0; k < 60; ++k) {
        GraphDatabase db = testutil::random_db(rng, 6, 3);
        auto triples = testutil::random_triples(rng, 3, 3, db.node_count(), 10, 2);
        QueryAst merged(make_bgp(triples));
        QueryAst split(make_and(make_bgp({triples[0]}), make_bgp({triples[1]})));
        // compatible-join semantics coincides with homomorphisms of the union
        CHECK(enumerate_matches(split, db) == enumerate_matches(merged, db));
    }
}

TEST_CASE("pairwise dual simulation reproduces the worked example", "[oracle]")
{
    GraphDatabase db = testutil::load_fixture_db("one_director.nt");
    QueryAst ast = testutil::load_fixture_query("two_directors.rq");
    auto rel = naive_dual_simulation(ast.root()->triples, db);
    auto term_set = [&](const char* var) {
        std::set<std::string> out;
        for (std::uint32_t id : rel.at(var)) out.insert(db.node_term(id));
        return out;
    };
    CHECK(term_set("place") == std::set<std::string>{"<place>"});
    CHECK(term_set("director1") == std::set<std::string>{"<director>"});
    CHECK(term_set("director2") == std::set<std::string>{"<director>"});
    CHECK(term_set("coworker") == std::set<std::string>{"<coworker>"});
    CHECK(term_set("movie") == std::set<std::string>{"<movie>"});
}

TEST_CASE("a label absent from the database empties the relation", "[oracle]")
{
    GraphDatabase db = testutil::load_fixture_db("one_director.nt");
    QueryAst ast = parse_query("SELECT * WHERE { ?x <missing_label> ?y . }");
    auto rel = naive_dual_simulation(ast.root()->triples, db);
    CHECK(rel.at("x").empty());
    CHECK(rel.at("y").empty());
}

TEST_CASE("the pairwise fixpoint is stable under re-checking", "[oracle]")
{
    testutil::Rng rng(803);
    for (int k = 0; k < 60; ++k) {
        GraphDatabase db = testutil::random_db(rng, 8, 3);
        QueryAst ast(testutil::random_bgp(rng, 4, 3, db.node_count(), 10));
        auto rel = naive_dual_simulation(ast.root()->triples, db);
        // every surviving pair has witnesses for every incident pattern edge
        auto candidates_of = [&](const Term& t) -> std::set<std::uint32_t> {
            if (t.is_variable()) return rel.at(t.text);
            if (auto id = db.resolve_term(t.text)) return {*id};
            return {};
        };
        for (const auto& t : ast.root()->triples) {
            auto lid = db.resolve_label(t.predicate);
            if (t.subject.is_variable()) // frozen constants are never refined
                for (std::uint32_t x : candidates_of(t.subject)) {
                    bool ok = false;
                    for (std::uint32_t y : candidates_of(t.object))
                        if (lid && db.has_triple(x, *lid, y)) ok = true;
                    CHECK(ok);
                }
            if (t.object.is_variable())
                for (std::uint32_t y : candidates_of(t.object)) {
                    bool ok = false;
                    for (std::uint32_t x : candidates_of(t.subject))
                        if (lid && db.has_triple(x, *lid, y)) ok = true;
                    CHECK(ok);
                }
        }
    }
}

TEST_CASE("the oracle refuses databases above its node bound", "[oracle]")
{
    std::ostringstream nt;
    for (int i = 0; i < 70; ++i) nt << "<n" << i << "> <p> <n" << (i + 1) % 70 << "> .\n";
    GraphDatabase db = GraphDatabase::load_ntriples(nt.str());
    QueryAst ast = parse_query("SELECT * WHERE { ?x <p> ?y . }");
    CHECK_THROWS_AS(enumerate_matches(ast, db), OracleBoundError);
    CHECK_THROWS_AS(naive_dual_simulation(ast.root()->triples, db), OracleBoundError);
    CHECK_NOTHROW(enumerate_matches(ast, db, 128));
}
