#pragma once

// Command-line front door: load one database, run one or more queries,
// emit the pruned triple set, per-variable candidates and solver stats.
// Kept out of tools/ so the exit-code contract is testable in-process.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "parser.hpp"
#include "pipeline.hpp"

namespace dualsim {

enum ExitCode : int {
    ExitOk = 0,
    ExitUsage = 1,
    ExitFileNotFound = 2,
    ExitParseError = 3,
    ExitUnsupported = 4,
    ExitVerifyFailure = 5,
    ExitOracleBound = 6,
};

namespace cli_detail {

inline std::string query_id(const std::string& path)
{
    return std::filesystem::path(path).stem().string();
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::system_error(ENOENT, std::generic_category(), path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr)
{
    CLI::App app{"dual-simulation pruning for SPARQL basic/AND/UNION/OPTIONAL patterns",
                 "dualsim"};
    std::string db_path;
    std::vector<std::string> query_paths;
    std::string algorithm = "soi", order = "sparsity", eval = "auto";
    std::string emit_pruned, emit_candidates, stats_path;
    bool verify = false;
    std::size_t oracle_max_nodes = 64;

    app.add_option("--db", db_path, "graph database (N-Triples)")->required();
    app.add_option("--query", query_paths, "query file; repeatable")->required();
    app.add_option("--algorithm", algorithm, "soi|ma|naive (default soi)")
        ->check(CLI::IsMember({"soi", "ma", "naive"}));
    app.add_option("--order", order, "sparsity|textual (default sparsity)")
        ->check(CLI::IsMember({"sparsity", "textual"}));
    app.add_option("--eval", eval, "auto|row|col (default auto)")
        ->check(CLI::IsMember({"auto", "row", "col"}));
    app.add_option("--emit-pruned", emit_pruned, "write retained triples (N-Triples)");
    app.add_option("--emit-candidates", emit_candidates,
                   "write per-variable candidate terms (TSV)");
    app.add_option("--stats", stats_path, "write solver stats (one JSON object per query)");
    app.add_flag("--verify", verify, "cross-check against the brute-force oracle");
    app.add_option("--oracle-max-nodes", oracle_max_nodes,
                   "node bound for oracle runs (default 64)");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        err << "usage error: " << e.what() << "\n";
        return ExitUsage;
    }

    RunOptions opts;
    opts.algorithm = algorithm == "soi" ? Algorithm::Soi
                     : algorithm == "ma" ? Algorithm::Ma
                                         : Algorithm::Naive;
    opts.strategy.ordering =
        order == "sparsity" ? OrderingPolicy::Sparsity : OrderingPolicy::Textual;
    opts.strategy.eval = eval == "auto" ? EvalPolicy::Auto
                         : eval == "row" ? EvalPolicy::ForceRow
                                         : EvalPolicy::ForceColumn;
    opts.verify = verify;
    opts.oracle_max_nodes = oracle_max_nodes;

    GraphDatabase db;
    try {
        db = GraphDatabase::load_ntriples_file(db_path);
    } catch (const NTriplesError& e) {
        err << db_path << ": " << e.what() << "\n";
        return ExitParseError;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return ExitFileNotFound;
    }

    std::vector<LabeledEdge> all_pruned;
    std::ostringstream candidates_out;
    std::ostringstream stats_out;

    for (const std::string& qpath : query_paths) {
        std::string text;
        try {
            text = cli_detail::read_file(qpath);
        } catch (const std::exception&) {
            err << "cannot open " << qpath << "\n";
            return ExitFileNotFound;
        }
        const std::string id = cli_detail::query_id(qpath);

        QueryAst ast;
        QueryResult result;
        try {
            ast = parse_query(text);
            result = run_query(db, ast, opts);
        } catch (const UnsupportedFeatureError& e) {
            err << id << ": " << e.what() << "\n";
            return ExitUnsupported;
        } catch (const ParseError& e) {
            err << id << ": " << e.what() << "\n";
            return ExitParseError;
        } catch (const OracleBoundError& e) {
            err << id << ": " << e.what() << "\n";
            return ExitOracleBound;
        } catch (const VerifyFailure& e) {
            err << id << ": verify failed: " << e.what() << "\n";
            return ExitVerifyFailure;
        }

        out << "query " << id << ": branches=" << result.branch_count
            << " pruned=" << result.pruned.size() << "/" << db.triple_count() << " triples\n";
        for (const auto& [var, vec] : result.candidates)
            out << "  ?" << var << ": " << vec.popcount() << " candidates\n";
        out << "  iterations=" << result.stats.iterations << " updates=" << result.stats.updates
            << "\n";
        if (opts.verify)
            out << "  verify: sound"
                << (result.overapproximation ? " (overapproximation beyond matches)" : " (exact)")
                << "\n";

        all_pruned.insert(all_pruned.end(), result.pruned.begin(), result.pruned.end());

        if (!emit_candidates.empty()) {
            for (const auto& entry : result.candidates) {
                const std::string& var = entry.first;
                entry.second.for_each_set([&](std::size_t node) {
                    candidates_out << id << "\t?" << var << "\t"
                                   << db.node_term(static_cast<std::uint32_t>(node)) << "\n";
                });
            }
        }

        if (!stats_path.empty()) {
            nlohmann::json j;
            j["query"] = id;
            j["algorithm"] = algorithm;
            j["ordering"] = order;
            j["eval_mode"] = eval;
            j["branches"] = result.branch_count;
            j["iterations"] = result.stats.iterations;
            j["updates"] = result.stats.updates;
            j["row_evals"] = result.stats.row_evals;
            j["col_evals"] = result.stats.col_evals;
            j["wall_time_ms"] = result.stats.wall_ms;
            j["pruned_triples"] = result.pruned.size();
            j["db_triples"] = db.triple_count();
            nlohmann::json cand = nlohmann::json::object();
            for (const auto& [var, vec] : result.candidates) cand[var] = vec.popcount();
            j["candidates"] = cand;
            if (opts.verify) {
                j["verified"] = result.verified;
                j["overapproximation"] = result.overapproximation;
            }
            stats_out << j.dump() << "\n";
        }
    }

    if (!emit_pruned.empty()) {
        std::sort(all_pruned.begin(), all_pruned.end());
        all_pruned.erase(std::unique(all_pruned.begin(), all_pruned.end()), all_pruned.end());
        std::ofstream f(emit_pruned, std::ios::binary);
        if (!f) {
            err << "cannot write " << emit_pruned << "\n";
            return ExitFileNotFound;
        }
        f << to_ntriples(all_pruned, db);
    }
    if (!emit_candidates.empty()) {
        std::ofstream f(emit_candidates, std::ios::binary);
        if (!f) {
            err << "cannot write " << emit_candidates << "\n";
            return ExitFileNotFound;
        }
        f << candidates_out.str();
    }
    if (!stats_path.empty()) {
        std::ofstream f(stats_path, std::ios::binary);
        if (!f) {
            err << "cannot write " << stats_path << "\n";
            return ExitFileNotFound;
        }
        f << stats_out.str();
    }
    return ExitOk;
}

} // namespace dualsim
