#pragma once

// Parser for the supported SPARQL fragment:
//
//   PREFIX ns: <iri> ...
//   SELECT * WHERE { pattern }
//
// where a pattern is a run of triple patterns separated by '.', nested
// groups '{ ... }' (adjacency folds left into AND), 'OPTIONAL { ... }'
// (binding to the accumulated left context of its group) and
// '{ ... } UNION { ... }' chains. Predicates must be constants; other
// SPARQL features are rejected with an "unsupported feature" error that
// names the keyword.

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ast.hpp"
#include "graph.hpp"

namespace dualsim {

struct ParseError : std::runtime_error {
    ParseError(std::size_t line, std::size_t col, const std::string& what)
        : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                             std::to_string(col) + ": " + what),
          line(line), column(col)
    {
    }
    std::size_t line, column;
};

struct UnsupportedFeatureError : std::runtime_error {
    explicit UnsupportedFeatureError(const std::string& feature)
        : std::runtime_error("unsupported feature: " + feature), feature(feature)
    {
    }
    std::string feature;
};

namespace sparql_detail {

enum class TokType { Keyword, Var, Iri, Pname, Literal, LBrace, RBrace, Dot, Star, End };

struct Token {
    TokType type;
    std::string text;        // keyword upper-cased; var without '?'; iri canonical
    std::string local;       // pname local part (text holds the prefix)
    std::size_t line, col;
};

inline const std::unordered_set<std::string>& unsupported_keywords()
{
    static const std::unordered_set<std::string> kw = {
        "FILTER", "BIND", "MINUS", "GRAPH", "SERVICE", "VALUES", "EXISTS",
        "ASK", "CONSTRUCT", "DESCRIBE", "ORDER", "LIMIT", "OFFSET", "GROUP",
        "HAVING", "DISTINCT", "REDUCED", "FROM", "INSERT", "DELETE"};
    return kw;
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next()
    {
        skip_ws();
        std::size_t line = line_, col = col_;
        if (pos_ >= text_.size()) return {TokType::End, "", "", line, col};
        char c = text_[pos_];
        if (c == '{') { advance(); return {TokType::LBrace, "{", "", line, col}; }
        if (c == '}') { advance(); return {TokType::RBrace, "}", "", line, col}; }
        if (c == '.') { advance(); return {TokType::Dot, ".", "", line, col}; }
        if (c == '*') { advance(); return {TokType::Star, "*", "", line, col}; }
        if (c == '<') return lex_iri(line, col);
        if (c == '?' || c == '$') return lex_var(line, col);
        if (c == '"') return lex_literal(line, col);
        if (c == '_' && pos_ + 1 < text_.size() && text_[pos_ + 1] == ':')
            throw UnsupportedFeatureError("blank node in pattern");
        if (std::isalpha(static_cast<unsigned char>(c))) return lex_word(line, col);
        fail(line, col, std::string("unexpected character '") + c + "'");
    }

private:
    [[noreturn]] void fail(std::size_t line, std::size_t col, const std::string& what)
    {
        throw ParseError(line, col, what);
    }

    void advance()
    {
        if (text_[pos_] == '\n') { ++line_; col_ = 1; }
        else ++col_;
        ++pos_;
    }

    void skip_ws()
    {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') { // comment to end of line
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                break;
            }
        }
    }

    Token lex_iri(std::size_t line, std::size_t col)
    {
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '>') advance();
        if (pos_ >= text_.size()) fail(line, col, "unterminated IRI");
        advance(); // '>'
        return {TokType::Iri, std::string(text_.substr(start, pos_ - start)), "", line, col};
    }

    Token lex_var(std::size_t line, std::size_t col)
    {
        advance(); // '?'
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_'))
            advance();
        if (pos_ == start) fail(line, col, "empty variable name");
        return {TokType::Var, std::string(text_.substr(start, pos_ - start)), "", line, col};
    }

    Token lex_literal(std::size_t line, std::size_t col)
    {
        advance(); // opening quote
        std::string body;
        bool closed = false;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\\') {
                if (pos_ + 1 >= text_.size()) fail(line, col, "dangling escape");
                char e = text_[pos_ + 1];
                advance();
                advance();
                switch (e) {
                case '"': body += '"'; break;
                case '\\': body += '\\'; break;
                case 'n': body += '\n'; break;
                case 't': body += '\t'; break;
                default: fail(line, col, std::string("unsupported escape \\") + e);
                }
            } else if (c == '"') {
                advance();
                closed = true;
                break;
            } else {
                body += c;
                advance();
            }
        }
        if (!closed) fail(line, col, "unterminated literal");
        std::string term = "\"" + detail::escape_literal(body) + "\"";
        if (pos_ < text_.size() && text_[pos_] == '@') {
            std::size_t start = pos_;
            advance();
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                           text_[pos_] == '-'))
                advance();
            term += text_.substr(start, pos_ - start);
        } else if (pos_ + 1 < text_.size() && text_[pos_] == '^' && text_[pos_ + 1] == '^') {
            advance();
            advance();
            if (pos_ >= text_.size() || text_[pos_] != '<') fail(line, col, "expected datatype IRI");
            Token dt = lex_iri(line_, col_);
            term += "^^" + dt.text;
        }
        return {TokType::Literal, term, "", line, col};
    }

    Token lex_word(std::size_t line, std::size_t col)
    {
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_' || text_[pos_] == '-'))
            advance();
        std::string word(text_.substr(start, pos_ - start));
        if (pos_ < text_.size() && text_[pos_] == ':') {
            advance(); // ':'
            std::size_t lstart = pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                           text_[pos_] == '_' || text_[pos_] == '-'))
                advance();
            return {TokType::Pname, word, std::string(text_.substr(lstart, pos_ - lstart)),
                    line, col};
        }
        std::string upper = word;
        for (char& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        if (unsupported_keywords().count(upper)) throw UnsupportedFeatureError(upper);
        return {TokType::Keyword, upper, "", line, col};
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1, col_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { shift(); }

    QueryAst parse()
    {
        parse_prologue();
        expect_keyword("SELECT");
        if (cur_.type == TokType::Var) throw UnsupportedFeatureError("SELECT projection list");
        if (cur_.type != TokType::Star) fail("expected '*' after SELECT");
        shift();
        expect_keyword("WHERE");
        NodePtr root = parse_group();
        if (cur_.type != TokType::End) fail("trailing content after query");
        return QueryAst(std::move(root));
    }

private:
    [[noreturn]] void fail(const std::string& what)
    {
        throw ParseError(cur_.line, cur_.col, what);
    }

    void shift() { cur_ = lexer_.next(); }

    bool at_keyword(std::string_view kw) const
    {
        return cur_.type == TokType::Keyword && cur_.text == kw;
    }

    void expect_keyword(std::string_view kw)
    {
        if (!at_keyword(kw)) fail("expected " + std::string(kw));
        shift();
    }

    void parse_prologue()
    {
        while (at_keyword("PREFIX")) {
            shift();
            if (cur_.type != TokType::Pname || !cur_.local.empty())
                fail("expected prefix name before IRI");
            std::string name = cur_.text;
            shift();
            if (cur_.type != TokType::Iri) fail("expected IRI in PREFIX declaration");
            const std::string& iri = cur_.text;
            prefixes_[name] = iri.substr(1, iri.size() - 2);
            shift();
        }
    }

    bool at_term_start() const
    {
        return cur_.type == TokType::Var || cur_.type == TokType::Iri ||
               cur_.type == TokType::Pname || cur_.type == TokType::Literal;
    }

    Term parse_term()
    {
        switch (cur_.type) {
        case TokType::Var: {
            Term t = Term::var(cur_.text);
            shift();
            return t;
        }
        case TokType::Iri: {
            Term t = Term::constant(cur_.text);
            shift();
            return t;
        }
        case TokType::Pname: {
            Term t = Term::constant(expand_pname());
            shift();
            return t;
        }
        case TokType::Literal: {
            Term t = Term::constant(cur_.text);
            shift();
            return t;
        }
        default:
            fail("expected a term");
        }
    }

    std::string expand_pname()
    {
        auto it = prefixes_.find(cur_.text);
        if (it == prefixes_.end()) fail("unknown prefix '" + cur_.text + ":'");
        return "<" + it->second + cur_.local + ">";
    }

    std::string parse_predicate()
    {
        if (cur_.type == TokType::Var) throw UnsupportedFeatureError("variable predicate");
        if (cur_.type == TokType::Iri) {
            std::string p = cur_.text;
            shift();
            return p;
        }
        if (cur_.type == TokType::Pname) {
            std::string p = expand_pname();
            shift();
            return p;
        }
        fail("expected a constant predicate");
    }

    NodePtr parse_triples_run()
    {
        std::vector<TriplePattern> triples;
        for (;;) {
            Term s = parse_term();
            std::string p = parse_predicate();
            Term o = parse_term();
            triples.push_back({std::move(s), std::move(p), std::move(o)});
            if (cur_.type == TokType::Dot) {
                shift();
                if (at_term_start()) continue;
            }
            break;
        }
        return make_bgp(std::move(triples));
    }

    // A group element that is itself a group, optionally chained by UNION.
    NodePtr parse_group_or_union()
    {
        NodePtr n = parse_group();
        while (at_keyword("UNION")) {
            shift();
            if (cur_.type != TokType::LBrace) fail("expected group after UNION");
            n = make_union(std::move(n), parse_group());
        }
        return n;
    }

    NodePtr parse_group()
    {
        if (cur_.type != TokType::LBrace) fail("expected '{'");
        shift();
        NodePtr acc;
        while (cur_.type != TokType::RBrace) {
            if (cur_.type == TokType::End) fail("unterminated group");
            bool optional = false;
            NodePtr item;
            if (at_keyword("OPTIONAL")) {
                shift();
                if (cur_.type != TokType::LBrace) fail("expected group after OPTIONAL");
                item = parse_group();
                optional = true;
            } else if (cur_.type == TokType::LBrace) {
                item = parse_group_or_union();
            } else if (at_term_start()) {
                item = parse_triples_run();
            } else if (cur_.type == TokType::Keyword) {
                fail("unexpected keyword " + cur_.text + " in group");
            } else {
                fail("unexpected token '" + cur_.text + "' in group");
            }
            if (cur_.type == TokType::Dot) shift(); // optional '.' after a group element
            if (optional) {
                if (!acc) fail("OPTIONAL without a preceding pattern");
                acc = make_optional(std::move(acc), std::move(item));
            } else {
                acc = acc ? make_and(std::move(acc), std::move(item)) : std::move(item);
            }
        }
        shift(); // '}'
        if (!acc) fail("empty group");
        return acc;
    }

    Lexer lexer_;
    Token cur_{TokType::End, "", "", 0, 0};
    std::unordered_map<std::string, std::string> prefixes_;
};

} // namespace sparql_detail

inline QueryAst parse_query(std::string_view text)
{
    return sparql_detail::Parser(text).parse();
}

} // namespace dualsim
