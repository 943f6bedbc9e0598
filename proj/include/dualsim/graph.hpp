#pragma once

// Dictionary-encoded graph database. Ingests a line-oriented N-Triples
// subset (IRIs, literals with \" \\ \n \t escapes plus lang/datatype tags,
// blank nodes, # comments) and keeps one forward and one backward adjacency
// matrix per predicate, together with their row summaries.
//
// Node ids are dense 0-based integers in first-seen order (subject before
// object, per triple). Predicates live in their own dictionary and never
// become nodes. Triples are deduplicated: E_D is a set.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bitmatrix.hpp"
#include "bitvector.hpp"

namespace dualsim {

enum class Direction { Forward, Backward };

struct NTriplesError : std::runtime_error {
    NTriplesError(std::size_t line, const std::string& what)
        : std::runtime_error("N-Triples line " + std::to_string(line) + ": " + what),
          line_number(line)
    {
    }
    std::size_t line_number;
};

namespace detail {

// Canonical form of a literal body: the four honored escapes re-applied,
// so equal literals always get equal dictionary keys.
inline std::string escape_literal(std::string_view raw)
{
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace detail

// One parsed RDF term in canonical text form: "<iri>", "_:name", or
// DQUOTE body DQUOTE with optional @lang / ^^<datatype> suffix.
struct NTriplesParser {
    std::string_view text;
    std::size_t pos = 0;
    std::size_t line = 0;

    void skip_ws()
    {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }

    bool at_end()
    {
        skip_ws();
        return pos >= text.size();
    }

    [[noreturn]] void fail(const std::string& what) { throw NTriplesError(line, what); }

    // pos points just past '<'; returns the canonical "<...>" form
    std::string parse_iri()
    {
        std::size_t end = text.find('>', pos);
        if (end == std::string_view::npos) fail("unterminated IRI");
        std::string iri = "<" + std::string(text.substr(pos, end - pos)) + ">";
        pos = end + 1;
        return iri;
    }

    std::string parse_blank()
    {
        std::size_t start = pos;
        pos += 2;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                     text[pos] == '_' || text[pos] == '-' || text[pos] == '.'))
            ++pos;
        while (pos > start + 2 && text[pos - 1] == '.') --pos; // '.' ends the statement
        if (pos - start < 3) fail("empty blank node label");
        return std::string(text.substr(start, pos - start));
    }

    std::string parse_literal()
    {
        ++pos; // opening quote
        std::string body;
        bool closed = false;
        while (pos < text.size()) {
            char c = text[pos];
            if (c == '\\') {
                if (pos + 1 >= text.size()) fail("dangling escape in literal");
                char e = text[pos + 1];
                switch (e) {
                case '"': body += '"'; break;
                case '\\': body += '\\'; break;
                case 'n': body += '\n'; break;
                case 't': body += '\t'; break;
                default: fail(std::string("unsupported escape \\") + e);
                }
                pos += 2;
            } else if (c == '"') {
                ++pos;
                closed = true;
                break;
            } else {
                body += c;
                ++pos;
            }
        }
        if (!closed) fail("unterminated literal");
        std::string term = "\"" + detail::escape_literal(body) + "\"";
        if (pos < text.size() && text[pos] == '@') {
            std::size_t start = pos;
            ++pos;
            while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                         text[pos] == '-'))
                ++pos;
            if (pos == start + 1) fail("empty language tag");
            term += text.substr(start, pos - start);
        } else if (pos + 1 < text.size() && text[pos] == '^' && text[pos + 1] == '^') {
            pos += 2;
            if (pos >= text.size() || text[pos] != '<') fail("expected datatype IRI after ^^");
            ++pos;
            term += "^^" + parse_iri();
        }
        return term;
    }

    std::string parse_term(bool allow_literal)
    {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of statement");
        char c = text[pos];
        if (c == '<') {
            ++pos;
            return parse_iri();
        }
        if (c == '_' && pos + 1 < text.size() && text[pos + 1] == ':') return parse_blank();
        if (c == '"') {
            if (!allow_literal) fail("literal not allowed here");
            return parse_literal();
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

class GraphDatabase {
public:
    struct Triple {
        std::uint32_t subject;
        std::uint32_t label;
        std::uint32_t object;
        auto operator<=>(const Triple&) const = default;
    };

    static GraphDatabase load_ntriples(std::istream& in)
    {
        GraphDatabase db;
        std::string line;
        std::size_t line_no = 0;
        std::vector<Triple> triples;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            NTriplesParser p{line, 0, line_no};
            if (p.at_end()) continue;
            if (p.text[p.pos] == '#') continue;
            std::string s = p.parse_term(true);
            p.skip_ws();
            if (p.pos >= p.text.size() || p.text[p.pos] != '<')
                p.fail("predicate must be an IRI");
            ++p.pos;
            std::string pred = p.parse_iri();
            std::string o = p.parse_term(true);
            p.skip_ws();
            if (p.pos >= p.text.size() || p.text[p.pos] != '.') p.fail("missing terminating '.'");
            ++p.pos;
            if (!p.at_end()) p.fail("trailing content after '.'");
            std::uint32_t sid = db.intern_node(s);
            std::uint32_t lid = db.intern_label(pred);
            std::uint32_t oid = db.intern_node(o);
            triples.push_back({sid, lid, oid});
        }
        db.build(std::move(triples));
        return db;
    }

    static GraphDatabase load_ntriples(const std::string& text)
    {
        std::istringstream in(text);
        return load_ntriples(in);
    }

    static GraphDatabase load_ntriples_file(const std::string& path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open " + path);
        return load_ntriples(in);
    }

    std::size_t node_count() const { return node_terms_.size(); }
    std::size_t label_count() const { return label_terms_.size(); }
    std::uint64_t triple_count() const { return triple_count_; }

    const std::string& node_term(std::uint32_t id) const { return node_terms_[id]; }
    const std::string& label_term(std::uint32_t id) const { return label_terms_[id]; }

    std::optional<std::uint32_t> resolve_term(std::string_view term) const
    {
        auto it = node_ids_.find(std::string(term));
        if (it == node_ids_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<std::uint32_t> resolve_label(std::string_view term) const
    {
        auto it = label_ids_.find(std::string(term));
        if (it == label_ids_.end()) return std::nullopt;
        return it->second;
    }

    const BitMatrix& adjacency(std::uint32_t label, Direction dir) const
    {
        return dir == Direction::Forward ? fwd_[label] : bwd_[label];
    }

    // Unknown labels get the zero matrix: nothing propagates.
    const BitMatrix& adjacency(std::string_view label, Direction dir) const
    {
        auto id = resolve_label(label);
        return id ? adjacency(*id, dir) : zero_matrix_;
    }

    // f^a (forward) / b^a (backward): nodes with at least one incident
    // a-edge in the given direction.
    const BitVector& summary(std::uint32_t label, Direction dir) const
    {
        return dir == Direction::Forward ? fwd_summary_[label] : bwd_summary_[label];
    }

    const BitVector& summary(std::string_view label, Direction dir) const
    {
        auto id = resolve_label(label);
        return id ? summary(*id, dir) : zero_vector_;
    }

    const BitVector& zero_vector() const { return zero_vector_; }
    const BitMatrix& zero_matrix() const { return zero_matrix_; }

    bool has_triple(std::uint32_t s, std::uint32_t label, std::uint32_t o) const
    {
        return label < fwd_.size() && fwd_[label].test(s, o);
    }

    template <typename F>
    void for_each_triple(F&& f) const
    {
        for (std::uint32_t a = 0; a < fwd_.size(); ++a)
            for (std::uint32_t s = 0; s < node_count(); ++s)
                for (std::uint32_t o : fwd_[a].row(s)) f(Triple{s, a, o});
    }

    std::string triple_to_ntriples(const Triple& t) const
    {
        return node_terms_[t.subject] + " " + label_terms_[t.label] + " " +
               node_terms_[t.object] + " .";
    }

private:
    std::uint32_t intern_node(const std::string& term)
    {
        auto [it, inserted] = node_ids_.emplace(term, static_cast<std::uint32_t>(node_terms_.size()));
        if (inserted) node_terms_.push_back(term);
        return it->second;
    }

    std::uint32_t intern_label(const std::string& term)
    {
        auto [it, inserted] =
            label_ids_.emplace(term, static_cast<std::uint32_t>(label_terms_.size()));
        if (inserted) label_terms_.push_back(term);
        return it->second;
    }

    void build(std::vector<Triple> triples)
    {
        std::sort(triples.begin(), triples.end());
        triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
        triple_count_ = triples.size();
        std::size_t n = node_terms_.size();
        std::vector<std::vector<BitMatrix::Entry>> per_label(label_terms_.size());
        for (const Triple& t : triples) per_label[t.label].emplace_back(t.subject, t.object);
        fwd_.reserve(per_label.size());
        bwd_.reserve(per_label.size());
        for (auto& entries : per_label) {
            std::vector<BitMatrix::Entry> flipped;
            flipped.reserve(entries.size());
            for (auto [s, o] : entries) flipped.emplace_back(o, s);
            fwd_.emplace_back(n, std::move(entries));
            bwd_.emplace_back(n, std::move(flipped));
        }
        fwd_summary_.reserve(fwd_.size());
        bwd_summary_.reserve(bwd_.size());
        for (std::size_t a = 0; a < fwd_.size(); ++a) {
            fwd_summary_.push_back(fwd_[a].row_summary());
            bwd_summary_.push_back(bwd_[a].row_summary());
        }
        zero_matrix_ = BitMatrix(n);
        zero_vector_ = BitVector(n);
    }

    std::vector<std::string> node_terms_;
    std::unordered_map<std::string, std::uint32_t> node_ids_;
    std::vector<std::string> label_terms_;
    std::unordered_map<std::string, std::uint32_t> label_ids_;
    std::vector<BitMatrix> fwd_, bwd_;
    std::vector<BitVector> fwd_summary_, bwd_summary_;
    BitMatrix zero_matrix_;
    BitVector zero_vector_;
    std::uint64_t triple_count_ = 0;
};

} // namespace dualsim
