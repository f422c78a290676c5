#include "crnrd/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <map>
#include <sstream>
#include <vector>

namespace crnrd {

const char* to_string(ParseErrorKind k) {
    switch (k) {
        case ParseErrorKind::SyntaxError: return "SyntaxError";
        case ParseErrorKind::MissingRate: return "MissingRate";
        case ParseErrorKind::CoefficientOutOfRange: return "CoefficientOutOfRange";
        case ParseErrorKind::NonpositiveRate: return "NonpositiveRate";
        case ParseErrorKind::DuplicateSpeciesInTerm: return "DuplicateSpeciesInTerm";
        case ParseErrorKind::TrivialReaction: return "TrivialReaction";
    }
    return "Unknown";
}

std::string format_parse_error(const ParseError& e) {
    std::ostringstream os;
    os << "line " << e.line << ", column " << e.column << ": " << to_string(e.kind)
       << ": " << e.message;
    return os.str();
}

namespace {

struct Coeff {
    double value = 1.0;
    Rat exact{1};
};

// One side of a reaction as parsed: species name -> coefficient.
using TermMap = std::map<std::string, Coeff>;

struct RawReaction {
    TermMap reactant;
    TermMap product;
    std::vector<std::string> appearance; // species in textual order
    double k_forward = 0.0;
    bool reversible = false;
    double k_backward = 0.0;
};

class LineParser {
public:
    LineParser(const std::string& line, int line_no) : s_(line), line_no_(line_no) {}

    // Throws ParseError on failure.
    RawReaction parse() {
        RawReaction rx;
        rx.reactant = parse_complex();
        skip_ws();
        if (lookahead("<->")) {
            advance(3);
            rx.reversible = true;
        } else if (lookahead("->")) {
            advance(2);
        } else {
            fail(ParseErrorKind::SyntaxError, "expected '->' or '<->'");
        }
        rx.product = parse_complex();
        skip_ws();
        if (!lookahead(";")) fail(ParseErrorKind::SyntaxError, "expected ';' before rates");
        advance(1);
        skip_ws();
        if (at_end()) fail(ParseErrorKind::MissingRate, "missing rate 'k='");
        rx.k_forward = parse_rate("k");
        skip_ws();
        if (rx.reversible) {
            if (!lookahead(",")) fail(ParseErrorKind::MissingRate, "'<->' requires 'kr='");
            advance(1);
            skip_ws();
            rx.k_backward = parse_rate("kr");
            skip_ws();
        }
        if (!at_end()) fail(ParseErrorKind::SyntaxError, "trailing input after rates");
        if (same_terms(rx.reactant, rx.product))
            throw ParseError{line_no_, 1, ParseErrorKind::TrivialReaction,
                             "reactant and product complexes are identical"};
        rx.appearance = appearance_;
        return rx;
    }

private:
    const std::string& s_;
    int line_no_;
    std::size_t pos_ = 0;
    std::vector<std::string> appearance_;

    bool at_end() const { return pos_ >= s_.size(); }
    void advance(std::size_t n) { pos_ += n; }
    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool lookahead(const char* tok) const {
        return s_.compare(pos_, std::strlen(tok), tok) == 0;
    }
    [[noreturn]] void fail(ParseErrorKind kind, const std::string& msg) const {
        throw ParseError{line_no_, static_cast<int>(pos_) + 1, kind, msg};
    }

    static bool same_terms(const TermMap& a, const TermMap& b) {
        if (a.size() != b.size()) return false;
        for (const auto& [name, c] : a) {
            auto it = b.find(name);
            if (it == b.end() || it->second.value != c.value) return false;
        }
        return true;
    }

    bool at_number() const {
        return !at_end() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
                             s_[pos_] == '.');
    }
    bool at_ident() const {
        return !at_end() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) ||
                             s_[pos_] == '_');
    }

    std::string read_number() {
        std::size_t start = pos_;
        while (at_number()) ++pos_;
        return s_.substr(start, pos_ - start);
    }

    std::string read_ident() {
        std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                             s_[pos_] == '_'))
            ++pos_;
        return s_.substr(start, pos_ - start);
    }

    TermMap parse_complex() {
        skip_ws();
        TermMap terms;
        // Zero complex: a bare '0' not followed by a digit, '.', or identifier.
        if (!at_end() && s_[pos_] == '0') {
            std::size_t save = pos_;
            std::string num = read_number();
            skip_ws();
            if (num == "0" && !at_ident()) return terms;
            pos_ = save;
        }
        for (;;) {
            skip_ws();
            parse_term(terms);
            skip_ws();
            if (!lookahead("+")) break;
            advance(1);
        }
        return terms;
    }

    void parse_term(TermMap& terms) {
        Coeff coeff;
        if (at_number()) {
            std::size_t col = pos_;
            std::string num = read_number();
            auto exact = rational_from_decimal(num);
            if (!exact)
                throw ParseError{line_no_, static_cast<int>(col) + 1,
                                 ParseErrorKind::SyntaxError,
                                 "malformed coefficient '" + num + "'"};
            coeff.exact = *exact;
            coeff.value = std::strtod(num.c_str(), nullptr);
            if (coeff.value < 1.0)
                throw ParseError{line_no_, static_cast<int>(col) + 1,
                                 ParseErrorKind::CoefficientOutOfRange,
                                 "coefficient " + num + " outside {0} U [1,inf)"};
            skip_ws();
        }
        if (!at_ident()) fail(ParseErrorKind::SyntaxError, "expected species name");
        std::size_t col = pos_;
        std::string name = read_ident();
        if (terms.count(name))
            throw ParseError{line_no_, static_cast<int>(col) + 1,
                             ParseErrorKind::DuplicateSpeciesInTerm,
                             "species " + name + " appears twice; write '2 " + name + "'"};
        terms.emplace(name, coeff);
        appearance_.push_back(name);
    }

    double parse_rate(const std::string& key) {
        std::size_t col = pos_;
        if (!at_ident()) fail(ParseErrorKind::MissingRate, "expected '" + key + "='");
        std::string ident = read_ident();
        if (ident != key)
            throw ParseError{line_no_, static_cast<int>(col) + 1,
                             ParseErrorKind::MissingRate, "expected '" + key + "='"};
        skip_ws();
        if (!lookahead("=")) fail(ParseErrorKind::SyntaxError, "expected '='");
        advance(1);
        skip_ws();
        if (!at_number()) fail(ParseErrorKind::MissingRate, "missing rate value");
        col = pos_;
        std::string num = read_number();
        double v = std::strtod(num.c_str(), nullptr);
        if (v <= 0.0)
            throw ParseError{line_no_, static_cast<int>(col) + 1,
                             ParseErrorKind::NonpositiveRate,
                             "rate must be strictly positive"};
        return v;
    }
};

std::string strip_comment(const std::string& line) {
    auto hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) {
        return std::isspace(c);
    });
}

} // namespace

ParseResult parse_network(const std::string& text) {
    std::vector<RawReaction> raw;
    std::vector<std::string> species_order;
    auto note_species = [&](const std::vector<std::string>& names) {
        for (const auto& name : names)
            if (std::find(species_order.begin(), species_order.end(), name) ==
                species_order.end())
                species_order.push_back(name);
    };

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    try {
        while (std::getline(in, line)) {
            ++line_no;
            std::string body = strip_comment(line);
            if (blank(body)) continue;
            RawReaction rx = LineParser(body, line_no).parse();
            note_species(rx.appearance);
            raw.push_back(std::move(rx));
        }
    } catch (const ParseError& e) {
        return e;
    }
    if (raw.empty())
        return ParseError{std::max(line_no, 1), 1, ParseErrorKind::SyntaxError,
                          "no reactions in input"};

    std::vector<Species> species;
    std::map<std::string, int> index_of;
    for (const auto& name : species_order) {
        index_of[name] = static_cast<int>(species.size());
        species.push_back({name, static_cast<int>(species.size())});
    }
    const std::size_t n = species.size();

    auto build_complex = [&](const TermMap& terms) {
        ComplexVec c;
        c.coeffs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        c.exact.assign(n, Rat(0));
        c.is_exact = true;
        for (const auto& [name, coeff] : terms) {
            int i = index_of[name];
            c.coeffs[i] = coeff.value;
            c.exact[static_cast<std::size_t>(i)] = coeff.exact;
        }
        return c;
    };

    std::vector<Reaction> reactions;
    for (const auto& rx : raw) {
        ComplexVec lhs = build_complex(rx.reactant);
        ComplexVec rhs = build_complex(rx.product);
        reactions.push_back({lhs, rhs, rx.k_forward});
        if (rx.reversible) reactions.push_back({rhs, lhs, rx.k_backward});
    }
    return ReactionNetwork(std::move(species), std::move(reactions));
}

ReactionNetwork parse_network_or_throw(const std::string& text) {
    ParseResult res = parse_network(text);
    if (auto* err = std::get_if<ParseError>(&res))
        throw Error(ErrorKind::InvalidConfig, format_parse_error(*err));
    return std::get<ReactionNetwork>(std::move(res));
}

namespace {

std::string shortest_decimal(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed);
    if (ec != std::errc{}) return std::to_string(v);
    return std::string(buf, ptr);
}

std::string render_complex(const ReactionNetwork& net, const ComplexVec& c) {
    if (c.is_zero()) return "0";
    std::string out;
    for (int i = 0; i < net.num_species(); ++i) {
        double y = c.coeffs[i];
        if (y == 0.0) continue;
        if (!out.empty()) out += " + ";
        if (y != 1.0) out += shortest_decimal(y) + " ";
        out += net.species()[i].name;
    }
    return out;
}

} // namespace

std::string render_network(const ReactionNetwork& net) {
    std::string out;
    const auto& rs = net.reactions();
    for (std::size_t r = 0; r < rs.size(); ++r) {
        const Reaction& fwd = rs[r];
        bool folded = false;
        if (r + 1 < rs.size()) {
            const Reaction& bwd = rs[r + 1];
            folded = bwd.reactant == fwd.product && bwd.product == fwd.reactant;
        }
        out += render_complex(net, fwd.reactant);
        out += folded ? " <-> " : " -> ";
        out += render_complex(net, fwd.product);
        out += " ; k=" + shortest_decimal(fwd.rate);
        if (folded) {
            out += ", kr=" + shortest_decimal(rs[r + 1].rate);
            ++r;
        }
        out += "\n";
    }
    return out;
}

} // namespace crnrd
