#ifndef CRNRD_PARSER_HPP
#define CRNRD_PARSER_HPP

#include <string>
#include <variant>

#include "crnrd/network.hpp"

namespace crnrd {

enum class ParseErrorKind {
    SyntaxError,
    MissingRate,
    CoefficientOutOfRange,
    NonpositiveRate,
    DuplicateSpeciesInTerm,
    TrivialReaction,
};

struct ParseError {
    int line = 1;   // 1-based
    int column = 1; // 1-based
    ParseErrorKind kind = ParseErrorKind::SyntaxError;
    std::string message;
};

const char* to_string(ParseErrorKind k);

using ParseResult = std::variant<ReactionNetwork, ParseError>;

/// Parse the .crn reaction DSL. One statement per line, '#' starts a comment:
///   reaction := complex arrow complex ';' rates
///   complex  := '0' | term ('+' term)*
///   term     := [coeff] species
///   arrow    := '->' | '<->'
///   rates    := 'k=' decimal [',' 'kr=' decimal]
/// '<->' expands into two Reaction records (forward k, then backward kr).
/// First error wins; no recovery.
ParseResult parse_network(const std::string& text);

/// Convenience wrapper; throws Error(InvalidConfig) with the diagnostic.
ReactionNetwork parse_network_or_throw(const std::string& text);

/// Canonical text form: species in index order within complexes, reactions in
/// stored order (adjacent exact-reverse pairs folded into '<->'), coefficient
/// 1 omitted, shortest round-trip decimals. parse(render(net)) == net.
std::string render_network(const ReactionNetwork& net);

std::string format_parse_error(const ParseError& e);

} // namespace crnrd

#endif
