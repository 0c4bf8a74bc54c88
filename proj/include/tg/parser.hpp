#pragma once

#include <string>

#include "tg/model.hpp"

namespace tg {

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int l, int c, const std::string& msg)
        : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) +
                             ": " + msg),
          line(l),
          column(c) {}
};

/// Parses a program. Grammar:
///   %-to-end-of-line comments
///   lowercase identifiers are constants and relation names,
///   uppercase identifiers are variables (scoped per rule)
///   t(c1,c2).                          fact
///   t(X,Y), u(Y,Z) -> t(Y,Z), u(X,Y). rule
///   t(X,Y) -> exists Z: t(Y,Z).       rule with declared existentials
///   ?- t(X,X).                        query
/// Relation arities must be consistent across the file; facts must be
/// ground; a declared existential list must match the computed one.
Program parse_program(const std::string& text);

/// Canonical round-trippable text: facts sorted, rules in input order,
/// queries last. parse(serialize(parse(s))) == parse(s).
std::string serialize_program(const Program& p);

}  // namespace tg
