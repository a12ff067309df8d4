#pragma once

#include <string>

#include "bge/core.hpp"

namespace bge {

// Parse error carrying 1-based line/column of the offending token.
class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string& message)
        : Error("parse-error",
                "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                    message),
          line_(line),
          column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_, column_;
};

// Line-oriented bond graph DSL:
//   component <kind> <id> [coeff=<float>]
//   bond <id> <kind><id> -> <kind><id> stroke=<head|tail>
//   # comment
// Structural faithfulness only; graph-level rules are the validator's job.
BondGraph parse_dsl(const std::string& text);

// Canonical serialization; parse_dsl(emit_dsl(g)) == g for well-formed graphs.
std::string emit_dsl(const BondGraph& g);

}  // namespace bge
