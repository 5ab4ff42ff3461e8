#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sosbound/polynomial.hpp"

namespace sosbound {

class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, int line, int col)
        : std::runtime_error(message + " (line " + std::to_string(line) + ", col " +
                             std::to_string(col) + ")"),
          line_(line),
          col_(col) {}
    int line() const noexcept { return line_; }
    int col() const noexcept { return col_; }

private:
    int line_, col_;
};

class UndeclaredVariableError : public ParseError {
public:
    UndeclaredVariableError(std::string name, int line, int col)
        : ParseError("undeclared variable '" + name + "'", line, col), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Parse a polynomial expression over named variables, with +, -, *, ^,
/// parentheses and numeric literals. Identifiers that are not variables are
/// looked up in `params` and substituted numerically; anything else raises
/// UndeclaredVariableError. `line` seeds the error positions.
Polynomial parse_polynomial(std::string_view text, std::span<const std::string> vars,
                            const std::map<std::string, double>& params, int line = 1,
                            int col_offset = 0);

}  // namespace sosbound
