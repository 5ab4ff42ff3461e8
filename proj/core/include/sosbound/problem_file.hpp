#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sosbound/bound.hpp"
#include "sosbound/poly_parser.hpp"

namespace sosbound {

class DuplicateFieldError : public ParseError {
public:
    DuplicateFieldError(const std::string& what, int line) : ParseError(what, line, 1) {}
};

class MissingSectionError : public std::runtime_error {
public:
    explicit MissingSectionError(const std::string& section)
        : std::runtime_error("missing required section [" + section + "]") {}
};

struct SweepSpec {
    std::string param = "omega";
    double from = 0.0;
    double to = 0.0;
    double step = 0.1;
    std::vector<int> degrees;  // empty = the file's v degree
};

/// Declarative bound problem: variables, one field equation per variable,
/// constraints, an observable, degrees and solver options, optionally a
/// parameter sweep. Polynomial expressions are kept as text and materialized
/// against the current parameter values, so sweeps can rebind parameters.
struct ProblemFile {
    std::map<std::string, double> params;
    std::vector<std::string> variables;
    std::vector<std::string> field_exprs;                       // per variable
    std::vector<std::pair<std::string, bool>> constraint_exprs;  // (expr, is_equality)
    std::string observable_expr;
    BoundDirection direction = BoundDirection::Upper;
    int v_degree = 4;
    int multiplier_degree = -1;  // auto
    SdpOptions solver;
    std::map<std::string, double> scales;
    std::optional<SweepSpec> sweep;
    std::string model;  // "", "duffing" or "pendulum"

    DynSystem system() const;
    Polynomial observable() const;
    BoundQuery query() const;

    bool operator==(const ProblemFile& other) const;
};

ProblemFile parse_problem(const std::string& text);
std::string print_problem(const ProblemFile& pf);

ProblemFile load_problem(const std::string& path);

}  // namespace sosbound
