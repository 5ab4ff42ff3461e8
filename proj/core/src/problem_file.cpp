#include "sosbound/problem_file.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sosbound {

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

std::pair<std::string, std::string> split_kv(const std::string& tok, int line) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value, got '" + tok + "'", line, 1);
    return {trim(tok.substr(0, eq)), trim(tok.substr(eq + 1))};
}

double parse_number(const std::string& s, int line) {
    try {
        size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("malformed number '" + s + "'", line, 1);
    }
}

std::string fmt_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

DynSystem ProblemFile::system() const {
    DynSystem sys;
    sys.var_names = variables;
    const int n = static_cast<int>(variables.size());
    sys.field.reserve(n);
    for (int i = 0; i < n; ++i)
        sys.field.push_back(parse_polynomial(field_exprs[i], variables, params));
    for (const auto& [expr, is_eq] : constraint_exprs) {
        Polynomial p = parse_polynomial(expr, variables, params);
        if (is_eq) {
            sys.constraint_set.equalities.push_back(std::move(p));
        } else {
            sys.constraint_set.inequalities.push_back(std::move(p));
        }
    }
    sys.metadata = params;
    for (const auto& [var, s] : scales) sys.metadata["scale:" + var] = s;
    sys.validate();
    return sys;
}

Polynomial ProblemFile::observable() const {
    return parse_polynomial(observable_expr, variables, params);
}

BoundQuery ProblemFile::query() const {
    BoundQuery q;
    q.system = system();
    q.observable = observable();
    q.direction = direction;
    q.v_degree = v_degree;
    q.multiplier_degree = multiplier_degree;
    q.sdp = solver;
    return q;
}

bool ProblemFile::operator==(const ProblemFile& other) const {
    auto key = [](const ProblemFile& p) {
        return std::tie(p.params, p.variables, p.field_exprs, p.constraint_exprs,
                        p.observable_expr, p.direction, p.v_degree, p.multiplier_degree,
                        p.scales, p.model);
    };
    if (key(*this) != key(other)) return false;
    if (sweep.has_value() != other.sweep.has_value()) return false;
    if (sweep) {
        const auto& a = *sweep;
        const auto& b = *other.sweep;
        if (std::tie(a.param, a.from, a.to, a.step, a.degrees) !=
            std::tie(b.param, b.from, b.to, b.step, b.degrees))
            return false;
    }
    return solver.gap_tol == other.solver.gap_tol && solver.feas_tol == other.solver.feas_tol &&
           solver.max_iterations == other.solver.max_iterations;
}

ProblemFile parse_problem(const std::string& text) {
    ProblemFile pf;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::string section;
    std::vector<int> field_lines;
    bool saw_variables = false, saw_observable = false;
    std::vector<std::pair<std::string, int>> pending_field;  // (line text, line no)

    auto handle_content = [&](const std::string& content, int line) {
        if (section == "params" || section == "model" || section == "variables" ||
            section == "direction" || section == "degrees" || section == "solver" ||
            section == "scale" || section == "sweep" || section == "observable") {
            // handled inline below
        }
        if (section == "params") {
            for (const auto& tok : split_ws(content)) {
                auto [k, v] = split_kv(tok, line);
                pf.params[k] = parse_number(v, line);
            }
        } else if (section == "model") {
            const std::string m = trim(content);
            if (m != "duffing" && m != "pendulum")
                throw ParseError("unknown model '" + m + "'", line, 1);
            pf.model = m;
        } else if (section == "variables") {
            for (const auto& tok : split_ws(content)) pf.variables.push_back(tok);
            saw_variables = true;
        } else if (section == "field") {
            pending_field.emplace_back(content, line);
        } else if (section == "constraints") {
            std::string expr = content;
            bool is_eq;
            auto pos = expr.find(">=");
            if (pos != std::string::npos) {
                is_eq = false;
            } else {
                pos = expr.find("==");
                if (pos == std::string::npos) pos = expr.find('=');
                if (pos == std::string::npos)
                    throw ParseError("constraint needs '>= 0' or '= 0'", line, 1);
                is_eq = true;
            }
            const std::string rhs = trim(expr.substr(pos + (expr[pos + 1] == '=' ? 2 : 1)));
            if (rhs != "0")
                throw ParseError("constraint right-hand side must be 0", line, 1);
            pf.constraint_exprs.emplace_back(trim(expr.substr(0, pos)), is_eq);
        } else if (section == "observable") {
            if (saw_observable) throw DuplicateFieldError("duplicate observable", line);
            pf.observable_expr = trim(content);
            saw_observable = true;
        } else if (section == "direction") {
            const std::string d = trim(content);
            if (d == "upper") pf.direction = BoundDirection::Upper;
            else if (d == "lower") pf.direction = BoundDirection::Lower;
            else throw ParseError("direction must be upper or lower", line, 1);
        } else if (section == "degrees") {
            for (const auto& tok : split_ws(content)) {
                auto [k, v] = split_kv(tok, line);
                if (k == "v") pf.v_degree = static_cast<int>(parse_number(v, line));
                else if (k == "multiplier")
                    pf.multiplier_degree = v == "auto" ? -1 : static_cast<int>(parse_number(v, line));
                else throw ParseError("unknown degree key '" + k + "'", line, 1);
            }
        } else if (section == "solver") {
            for (const auto& tok : split_ws(content)) {
                auto [k, v] = split_kv(tok, line);
                if (k == "gap_tol") pf.solver.gap_tol = parse_number(v, line);
                else if (k == "feas_tol") pf.solver.feas_tol = parse_number(v, line);
                else if (k == "max_iter")
                    pf.solver.max_iterations = static_cast<int>(parse_number(v, line));
                else throw ParseError("unknown solver key '" + k + "'", line, 1);
            }
        } else if (section == "scale") {
            for (const auto& tok : split_ws(content)) {
                auto [k, v] = split_kv(tok, line);
                pf.scales[k] = parse_number(v, line);
            }
        } else if (section == "sweep") {
            SweepSpec spec = pf.sweep.value_or(SweepSpec{});
            for (const auto& tok : split_ws(content)) {
                auto [k, v] = split_kv(tok, line);
                if (k == "param") spec.param = v;
                else if (k == "from") spec.from = parse_number(v, line);
                else if (k == "to") spec.to = parse_number(v, line);
                else if (k == "step") spec.step = parse_number(v, line);
                else if (k == "degrees") {
                    spec.degrees.clear();
                    std::istringstream ds(v);
                    std::string d;
                    while (std::getline(ds, d, ','))
                        spec.degrees.push_back(static_cast<int>(parse_number(trim(d), line)));
                } else {
                    throw ParseError("unknown sweep key '" + k + "'", line, 1);
                }
            }
            pf.sweep = spec;
        } else {
            throw ParseError("content outside any section", line, 1);
        }
    };

    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            const auto close = line.find(']');
            if (close == std::string::npos) throw ParseError("unterminated section header", line_no, 1);
            section = trim(line.substr(1, close - 1));
            const std::string inline_content = trim(line.substr(close + 1));
            if (!inline_content.empty()) handle_content(inline_content, line_no);
            continue;
        }
        if (section.empty()) throw ParseError("content before first section", line_no, 1);
        handle_content(line, line_no);
    }

    if (!saw_variables || pf.variables.empty()) throw MissingSectionError("variables");
    if (!saw_observable) throw MissingSectionError("observable");
    if (pending_field.empty()) throw MissingSectionError("field");

    // Match field equations to declared variables.
    pf.field_exprs.assign(pf.variables.size(), "");
    std::vector<bool> seen(pf.variables.size(), false);
    for (const auto& [content, line] : pending_field) {
        std::string lhs, rhs;
        const auto eq = content.find('=');
        if (eq == std::string::npos) throw ParseError("field line needs '='", line, 1);
        lhs = trim(content.substr(0, eq));
        rhs = trim(content.substr(eq + 1));
        std::string var;
        if (!lhs.empty() && lhs.back() == '\'') {
            var = trim(lhs.substr(0, lhs.size() - 1));
        } else if (lhs.size() > 3 && lhs[0] == 'd' && lhs.substr(lhs.size() - 3) == "/dt") {
            var = trim(lhs.substr(1, lhs.size() - 4));
        } else {
            throw ParseError("field line must look like x' = ... or dx/dt = ...", line, 1);
        }
        const auto it = std::find(pf.variables.begin(), pf.variables.end(), var);
        if (it == pf.variables.end()) throw UndeclaredVariableError(var, line, 1);
        const auto idx = static_cast<size_t>(it - pf.variables.begin());
        if (seen[idx]) throw DuplicateFieldError("duplicate field equation for " + var, line);
        seen[idx] = true;
        pf.field_exprs[idx] = rhs;
        // Validate the expression right away so errors carry this line.
        parse_polynomial(rhs, pf.variables, pf.params, line);
    }
    for (size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i])
            throw MissingSectionError("field equation for " + pf.variables[i]);
    }
    for (const auto& [expr, is_eq] : pf.constraint_exprs)
        parse_polynomial(expr, pf.variables, pf.params);
    parse_polynomial(pf.observable_expr, pf.variables, pf.params);
    return pf;
}

std::string print_problem(const ProblemFile& pf) {
    std::ostringstream os;
    if (!pf.params.empty()) {
        os << "[params]";
        for (const auto& [k, v] : pf.params) os << " " << k << "=" << fmt_num(v);
        os << "\n";
    }
    if (!pf.model.empty()) os << "[model] " << pf.model << "\n";
    os << "[variables]";
    for (const auto& v : pf.variables) os << " " << v;
    os << "\n[field]\n";
    for (size_t i = 0; i < pf.variables.size(); ++i)
        os << pf.variables[i] << "' = " << pf.field_exprs[i] << "\n";
    if (!pf.constraint_exprs.empty()) {
        os << "[constraints]\n";
        for (const auto& [expr, is_eq] : pf.constraint_exprs)
            os << expr << (is_eq ? " = 0" : " >= 0") << "\n";
    }
    os << "[observable] " << pf.observable_expr << "\n";
    os << "[direction] " << (pf.direction == BoundDirection::Upper ? "upper" : "lower") << "\n";
    os << "[degrees] v=" << pf.v_degree << " multiplier="
       << (pf.multiplier_degree < 0 ? std::string("auto") : std::to_string(pf.multiplier_degree))
       << "\n";
    os << "[solver] gap_tol=" << fmt_num(pf.solver.gap_tol)
       << " feas_tol=" << fmt_num(pf.solver.feas_tol) << " max_iter=" << pf.solver.max_iterations
       << "\n";
    if (!pf.scales.empty()) {
        os << "[scale]";
        for (const auto& [k, v] : pf.scales) os << " " << k << "=" << fmt_num(v);
        os << "\n";
    }
    if (pf.sweep) {
        os << "[sweep] param=" << pf.sweep->param << " from=" << fmt_num(pf.sweep->from)
           << " to=" << fmt_num(pf.sweep->to) << " step=" << fmt_num(pf.sweep->step);
        if (!pf.sweep->degrees.empty()) {
            os << " degrees=";
            for (size_t i = 0; i < pf.sweep->degrees.size(); ++i)
                os << (i ? "," : "") << pf.sweep->degrees[i];
        }
        os << "\n";
    }
    return os.str();
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open problem file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

}  // namespace sosbound
