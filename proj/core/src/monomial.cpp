#include "sosbound/monomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sosbound {

Monomial::Monomial(std::vector<Factor> factors) : factors_(std::move(factors)) {
    std::sort(factors_.begin(), factors_.end());
    std::vector<Factor> merged;
    merged.reserve(factors_.size());
    for (const auto& [var, exp] : factors_) {
        if (var < 0) throw std::invalid_argument("negative variable index");
        if (exp < 0) throw std::invalid_argument("negative exponent");
        if (exp == 0) continue;
        if (!merged.empty() && merged.back().first == var) {
            merged.back().second += exp;
        } else {
            merged.emplace_back(var, exp);
        }
    }
    factors_ = std::move(merged);
}

Monomial Monomial::variable(int index, int exponent) {
    return Monomial({{index, exponent}});
}

Monomial Monomial::from_exponents(std::span<const int> exponents) {
    std::vector<Factor> f;
    for (int i = 0; i < static_cast<int>(exponents.size()); ++i) {
        if (exponents[i] != 0) f.emplace_back(i, exponents[i]);
    }
    return Monomial(std::move(f));
}

int Monomial::exponent(int var) const noexcept {
    for (const auto& [v, e] : factors_) {
        if (v == var) return e;
        if (v > var) break;
    }
    return 0;
}

int Monomial::total_degree() const noexcept {
    int d = 0;
    for (const auto& [v, e] : factors_) d += e;
    return d;
}

int Monomial::min_nvars() const noexcept {
    return factors_.empty() ? 0 : factors_.back().first + 1;
}

Monomial Monomial::times(const Monomial& other) const {
    std::vector<Factor> f;
    f.reserve(factors_.size() + other.factors_.size());
    auto a = factors_.begin(), b = other.factors_.begin();
    while (a != factors_.end() && b != other.factors_.end()) {
        if (a->first < b->first) {
            f.push_back(*a++);
        } else if (b->first < a->first) {
            f.push_back(*b++);
        } else {
            f.emplace_back(a->first, a->second + b->second);
            ++a;
            ++b;
        }
    }
    f.insert(f.end(), a, factors_.end());
    f.insert(f.end(), b, other.factors_.end());
    Monomial m;
    m.factors_ = std::move(f);
    return m;
}

bool Monomial::divided_by(const Monomial& other, Monomial& out) const {
    std::vector<Factor> f;
    f.reserve(factors_.size());
    auto a = factors_.begin();
    for (const auto& [v, e] : other.factors_) {
        while (a != factors_.end() && a->first < v) f.push_back(*a++);
        if (a == factors_.end() || a->first != v || a->second < e) return false;
        if (a->second > e) f.emplace_back(v, a->second - e);
        ++a;
    }
    f.insert(f.end(), a, factors_.end());
    out.factors_ = std::move(f);
    return true;
}

int Monomial::derivative(int var, Monomial& out) const {
    std::vector<Factor> f;
    f.reserve(factors_.size());
    int old_exp = 0;
    for (const auto& [v, e] : factors_) {
        if (v == var) {
            old_exp = e;
            if (e > 1) f.emplace_back(v, e - 1);
        } else {
            f.emplace_back(v, e);
        }
    }
    if (old_exp == 0) return 0;
    out.factors_ = std::move(f);
    return old_exp;
}

double Monomial::evaluate(std::span<const double> point) const {
    double value = 1.0;
    for (const auto& [v, e] : factors_) {
        if (v >= static_cast<int>(point.size()))
            throw std::out_of_range("evaluation point too short for monomial");
        double base = point[v];
        int n = e;
        double acc = 1.0;
        while (n > 0) {  // fast exponentiation keeps error low for large powers
            if (n & 1) acc *= base;
            base *= base;
            n >>= 1;
        }
        value *= acc;
    }
    return value;
}

std::string Monomial::to_string(std::span<const std::string> names) const {
    if (factors_.empty()) return "1";
    std::string s;
    bool first = true;
    for (const auto& [v, e] : factors_) {
        if (!first) s += "*";
        first = false;
        if (v < static_cast<int>(names.size())) {
            s += names[v];
        } else {
            s += "x" + std::to_string(v);
        }
        if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
}

bool graded_lex_less(const Monomial& a, const Monomial& b) noexcept {
    const int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    // Same degree: walk factor lists in variable order. A higher exponent on
    // an earlier variable sorts first (x^2 < x*y < y^2 in the output order).
    auto ia = a.factors().begin(), ib = b.factors().begin();
    while (ia != a.factors().end() && ib != b.factors().end()) {
        if (ia->first != ib->first) return ia->first < ib->first;
        if (ia->second != ib->second) return ia->second > ib->second;
        ++ia;
        ++ib;
    }
    return false;  // equal monomials
}

namespace {

// Emit every exponent tuple of total degree exactly `remaining`, with earlier
// variables taking larger exponents first (graded-lex within one grade).
void enumerate_rec(int nvars, int var, int remaining, std::vector<int>& exps,
                   std::vector<Monomial>& out) {
    if (var == nvars - 1) {
        exps[var] = remaining;
        out.push_back(Monomial::from_exponents(std::span<const int>(exps.data(), exps.size())));
        exps[var] = 0;
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        exps[var] = e;
        enumerate_rec(nvars, var + 1, remaining - e, exps, out);
    }
    exps[var] = 0;
}

}  // namespace

std::vector<Monomial> monomial_basis(int nvars, int max_degree, BasisParity parity) {
    if (nvars < 0 || max_degree < 0) throw std::invalid_argument("monomial_basis: bad arguments");
    std::vector<Monomial> out;
    std::vector<int> exps(static_cast<size_t>(std::max(nvars, 1)), 0);
    for (int d = 0; d <= max_degree; ++d) {
        if (parity == BasisParity::Even && d % 2 != 0) continue;
        if (parity == BasisParity::Odd && d % 2 != 1) continue;
        if (nvars == 0) {
            if (d == 0) out.push_back(Monomial::unit());
            continue;
        }
        std::vector<Monomial> grade;
        enumerate_rec(nvars, 0, d, exps, grade);
        // enumerate_rec visits exponent tuples with earlier variables taking
        // larger exponents first, which is exactly graded-lex within a grade.
        out.insert(out.end(), grade.begin(), grade.end());
    }
    return out;
}

}  // namespace sosbound
