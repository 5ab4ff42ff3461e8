#include "sosbound/polynomial.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sosbound/errors.hpp"

namespace sosbound {

namespace {

void require_same_ring(const Polynomial& a, const Polynomial& b, const char* op) {
    if (a.nvars() != b.nvars())
        throw DimensionMismatchError(std::string(op) + ": operands have different nvars");
}

std::string format_coeff(double c) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", c);
    return buf;
}

}  // namespace

Polynomial::Polynomial(int nvars) : nvars_(nvars) {
    if (nvars < 0) throw std::invalid_argument("negative nvars");
}

Polynomial::Polynomial(int nvars, TermMap terms) : nvars_(nvars), terms_(std::move(terms)) {
    if (nvars < 0) throw std::invalid_argument("negative nvars");
    canonicalize();
}

void Polynomial::canonicalize() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->first.min_nvars() > nvars_)
            throw DimensionMismatchError("term uses variable outside the ring");
        if (std::abs(it->second) < kCoeffDropThreshold || !std::isfinite(it->second)) {
            if (!std::isfinite(it->second))
                throw std::invalid_argument("non-finite polynomial coefficient");
            it = terms_.erase(it);
        } else {
            ++it;
        }
    }
}

Polynomial Polynomial::constant(int nvars, double value) {
    TermMap t;
    t[Monomial::unit()] = value;
    return Polynomial(nvars, std::move(t));
}

Polynomial Polynomial::variable(int nvars, int index) {
    if (index < 0 || index >= nvars) throw std::out_of_range("variable index out of range");
    TermMap t;
    t[Monomial::variable(index)] = 1.0;
    return Polynomial(nvars, std::move(t));
}

Polynomial Polynomial::term(int nvars, const Monomial& m, double coeff) {
    TermMap t;
    t[m] = coeff;
    return Polynomial(nvars, std::move(t));
}

int Polynomial::degree() const noexcept {
    if (terms_.empty()) return -1;
    // Graded order puts the highest degree last.
    return terms_.rbegin()->first.total_degree();
}

double Polynomial::coefficient(const Monomial& m) const noexcept {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::max_abs_coeff() const noexcept {
    double m = 0.0;
    for (const auto& [mono, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

Polynomial Polynomial::operator-() const {
    TermMap t = terms_;
    for (auto& [m, c] : t) c = -c;
    return Polynomial(nvars_, std::move(t));
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
    require_same_ring(*this, rhs, "add");
    TermMap t = terms_;
    for (const auto& [m, c] : rhs.terms_) t[m] += c;
    return Polynomial(nvars_, std::move(t));
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
    require_same_ring(*this, rhs, "sub");
    TermMap t = terms_;
    for (const auto& [m, c] : rhs.terms_) t[m] -= c;
    return Polynomial(nvars_, std::move(t));
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
    require_same_ring(*this, rhs, "mul");
    TermMap t;
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : rhs.terms_) {
            t[ma.times(mb)] += ca * cb;
        }
    }
    return Polynomial(nvars_, std::move(t));
}

Polynomial Polynomial::operator*(double scalar) const {
    TermMap t = terms_;
    for (auto& [m, c] : t) c *= scalar;
    return Polynomial(nvars_, std::move(t));
}

Polynomial Polynomial::pow(int exponent) const {
    if (exponent < 0) throw std::invalid_argument("negative polynomial power");
    Polynomial result = Polynomial::constant(nvars_, 1.0);
    Polynomial base = *this;
    int n = exponent;
    while (n > 0) {
        if (n & 1) result = result * base;
        if (n >>= 1) base = base * base;
    }
    return result;
}

bool Polynomial::operator==(const Polynomial& rhs) const noexcept {
    return nvars_ == rhs.nvars_ && terms_ == rhs.terms_;
}

double Polynomial::coeff_distance(const Polynomial& rhs) const {
    double d = 0.0;
    for (const auto& [m, c] : terms_) d = std::max(d, std::abs(c - rhs.coefficient(m)));
    for (const auto& [m, c] : rhs.terms_) d = std::max(d, std::abs(c - coefficient(m)));
    return d;
}

Polynomial Polynomial::derivative(int var) const {
    if (var < 0 || var >= nvars_) throw std::out_of_range("derivative variable out of range");
    TermMap t;
    for (const auto& [m, c] : terms_) {
        Monomial reduced;
        int e = m.derivative(var, reduced);
        if (e > 0) t[reduced] += c * e;
    }
    return Polynomial(nvars_, std::move(t));
}

std::vector<Polynomial> Polynomial::gradient() const {
    std::vector<Polynomial> g;
    g.reserve(nvars_);
    for (int k = 0; k < nvars_; ++k) g.push_back(derivative(k));
    return g;
}

double Polynomial::evaluate(std::span<const double> point) const {
    if (static_cast<int>(point.size()) != nvars_)
        throw DimensionMismatchError("evaluate: point length != nvars");
    double value = 0.0;
    for (const auto& [m, c] : terms_) value += c * m.evaluate(point);
    return value;
}

Polynomial Polynomial::substitute(int var, const Polynomial& value) const {
    if (var < 0 || var >= nvars_) throw std::out_of_range("substitute variable out of range");
    require_same_ring(*this, value, "substitute");
    // Cache powers of the replacement polynomial.
    std::vector<Polynomial> powers{Polynomial::constant(nvars_, 1.0)};
    Polynomial out(nvars_);
    for (const auto& [m, c] : terms_) {
        int e = m.exponent(var);
        std::vector<Monomial::Factor> rest;
        for (const auto& f : m.factors())
            if (f.first != var) rest.push_back(f);
        while (static_cast<int>(powers.size()) <= e) powers.push_back(powers.back() * value);
        out = out + Polynomial::term(nvars_, Monomial(rest), c) * powers[e];
    }
    return out;
}

Polynomial Polynomial::rescale_vars(std::span<const double> scales) const {
    if (static_cast<int>(scales.size()) != nvars_)
        throw DimensionMismatchError("rescale_vars: scale length != nvars");
    TermMap t;
    for (const auto& [m, c] : terms_) {
        double factor = 1.0;
        for (const auto& [v, e] : m.factors()) factor *= std::pow(scales[v], e);
        t[m] += c * factor;
    }
    return Polynomial(nvars_, std::move(t));
}

Polynomial Polynomial::remap_vars(int new_nvars, std::span<const int> var_map) const {
    if (static_cast<int>(var_map.size()) != nvars_)
        throw DimensionMismatchError("remap_vars: map length != nvars");
    TermMap t;
    for (const auto& [m, c] : terms_) {
        std::vector<Monomial::Factor> f;
        f.reserve(m.factors().size());
        for (const auto& [v, e] : m.factors()) {
            int nv = var_map[v];
            if (nv < 0 || nv >= new_nvars) throw std::out_of_range("remap_vars: bad image index");
            f.emplace_back(nv, e);
        }
        t[Monomial(std::move(f))] += c;
    }
    return Polynomial(new_nvars, std::move(t));
}

int Polynomial::degree_in(int var) const noexcept {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.exponent(var));
    return d;
}

std::string Polynomial::to_string(std::span<const std::string> names) const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        double mag = std::abs(c);
        bool negative = c < 0.0;
        if (first) {
            if (negative) s += "-";
        } else {
            s += negative ? " - " : " + ";
        }
        first = false;
        if (m.is_unit()) {
            s += format_coeff(mag);
        } else if (mag == 1.0) {
            s += m.to_string(names);
        } else {
            s += format_coeff(mag) + "*" + m.to_string(names);
        }
    }
    return s;
}

Polynomial lie_derivative(const Polynomial& v, std::span<const Polynomial> field) {
    if (static_cast<int>(field.size()) != v.nvars())
        throw DimensionMismatchError("lie_derivative: field length != nvars of V");
    Polynomial out(v.nvars());
    for (int k = 0; k < v.nvars(); ++k) {
        Polynomial dk = v.derivative(k);
        if (!dk.is_zero() && !field[k].is_zero()) out = out + field[k] * dk;
    }
    return out;
}

}  // namespace sosbound
