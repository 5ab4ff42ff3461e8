#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "sosbound/monomial.hpp"

namespace sosbound {

/// Coefficients with magnitude below this are dropped when a polynomial is
/// canonicalized; equality of polynomials is equality of canonical term maps.
inline constexpr double kCoeffDropThreshold = 1e-14;

/// Sparse multivariate polynomial over double coefficients. Immutable after
/// construction; all operations return new values.
class Polynomial {
public:
    using TermMap = std::map<Monomial, double, GradedLexLess>;

    /// The zero polynomial in `nvars` variables.
    explicit Polynomial(int nvars = 0);
    Polynomial(int nvars, TermMap terms);

    static Polynomial constant(int nvars, double value);
    static Polynomial variable(int nvars, int index);
    static Polynomial term(int nvars, const Monomial& m, double coeff);

    int nvars() const noexcept { return nvars_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    /// Total degree; -1 for the zero polynomial.
    int degree() const noexcept;
    double coefficient(const Monomial& m) const noexcept;
    double constant_term() const noexcept { return coefficient(Monomial::unit()); }
    double max_abs_coeff() const noexcept;

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& rhs) const;
    Polynomial operator-(const Polynomial& rhs) const;
    Polynomial operator*(const Polynomial& rhs) const;
    Polynomial operator*(double scalar) const;
    Polynomial pow(int exponent) const;

    bool operator==(const Polynomial& rhs) const noexcept;
    bool operator!=(const Polynomial& rhs) const noexcept { return !(*this == rhs); }
    /// Max-norm comparison of coefficient maps.
    double coeff_distance(const Polynomial& rhs) const;

    Polynomial derivative(int var) const;
    std::vector<Polynomial> gradient() const;

    double evaluate(std::span<const double> point) const;

    /// Substitute a polynomial for one variable (the result keeps nvars).
    Polynomial substitute(int var, const Polynomial& value) const;
    /// Apply x_i -> scales[i] * x_i.
    Polynomial rescale_vars(std::span<const double> scales) const;
    /// Move into a ring with `new_nvars` variables, sending old variable i to
    /// var_map[i] (every image must be a distinct valid index).
    Polynomial remap_vars(int new_nvars, std::span<const int> var_map) const;
    /// Degree of the polynomial in a single variable.
    int degree_in(int var) const noexcept;

    std::string to_string(std::span<const std::string> names = {}) const;

private:
    int nvars_ = 0;
    TermMap terms_;
    void canonicalize();
};

inline Polynomial operator*(double scalar, const Polynomial& p) { return p * scalar; }

/// Directional derivative of V along the vector field f: sum_k f_k dV/dx_k.
Polynomial lie_derivative(const Polynomial& v, std::span<const Polynomial> field);

}  // namespace sosbound
