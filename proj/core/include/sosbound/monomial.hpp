#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sosbound {

/// A power product of variables, stored sparsely as (variable index, exponent)
/// pairs sorted by index. Exponents are strictly positive; the empty factor
/// list is the unit monomial 1.
class Monomial {
public:
    using Factor = std::pair<int, int>;  // (variable index, exponent > 0)

    Monomial() = default;
    explicit Monomial(std::vector<Factor> factors);

    static Monomial unit() { return Monomial(); }
    static Monomial variable(int index, int exponent = 1);
    /// Build from a dense exponent vector (zeros dropped).
    static Monomial from_exponents(std::span<const int> exponents);

    const std::vector<Factor>& factors() const noexcept { return factors_; }
    bool is_unit() const noexcept { return factors_.empty(); }
    int exponent(int var) const noexcept;
    int total_degree() const noexcept;
    /// Largest variable index used plus one; 0 for the unit monomial.
    int min_nvars() const noexcept;

    Monomial times(const Monomial& other) const;
    /// Quotient this/other, or false if other does not divide this.
    bool divided_by(const Monomial& other, Monomial& out) const;
    /// Partial derivative: returns old exponent of `var` (0 when absent) and
    /// writes the reduced monomial to `out`.
    int derivative(int var, Monomial& out) const;

    double evaluate(std::span<const double> point) const;

    bool operator==(const Monomial& other) const noexcept { return factors_ == other.factors_; }
    bool operator!=(const Monomial& other) const noexcept { return !(*this == other); }

    std::string to_string(std::span<const std::string> names = {}) const;

private:
    std::vector<Factor> factors_;
};

/// Total order: degree ascending, ties broken lexicographically on the dense
/// exponent tuple with earlier variables dominating (x^2 before x*y before y^2).
bool graded_lex_less(const Monomial& a, const Monomial& b) noexcept;

struct GradedLexLess {
    bool operator()(const Monomial& a, const Monomial& b) const noexcept {
        return graded_lex_less(a, b);
    }
};

enum class BasisParity { All, Even, Odd };

/// All monomials in `nvars` variables with total degree <= max_degree, in
/// graded-lex order. The parity filter keeps only even or odd total degrees.
std::vector<Monomial> monomial_basis(int nvars, int max_degree,
                                     BasisParity parity = BasisParity::All);

}  // namespace sosbound
