#pragma once

#include <stdexcept>
#include <string>

namespace sosbound {

/// Operands live in polynomial rings over different variable counts.
class DimensionMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A monomial of the target polynomial is outside the span of basis products,
/// which signals that the Gram basis degree is too low.
class UnrepresentableMonomialError : public std::runtime_error {
public:
    explicit UnrepresentableMonomialError(std::string monomial)
        : std::runtime_error("monomial not representable by basis products: " + monomial),
          monomial_(std::move(monomial)) {}
    const std::string& monomial() const noexcept { return monomial_; }

private:
    std::string monomial_;
};

/// Trajectory escaped the integration domain (state norm above the cutoff).
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(double escape_time)
        : std::runtime_error("trajectory diverged at t=" + std::to_string(escape_time)),
          escape_time_(escape_time) {}
    double escape_time() const noexcept { return escape_time_; }

private:
    double escape_time_ = 0.0;
};

}  // namespace sosbound
