#include "sosbound/poly_parser.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace sosbound {

namespace {

class Parser {
public:
    Parser(std::string_view text, std::span<const std::string> vars,
           const std::map<std::string, double>& params, int line, int col_offset)
        : text_(text), vars_(vars), params_(params), line_(line), col_offset_(col_offset) {}

    Polynomial parse() {
        Polynomial p = expression();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return p;
    }

private:
    std::string_view text_;
    std::span<const std::string> vars_;
    const std::map<std::string, double>& params_;
    int line_;
    int col_offset_;
    size_t pos_ = 0;

    int nvars() const { return static_cast<int>(vars_.size()); }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, line_, col_offset_ + static_cast<int>(pos_) + 1);
    }
    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Polynomial expression() {
        bool negative = false;
        if (eat('-')) negative = true;
        else eat('+');
        Polynomial p = term();
        if (negative) p = -p;
        while (true) {
            if (eat('+')) {
                p = p + term();
            } else if (eat('-')) {
                p = p - term();
            } else {
                return p;
            }
        }
    }

    Polynomial term() {
        Polynomial p = power();
        while (eat('*')) p = p * power();
        return p;
    }

    Polynomial power() {
        Polynomial base = primary();
        if (eat('^')) {
            const int e = integer();
            return base.pow(e);
        }
        return base;
    }

    int integer() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer exponent");
        return std::atoi(std::string(text_.substr(start, pos_ - start)).c_str());
    }

    Polynomial primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Polynomial p = expression();
            if (!eat(')')) fail("expected ')'");
            return p;
        }
        if (c == '-') {  // unary minus on a factor
            ++pos_;
            return -power();
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    Polynomial number() {
        size_t start = pos_;
        const char* begin = text_.data() + pos_;
        char* end = nullptr;
        const double value = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos_ = start + static_cast<size_t>(end - begin);
        return Polynomial::constant(nvars(), value);
    }

    Polynomial identifier() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string name(text_.substr(start, pos_ - start));
        for (int i = 0; i < nvars(); ++i) {
            if (vars_[i] == name) return Polynomial::variable(nvars(), i);
        }
        auto it = params_.find(name);
        if (it != params_.end()) return Polynomial::constant(nvars(), it->second);
        if (name == "pi") return Polynomial::constant(nvars(), M_PI);
        throw UndeclaredVariableError(name, line_,
                                      col_offset_ + static_cast<int>(start) + 1);
    }
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, std::span<const std::string> vars,
                            const std::map<std::string, double>& params, int line,
                            int col_offset) {
    return Parser(text, vars, params, line, col_offset).parse();
}

}  // namespace sosbound
