#include "arbordyn/poly_parse.hpp"

#include <cctype>

#include "json.hpp"

namespace arbordyn::exactalg {

namespace {

class Parser {
  public:
    explicit Parser(const std::string& text) : text_(text) {}

    PolyQ parse() {
        PolyQ p = expr();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError("unexpected trailing input at position " +
                             std::to_string(pos_));
        return p;
    }

  private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(
                                          static_cast<unsigned char>(
                                              text_[pos_])))
            ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    PolyQ expr() {
        PolyQ acc = term();
        while (true) {
            if (eat('+'))
                acc = acc + term();
            else if (eat('-'))
                acc = acc - term();
            else
                return acc;
        }
    }

    PolyQ term() {
        PolyQ acc = unary();
        while (true) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                acc = acc * unary();
            } else if (c == '/') {
                ++pos_;
                PolyQ divisor = unary();
                if (divisor.degree() != 0)
                    throw ParseError("division only by nonzero constants");
                acc = (Rat(1) / divisor.coeff(0)) * acc;
            } else if (c == 'x' || c == '(') {
                // implicit multiplication: 3x, 2(x+1)
                acc = acc * unary();
            } else {
                return acc;
            }
        }
    }

    PolyQ unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }

    PolyQ power() {
        PolyQ base = atom();
        if (peek() == '^') {
            ++pos_;
            skip_ws();
            long e = natural();
            return poly_pow(base, e);
        }
        return base;
    }

    PolyQ atom() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            PolyQ inner = expr();
            if (!eat(')')) throw ParseError("missing ')'");
            return inner;
        }
        if (c == 'x') {
            ++pos_;
            return PolyQ::variable();
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            return PolyQ::constant(Rat(natural()));
        throw ParseError(std::string("unexpected character '") + c +
                         "' at position " + std::to_string(pos_));
    }

    long natural() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (start == pos_) throw ParseError("expected a number");
        try {
            return std::stol(text_.substr(start, pos_ - start));
        } catch (const std::exception&) {
            throw ParseError("number out of range");
        }
    }

    const std::string& text_;
    size_t pos_ = 0;
};

PolyQ poly_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad JSON coefficient array: ") +
                         e.what());
    }
    if (!j.is_array()) throw ParseError("JSON input must be an array");
    std::vector<Rat> coeffs;
    for (auto& entry : j) {
        if (entry.is_number_integer())
            coeffs.emplace_back(entry.get<long>());
        else if (entry.is_string())
            coeffs.push_back(parse_rational(entry.get<std::string>()));
        else
            throw ParseError("coefficients must be integers or \"p/q\"");
    }
    return PolyQ(std::move(coeffs));
}

}  // namespace

PolyQ parse_poly(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == '[') return poly_from_json(text);
        break;
    }
    return Parser(text).parse();
}

Rat parse_rational(const std::string& text) {
    Rat r;
    if (text.empty() || mpq_set_str(r.get_mpq_t(), text.c_str(), 10) != 0)
        throw ParseError("bad rational literal: " + text);
    if (r.get_den() == 0) throw ParseError("zero denominator: " + text);
    r.canonicalize();
    return r;
}

}  // namespace arbordyn::exactalg
