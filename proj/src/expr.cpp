#include "rfrac/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

namespace rfrac {

namespace {

struct Token {
    enum class Kind { number, ident, op, lparen, rparen, comma, end } kind;
    double value = 0.0;
    std::string text;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ >= src_.size()) return {Token::Kind::end};
        const char ch = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
            char* end = nullptr;
            const double v = std::strtod(src_.c_str() + pos_, &end);
            if (end == src_.c_str() + pos_)
                throw std::invalid_argument("expression: bad number at position " +
                                            std::to_string(pos_));
            pos_ = end - src_.c_str();
            return {Token::Kind::number, v};
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            return {Token::Kind::ident, 0.0, src_.substr(start, pos_ - start)};
        }
        ++pos_;
        switch (ch) {
            case '(': return {Token::Kind::lparen};
            case ')': return {Token::Kind::rparen};
            case ',': return {Token::Kind::comma};
            case '+':
            case '-':
            case '*':
            case '/':
            case '^': return {Token::Kind::op, 0.0, std::string(1, ch)};
            default:
                throw std::invalid_argument("expression: unexpected character '" +
                                            std::string(1, ch) + "'");
        }
    }

private:
    const std::string& src_;
    size_t pos_ = 0;
};

} // namespace

class ExprParser {
public:
    ExprParser(const std::string& src, Expression& out) : lexer_(src), out_(out) { advance(); }

    void run() {
        out_.root_ = parse_sum();
        if (current_.kind != Token::Kind::end)
            throw std::invalid_argument("expression: trailing input");
    }

private:
    using Op = Expression::Op;

    void advance() { current_ = lexer_.next(); }

    bool accept_op(const char* text) {
        if (current_.kind == Token::Kind::op && current_.text == text) {
            advance();
            return true;
        }
        return false;
    }

    int make(Op op, double value = 0.0, int lhs = -1, int rhs = -1) {
        out_.nodes_.push_back({op, value, lhs, rhs});
        return static_cast<int>(out_.nodes_.size()) - 1;
    }

    int parse_sum() {
        int lhs = parse_product();
        for (;;) {
            if (accept_op("+"))
                lhs = make(Op::add, 0.0, lhs, parse_product());
            else if (accept_op("-"))
                lhs = make(Op::sub, 0.0, lhs, parse_product());
            else
                return lhs;
        }
    }

    int parse_product() {
        int lhs = parse_unary();
        for (;;) {
            if (accept_op("*"))
                lhs = make(Op::mul, 0.0, lhs, parse_unary());
            else if (accept_op("/"))
                lhs = make(Op::div, 0.0, lhs, parse_unary());
            else
                return lhs;
        }
    }

    int parse_unary() {
        if (accept_op("-")) return make(Op::neg, 0.0, parse_unary());
        if (accept_op("+")) return parse_unary();
        return parse_power();
    }

    int parse_power() {
        const int base = parse_primary();
        if (accept_op("^")) return make(Op::pow, 0.0, base, parse_unary()); // right-assoc
        return base;
    }

    int parse_primary() {
        if (current_.kind == Token::Kind::number) {
            const double v = current_.value;
            advance();
            return make(Op::constant, v);
        }
        if (current_.kind == Token::Kind::lparen) {
            advance();
            const int inner = parse_sum();
            expect_rparen();
            return inner;
        }
        if (current_.kind == Token::Kind::ident) {
            const std::string name = current_.text;
            advance();
            if (name == "x") return make(Op::variable);
            if (name == "pi") return make(Op::constant, std::numbers::pi);
            if (name == "exp" || name == "abs") {
                expect_lparen(name);
                const int arg = parse_sum();
                expect_rparen();
                return make(name == "exp" ? Op::exp : Op::abs, 0.0, arg);
            }
            if (name == "min" || name == "max") {
                expect_lparen(name);
                const int a = parse_sum();
                if (current_.kind != Token::Kind::comma)
                    throw std::invalid_argument("expression: " + name + " takes two arguments");
                advance();
                const int b = parse_sum();
                expect_rparen();
                return make(name == "min" ? Op::min : Op::max, 0.0, a, b);
            }
            throw std::invalid_argument("expression: unknown identifier '" + name + "'");
        }
        throw std::invalid_argument("expression: expected a value");
    }

    void expect_lparen(const std::string& fn) {
        if (current_.kind != Token::Kind::lparen)
            throw std::invalid_argument("expression: " + fn + " needs parentheses");
        advance();
    }

    void expect_rparen() {
        if (current_.kind != Token::Kind::rparen)
            throw std::invalid_argument("expression: missing ')'");
        advance();
    }

    Lexer lexer_;
    Token current_;
    Expression& out_;
};

Expression Expression::parse(const std::string& src) {
    Expression e;
    e.source_ = src;
    ExprParser parser(src, e);
    parser.run();
    return e;
}

double Expression::eval_node(int idx, double x) const {
    const Node& n = nodes_[idx];
    switch (n.op) {
        case Op::constant: return n.value;
        case Op::variable: return x;
        case Op::add: return eval_node(n.lhs, x) + eval_node(n.rhs, x);
        case Op::sub: return eval_node(n.lhs, x) - eval_node(n.rhs, x);
        case Op::mul: return eval_node(n.lhs, x) * eval_node(n.rhs, x);
        case Op::div: return eval_node(n.lhs, x) / eval_node(n.rhs, x);
        case Op::pow: return std::pow(eval_node(n.lhs, x), eval_node(n.rhs, x));
        case Op::neg: return -eval_node(n.lhs, x);
        case Op::exp: return std::exp(eval_node(n.lhs, x));
        case Op::abs: return std::abs(eval_node(n.lhs, x));
        case Op::min: return std::min(eval_node(n.lhs, x), eval_node(n.rhs, x));
        case Op::max: return std::max(eval_node(n.lhs, x), eval_node(n.rhs, x));
    }
    return 0.0;
}

double Expression::eval(double x) const {
    if (root_ < 0) throw std::logic_error("Expression: not parsed");
    return eval_node(root_, x);
}

} // namespace rfrac
