#pragma once

#include <string>
#include <vector>

namespace rfrac {

/// Arithmetic expressions over one variable x: + - * / ^ (right-assoc),
/// unary minus, exp, abs, min, max, numeric literals, and pi. Parsed once,
/// evaluated many times; keeps CLI runs reproducible from flags alone.
class Expression {
public:
    static Expression parse(const std::string& src);
    double eval(double x) const;
    const std::string& source() const { return source_; }

private:
    enum class Op { constant, variable, add, sub, mul, div, pow, neg, exp, abs, min, max };
    struct Node {
        Op op;
        double value = 0.0;
        int lhs = -1;
        int rhs = -1;
    };
    double eval_node(int idx, double x) const;

    std::string source_;
    std::vector<Node> nodes_;
    int root_ = -1;

    friend class ExprParser;
};

} // namespace rfrac
