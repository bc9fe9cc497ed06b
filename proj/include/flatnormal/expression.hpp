#pragma once

#include "flatnormal/chart.hpp"
#include "flatnormal/hyperdual.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace flatnormal {

/// Arithmetic expression in the chart parameters u1..un.
///
/// Grammar: numbers, + - * / ^ (right associative, binds tighter than
/// unary minus), parentheses, the functions sin cos tan sec csc cot asin
/// acos atan sinh cosh tanh sech csch coth asinh acosh atanh exp log sqrt,
/// and the constants pi, e plus any caller-supplied names.
class Expression {
public:
    struct Node;

    Expression() = default;

    /// Throws Error(parse) naming the offending column.
    static Expression parse(const std::string& text, int parameters,
                            const std::map<std::string, double>& constants = {});

    [[nodiscard]] double operator()(const std::vector<double>& u) const;
    [[nodiscard]] HyperDual operator()(const std::vector<HyperDual>& u) const;

    /// True when no parameter appears.
    [[nodiscard]] bool is_constant() const;

private:
    std::shared_ptr<const Node> root_;
};

/// Chart description file. Line-oriented, `#` comments, `key = value`:
///
///     dimension = 2
///     ambient = euclidean 3          # or: sphere m c, hyperbolic m c
///     curvature = -1                 # asserted intrinsic curvature (optional)
///     const a = 1                    # named constants, usable below
///     domain u1 = 0.3, 3
///     domain u2 = 0, 2*pi
///     x1 = sech(u1) * cos(u2)
///     ...
///
/// Every container component x1..xN must be given.
ImmersionChart parse_chart_file(const std::string& text, const std::string& name = "expression");

}  // namespace flatnormal
