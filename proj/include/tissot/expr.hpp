#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tissot {

/// Value with its partial derivatives along the two expression variables.
struct Dual2 {
    double value = 0.0;
    std::array<double, 2> d{0.0, 0.0};
};

/// Immutable parsed arithmetic expression over a fixed list of variables.
///
/// Grammar: numbers, the named variables, `pi`, unary +/-, binary + - * /,
/// right-associative ^, parentheses, and the functions sin cos tan ln sqrt.
/// Copies share the same tree.
class Expression {
public:
    struct Node;

    Expression() = default;

    /// Throws ParseError (offset = base_offset + position in text) on
    /// malformed input or unknown identifiers.
    static Expression parse(std::string_view text, std::span<const std::string> variables,
                            std::size_t base_offset = 0);

    /// Throws DomainError when a sub-expression leaves its domain or the
    /// result is not finite.
    double evaluate(std::span<const double> vars) const;
    /// Forward-mode evaluation for up to two variables, seeded with unit
    /// derivatives on variable 0 and 1.
    Dual2 evaluate_dual(std::span<const double> vars) const;

    /// Fully parenthesized text that parses back to the identical tree.
    std::string to_string() const;

    const std::vector<std::string>& variables() const { return variables_; }
    bool empty() const { return root_ == nullptr; }

private:
    std::shared_ptr<const Node> root_;
    std::vector<std::string> variables_;
};

}  // namespace tissot
