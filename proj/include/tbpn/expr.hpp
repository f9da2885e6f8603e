#pragma once

// Symbolic scalar expressions over the chart coordinates (q^1..q^n, u^1..u^n)
// of a tangent bundle: parsing, exact differentiation, printing and
// numeric evaluation.

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tbpn {

/// Reduced fraction with positive denominator.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1);

    [[nodiscard]] double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    [[nodiscard]] bool isInteger() const { return den == 1; }
    friend bool operator==(const Rational&, const Rational&) = default;
};

enum class VarKind : std::uint8_t { Base, Fiber };

/// Chart variable: q^i (Base) or u^i (Fiber), zero-based index.
struct Var {
    VarKind kind = VarKind::Base;
    int index = 0;

    static Var q(int i) { return {VarKind::Base, i}; }
    static Var u(int i) { return {VarKind::Fiber, i}; }
    friend bool operator==(const Var&, const Var&) = default;
};

/// A point (q, u) of the tangent-bundle chart.
struct Point {
    Eigen::VectorXd q;
    Eigen::VectorXd u;

    [[nodiscard]] int dim() const { return static_cast<int>(q.size()); }
    [[nodiscard]] double operator[](Var v) const { return v.kind == VarKind::Base ? q[v.index] : u[v.index]; }
    [[nodiscard]] std::string toString() const;
};

enum class Op : std::uint8_t { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Tan, Exp, Log, Sqrt };

struct Node;

/// Immutable expression handle. Copies share the underlying tree.
class Expr {
public:
    Expr();
    Expr(double c);  // NOLINT(google-explicit-constructor)
    Expr(int c) : Expr(static_cast<double>(c)) {}  // NOLINT(google-explicit-constructor)

    static Expr variable(Var v);
    static Expr q(int i) { return variable(Var::q(i)); }
    static Expr u(int i) { return variable(Var::u(i)); }

    [[nodiscard]] Op op() const;
    [[nodiscard]] const Node* node() const { return node_.get(); }
    [[nodiscard]] bool isConstant() const { return op() == Op::Const; }
    [[nodiscard]] bool isZero() const;
    [[nodiscard]] bool isOne() const;
    [[nodiscard]] double constantValue() const;

    Expr& operator+=(const Expr& o);
    Expr& operator-=(const Expr& o);
    Expr& operator*=(const Expr& o);
    Expr& operator/=(const Expr& o);

    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

private:
    std::shared_ptr<const Node> node_;
};

struct Node : std::enable_shared_from_this<Node> {
    Op op = Op::Const;
    double value = 0.0;
    Var var{};
    Rational exponent{};
    Expr a;
    Expr b;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, Rational exponent);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr tan(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sqrt(const Expr& e);

inline Expr square(const Expr& e) { return e * e; }

/// Identity comparison: same node, or equal constants. Not mathematical equality.
bool operator==(const Expr& a, const Expr& b);

// ---------------------------------------------------------------------------
// Parsing and printing

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg + " at byte " + std::to_string(offset)), offset_(offset) {}
    [[nodiscard]] std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Parses `text` in the variables q1..qn, u1..un.
///
/// Grammar (whitespace insignificant):
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' exponent)?
///   base   := number | ident | func '(' expr ')' | '(' expr ')' | '-' base
///   exponent := ['-'] number | '(' ['-'] integer '/' integer ')' | '(' ['-'] number ')'
/// Exponents must be rational; decimal exponents are converted exactly when
/// they have at most 9 fractional digits.
Expr parse(std::string_view text, int n);

std::string toString(const Expr& e);

// ---------------------------------------------------------------------------
// Differentiation

/// Memoizing partial differentiator with respect to one variable. Reusing one
/// instance across related expressions preserves sharing in the results.
class Differentiator {
public:
    explicit Differentiator(Var v) : var_(v) {}
    Expr operator()(const Expr& e);
    [[nodiscard]] Var variable() const { return var_; }

private:
    Var var_;
    std::unordered_map<const Node*, Expr> memo_;
    std::vector<Expr> pins_;
};

Expr diff(const Expr& e, Var v);

[[nodiscard]] bool dependsOn(const Expr& e, Var v);
[[nodiscard]] bool dependsOnFiber(const Expr& e);

// ---------------------------------------------------------------------------
// Evaluation

class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flattened, common-subexpression-eliminated evaluation program for a batch
/// of expressions.
class Tape {
public:
    Tape() = default;
    explicit Tape(std::span<const Expr> outputs);

    [[nodiscard]] std::vector<double> evaluate(const Point& p) const;
    void evaluate(const Point& p, std::vector<double>& work, std::span<double> out) const;

    [[nodiscard]] std::size_t instructionCount() const { return code_.size(); }
    [[nodiscard]] std::size_t outputCount() const { return outputs_.size(); }

private:
    struct Instr {
        Op op;
        int a = -1;
        int b = -1;
        double value = 0.0;
        Var var{};
        Rational exponent{};
        const Node* source = nullptr;
    };
    std::vector<Instr> code_;
    std::vector<int> outputs_;
    std::vector<Expr> roots_;
};

double eval(const Expr& e, const Point& p);

/// Scale-aware closeness: |a-b| <= tol * (1 + max(|a|, |b|)).
[[nodiscard]] bool close(double a, double b, double tol);
/// |a-b| / (1 + max(|a|, |b|)).
[[nodiscard]] double scaledDiff(double a, double b);

}  // namespace tbpn

namespace Eigen {

template <>
struct NumTraits<tbpn::Expr> : GenericNumTraits<double> {
    using Real = tbpn::Expr;
    using NonInteger = tbpn::Expr;
    using Nested = tbpn::Expr;
    using Literal = tbpn::Expr;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 3,
        MulCost = 3
    };
};

}  // namespace Eigen
