#include "tbpn/expr.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace tbpn {

Expr makeNode(Op op, Expr a, Expr b, double value, Var var, Rational exponent);

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const auto g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

std::string Point::toString() const {
    std::ostringstream os;
    os.precision(17);
    os << "q=(";
    for (int i = 0; i < q.size(); ++i) os << (i ? "," : "") << q[i];
    os << "), u=(";
    for (int i = 0; i < u.size(); ++i) os << (i ? "," : "") << u[i];
    os << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// Construction with light simplification

Expr makeNode(Op op, Expr a, Expr b, double value, Var var, Rational exponent) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->value = value;
    n->var = var;
    n->exponent = exponent;
    n->a = std::move(a);
    n->b = std::move(b);
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

namespace {

Expr constant(double c) { return makeNode(Op::Const, {}, {}, c, {}, {}); }

Expr unary(Op op, const Expr& a) { return makeNode(op, a, {}, 0.0, {}, {}); }
Expr binary(Op op, const Expr& a, const Expr& b) { return makeNode(op, a, b, 0.0, {}, {}); }

}  // namespace

Expr::Expr() : node_(nullptr) {}

Expr::Expr(double c) { node_ = constant(c).node_; }

Expr Expr::variable(Var v) { return makeNode(Op::Var, {}, {}, 0.0, v, {}); }

Op Expr::op() const { return node_ ? node_->op : Op::Const; }

double Expr::constantValue() const {
    if (!node_) return 0.0;
    if (node_->op != Op::Const) throw std::logic_error("constantValue on non-constant expression");
    return node_->value;
}

bool Expr::isZero() const { return isConstant() && constantValue() == 0.0; }
bool Expr::isOne() const { return isConstant() && constantValue() == 1.0; }

bool operator==(const Expr& a, const Expr& b) {
    if (a.node() == b.node()) return true;
    return a.isConstant() && b.isConstant() && a.constantValue() == b.constantValue();
}

Expr& Expr::operator+=(const Expr& o) { return *this = *this + o; }
Expr& Expr::operator-=(const Expr& o) { return *this = *this - o; }
Expr& Expr::operator*=(const Expr& o) { return *this = *this * o; }
Expr& Expr::operator/=(const Expr& o) { return *this = *this / o; }

Expr operator+(const Expr& a, const Expr& b) {
    if (a.isZero()) return b;
    if (b.isZero()) return a;
    if (a.isConstant() && b.isConstant()) return Expr(a.constantValue() + b.constantValue());
    if (b.op() == Op::Neg) return binary(Op::Sub, a, b.node()->a);
    return binary(Op::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
    if (b.isZero()) return a;
    if (a.isZero()) return -b;
    if (a.isConstant() && b.isConstant()) return Expr(a.constantValue() - b.constantValue());
    if (a.node() == b.node()) return Expr(0.0);
    if (b.op() == Op::Neg) return binary(Op::Add, a, b.node()->a);
    return binary(Op::Sub, a, b);
}

Expr operator-(const Expr& a) {
    if (a.isConstant()) return Expr(-a.constantValue());
    if (a.op() == Op::Neg) return a.node()->a;
    return unary(Op::Neg, a);
}

Expr operator*(const Expr& a, const Expr& b) {
    if (a.isZero() || b.isZero()) return Expr(0.0);
    if (a.isOne()) return b;
    if (b.isOne()) return a;
    if (a.isConstant() && b.isConstant()) return Expr(a.constantValue() * b.constantValue());
    if (a.isConstant() && a.constantValue() == -1.0) return -b;
    if (b.isConstant() && b.constantValue() == -1.0) return -a;
    if (a.op() == Op::Neg && b.op() == Op::Neg) return a.node()->a * b.node()->a;
    if (a.op() == Op::Neg) return -(a.node()->a * b);
    if (b.op() == Op::Neg) return -(a * b.node()->a);
    // keep constants on the left so constant folding can reach them
    if (b.isConstant()) return binary(Op::Mul, b, a);
    return binary(Op::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
    if (b.isZero()) return binary(Op::Div, a, b);  // reported at evaluation
    if (a.isZero()) return Expr(0.0);
    if (b.isOne()) return a;
    if (a.isConstant() && b.isConstant()) return Expr(a.constantValue() / b.constantValue());
    if (b.isConstant() && b.constantValue() == -1.0) return -a;
    if (a.op() == Op::Neg) return -(a.node()->a / b);
    if (b.op() == Op::Neg) return -(a / b.node()->a);
    return binary(Op::Div, a, b);
}

Expr pow(const Expr& base, Rational r) {
    if (r.num == 0) return Expr(1.0);
    if (r.num == 1 && r.den == 1) return base;
    if (base.isConstant()) {
        const double v = base.constantValue();
        if (r.isInteger()) return Expr(std::pow(v, static_cast<double>(r.num)));
        if (v > 0.0) return Expr(std::pow(v, r.value()));
    }
    if (base.op() == Op::Pow) {
        const Rational inner = base.node()->exponent;
        // (x^a)^b = x^(ab) is only safe for integer outer exponents
        if (r.isInteger() && inner.isInteger())
            return pow(base.node()->a, Rational(inner.num * r.num, 1));
    }
    return makeNode(Op::Pow, base, {}, 0.0, {}, r);
}

Expr sin(const Expr& e) { return e.isConstant() ? Expr(std::sin(e.constantValue())) : unary(Op::Sin, e); }
Expr cos(const Expr& e) { return e.isConstant() ? Expr(std::cos(e.constantValue())) : unary(Op::Cos, e); }
Expr tan(const Expr& e) { return e.isConstant() ? Expr(std::tan(e.constantValue())) : unary(Op::Tan, e); }
Expr exp(const Expr& e) { return e.isConstant() ? Expr(std::exp(e.constantValue())) : unary(Op::Exp, e); }
Expr log(const Expr& e) {
    if (e.isConstant() && e.constantValue() > 0.0) return Expr(std::log(e.constantValue()));
    return unary(Op::Log, e);
}
Expr sqrt(const Expr& e) {
    if (e.isConstant() && e.constantValue() >= 0.0) return Expr(std::sqrt(e.constantValue()));
    return unary(Op::Sqrt, e);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    Parser(std::string_view text, int n) : s_(text), n_(n) {}

    Expr run() {
        Expr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            if (accept('+')) lhs = lhs + term();
            else if (accept('-')) lhs = lhs - term();
            else return lhs;
        }
    }

    Expr term() {
        Expr lhs = factor();
        for (;;) {
            if (accept('*')) lhs = lhs * factor();
            else if (accept('/')) lhs = lhs / factor();
            else return lhs;
        }
    }

    Expr factor() {
        Expr b = base();
        if (accept('^')) return pow(b, exponent());
        return b;
    }

    Rational exponent() {
        if (accept('(')) {
            const bool neg = accept('-');
            const std::size_t start = pos_;
            Rational r = numberAsRational();
            if (accept('/')) {
                if (!r.isInteger() || s_.substr(start, pos_ - start).find('.') != std::string_view::npos)
                    fail("exponent numerator must be an integer");
                const std::size_t dstart = pos_;
                Rational d = numberAsRational();
                if (!d.isInteger() || d.num == 0) {
                    pos_ = dstart;
                    fail("exponent denominator must be a non-zero integer");
                }
                r = Rational(r.num, d.num);
            }
            expect(')');
            return neg ? Rational(-r.num, r.den) : r;
        }
        const bool neg = accept('-');
        Rational r = numberAsRational();
        return neg ? Rational(-r.num, r.den) : r;
    }

    std::string_view numberToken() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        if (pos_ == start || (pos_ == start + 1 && s_[start] == '.')) {
            pos_ = start;
            fail("expected number");
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
            if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
                while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
                pos_ = p;
            }
        }
        return s_.substr(start, pos_ - start);
    }

    Rational numberAsRational() {
        const std::size_t start = pos_;
        const std::string_view tok = numberToken();
        if (tok.find_first_of("eE") != std::string_view::npos) {
            pos_ = start;
            fail("scientific notation not allowed in exponent");
        }
        const auto dot = tok.find('.');
        const std::string_view whole = tok.substr(0, dot);
        const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : tok.substr(dot + 1);
        if (whole.size() > 9 || frac.size() > 9) {
            pos_ = start;
            fail("exponent out of range");
        }
        std::int64_t num = 0;
        for (char c : whole) num = num * 10 + (c - '0');
        std::int64_t den = 1;
        for (char c : frac) {
            num = num * 10 + (c - '0');
            den *= 10;
        }
        return Rational(num, den);
    }

    Expr base() {
        const char c = peek();
        if (c == '-') {
            ++pos_;
            return -base();
        }
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const std::size_t start = pos_;
            const std::string_view tok = numberToken();
            double v = 0.0;
            const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (res.ec != std::errc{}) {
                pos_ = start;
                fail("malformed number");
            }
            return Expr(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string_view id = s_.substr(start, pos_ - start);
            if ((id[0] == 'q' || id[0] == 'u') && id.size() > 1 &&
                std::all_of(id.begin() + 1, id.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
                int idx = 0;
                std::from_chars(id.data() + 1, id.data() + id.size(), idx);
                if (idx < 1 || idx > n_) {
                    pos_ = start;
                    fail("variable index out of range in '" + std::string(id) + "' (dimension " + std::to_string(n_) + ")");
                }
                return id[0] == 'q' ? Expr::q(idx - 1) : Expr::u(idx - 1);
            }
            Expr (*fn)(const Expr&) = nullptr;
            if (id == "sin") fn = &sin;
            else if (id == "cos") fn = &cos;
            else if (id == "tan") fn = &tan;
            else if (id == "exp") fn = &exp;
            else if (id == "log") fn = &log;
            else if (id == "sqrt") fn = &sqrt;
            if (!fn) {
                pos_ = start;
                fail("unknown identifier '" + std::string(id) + "'");
            }
            expect('(');
            Expr arg = expr();
            expect(')');
            return fn(arg);
        }
        if (c == '\0') fail("unexpected end of input");
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    int n_;
    std::size_t pos_ = 0;
};

std::string formatDouble(double v) {
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void print(const Expr& e, std::string& out) {
    const Node* n = e.node();
    switch (e.op()) {
        case Op::Const: {
            const double v = n ? n->value : 0.0;
            if (v < 0 || std::signbit(v)) out += "(" + formatDouble(v) + ")";
            else out += formatDouble(v);
            return;
        }
        case Op::Var:
            out += (n->var.kind == VarKind::Base ? 'q' : 'u');
            out += std::to_string(n->var.index + 1);
            return;
        case Op::Neg:
            out += "(-";
            print(n->a, out);
            out += ")";
            return;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: {
            static constexpr const char* sym[] = {" + ", " - ", "*", "/"};
            out += "(";
            print(n->a, out);
            out += sym[static_cast<int>(n->op) - static_cast<int>(Op::Add)];
            print(n->b, out);
            out += ")";
            return;
        }
        case Op::Pow: {
            out += "(";
            print(n->a, out);
            out += ")^";
            const Rational r = n->exponent;
            if (r.isInteger()) out += std::to_string(r.num);
            else out += "(" + std::to_string(r.num) + "/" + std::to_string(r.den) + ")";
            return;
        }
        default: {
            static constexpr const char* names[] = {"sin", "cos", "tan", "exp", "log", "sqrt"};
            out += names[static_cast<int>(n->op) - static_cast<int>(Op::Sin)];
            out += "(";
            print(n->a, out);
            out += ")";
            return;
        }
    }
}

}  // namespace

Expr parse(std::string_view text, int n) { return Parser(text, n).run(); }

std::string toString(const Expr& e) {
    std::string out;
    print(e, out);
    return out;
}

// ---------------------------------------------------------------------------
// Differentiation

Expr Differentiator::operator()(const Expr& e) {
    const Node* n = e.node();
    if (!n || n->op == Op::Const) return Expr(0.0);
    if (n->op == Op::Var) return Expr(n->var == var_ ? 1.0 : 0.0);
    if (auto it = memo_.find(n); it != memo_.end()) return it->second;

    const Expr& a = n->a;
    const Expr& b = n->b;
    Expr d;
    switch (n->op) {
        case Op::Neg: d = -(*this)(a); break;
        case Op::Add: d = (*this)(a) + (*this)(b); break;
        case Op::Sub: d = (*this)(a) - (*this)(b); break;
        case Op::Mul: d = (*this)(a) * b + a * (*this)(b); break;
        case Op::Div: {
            const Expr da = (*this)(a);
            const Expr db = (*this)(b);
            d = da / b - (a * db) / (b * b);
            break;
        }
        case Op::Pow: {
            const Rational r = n->exponent;
            const Expr da = (*this)(a);
            if (!da.isZero()) d = Expr(r.value()) * pow(a, Rational(r.num - r.den, r.den)) * da;
            break;
        }
        case Op::Sin: d = cos(a) * (*this)(a); break;
        case Op::Cos: d = -(sin(a) * (*this)(a)); break;
        case Op::Tan: {
            const Expr da = (*this)(a);
            if (!da.isZero()) d = (Expr(1.0) + e * e) * da;
            break;
        }
        case Op::Exp: d = e * (*this)(a); break;
        case Op::Log: d = (*this)(a) / a; break;
        case Op::Sqrt: {
            const Expr da = (*this)(a);
            if (!da.isZero()) d = da / (Expr(2.0) * e);
            break;
        }
        default: break;
    }
    if (d.node() == nullptr) d = Expr(0.0);
    pins_.push_back(e);
    memo_.emplace(n, d);
    return d;
}

Expr diff(const Expr& e, Var v) {
    Differentiator d(v);
    return d(e);
}

namespace {

template <class Pred>
bool anyVar(const Expr& e, Pred pred, std::unordered_map<const Node*, bool>& memo) {
    const Node* n = e.node();
    if (!n || n->op == Op::Const) return false;
    if (n->op == Op::Var) return pred(n->var);
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    const bool r = anyVar(n->a, pred, memo) || (n->b.node() && anyVar(n->b, pred, memo));
    memo.emplace(n, r);
    return r;
}

}  // namespace

bool dependsOn(const Expr& e, Var v) {
    std::unordered_map<const Node*, bool> memo;
    return anyVar(e, [v](Var w) { return w == v; }, memo);
}

bool dependsOnFiber(const Expr& e) {
    std::unordered_map<const Node*, bool> memo;
    return anyVar(e, [](Var w) { return w.kind == VarKind::Fiber; }, memo);
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct InstrKey {
    Op op;
    int a, b;
    std::uint64_t value;
    int var;
    std::int64_t num, den;
    bool operator==(const InstrKey&) const = default;
};

struct InstrKeyHash {
    std::size_t operator()(const InstrKey& k) const {
        std::size_t h = static_cast<std::size_t>(k.op);
        auto mix = [&h](std::uint64_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
        mix(static_cast<std::uint64_t>(k.a));
        mix(static_cast<std::uint64_t>(k.b));
        mix(k.value);
        mix(static_cast<std::uint64_t>(k.var));
        mix(static_cast<std::uint64_t>(k.num));
        mix(static_cast<std::uint64_t>(k.den));
        return h;
    }
};

}  // namespace

Tape::Tape(std::span<const Expr> outputs) {
    std::unordered_map<const Node*, int> seen;
    std::unordered_map<InstrKey, int, InstrKeyHash> cse;
    roots_.assign(outputs.begin(), outputs.end());

    // iterative post-order so deep sums do not exhaust the stack
    for (const Expr& root : roots_) {
        struct Frame {
            const Expr* e;
            bool expanded;
        };
        std::vector<Frame> stack{{&root, false}};
        while (!stack.empty()) {
            Frame f = stack.back();
            stack.pop_back();
            const Node* n = f.e->node();
            if (seen.count(n)) continue;
            const bool hasA = n && n->op != Op::Const && n->op != Op::Var;
            const bool hasB = hasA && n->b.node() != nullptr && n->op != Op::Pow;
            if (!f.expanded && hasA) {
                stack.push_back({f.e, true});
                if (hasB) stack.push_back({&n->b, false});
                stack.push_back({&n->a, false});
                continue;
            }
            Instr ins{};
            ins.op = n ? n->op : Op::Const;
            ins.source = n;
            InstrKey key{ins.op, -1, -1, 0, -1, 0, 1};
            if (!n || n->op == Op::Const) {
                ins.value = n ? n->value : 0.0;
                key.value = std::bit_cast<std::uint64_t>(ins.value);
            } else if (n->op == Op::Var) {
                ins.var = n->var;
                key.var = n->var.index * 2 + (n->var.kind == VarKind::Fiber ? 1 : 0);
            } else {
                ins.a = seen.at(n->a.node());
                key.a = ins.a;
                if (hasB) {
                    ins.b = seen.at(n->b.node());
                    key.b = ins.b;
                }
                if (n->op == Op::Pow) {
                    ins.exponent = n->exponent;
                    key.num = n->exponent.num;
                    key.den = n->exponent.den;
                }
            }
            auto [it, inserted] = cse.emplace(key, static_cast<int>(code_.size()));
            if (inserted) code_.push_back(ins);
            seen.emplace(n, it->second);
        }
        outputs_.push_back(seen.at(root.node()));
    }
}

namespace {

double powRational(double x, Rational r) {
    if (r.isInteger()) {
        const auto k = r.num;
        if (k >= 0 && k <= 8) {
            double acc = 1.0;
            for (std::int64_t i = 0; i < k; ++i) acc *= x;
            return acc;
        }
        return std::pow(x, static_cast<double>(k));
    }
    if (x >= 0.0) return std::pow(x, r.value());
    if (r.den % 2 == 1) {
        const double mag = std::pow(-x, r.value());
        return (r.num % 2 != 0) ? -mag : mag;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

void Tape::evaluate(const Point& p, std::vector<double>& work, std::span<double> out) const {
    work.resize(code_.size());
    for (std::size_t i = 0; i < code_.size(); ++i) {
        const Instr& in = code_[i];
        const double a = in.a >= 0 ? work[in.a] : 0.0;
        const double b = in.b >= 0 ? work[in.b] : 0.0;
        double r = 0.0;
        auto fail = [&](const char* what) {
            const std::string sub = in.source ? toString(Expr(in.source->shared_from_this())) : "?";
            throw DomainError(std::string(what) + " in " + sub + " at " + p.toString());
        };
        switch (in.op) {
            case Op::Const: r = in.value; break;
            case Op::Var: r = p[in.var]; break;
            case Op::Neg: r = -a; break;
            case Op::Add: r = a + b; break;
            case Op::Sub: r = a - b; break;
            case Op::Mul: r = a * b; break;
            case Op::Div:
                if (b == 0.0) fail("division by zero");
                r = a / b;
                break;
            case Op::Pow:
                if (a == 0.0 && in.exponent.num < 0) fail("zero raised to a negative power");
                if (a < 0.0 && !in.exponent.isInteger() && in.exponent.den % 2 == 0)
                    fail("negative base with even-root exponent");
                r = powRational(a, in.exponent);
                break;
            case Op::Sin: r = std::sin(a); break;
            case Op::Cos: r = std::cos(a); break;
            case Op::Tan: r = std::tan(a); break;
            case Op::Exp: r = std::exp(a); break;
            case Op::Log:
                if (!(a > 0.0)) fail("log of non-positive value");
                r = std::log(a);
                break;
            case Op::Sqrt:
                if (a < 0.0) fail("sqrt of negative value");
                r = std::sqrt(a);
                break;
        }
        work[i] = r;
    }
    for (std::size_t k = 0; k < outputs_.size(); ++k) out[k] = work[outputs_[k]];
}

std::vector<double> Tape::evaluate(const Point& p) const {
    std::vector<double> work;
    std::vector<double> out(outputs_.size());
    evaluate(p, work, out);
    return out;
}

double eval(const Expr& e, const Point& p) {
    const Tape t(std::span<const Expr>(&e, 1));
    return t.evaluate(p)[0];
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b))); }

double scaledDiff(double a, double b) { return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b))); }

}  // namespace tbpn
