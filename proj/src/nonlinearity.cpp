#include "sgsolver/nonlinearity.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

#include "sgsolver/numeric.hpp"

namespace sg {

void ProblemSpec::validate() const {
    require(points >= 2, "ProblemSpec: need at least 2 simplex corners");
    require(level >= 0, "ProblemSpec: negative level");
    require(1.0 < r && r < s && s < 2.0 && 2.0 < q,
            "ProblemSpec: exponents must satisfy 1 < r < s < 2 < q");
    require(lambda >= 0.0, "ProblemSpec: lambda must be >= 0");
    require(eta >= 0.0, "ProblemSpec: eta must be >= 0");
}

Nonlinearity power_problem(const ProblemSpec& spec) {
    spec.validate();
    const double lam = spec.lambda, eta = spec.eta;
    const double r = spec.r, s = spec.s, q = spec.q;
    Nonlinearity nl;
    nl.family = "power";
    nl.params = {{"r", r}, {"s", s}, {"q", q}, {"lambda", lam}, {"eta", eta}};
    nl.f = [=](int, double t) {
        return lam * sgn_pow(t, s - 1.0) - eta * sgn_pow(t, r - 1.0) + sgn_pow(t, q - 1.0);
    };
    nl.F = [=](int, double t) {
        const double at = std::abs(t);
        return lam / s * std::pow(at, s) - eta / r * std::pow(at, r) + std::pow(at, q) / q;
    };
    return nl;
}

Nonlinearity power_single_term(double coef, double p) {
    require(p > 1.0, "power_single_term: exponent must exceed 1");
    require(coef >= 0.0, "power_single_term: negative coefficient");
    Nonlinearity nl;
    nl.family = "power-term";
    nl.params = {{"coef", coef}, {"p", p}};
    nl.f = [=](int, double t) { return coef * sgn_pow(t, p - 1.0); };
    nl.F = [=](int, double t) { return coef / p * std::pow(std::abs(t), p); };
    return nl;
}

namespace {

double coef_at(const std::shared_ptr<const std::vector<double>>& a, int x) {
    if (a->size() == 1) return (*a)[0];
    if (x < 0 || x >= static_cast<int>(a->size()))
        throw std::out_of_range("nonlinearity: vertex index outside the coefficient table");
    return (*a)[x];
}

} // namespace

Nonlinearity example_f1(double alpha, double beta, std::vector<double> a) {
    require(0.0 < alpha && alpha < 2.0 && beta > 2.0,
            "example_f1: need 0 < alpha < 2 < beta");
    require(!a.empty(), "example_f1: empty coefficient table");
    for (double v : a) require(v > 0.0, "example_f1: coefficients must be positive");
    auto ap = std::make_shared<const std::vector<double>>(std::move(a));
    Nonlinearity nl;
    nl.family = "example_f1";
    nl.params = {{"alpha", alpha}, {"beta", beta}};
    nl.f = [=](int x, double t) {
        double f1 = std::abs(t) <= 1.0 ? sgn_pow(t, beta - 1.0) : sgn_pow(t, alpha - 1.0);
        return coef_at(ap, x) * f1;
    };
    // primitive glued at |t| = 1: both branches give 1/beta there
    nl.F = [=](int x, double t) {
        const double at = std::abs(t);
        double F1 = at <= 1.0 ? std::pow(at, beta) / beta
                              : 1.0 / beta - 1.0 / alpha + std::pow(at, alpha) / alpha;
        return coef_at(ap, x) * F1;
    };
    return nl;
}

// --- expression parser -------------------------------------------------------

struct Expression::Node {
    enum class Kind { constant, var_t, var_a, neg, add, sub, mul, div, pow, call1, call2 };
    Kind kind;
    double value = 0.0;
    double (*fn1)(double) = nullptr;
    double (*fn2)(double, double) = nullptr;
    std::shared_ptr<const Node> lhs, rhs;

    double eval(double t, double a) const {
        switch (kind) {
            case Kind::constant: return value;
            case Kind::var_t: return t;
            case Kind::var_a: return a;
            case Kind::neg: return -lhs->eval(t, a);
            case Kind::add: return lhs->eval(t, a) + rhs->eval(t, a);
            case Kind::sub: return lhs->eval(t, a) - rhs->eval(t, a);
            case Kind::mul: return lhs->eval(t, a) * rhs->eval(t, a);
            case Kind::div: return lhs->eval(t, a) / rhs->eval(t, a);
            case Kind::pow: return std::pow(lhs->eval(t, a), rhs->eval(t, a));
            case Kind::call1: return fn1(lhs->eval(t, a));
            case Kind::call2: return fn2(lhs->eval(t, a), rhs->eval(t, a));
        }
        return 0.0;  // unreachable
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make_node(Expression::Node n) {
    return std::make_shared<const Expression::Node>(std::move(n));
}

double fn_sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }
double fn_min(double x, double y) { return std::min(x, y); }
double fn_max(double x, double y) { return std::max(x, y); }
double fn_sgnpow(double t, double p) { return sgn_pow(t, p); }

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    NodePtr run() {
        auto e = parse_expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return e;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("expression: " + what + " at position " +
                                    std::to_string(pos_) + " in \"" + s_ + "\"");
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    NodePtr parse_expr() {
        auto lhs = parse_term();
        for (;;) {
            if (eat('+')) lhs = make_node({Kind::add, 0, nullptr, nullptr, lhs, parse_term()});
            else if (eat('-')) lhs = make_node({Kind::sub, 0, nullptr, nullptr, lhs, parse_term()});
            else return lhs;
        }
    }

    NodePtr parse_term() {
        auto lhs = parse_factor();
        for (;;) {
            if (eat('*')) lhs = make_node({Kind::mul, 0, nullptr, nullptr, lhs, parse_factor()});
            else if (eat('/')) lhs = make_node({Kind::div, 0, nullptr, nullptr, lhs, parse_factor()});
            else return lhs;
        }
    }

    NodePtr parse_factor() {
        // unary minus binds looser than '^', so -t^2 means -(t^2)
        if (eat('-')) return make_node({Kind::neg, 0, nullptr, nullptr, parse_factor(), nullptr});
        return parse_power();
    }

    NodePtr parse_power() {
        auto base = parse_primary();
        if (eat('^'))  // right associative; the exponent may carry its own sign
            return make_node({Kind::pow, 0, nullptr, nullptr, base, parse_factor()});
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            auto e = parse_expr();
            if (!eat(')')) fail("missing ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        fail("unexpected character");
    }

    NodePtr parse_number() {
        std::size_t end = 0;
        double v = 0.0;
        try {
            v = std::stod(s_.substr(pos_), &end);
        } catch (const std::exception&) {
            fail("bad number");
        }
        pos_ += end;
        return make_node({Kind::constant, v, nullptr, nullptr, nullptr, nullptr});
    }

    NodePtr parse_ident() {
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        std::string name = s_.substr(start, pos_ - start);
        if (peek() != '(') {
            if (name == "t") return make_node({Kind::var_t, 0, nullptr, nullptr, nullptr, nullptr});
            if (name == "a") return make_node({Kind::var_a, 0, nullptr, nullptr, nullptr, nullptr});
            fail("unknown variable '" + name + "' (expected t or a)");
        }
        eat('(');
        auto first = parse_expr();
        NodePtr second;
        if (eat(',')) second = parse_expr();
        if (!eat(')')) fail("missing ')' after arguments");

        double (*fn1)(double) = nullptr;
        double (*fn2)(double, double) = nullptr;
        if (name == "abs") fn1 = [](double x) { return std::abs(x); };
        else if (name == "sign") fn1 = fn_sign;
        else if (name == "sqrt") fn1 = [](double x) { return std::sqrt(x); };
        else if (name == "exp") fn1 = [](double x) { return std::exp(x); };
        else if (name == "log") fn1 = [](double x) { return std::log(x); };
        else if (name == "min") fn2 = fn_min;
        else if (name == "max") fn2 = fn_max;
        else if (name == "pow") fn2 = [](double x, double y) { return std::pow(x, y); };
        else if (name == "sgnpow") fn2 = fn_sgnpow;
        else fail("unknown function '" + name + "'");

        if (fn1 && second) fail("'" + name + "' takes one argument");
        if (fn2 && !second) fail("'" + name + "' takes two arguments");
        if (fn1) return make_node({Kind::call1, 0, fn1, nullptr, first, nullptr});
        return make_node({Kind::call2, 0, nullptr, fn2, first, second});
    }
};

} // namespace

Expression Expression::parse(const std::string& text) {
    Expression e;
    e.root_ = Parser(text).run();
    e.text_ = text;
    return e;
}

double Expression::eval(double t, double a) const { return root_->eval(t, a); }

Nonlinearity expression_problem(const std::string& f_text, const std::string& F_text,
                                std::vector<double> a) {
    require(!f_text.empty(), "expression_problem: empty f expression");
    if (a.empty()) a.push_back(1.0);
    auto ap = std::make_shared<const std::vector<double>>(std::move(a));
    auto fe = std::make_shared<const Expression>(Expression::parse(f_text));

    Nonlinearity nl;
    nl.family = "custom-expression";
    nl.f = [=](int x, double t) { return fe->eval(t, coef_at(ap, x)); };
    if (!F_text.empty()) {
        auto Fe = std::make_shared<const Expression>(Expression::parse(F_text));
        nl.F = [=](int x, double t) { return Fe->eval(t, coef_at(ap, x)); };
    } else {
        // composite Simpson on [0,t]; panel count fixed so evaluation stays pure
        nl.F = [=](int x, double t) {
            if (t == 0.0) return 0.0;
            const int panels = 512;
            const double h = t / panels;
            const double av = coef_at(ap, x);
            double acc = fe->eval(0.0, av) + fe->eval(t, av);
            for (int i = 1; i < panels; ++i)
                acc += (i % 2 ? 4.0 : 2.0) * fe->eval(i * h, av);
            return acc * h / 3.0;
        };
    }
    return nl;
}

// --- growth-hypothesis probe -------------------------------------------------

namespace {

double a1_at(const std::vector<double>& a1, int x) {
    if (a1.empty()) return 0.0;
    if (a1.size() == 1) return a1[0];
    if (x < 0 || x >= static_cast<int>(a1.size()))
        throw std::out_of_range("check_C2: vertex index outside a1 table");
    return a1[x];
}

void track(C2Violation& worst, bool& ok, int x, double t, double excess, double slack) {
    if (excess > slack) {
        ok = false;
        if (excess > worst.excess) worst = {x, t, excess};
    }
}

} // namespace

C2Report check_C2(const Nonlinearity& nl, const C2Constants& cst,
                  const std::vector<int>& xs, const std::vector<double>& ts) {
    require(cst.alpha >= 0.0 && cst.alpha < 2.0, "check_C2: alpha must lie in [0,2[");
    require(cst.beta > 2.0, "check_C2: beta must exceed 2");
    require(cst.t0 > 0.0, "check_C2: t0 must be positive");
    require(cst.t1 != 0.0, "check_C2: t1 must be nonzero");
    require(cst.m1 >= 0.0 && cst.M >= 0.0, "check_C2: m1 and M must be >= 0");

    C2Report rep;
    rep.growth_ok = rep.near_zero_ok = rep.positivity_ok = true;
    const double slack = 1e-12;

    for (int x : xs) {
        for (double t : ts) {
            ++rep.samples;
            const double Fv = nl.F(x, t);
            track(rep.worst_growth, rep.growth_ok, x, t,
                  Fv - cst.m1 * (a1_at(cst.a1, x) + std::pow(std::abs(t), cst.alpha)),
                  slack * (1.0 + std::abs(Fv)));
            if (std::abs(t) <= cst.t0)
                track(rep.worst_near_zero, rep.near_zero_ok, x, t,
                      Fv - cst.M * std::pow(std::abs(t), cst.beta),
                      slack * (1.0 + std::abs(Fv)));
            const bool between = cst.t1 > 0.0 ? (t >= 0.0 && t <= cst.t1)
                                              : (t <= 0.0 && t >= cst.t1);
            if (between)
                track(rep.worst_positivity, rep.positivity_ok, x, t, -Fv, slack);
        }
        // the strict endpoint requirement F(x, t1) > 0
        const double F1 = nl.F(x, cst.t1);
        ++rep.samples;
        track(rep.worst_positivity, rep.positivity_ok, x, cst.t1,
              F1 > 0.0 ? 0.0 : (F1 == 0.0 ? slack * 2 : -F1), slack);
    }
    return rep;
}

} // namespace sg
