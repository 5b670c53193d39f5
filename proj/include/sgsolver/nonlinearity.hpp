#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace sg {

// Parameters of the two-parameter power problem on the gasket:
//   f(x,t) = lambda*|t|^(s-2)t - eta*|t|^(r-2)t + |t|^(q-2)t
// with exponents ordered 1 < r < s < 2 < q.
struct ProblemSpec {
    int points = 3;   // simplex corner count N
    int level = 4;    // graph approximation depth
    double r = 1.5;
    double s = 1.8;
    double q = 4.0;
    double lambda = 0.0;
    double eta = 0.0;

    void validate() const;  // throws std::invalid_argument on bad exponents or negative parameters
};

// A vertex-dependent nonlinearity together with its primitive in t.
// Both callables must be pure; F(x,0) == 0 by contract.
struct Nonlinearity {
    std::function<double(int, double)> f;
    std::function<double(int, double)> F;
    std::string family;
    std::map<std::string, double> params;
};

// Full right-hand side of the power problem.
Nonlinearity power_problem(const ProblemSpec& spec);

// Single power term coef*|t|^(p-2)t with primitive (coef/p)|t|^p.
// The sublinear piece alone (coef = lambda, p = s) drives the first
// stage of the three-solution pipeline.
Nonlinearity power_single_term(double coef, double p);

// Piecewise profile f(x,t) = a(x) * f1(t) where f1 switches from the
// superquadratic power (exponent beta) inside |t| <= 1 to the sublinear
// power (exponent alpha) outside; the primitive is glued continuously.
// Requires 0 < alpha < 2 < beta and a(x) > 0 for every vertex.
Nonlinearity example_f1(double alpha, double beta, std::vector<double> a);

// Nonlinearity from user-supplied arithmetic expressions in the variables
// t (the function value) and a (a per-vertex coefficient, default 1).
// If F_text is empty the primitive is integrated numerically on [0,t]
// by composite Simpson with 512 panels (error O(t^5/512^4) for smooth f).
Nonlinearity expression_problem(const std::string& f_text, const std::string& F_text,
                                std::vector<double> a);

// --- growth-hypothesis probe -------------------------------------------------

// Candidate constants for the three growth conditions on F:
//  (1) F(x,t) <= m1*(a1(x) + |t|^alpha) everywhere, alpha in [0,2[;
//  (2) F(x,t) <= M*|t|^beta for |t| <= t0, beta > 2;
//  (3) F(x,t1) > 0 and F(x,t) >= 0 for t between 0 and t1.
struct C2Constants {
    double alpha = 0.0;
    double m1 = 0.0;
    std::vector<double> a1;  // per vertex; a single entry is broadcast
    double t0 = 1.0;
    double M = 0.0;
    double beta = 3.0;
    double t1 = 1.0;
};

struct C2Violation {
    int x = -1;
    double t = 0.0;
    double excess = 0.0;  // how far the inequality failed
};

struct C2Report {
    bool growth_ok = false;      // condition (1)
    bool near_zero_ok = false;   // condition (2)
    bool positivity_ok = false;  // condition (3)
    C2Violation worst_growth;
    C2Violation worst_near_zero;
    C2Violation worst_positivity;
    int samples = 0;
    bool all_ok() const { return growth_ok && near_zero_ok && positivity_ok; }
};

// Sampling check of the three conditions over the probe grid xs x ts.
// A report, not a proof: the conditions quantify over all real t.
C2Report check_C2(const Nonlinearity& nl, const C2Constants& cst,
                  const std::vector<int>& xs, const std::vector<double>& ts);

// --- expression grammar ------------------------------------------------------

// Minimal arithmetic expressions over the variables t and a:
// numbers, + - * / ^ (right-assoc), unary minus, parentheses, and calls
// abs, sign, sqrt, exp, log, min, max, pow, sgnpow (sgnpow(t,p) = sign(t)|t|^p).
class Expression {
public:
    static Expression parse(const std::string& text);
    double eval(double t, double a) const;
    const std::string& text() const { return text_; }

    struct Node; // defined in the .cpp; opaque to callers

private:
    Expression() = default;
    std::shared_ptr<const Node> root_;
    std::string text_;
};

} // namespace sg
