#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "eopt/errors.hpp"
#include "eopt/polynomial.hpp"
#include "eopt/weight.hpp"

namespace eopt {

struct QuadNode {
    double x;
    double mass;
};

/// N-point Chebyshev-Gauss rule (first kind) mapped affinely to [a, b]:
///   sum_k mass * g(x_k)  ~=  integral_a^b g(x) / sqrt((x-a)(b-x)) dx,
/// exact for polynomial g of degree <= 2N-1. The affine Jacobian cancels
/// against the transformed singular factor, so every mass is pi/N.
inline std::vector<QuadNode> chebyshev_gauss_rule(int n, double a, double b) {
    if (n < 1) throw std::domain_error("chebyshev_gauss_rule: need at least one node");
    if (!(a < b)) throw std::domain_error("chebyshev_gauss_rule: interval must satisfy a < b");
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double mass = std::numbers::pi / n;
    std::vector<QuadNode> rule(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k)
        rule[static_cast<std::size_t>(k - 1)] = {
            mid + half * std::cos((2 * k - 1) * std::numbers::pi / (2 * n)), mass};
    return rule;
}

/// Inner product space <p,q> = integral p q eta dx over [a, b] with
/// eta(x) = w(x) / sqrt((x-a)(b-x)): the singular factor is handled
/// analytically by the Chebyshev-Gauss rule, so only w is sampled.
///
/// Construction runs the rule once at node_count and once at twice that,
/// on the plain mass integral of w, and records the relative change as a
/// convergence diagnostic (zero means the rule has converged at this count).
class InnerProductSpec {
public:
    static constexpr int kDefaultNodeCount = 512;

    InnerProductSpec(double a, double b, WeightFn weight, int node_count = kDefaultNodeCount)
        : a_(a), b_(b), w_(std::move(weight)), node_count_(node_count) {
        if (!(a < b)) throw std::domain_error("InnerProductSpec: interval must satisfy a < b");
        if (node_count < 1) throw std::domain_error("InnerProductSpec: node_count must be >= 1");
        const double i1 = weight_integral(node_count_);
        const double i2 = weight_integral(2 * node_count_);
        const double scale = std::max(std::abs(i2), 1e-300);
        quadrature_delta_ = std::abs(i2 - i1) / scale;
    }

    double a() const { return a_; }
    double b() const { return b_; }
    const WeightFn& weight() const { return w_; }
    int node_count() const { return node_count_; }
    double quadrature_delta() const { return quadrature_delta_; }

private:
    double weight_integral(int n) const {
        double s = 0.0;
        for (const QuadNode& node : chebyshev_gauss_rule(n, a_, b_)) s += eval_weight_at(w_, node.x);
        return s * (std::numbers::pi / n);
    }

public:
    static double eval_weight_at(const WeightFn& w, double x) {
        double v;
        try {
            v = w(x);
        } catch (const EvalError& e) {
            throw EvalError(std::string(e.what()) + " at quadrature node x = " + std::to_string(x));
        }
        if (!std::isfinite(v))
            throw EvalError("weight is non-finite at quadrature node x = " + std::to_string(x));
        return v;
    }

private:

    double a_, b_;
    WeightFn w_;
    int node_count_;
    double quadrature_delta_ = 0.0;
};

/// <p, q> under the spec's inner product. The node count is raised to
/// 2*max(deg p, deg q) + 1 when the configured count is below that, keeping
/// the rule exact for polynomial weights. Summation order is fixed, so the
/// result is bitwise deterministic and symmetric in p and q.
inline double inner_product(const Polynomial& p, const Polynomial& q, const InnerProductSpec& spec) {
    const int needed = 2 * std::max(p.degree(), q.degree()) + 1;
    const int n = std::max(spec.node_count(), needed);
    double s = 0.0;
    for (const QuadNode& node : chebyshev_gauss_rule(n, spec.a(), spec.b()))
        s += p(node.x) * q(node.x) * InnerProductSpec::eval_weight_at(spec.weight(), node.x);
    return s * (std::numbers::pi / n);
}

}  // namespace eopt
