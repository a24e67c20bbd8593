#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace eopt {

/// Dense polynomial over the monomial basis: coeffs()[k] multiplies x^k.
/// An empty or all-zero coefficient list is the zero polynomial, which
/// evaluates to 0 everywhere and reports degree 0.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Polynomial monomial(int k, double coeff = 1.0) {
        std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
        c.back() = coeff;
        return Polynomial(std::move(c));
    }

    const std::vector<double>& coeffs() const { return c_; }

    double coeff(int k) const {
        return (k >= 0 && static_cast<std::size_t>(k) < c_.size()) ? c_[static_cast<std::size_t>(k)] : 0.0;
    }

    bool is_zero() const { return c_.empty(); }

    int degree() const { return c_.empty() ? 0 : static_cast<int>(c_.size()) - 1; }

    // Horner evaluation.
    double operator()(double x) const {
        double r = 0.0;
        for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
        return r;
    }

    Polynomial derivative() const {
        if (c_.size() <= 1) return Polynomial{};
        std::vector<double> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
        return Polynomial(std::move(d));
    }

    friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
        std::vector<double> r(std::max(p.c_.size(), q.c_.size()), 0.0);
        for (std::size_t i = 0; i < p.c_.size(); ++i) r[i] += p.c_[i];
        for (std::size_t i = 0; i < q.c_.size(); ++i) r[i] += q.c_[i];
        return Polynomial(std::move(r));
    }

    friend Polynomial operator-(const Polynomial& p, const Polynomial& q) {
        std::vector<double> r(std::max(p.c_.size(), q.c_.size()), 0.0);
        for (std::size_t i = 0; i < p.c_.size(); ++i) r[i] += p.c_[i];
        for (std::size_t i = 0; i < q.c_.size(); ++i) r[i] -= q.c_[i];
        return Polynomial(std::move(r));
    }

    // Coefficient convolution.
    friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
        if (p.is_zero() || q.is_zero()) return Polynomial{};
        std::vector<double> r(p.c_.size() + q.c_.size() - 1, 0.0);
        for (std::size_t i = 0; i < p.c_.size(); ++i)
            for (std::size_t j = 0; j < q.c_.size(); ++j) r[i + j] += p.c_[i] * q.c_[j];
        return Polynomial(std::move(r));
    }

    friend Polynomial operator*(double s, const Polynomial& p) {
        std::vector<double> r = p.c_;
        for (double& v : r) v *= s;
        return Polynomial(std::move(r));
    }

    friend Polynomial operator*(const Polynomial& p, double s) { return s * p; }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
        if (c_.size() == 1 && c_[0] == 0.0) c_.clear();
    }

    std::vector<double> c_;
};

/// Generalized binomial coefficient C(a, k) for real a and integer k >= 0,
/// computed as the running product prod_{j=1..k} (a - j + 1) / j.
inline double generalized_binomial(double a, int k) {
    double r = 1.0;
    for (int j = 1; j <= k; ++j) r *= (a - j + 1) / j;
    return r;
}

/// Degree-n Jacobi polynomial J_n^{(alpha,beta)} in monomial coefficients,
/// from the finite sum
///   (1/2^n) sum_k C(n+alpha, n-k) C(n+beta, k) (x-1)^k (x+1)^{n-k}.
inline Polynomial jacobi_polynomial(int n, double alpha, double beta) {
    if (n < 0) throw std::domain_error("jacobi_polynomial: n must be >= 0");
    if (alpha <= -1.0 || beta <= -1.0)
        throw std::domain_error("jacobi_polynomial: alpha and beta must be > -1");
    const double half_pow = std::pow(0.5, n);
    std::vector<double> acc(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        const double c = half_pow * generalized_binomial(n + alpha, n - k) *
                         generalized_binomial(n + beta, k);
        Polynomial term({1.0});
        for (int i = 0; i < k; ++i) term = term * Polynomial({-1.0, 1.0});
        for (int i = 0; i < n - k; ++i) term = term * Polynomial({1.0, 1.0});
        for (std::size_t i = 0; i < term.coeffs().size(); ++i) acc[i] += c * term.coeffs()[i];
    }
    return Polynomial(std::move(acc));
}

/// Degree-n Laguerre polynomial L_n^{(alpha)}: sum_k C(n+alpha, n-k) (-x)^k / k!.
inline Polynomial laguerre_polynomial(int n, double alpha) {
    if (n < 0) throw std::domain_error("laguerre_polynomial: n must be >= 0");
    if (alpha <= -1.0) throw std::domain_error("laguerre_polynomial: alpha must be > -1");
    std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
    double kfact = 1.0;
    for (int k = 0; k <= n; ++k) {
        if (k > 0) kfact *= k;
        c[static_cast<std::size_t>(k)] =
            generalized_binomial(n + alpha, n - k) * ((k % 2 == 0) ? 1.0 : -1.0) / kfact;
    }
    return Polynomial(std::move(c));
}

/// Degree-n Hermite polynomial (physicists' convention, leading coefficient 2^n):
///   n! sum_k (-1)^k (2x)^{n-2k} / ((n-2k)! k!).
inline Polynomial hermite_polynomial(int n) {
    if (n < 0) throw std::domain_error("hermite_polynomial: n must be >= 0");
    std::vector<double> fact(static_cast<std::size_t>(n) + 1, 1.0);
    for (int i = 1; i <= n; ++i) fact[static_cast<std::size_t>(i)] = fact[static_cast<std::size_t>(i - 1)] * i;
    std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 0; 2 * k <= n; ++k) {
        const int d = n - 2 * k;
        c[static_cast<std::size_t>(d)] = fact[static_cast<std::size_t>(n)] *
                                         ((k % 2 == 0) ? 1.0 : -1.0) * std::pow(2.0, d) /
                                         (fact[static_cast<std::size_t>(d)] * fact[static_cast<std::size_t>(k)]);
    }
    return Polynomial(std::move(c));
}

}  // namespace eopt
