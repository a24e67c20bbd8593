#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "eopt/errors.hpp"
#include "eopt/gram_schmidt.hpp"
#include "eopt/linalg.hpp"
#include "eopt/polynomial.hpp"
#include "eopt/quadrature.hpp"
#include "eopt/rng.hpp"
#include "eopt/weight.hpp"

namespace eopt {

enum class TchebKind { exact, approximate };

/// kappa(x) = (sum_k gamma[k] x^k) * sqrt(w(x)) over [a, b], in the basis
/// f_k(x) = x^k sqrt(w(x)). gamma is scaled so the largest |kappa| over the
/// located alternation points is 1; the global sign is provisional (the
/// design construction picks the sign that yields nonnegative masses).
struct TchebFunction {
    std::vector<double> gamma;
    WeightFn weight;
    double a = -1.0;
    double b = 1.0;
    TchebKind kind = TchebKind::approximate;
    double quadrature_delta = 0.0;  // diagnostic from the inner-product spec

    int m() const { return static_cast<int>(gamma.size()); }

    double poly_part(double x) const {
        double r = 0.0;
        for (std::size_t i = gamma.size(); i-- > 0;) r = r * x + gamma[i];
        return r;
    }

    double kappa(double x) const { return poly_part(x) * std::sqrt(weight(x)); }

    double basis(int k, double x) const { return std::pow(x, k) * std::sqrt(weight(x)); }
};

/// Alternation points s_1 < ... < s_m with kappa values of strictly
/// alternating sign.
struct TchebPoints {
    std::vector<double> points;
    std::vector<double> values;

    int m() const { return static_cast<int>(points.size()); }
};

struct TchebOptions {
    int node_count = InnerProductSpec::kDefaultNodeCount;
    int grid = 20001;            // extremum scan resolution
    int positivity_grid = 10001;
};

namespace detail {

// d/dx kappa by the product rule over the polynomial part and sqrt(w);
// w' is a central difference since the expression tree has no closed-form
// derivative. The step shrinks near the interval ends so both stencil
// points stay strictly inside.
inline double kappa_derivative(const TchebFunction& tf, double x) {
    const double wv = tf.weight(x);
    const double sw = std::sqrt(wv);
    double h = 1e-6;
    h = std::min(h, 0.5 * (x - tf.a));
    h = std::min(h, 0.5 * (tf.b - x));
    const double dw = (tf.weight(x + h) - tf.weight(x - h)) / (2.0 * h);
    double dp = 0.0;
    for (std::size_t i = tf.gamma.size(); i-- > 1;)
        dp = dp * x + static_cast<double>(i) * tf.gamma[i];
    return dp * sw + tf.poly_part(x) * dw / (2.0 * sw);
}

inline double bisect_derivative_root(const TchebFunction& tf, double lo, double hi, double flo) {
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = kappa_derivative(tf, mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// Locates the m alternation points of kappa: scans a uniform grid for sign
/// changes of kappa', refines each bracket by bisection to 1e-12 in x, and
/// admits an endpoint as the extremum of the outermost lobe whenever kappa
/// there is finite, nonzero, and of the sign that extends the alternation.
/// Near the endpoints kappa itself (offset 1e-9) decides, never kappa',
/// whose sqrt(w) term may be unbounded there.
inline TchebPoints find_tcheb_points(const TchebFunction& tf, int m, int grid = 20001) {
    if (grid < 3) throw std::domain_error("find_tcheb_points: grid must be >= 3");
    const double a = tf.a, b = tf.b;
    const double step = (b - a) / (grid - 1);

    std::vector<double> interior;
    double prev_x = a + step;
    double prev_d = detail::kappa_derivative(tf, prev_x);
    if (prev_d == 0.0) interior.push_back(prev_x);
    for (int i = 2; i <= grid - 2; ++i) {
        const double x = a + i * step;
        const double d = detail::kappa_derivative(tf, x);
        if (d == 0.0) {
            interior.push_back(x);
        } else if (prev_d != 0.0 && (prev_d < 0.0) != (d < 0.0)) {
            interior.push_back(detail::bisect_derivative_root(tf, prev_x, x, prev_d));
        }
        prev_x = x;
        prev_d = d;
    }
    // Collapse refinements that converged to the same critical point.
    interior.erase(std::unique(interior.begin(), interior.end(),
                               [](double u, double v) { return std::abs(u - v) < 1e-9; }),
                   interior.end());

    std::vector<double> pts = interior;
    std::vector<double> vals(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = tf.kappa(pts[i]);

    const double offset = 1e-9 * std::max(1.0, b - a);
    auto endpoint_value = [&](double x_end, double x_probe) {
        double probe = tf.kappa(x_probe);
        double value;
        try {
            value = tf.kappa(x_end);
            if (!std::isfinite(value)) value = probe;
        } catch (const EvalError&) {
            value = probe;
        }
        return std::make_pair(probe, value);
    };

    const auto [left_probe, left_value] = endpoint_value(a, a + offset);
    if (std::isfinite(left_probe) && left_probe != 0.0 &&
        (vals.empty() || (left_probe < 0.0) != (vals.front() < 0.0))) {
        pts.insert(pts.begin(), a);
        vals.insert(vals.begin(), left_value);
    }
    const auto [right_probe, right_value] = endpoint_value(b, b - offset);
    if (std::isfinite(right_probe) && right_probe != 0.0 &&
        (vals.empty() || (right_probe < 0.0) != (vals.back() < 0.0))) {
        pts.push_back(b);
        vals.push_back(right_value);
    }

    if (static_cast<int>(pts.size()) != m)
        throw StructureError("find_tcheb_points: located " + std::to_string(pts.size()) +
                             " alternating extrema, expected " + std::to_string(m));
    for (std::size_t i = 0; i + 1 < vals.size(); ++i)
        if (vals[i] == 0.0 || vals[i + 1] == 0.0 || (vals[i] < 0.0) == (vals[i + 1] < 0.0))
            throw StructureError("find_tcheb_points: extremum values do not alternate in sign");

    return {std::move(pts), std::move(vals)};
}

namespace detail {

inline void normalize_at_points(TchebFunction& tf, TchebPoints& pts) {
    double peak = 0.0;
    for (double v : pts.values) peak = std::max(peak, std::abs(v));
    const double scale = 1.0 / peak;
    for (double& g : tf.gamma) g *= scale;
    for (double& v : pts.values) v *= scale;
}

}  // namespace detail

/// Closed-form construction for w(x) = (1-x)^alpha (1+x)^beta with
/// alpha, beta in {0, 1}: the polynomial part is the degree-(m-1) Jacobi
/// polynomial with parameters (alpha - 1/2, beta - 1/2), whose extrema of
/// kappa equioscillate exactly.
inline TchebFunction exact_tcheb_function(int m, int alpha, int beta, int grid = 20001) {
    if (m < 2) throw std::domain_error("exact_tcheb_function: m must be >= 2");
    if ((alpha != 0 && alpha != 1) || (beta != 0 && beta != 1))
        throw std::domain_error("exact_tcheb_function: alpha and beta must be 0 or 1");

    static const char* alias[2][2] = {{"1", "1+x"}, {"1-x", "(1-x)*(1+x)"}};
    TchebFunction tf{jacobi_polynomial(m - 1, alpha - 0.5, beta - 0.5).coeffs(),
                     WeightFn::parse(alias[alpha][beta]),
                     -1.0,
                     1.0,
                     TchebKind::exact,
                     0.0};
    tf.gamma.resize(static_cast<std::size_t>(m), 0.0);
    TchebPoints pts = find_tcheb_points(tf, m, grid);
    detail::normalize_at_points(tf, pts);
    return tf;
}

/// General construction: orthogonalize the monomials under
/// eta(x) = w(x)/sqrt((x-a)(b-x)), take the top polynomial v_m, and form
/// kappa = v_m sqrt(w). Requires w > 0 on the open interval.
inline TchebFunction approx_tcheb_function(int m, const WeightFn& w, double a, double b,
                                           const TchebOptions& opt = {}) {
    if (m < 2) throw std::domain_error("approx_tcheb_function: m must be >= 2");
    const PositivityVerdict verdict = positivity_check(w, a, b, opt.positivity_grid);
    if (!verdict.pass)
        throw std::domain_error("approx_tcheb_function: weight check failed at x = " +
                                std::to_string(verdict.offending_x) + ": " + verdict.reason);

    const InnerProductSpec spec(a, b, w, opt.node_count);
    OrthogonalSequence seq = orthogonalize(m, spec);
    TchebFunction tf{seq.polys.back().coeffs(), w, a, b, TchebKind::approximate,
                     spec.quadrature_delta()};
    tf.gamma.resize(static_cast<std::size_t>(m), 0.0);
    TchebPoints pts = find_tcheb_points(tf, m, opt.grid);
    detail::normalize_at_points(tf, pts);
    return tf;
}

enum class SignVerdict { all_positive, all_negative, all_nonnegative, all_nonpositive, mixed };

struct SignReport {
    SignVerdict verdict;
    double min_det;
    double max_det;
    int zero_count;
    int samples;
};

inline const char* to_string(SignVerdict v) {
    switch (v) {
        case SignVerdict::all_positive: return "all positive";
        case SignVerdict::all_negative: return "all negative";
        case SignVerdict::all_nonnegative: return "all nonnegative";
        case SignVerdict::all_nonpositive: return "all nonpositive";
        case SignVerdict::mixed: return "mixed";
    }
    return "?";
}

/// Samples random strictly increasing n-tuples t_1 < ... < t_n in [a, b]
/// and reports the sign behaviour of det[funcs_i(t_j)]. Every fourth tuple
/// pins t_1 = a, and every fourth pins t_n = b, so boundary zeros of weak
/// systems are actually hit; a zero is counted only when the determinant is
/// exactly 0. A mixed verdict is a report, not an error.
inline SignReport weak_tcheb_check(const std::vector<std::function<double(double)>>& funcs,
                                   int samples, double a, double b, std::uint64_t seed) {
    const int n = static_cast<int>(funcs.size());
    if (n < 1) throw std::domain_error("weak_tcheb_check: need at least one function");
    if (samples < 1) throw std::domain_error("weak_tcheb_check: samples must be >= 1");
    if (!(a < b)) throw std::domain_error("weak_tcheb_check: interval must satisfy a < b");

    Rng rng(seed);
    double min_det = 0.0, max_det = 0.0;
    bool first = true;
    int zeros = 0;
    bool any_pos = false, any_neg = false;
    std::vector<double> t(static_cast<std::size_t>(n));
    std::vector<double> mat(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));

    for (int s = 0; s < samples; ++s) {
        do {
            for (double& v : t) v = rng.uniform(a, b);
            std::sort(t.begin(), t.end());
            if (s % 4 == 0) t.front() = a;
            if (s % 4 == 1) t.back() = b;
        } while (std::adjacent_find(t.begin(), t.end()) != t.end());

        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                mat[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] =
                    funcs[static_cast<std::size_t>(i)](t[static_cast<std::size_t>(j)]);
        const double det = lu_det(lu_factor(mat, n));

        if (first || det < min_det) min_det = det;
        if (first || det > max_det) max_det = det;
        first = false;
        if (det == 0.0)
            ++zeros;
        else if (det > 0.0)
            any_pos = true;
        else
            any_neg = true;
    }

    SignVerdict v;
    if (any_pos && any_neg)
        v = SignVerdict::mixed;
    else if (any_pos)
        v = zeros ? SignVerdict::all_nonnegative : SignVerdict::all_positive;
    else if (any_neg)
        v = zeros ? SignVerdict::all_nonpositive : SignVerdict::all_negative;
    else
        v = SignVerdict::all_nonnegative;  // every determinant vanished
    return {v, min_det, max_det, zeros, samples};
}

}  // namespace eopt
