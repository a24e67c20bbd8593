#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "eopt/errors.hpp"
#include "eopt/linalg.hpp"
#include "eopt/rng.hpp"
#include "eopt/tcheb.hpp"
#include "eopt/weight.hpp"

namespace eopt {

/// Probability measure with finite support: strictly increasing support
/// points carrying nonnegative masses that sum to 1.
struct Design {
    std::vector<double> support;
    std::vector<double> masses;

    int size() const { return static_cast<int>(support.size()); }
};

inline void validate_design(const Design& mu, double a, double b) {
    if (mu.support.size() != mu.masses.size() || mu.support.empty())
        throw std::domain_error("design: support and mass lists must be nonempty and equal length");
    double sum = 0.0;
    for (std::size_t i = 0; i < mu.support.size(); ++i) {
        if (mu.support[i] < a || mu.support[i] > b)
            throw std::domain_error("design: support point outside the interval");
        if (i > 0 && !(mu.support[i] > mu.support[i - 1]))
            throw std::domain_error("design: support must be strictly increasing");
        if (mu.masses[i] < 0.0) throw std::domain_error("design: negative mass");
        sum += mu.masses[i];
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::domain_error("design: masses must sum to 1");
}

/// Information matrix M_{jk} = sum_i rho_i w(x_i) x_i^{j+k}, 0 <= j,k < m.
inline SymMatrix fisher_matrix(const Design& mu, int m, const WeightFn* w = nullptr) {
    if (m < 1) throw std::domain_error("fisher_matrix: m must be >= 1");
    SymMatrix mat(m);
    std::vector<double> f(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < mu.support.size(); ++i) {
        const double x = mu.support[i];
        const double wv = w ? (*w)(x) : 1.0;
        if (!std::isfinite(wv))
            throw EvalError("fisher_matrix: weight non-finite at support point x = " + std::to_string(x));
        f[0] = 1.0;
        for (int k = 1; k < m; ++k) f[static_cast<std::size_t>(k)] = f[static_cast<std::size_t>(k - 1)] * x;
        const double rw = mu.masses[i] * wv;
        for (int j = 0; j < m; ++j)
            for (int k = j; k < m; ++k)
                mat.add(j, k, rw * f[static_cast<std::size_t>(j)] * f[static_cast<std::size_t>(k)]);
    }
    return mat;
}

inline double min_eigenvalue(const SymMatrix& m) { return symmetric_eigenvalues(m).front(); }

/// Scalar optimality criteria of one information matrix. e and d are always
/// available; the inverse-based values exist only when M is nonsingular.
struct CriteriaValues {
    double e_value = 0.0;                 // smallest eigenvalue
    double d_value = 0.0;                 // det(M)^(1/m)
    std::optional<double> a_value;        // tr(M^-1)/m
    std::vector<double> eigenvalues;      // ascending

    bool singular() const { return !a_value.has_value(); }

    /// ((1/m) tr M^-p)^(1/p) for finite p > 0.
    double phi(double p) const {
        if (!(p > 0.0)) throw std::domain_error("phi: p must be > 0");
        if (singular()) throw SingularityError("phi: information matrix is singular");
        double s = 0.0;
        for (double lam : eigenvalues) s += std::pow(lam, -p);
        return std::pow(s / static_cast<double>(eigenvalues.size()), 1.0 / p);
    }
};

inline CriteriaValues criteria(const Design& mu, int m, const WeightFn* w = nullptr) {
    CriteriaValues c;
    c.eigenvalues = symmetric_eigenvalues(fisher_matrix(mu, m, w));
    c.e_value = c.eigenvalues.front();
    double det = 1.0;
    for (double lam : c.eigenvalues) det *= lam;
    c.d_value = det > 0.0 ? std::pow(det, 1.0 / m) : 0.0;
    const double lam_max = c.eigenvalues.back();
    if (c.e_value > 1e-14 * std::max(lam_max, 1.0)) {
        double tr_inv = 0.0;
        for (double lam : c.eigenvalues) tr_inv += 1.0 / lam;
        c.a_value = tr_inv / m;
    }
    return c;
}

struct TchebDesignResult {
    Design design;
    double mass_sum_raw = 0.0;  // sum of masses before renormalization
    bool sign_flipped = false;  // whether -gamma was the feasible choice
};

/// Design supported on the alternation points with masses F^{-1} gamma / (gamma^T gamma),
/// where F_{ij} = f_{i-1}(s_j) (-1)^{j+1} in the basis f_k(x) = x^k sqrt(w(x)).
/// The sign of gamma is chosen so the masses come out nonnegative; tiny
/// magnitudes are clamped to zero and the vector is renormalized to sum to 1,
/// with the raw sum reported as a diagnostic.
inline TchebDesignResult tcheb_design(const TchebFunction& tf, const TchebPoints& pts) {
    const int m = pts.m();
    if (m != tf.m())
        throw std::domain_error("tcheb_design: point count does not match coefficient count");

    std::vector<double> f_mat(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        const double s = pts.points[static_cast<std::size_t>(j)];
        const double sw = std::sqrt(tf.weight(s));
        const double col_sign = (j % 2 == 0) ? 1.0 : -1.0;  // (-1)^{j+1}, 1-based j
        double power = 1.0;
        for (int i = 0; i < m; ++i) {
            f_mat[static_cast<std::size_t>(i) * static_cast<std::size_t>(m) + static_cast<std::size_t>(j)] =
                power * sw * col_sign;
            power *= s;
        }
    }
    const LuFactors lu = lu_factor(std::move(f_mat), m);
    if (lu.singular) throw StructureError("tcheb_design: interpolation matrix is singular");

    double gg = 0.0;
    for (double g : tf.gamma) gg += g * g;
    std::vector<double> rho = lu_solve(lu, tf.gamma);
    for (double& r : rho) r /= gg;

    auto feasible = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double r) { return r >= -1e-10; });
    };
    bool flipped = false;
    if (!feasible(rho)) {
        for (double& r : rho) r = -r;
        flipped = true;
        if (!feasible(rho))
            throw InfeasibilityError("tcheb_design: no sign of gamma yields nonnegative masses");
    }

    double raw_sum = 0.0;
    for (double& r : rho) {
        if (std::abs(r) < 1e-14) r = 0.0;
        if (r < 0.0) r = 0.0;  // inside the -1e-10 feasibility slack
        raw_sum += r;
    }
    for (double& r : rho) r /= raw_sum;

    TchebDesignResult result{{pts.points, std::move(rho)}, raw_sum, flipped};
    validate_design(result.design, tf.a, tf.b);
    return result;
}

/// lambda_min(M(mu)) / lambda_min(M(reference)); a true efficiency only when
/// the reference is (near-)optimal.
inline double e_efficiency(const Design& mu, const Design& reference, int m, const WeightFn* w = nullptr) {
    const double lam_ref = min_eigenvalue(fisher_matrix(reference, m, w));
    if (!(lam_ref > 0.0))
        throw std::domain_error("e_efficiency: reference design has nonpositive lambda_min");
    return min_eigenvalue(fisher_matrix(mu, m, w)) / lam_ref;
}

namespace detail {

struct SearchState {
    Design design;
    double lambda = -1.0;
};

inline double search_lambda(const Design& mu, int m, const WeightFn& w) {
    return min_eigenvalue(fisher_matrix(mu, m, &w));
}

// One shard of the baseline search: monotone accept-if-better hill climbing
// seeded at the handed-in design, preceded by a handful of uniform-random
// restarts. Proposals split 50/50 between moving one support point (Gaussian
// step with sigma decaying geometrically from 0.1 to 1e-5 over the shard
// budget, clipped to the interval) and moving one mass (re-projected to the
// simplex). A proposal whose weight cannot be evaluated (a clip landing on a
// singular endpoint) is rejected like any other infeasible one. Fully
// deterministic given the seed and budget.
inline SearchState search_shard(const Design& start, double start_lambda, int m, const WeightFn& w,
                                double a, double b, long budget, std::uint64_t seed) {
    SearchState inc;
    long evals = 0;
    if (budget < 1) return inc;

    inc.design = start;
    inc.lambda = start_lambda;
    ++evals;

    auto try_accept = [&](Design&& cand) {
        double lam;
        try {
            lam = search_lambda(cand, m, w);
        } catch (const EvalError&) {
            return;
        }
        if (lam > inc.lambda) {
            inc.design = std::move(cand);
            inc.lambda = lam;
        }
    };

    Rng rng(seed);
    const long n_init = std::min<long>(16, budget - evals);
    for (long i = 0; i < n_init; ++i) {
        Design cand;
        cand.support.resize(static_cast<std::size_t>(m));
        for (double& x : cand.support) x = rng.uniform(a, b);
        std::sort(cand.support.begin(), cand.support.end());
        ++evals;
        if (std::adjacent_find(cand.support.begin(), cand.support.end()) != cand.support.end())
            continue;
        cand.masses.resize(static_cast<std::size_t>(m));
        double sum = 0.0;
        for (double& r : cand.masses) {
            r = -std::log(1.0 - rng.uniform01());
            sum += r;
        }
        for (double& r : cand.masses) r /= sum;
        try_accept(std::move(cand));
    }

    while (evals < budget) {
        const double sigma =
            0.1 * std::pow(1e-4, static_cast<double>(evals) / static_cast<double>(budget));
        Design cand = inc.design;
        bool ok = true;
        if (rng.uniform01() < 0.5) {
            const int i = static_cast<int>(rng.below(static_cast<std::uint32_t>(m)));
            cand.support[static_cast<std::size_t>(i)] =
                std::clamp(cand.support[static_cast<std::size_t>(i)] + sigma * rng.normal(), a, b);
            std::vector<std::size_t> order(cand.support.size());
            for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
            std::sort(order.begin(), order.end(),
                      [&](std::size_t u, std::size_t v) { return cand.support[u] < cand.support[v]; });
            Design sorted;
            sorted.support.reserve(cand.support.size());
            sorted.masses.reserve(cand.masses.size());
            for (std::size_t k : order) {
                sorted.support.push_back(cand.support[k]);
                sorted.masses.push_back(cand.masses[k]);
            }
            cand = std::move(sorted);
            ok = std::adjacent_find(cand.support.begin(), cand.support.end()) == cand.support.end();
        } else {
            const int i = static_cast<int>(rng.below(static_cast<std::uint32_t>(m)));
            cand.masses[static_cast<std::size_t>(i)] += sigma * rng.normal();
            double sum = 0.0;
            for (double& r : cand.masses) {
                if (r < 0.0) r = 0.0;
                sum += r;
            }
            ok = sum > 0.0;
            if (ok)
                for (double& r : cand.masses) r /= sum;
        }
        ++evals;
        if (!ok) continue;
        try_accept(std::move(cand));
    }
    return inc;
}

inline bool lexicographically_before(const Design& u, const Design& v) {
    if (u.support != v.support) return u.support < v.support;
    return u.masses < v.masses;
}

}  // namespace detail

/// Best-of-budget reference search for sup lambda_min. The budget is split
/// over four shards with seeds seed+0..seed+3, each a monotone hill climb
/// seeded at the approximate construction for (m, w); shards merge by
/// maximum lambda_min with lexicographic tie-break on the design, so the
/// result is identical no matter how many worker threads execute them.
/// With budget 1 the single evaluated candidate is the seed design itself.
inline Design random_search_baseline(int m, const WeightFn& w, double a, double b, long budget,
                                     std::uint64_t seed, int workers = 1) {
    if (budget < 1) throw std::domain_error("random_search_baseline: budget must be >= 1");

    const TchebFunction tf = approx_tcheb_function(m, w, a, b);
    const TchebPoints pts = find_tcheb_points(tf, m);
    const Design start = tcheb_design(tf, pts).design;
    const double start_lambda = detail::search_lambda(start, m, w);

    constexpr int kShards = 4;
    long shard_budget[kShards];
    for (int s = 0; s < kShards; ++s)
        shard_budget[s] = budget / kShards + (s < budget % kShards ? 1 : 0);

    detail::SearchState results[kShards];
    auto run = [&](int s) {
        results[s] = detail::search_shard(start, start_lambda, m, w, a, b, shard_budget[s],
                                          seed + static_cast<std::uint64_t>(s));
    };
    if (workers <= 1) {
        for (int s = 0; s < kShards; ++s) run(s);
    } else {
        std::vector<std::thread> pool;
        for (int s = 0; s < kShards; ++s) pool.emplace_back(run, s);
        for (std::thread& t : pool) t.join();
    }

    const detail::SearchState* best = nullptr;
    for (const detail::SearchState& r : results) {
        if (r.lambda < 0.0) continue;  // shard had no budget
        if (!best || r.lambda > best->lambda ||
            (r.lambda == best->lambda && detail::lexicographically_before(r.design, best->design)))
            best = &r;
    }
    return best->design;
}

/// Observations (x_i, y_i) for an m-parameter fit.
struct RegressionData {
    std::vector<double> conditions;
    std::vector<double> responses;
    int m = 0;
};

struct BlueResult {
    std::vector<double> theta_hat;
    std::vector<double> covariance_factor;  // (X^T X)^{-1}, row-major m x m
};

/// Least-squares estimate theta_hat = (X^T X)^{-1} X^T y with rows f(x_i)^T.
/// With a weight, rows and responses are scaled by sqrt(w(x_i)), giving the
/// weighted normal equations. Solved by LU with partial pivoting.
inline BlueResult blue_estimate(const RegressionData& data, const WeightFn* w = nullptr) {
    const int m = data.m;
    const std::size_t n = data.conditions.size();
    if (m < 1 || data.responses.size() != n)
        throw std::domain_error("blue_estimate: malformed regression data");
    if (n < static_cast<std::size_t>(m))
        throw std::domain_error("blue_estimate: need at least m observations");

    std::vector<double> xtx(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0.0);
    std::vector<double> xty(static_cast<std::size_t>(m), 0.0);
    std::vector<double> f(static_cast<std::size_t>(m));
    double max_entry = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = data.conditions[i];
        const double wv = w ? (*w)(x) : 1.0;
        f[0] = 1.0;
        for (int k = 1; k < m; ++k) f[static_cast<std::size_t>(k)] = f[static_cast<std::size_t>(k - 1)] * x;
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < m; ++k)
                xtx[static_cast<std::size_t>(j) * static_cast<std::size_t>(m) + static_cast<std::size_t>(k)] +=
                    wv * f[static_cast<std::size_t>(j)] * f[static_cast<std::size_t>(k)];
            xty[static_cast<std::size_t>(j)] += wv * f[static_cast<std::size_t>(j)] * data.responses[i];
        }
    }
    for (double v : xtx) max_entry = std::max(max_entry, std::abs(v));

    const LuFactors lu = lu_factor(xtx, m);
    if (lu.singular || std::abs(lu_det(lu)) < 1e-12 * std::max(max_entry, 1.0))
        throw SingularityError("blue_estimate: normal equations are rank deficient");
    return {lu_solve(lu, xty), lu_inverse(lu)};
}

}  // namespace eopt
