#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "eopt/errors.hpp"

namespace eopt {

/// Dense symmetric matrix; set() mirrors into both triangles so symmetry is
/// exact by construction.
class SymMatrix {
public:
    explicit SymMatrix(int order) : n_(order), a_(static_cast<std::size_t>(order) * order, 0.0) {}

    int order() const { return n_; }

    double at(int i, int j) const { return a_[idx(i, j)]; }

    void set(int i, int j, double v) {
        a_[idx(i, j)] = v;
        a_[idx(j, i)] = v;
    }

    void add(int i, int j, double v) {
        a_[idx(i, j)] += v;
        if (i != j) a_[idx(j, i)] += v;
    }

    const std::vector<double>& data() const { return a_; }

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
    }

    int n_;
    std::vector<double> a_;
};

/// LU factorization with partial pivoting, row-major storage.
struct LuFactors {
    std::vector<double> lu;
    std::vector<int> perm;
    int n = 0;
    double det_sign = 1.0;
    bool singular = false;
};

inline LuFactors lu_factor(std::vector<double> a, int n) {
    LuFactors f;
    f.lu = std::move(a);
    f.n = n;
    f.perm.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) f.perm[static_cast<std::size_t>(i)] = i;
    auto at = [&](int i, int j) -> double& {
        return f.lu[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
    };
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(at(r, col)) > std::abs(at(pivot, col))) pivot = r;
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(at(pivot, j), at(col, j));
            std::swap(f.perm[static_cast<std::size_t>(pivot)], f.perm[static_cast<std::size_t>(col)]);
            f.det_sign = -f.det_sign;
        }
        const double p = at(col, col);
        if (p == 0.0) {
            f.singular = true;
            continue;
        }
        for (int r = col + 1; r < n; ++r) {
            const double m = at(r, col) / p;
            at(r, col) = m;
            for (int j = col + 1; j < n; ++j) at(r, j) -= m * at(col, j);
        }
    }
    return f;
}

inline double lu_det(const LuFactors& f) {
    double d = f.det_sign;
    for (int i = 0; i < f.n; ++i)
        d *= f.lu[static_cast<std::size_t>(i) * static_cast<std::size_t>(f.n) + static_cast<std::size_t>(i)];
    return d;
}

inline std::vector<double> lu_solve(const LuFactors& f, const std::vector<double>& b) {
    if (f.singular) throw SingularityError("lu_solve: matrix is singular");
    const int n = f.n;
    auto at = [&](int i, int j) {
        return f.lu[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
    };
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(f.perm[static_cast<std::size_t>(i)])];
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) x[static_cast<std::size_t>(i)] -= at(i, j) * x[static_cast<std::size_t>(j)];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[static_cast<std::size_t>(i)] -= at(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] /= at(i, i);
    }
    return x;
}

inline std::vector<double> lu_inverse(const LuFactors& f) {
    const int n = f.n;
    std::vector<double> inv(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    for (int c = 0; c < n; ++c) {
        e[static_cast<std::size_t>(c)] = 1.0;
        std::vector<double> col = lu_solve(f, e);
        e[static_cast<std::size_t>(c)] = 0.0;
        for (int r = 0; r < n; ++r)
            inv[static_cast<std::size_t>(r) * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)] =
                col[static_cast<std::size_t>(r)];
    }
    return inv;
}

/// All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi
/// rotations: sweeps annihilate every off-diagonal pair in turn until the
/// off-diagonal Frobenius mass falls below 1e-14 of the matrix norm
/// (30-sweep cap).
inline std::vector<double> symmetric_eigenvalues(const SymMatrix& m) {
    const int n = m.order();
    std::vector<double> a = m.data();
    auto at = [&](int i, int j) -> double& {
        return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
    };
    double frob = 0.0;
    for (double v : a) frob += v * v;
    frob = std::sqrt(frob);
    const double threshold = 1e-14 * frob;

    for (int sweep = 0; sweep < 30; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += 2.0 * at(i, j) * at(i, j);
        if (std::sqrt(off) <= threshold) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                const double app = at(p, p), aqq = at(q, q);
                at(p, p) = app - t * apq;
                at(q, q) = aqq + t * apq;
                at(p, q) = 0.0;
                at(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = akp - s * (akq + tau * akp);
                    at(p, k) = at(k, p);
                    at(k, q) = akq + s * (akp - tau * akq);
                    at(q, k) = at(k, q);
                }
            }
        }
    }
    std::vector<double> eig(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = at(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

}  // namespace eopt
