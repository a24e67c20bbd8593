#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "eopt/errors.hpp"
#include "eopt/linalg.hpp"
#include "eopt/polynomial.hpp"
#include "eopt/quadrature.hpp"

namespace eopt {

/// Monic orthogonal polynomials v_1..v_n under a given inner product,
/// built from the monomial inputs u_k(x) = x^{k-1}.
struct OrthogonalSequence {
    std::vector<Polynomial> polys;
    std::vector<double> gram_diag;  // <v_k, v_k>
};

/// Projection recurrence v_k = u_k - sum_{l<k} (<u_k,v_l>/<v_l,v_l>) v_l,
/// run in modified form with one full re-orthogonalization pass; the
/// monomial inputs are ill-conditioned enough in these inner products that
/// a single pass loses digits by degree twelve.
inline OrthogonalSequence orthogonalize(int n, const InnerProductSpec& spec) {
    if (n < 1) throw std::domain_error("orthogonalize: n must be >= 1");
    OrthogonalSequence seq;
    seq.polys.reserve(static_cast<std::size_t>(n));
    seq.gram_diag.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const Polynomial u = Polynomial::monomial(k);
        Polynomial v = u;
        for (int pass = 0; pass < 2; ++pass) {
            for (int l = 0; l < k; ++l) {
                const double c = inner_product(v, seq.polys[static_cast<std::size_t>(l)], spec) /
                                 seq.gram_diag[static_cast<std::size_t>(l)];
                v = v - c * seq.polys[static_cast<std::size_t>(l)];
            }
        }
        const double norm2 = inner_product(v, v, spec);
        const double input_norm2 = inner_product(u, u, spec);
        if (!(norm2 > 1e-14 * input_norm2))
            throw DegeneracyError("orthogonalize: <v_" + std::to_string(k + 1) +
                                  ", v_" + std::to_string(k + 1) +
                                  "> collapsed; weight is effectively vanishing");
        seq.polys.push_back(std::move(v));
        seq.gram_diag.push_back(norm2);
    }
    return seq;
}

/// v_k as the ratio of the bordered Gram determinant (last row holds the
/// monomials themselves) to the (k-1)x(k-1) Gram determinant, the empty
/// determinant being 1. The last row is expanded symbolically: the
/// coefficient of x^{j-1} is the signed minor over the common denominator.
/// Determinants are evaluated by LU with partial pivoting.
inline Polynomial orthogonalize_det(int k, const InnerProductSpec& spec) {
    if (k < 1) throw std::domain_error("orthogonalize_det: k must be >= 1");
    if (k == 1) return Polynomial({1.0});

    // G[i][j] = <u_{i+1}, u_{j+1}> = <x^i, x^j>, needed for i < k-1, j < k.
    std::vector<std::vector<double>> gram(static_cast<std::size_t>(k - 1),
                                          std::vector<double>(static_cast<std::size_t>(k)));
    for (int i = 0; i < k - 1; ++i)
        for (int j = 0; j < k; ++j)
            gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                inner_product(Polynomial::monomial(i), Polynomial::monomial(j), spec);

    const int d = k - 1;
    std::vector<double> denom_mat(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            denom_mat[static_cast<std::size_t>(i) * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)] =
                gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    const double denom = lu_det(lu_factor(std::move(denom_mat), d));
    if (std::abs(denom) < 1e-300)
        throw DegeneracyError("orthogonalize_det: Gram determinant underflowed");

    std::vector<double> coeffs(static_cast<std::size_t>(k), 0.0);
    for (int j = 0; j < k; ++j) {
        // Minor of the bordered matrix: rows 0..k-2, columns != j.
        std::vector<double> minor_mat(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            int cc = 0;
            for (int c = 0; c < k; ++c) {
                if (c == j) continue;
                minor_mat[static_cast<std::size_t>(i) * static_cast<std::size_t>(d) + static_cast<std::size_t>(cc)] =
                    gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
                ++cc;
            }
        }
        const double minor = lu_det(lu_factor(std::move(minor_mat), d));
        const double sign = ((k - 1 + j) % 2 == 0) ? 1.0 : -1.0;
        coeffs[static_cast<std::size_t>(j)] = sign * minor / denom;
    }
    return Polynomial(std::move(coeffs));
}

}  // namespace eopt
