#pragma once

#include <cstdlib>
#include <numeric>
#include <tuple>
#include <utility>
#include <vector>

#include "toric_holim/linalg.hpp"

namespace toric {

using IntMatrix = Matrix<Int>;
using LatticeVector = std::vector<Int>;

inline Int dot(const LatticeVector& a, const LatticeVector& b) {
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Int floor_div(Int a, Int b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

/// Returns (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g.
/// When a divides b the answer is (|a|, sign a, 0), which keeps the
/// elimination loops below from stirring an already reduced pivot.
inline std::tuple<Int, Int, Int> extended_gcd(Int a, Int b) {
    if (a != 0 && b % a == 0) return {std::abs(a), a > 0 ? 1 : -1, 0};
    Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        Int q = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
        std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
    }
    if (old_r < 0) return {-old_r, -old_s, -old_t};
    return {old_r, old_s, old_t};
}

inline Int content(const LatticeVector& v) {
    Int g = 0;
    for (Int x : v) g = std::gcd(g, std::abs(x));
    return g;
}

inline IntMatrix to_matrix_rows(const std::vector<LatticeVector>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    return m;
}

inline LatticeVector row_of(const IntMatrix& m, std::size_t i) {
    LatticeVector v(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) v[j] = m(i, j);
    return v;
}

namespace detail {

// Apply [[x, y], [u, v]] (det +-1) to rows i, j of m.
inline void combine_rows(IntMatrix& m, std::size_t i, std::size_t j, Int x, Int y, Int u, Int v) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
        Int a = m(i, c), b = m(j, c);
        m(i, c) = x * a + y * b;
        m(j, c) = u * a + v * b;
    }
}

inline void negate_row(IntMatrix& m, std::size_t i) {
    for (std::size_t c = 0; c < m.cols(); ++c) m(i, c) = -m(i, c);
}

inline void combine_cols(IntMatrix& m, std::size_t i, std::size_t j, Int x, Int y, Int u, Int v) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Int a = m(r, i), b = m(r, j);
        m(r, i) = x * a + y * b;
        m(r, j) = u * a + v * b;
    }
}

} // namespace detail

struct HermiteResult {
    IntMatrix form;       // H, row echelon with positive pivots, reduced above pivots
    IntMatrix transform;  // unimodular U with U * A = H
    std::vector<std::size_t> pivots;
};

/// Row-style Hermite normal form.
inline HermiteResult hermite_normal_form(IntMatrix a) {
    const std::size_t m = a.rows(), n = a.cols();
    IntMatrix u = IntMatrix::identity(m);
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        for (std::size_t i = r + 1; i < m; ++i) {
            if (a(i, c) == 0) continue;
            auto [g, x, y] = extended_gcd(a(r, c), a(i, c));
            Int p = a(r, c) / g, q = a(i, c) / g;
            detail::combine_rows(a, r, i, x, y, -q, p);
            detail::combine_rows(u, r, i, x, y, -q, p);
        }
        if (a(r, c) == 0) continue;
        if (a(r, c) < 0) {
            detail::negate_row(a, r);
            detail::negate_row(u, r);
        }
        for (std::size_t i = 0; i < r; ++i) {
            Int q = floor_div(a(i, c), a(r, c));
            if (q == 0) continue;
            for (std::size_t j = 0; j < n; ++j) a(i, j) -= q * a(r, j);
            for (std::size_t j = 0; j < m; ++j) u(i, j) -= q * u(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(a), std::move(u), std::move(pivots)};
}

struct SmithResult {
    IntMatrix diagonal;  // D = U * A * V
    IntMatrix left;      // U
    IntMatrix right;     // V
    std::vector<Int> invariants;  // nonzero diagonal entries d1 | d2 | ...
};

inline SmithResult smith_normal_form(IntMatrix a) {
    const std::size_t m = a.rows(), n = a.cols();
    IntMatrix u = IntMatrix::identity(m), v = IntMatrix::identity(n);
    std::vector<Int> invariants;
    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        // pivot: smallest nonzero magnitude in the trailing block
        std::size_t pi = m, pj = n;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (a(i, j) != 0 && (pi == m || std::abs(a(i, j)) < std::abs(a(pi, pj)))) pi = i, pj = j;
        if (pi == m) break;
        if (pi != t) {
            detail::combine_rows(a, t, pi, 0, 1, 1, 0);
            detail::combine_rows(u, t, pi, 0, 1, 1, 0);
        }
        if (pj != t) {
            detail::combine_cols(a, t, pj, 0, 1, 1, 0);
            detail::combine_cols(v, t, pj, 0, 1, 1, 0);
        }
        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (a(i, t) == 0) continue;
                auto [g, x, y] = extended_gcd(a(t, t), a(i, t));
                Int p = a(t, t) / g, q = a(i, t) / g;
                detail::combine_rows(a, t, i, x, y, -q, p);
                detail::combine_rows(u, t, i, x, y, -q, p);
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (a(t, j) == 0) continue;
                auto [g, x, y] = extended_gcd(a(t, t), a(t, j));
                Int p = a(t, t) / g, q = a(t, j) / g;
                detail::combine_cols(a, t, j, x, y, -q, p);
                detail::combine_cols(v, t, j, x, y, -q, p);
                clean = false;
            }
            if (!clean) continue;
            // divisibility of the trailing block by the pivot
            for (std::size_t i = t + 1; i < m && clean; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (a(i, j) % a(t, t) != 0) {
                        for (std::size_t c = 0; c < n; ++c) a(t, c) += a(i, c);
                        for (std::size_t c = 0; c < m; ++c) u(t, c) += u(i, c);
                        clean = false;
                        break;
                    }
        }
        if (a(t, t) < 0) {
            detail::negate_row(a, t);
            detail::negate_row(u, t);
        }
        invariants.push_back(a(t, t));
    }
    return {std::move(a), std::move(u), std::move(v), std::move(invariants)};
}

/// Rank over Q of an integer matrix.
inline std::size_t rational_rank(const IntMatrix& a) {
    Matrix<Rational> q(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) q(i, j) = Rational(a(i, j));
    return rank(q);
}

} // namespace toric
