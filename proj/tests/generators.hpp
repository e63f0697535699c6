#pragma once

#include <random>

#include "toric_holim/toric_holim.hpp"

namespace gen {

using toric::ChainMap;
using toric::FiniteChainComplex;
using toric::Matrix;
using toric::Rational;

using Q = Rational;

inline Q small(std::mt19937& rng, int lo = -2, int hi = 2) { return Q(std::uniform_int_distribution<int>(lo, hi)(rng)); }

// Random invertible matrix: product of a random unit lower and unit upper triangular matrix.
inline Matrix<Q> random_invertible(std::mt19937& rng, std::size_t n) {
    Matrix<Q> l = Matrix<Q>::identity(n), u = Matrix<Q>::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            l(i, j) = small(rng);
            u(j, i) = small(rng);
        }
    return l * u;
}

inline Matrix<Q> inverse(const Matrix<Q>& a) { return *toric::solve(a, Matrix<Q>::identity(a.rows())); }

/// Sum of spheres S_k and discs D_k (Q -> Q identity in degrees k, k-1),
/// hidden behind a random change of basis in every degree.
inline FiniteChainComplex<Q> random_complex(std::mt19937& rng, std::size_t max_dim, int lo = -1, int hi = 2) {
    std::uniform_int_distribution<int> deg(lo, hi);
    std::uniform_int_distribution<std::size_t> cnt(0, max_dim);
    std::map<int, std::size_t> dims;
    std::vector<std::pair<int, bool>> pieces;  // (degree, is_disc)
    std::size_t total = 0, target = cnt(rng);
    while (total < target) {
        int k = deg(rng);
        bool disc = std::uniform_int_distribution<int>(0, 2)(rng) == 0 && total + 2 <= target;
        pieces.push_back({k, disc});
        total += disc ? 2 : 1;
    }
    std::map<int, std::vector<std::size_t>> slot;  // positions of disc tops/bottoms
    FiniteChainComplex<Q> c;
    for (auto [k, disc] : pieces) {
        dims[k]++;
        if (disc) dims[k - 1]++;
    }
    for (auto [n, d] : dims) c.set_dim(n, d);
    std::map<int, std::size_t> used;
    std::map<int, Matrix<Q>> bd;
    for (auto [n, d] : dims) bd[n] = Matrix<Q>(c.dim(n - 1), d);
    for (auto [k, disc] : pieces) {
        std::size_t top = used[k]++;
        if (disc) {
            std::size_t bottom = used[k - 1]++;
            bd[k](bottom, top) = 1;
        }
    }
    std::map<int, Matrix<Q>> basis, inv;
    for (auto [n, d] : dims) {
        basis[n] = random_invertible(rng, d);
        inv[n] = inverse(basis[n]);
    }
    for (auto [n, d] : dims) {
        if (!c.dim(n - 1)) continue;
        c.set_boundary(n, basis[n - 1] * bd[n] * inv[n]);
    }
    return c;
}

/// Random element of the space of chain maps C -> D.
inline ChainMap<Q> random_chain_map(std::mt19937& rng, const FiniteChainComplex<Q>& c, const FiniteChainComplex<Q>& d) {
    std::set<int> degs = c.support();
    std::map<int, std::size_t> off;
    std::size_t nv = 0;
    for (int n : degs) {
        off[n] = nv;
        nv += d.dim(n) * c.dim(n);
    }
    // unknowns: f_n entries row-major; equations: d f_n = f_{n-1} d for every n
    std::size_t ne = 0;
    for (int n : degs) ne += d.dim(n - 1) * c.dim(n);
    Matrix<Q> eq(ne, nv);
    std::size_t row = 0;
    for (int n : degs) {
        auto dd = d.boundary(n), dc = c.boundary(n);
        for (std::size_t i = 0; i < d.dim(n - 1); ++i)
            for (std::size_t j = 0; j < c.dim(n); ++j, ++row) {
                for (std::size_t k = 0; k < d.dim(n); ++k) eq(row, off[n] + k * c.dim(n) + j) += dd(i, k);
                if (degs.count(n - 1))
                    for (std::size_t k = 0; k < c.dim(n - 1); ++k)
                        eq(row, off[n - 1] + i * c.dim(n - 1) + k) -= dc(k, j);
            }
    }
    auto ker = toric::kernel(eq);
    Matrix<Q> x(nv, 1);
    for (std::size_t t = 0; t < ker.basis.cols(); ++t) {
        Q a = small(rng);
        for (std::size_t r = 0; r < nv; ++r) x(r, 0) += a * ker.basis(r, t);
    }
    ChainMap<Q> f(c, d);
    for (int n : degs) {
        Matrix<Q> m(d.dim(n), c.dim(n));
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = x(off[n] + i * c.dim(n) + j, 0);
        f.set_component(n, m);
    }
    return f;
}

/// Q^n -> subspace basis helpers for diagram generation.
inline Matrix<Q> column_span(const Matrix<Q>& m) {
    auto e = toric::rref(m.transpose());
    Matrix<Q> out(m.rows(), e.pivots.size());
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
        for (std::size_t i = 0; i < m.rows(); ++i) out(i, r) = e.reduced(r, i);
    return out;
}

inline Matrix<Q> hcat(const Matrix<Q>& a, const Matrix<Q>& b) {
    Matrix<Q> m(a.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(0, a.cols(), b);
    return m;
}

inline Matrix<Q> random_vectors(std::mt19937& rng, std::size_t n, std::size_t k) {
    Matrix<Q> m(n, k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) m(i, j) = small(rng);
    return m;
}

/// Diagram of vector spaces U_s / W_s inside a common Q^n with U and W
/// growing towards smaller cones, all in chain degree 0.
inline toric::DiagramComplex<Q> random_module_diagram(std::mt19937& rng, const toric::Poset& poset, std::size_t n = 4) {
    const std::size_t count = poset.size();
    std::vector<Matrix<Q>> u(count), w(count);
    std::uniform_int_distribution<std::size_t> extra(0, 2);
    for (std::size_t s = count; s-- > 0;) {
        Matrix<Q> us(n, 0), ws(n, 0);
        for (std::size_t t = 0; t < count; ++t)
            if (t != s && poset.leq(s, t)) {
                us = hcat(us, u[t]);
                ws = hcat(ws, w[t]);
            }
        us = column_span(hcat(us, random_vectors(rng, n, extra(rng))));
        // new relations: random combinations of U_s
        Matrix<Q> comb = us * random_vectors(rng, us.cols(), std::uniform_int_distribution<std::size_t>(0, 1)(rng));
        ws = column_span(hcat(ws, comb));
        u[s] = us;
        w[s] = ws;
    }
    // quotient bases: extend W_s to a basis of U_s by greedy choice from U_s
    std::vector<Matrix<Q>> full(count);
    std::vector<std::size_t> wdim(count);
    toric::DiagramComplex<Q> d(poset);
    for (std::size_t s = 0; s < count; ++s) {
        Matrix<Q> b = w[s];
        for (std::size_t j = 0; j < u[s].cols(); ++j) {
            auto cand = hcat(b, u[s].select_columns({j}));
            if (toric::rank(cand) > b.cols()) b = cand;
        }
        full[s] = b;
        wdim[s] = w[s].cols();
        FiniteChainComplex<Q> v;
        v.set_dim(0, b.cols() - wdim[s]);
        d.set_value(s, v);
    }
    for (const auto& cv : poset.covers()) {
        const std::size_t qs = full[cv.from].cols() - wdim[cv.from];
        const std::size_t qt = full[cv.to].cols() - wdim[cv.to];
        Matrix<Q> m(qt, qs);
        for (std::size_t j = 0; j < qs; ++j) {
            auto x = toric::solve(full[cv.to], full[cv.from].select_columns({wdim[cv.from] + j}));
            for (std::size_t i = 0; i < qt; ++i) m(i, j) = (*x)(wdim[cv.to] + i, 0);
        }
        ChainMap<Q> f(d.value(cv.from), d.value(cv.to));
        f.set_component(0, m);
        d.set_structure(cv.from, cv.to, f);
    }
    return d;
}

inline ChainMap<Q> sum_map(const ChainMap<Q>& f, const ChainMap<Q>& g) {
    ChainMap<Q> h(toric::direct_sum(f.source(), g.source()), toric::direct_sum(f.target(), g.target()));
    auto degs = f.support();
    for (int n : g.support()) degs.insert(n);
    for (int n : degs) h.set_component(n, toric::direct_sum(f.component(n), g.component(n)));
    return h;
}

inline ChainMap<Q> shift_map(const ChainMap<Q>& f, int k) {
    ChainMap<Q> h(toric::shift(f.source(), k), toric::shift(f.target(), k));
    for (int n : f.support()) h.set_component(n + k, f.component(n));
    return h;
}

inline toric::DiagramComplex<Q> sum_diagram(const toric::DiagramComplex<Q>& a, const toric::DiagramComplex<Q>& b) {
    toric::DiagramComplex<Q> d(a.poset());
    for (std::size_t i = 0; i < a.poset().size(); ++i) d.set_value(i, toric::direct_sum(a.value(i), b.value(i)));
    for (const auto& cv : a.poset().covers())
        d.set_structure(cv.from, cv.to, sum_map(a.structure(cv.from, cv.to), b.structure(cv.from, cv.to)));
    return d;
}

inline toric::DiagramComplex<Q> shift_diagram(const toric::DiagramComplex<Q>& a, int k) {
    toric::DiagramComplex<Q> d(a.poset());
    for (std::size_t i = 0; i < a.poset().size(); ++i) d.set_value(i, toric::shift(a.value(i), k));
    for (const auto& cv : a.poset().covers()) d.set_structure(cv.from, cv.to, shift_map(a.structure(cv.from, cv.to), k));
    return d;
}

inline toric::DiagramComplex<Q> constant_diagram(const toric::Poset& poset, const FiniteChainComplex<Q>& c) {
    toric::DiagramComplex<Q> d(poset);
    for (std::size_t i = 0; i < poset.size(); ++i) d.set_value(i, c);
    for (const auto& cv : poset.covers()) d.set_structure(cv.from, cv.to, toric::identity_map(c));
    return d;
}

/// Diagram of genuine complexes: the fibrant replacement of one module
/// diagram plus a shifted second one.
inline toric::DiagramComplex<Q> random_complex_diagram(std::mt19937& rng, const toric::Poset& poset) {
    auto a = toric::fibrant_replacement(random_module_diagram(rng, poset, 3)).diagram;
    auto b = shift_diagram(random_module_diagram(rng, poset, 3), 1);
    return sum_diagram(a, b);
}

} // namespace gen
