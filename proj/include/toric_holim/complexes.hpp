#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "toric_holim/linalg.hpp"

namespace toric {

/// A bounded complex of finite-dimensional vector spaces. Only degrees with
/// nonzero dimension are stored; boundary(n) : C_n -> C_{n-1} has shape
/// dim(n-1) x dim(n).
template <class F>
class FiniteChainComplex {
public:
    std::size_t dim(int n) const {
        auto it = dims_.find(n);
        return it == dims_.end() ? 0 : it->second;
    }

    Matrix<F> boundary(int n) const {
        auto it = boundary_.find(n);
        if (it != boundary_.end()) return it->second;
        return Matrix<F>(dim(n - 1), dim(n));
    }

    void set_dim(int n, std::size_t d) {
        if (d == 0) {
            dims_.erase(n);
            return;
        }
        dims_[n] = d;
    }

    void set_boundary(int n, Matrix<F> m) {
        if (m.rows() != dim(n - 1) || m.cols() != dim(n))
            fail(ErrorCode::BrokenDifferential, "boundary in degree " + std::to_string(n) + " has the wrong shape");
        if (m.is_zero())
            boundary_.erase(n);
        else
            boundary_[n] = std::move(m);
    }

    const std::map<int, std::size_t>& dims() const { return dims_; }

    /// Degrees where the complex or its boundary might be nonzero.
    std::set<int> support() const {
        std::set<int> s;
        for (auto [n, d] : dims_) s.insert(n);
        return s;
    }

    std::size_t total_dim() const {
        std::size_t t = 0;
        for (auto [n, d] : dims_) t += d;
        return t;
    }

    bool is_zero() const { return dims_.empty(); }

    void validate() const {
        for (auto [n, d] : dims_) {
            auto dd = boundary(n - 1) * boundary(n);
            if (!dd.is_zero()) fail(ErrorCode::BrokenDifferential, "d^2 != 0 at degree " + std::to_string(n));
        }
    }

    friend bool operator==(const FiniteChainComplex& a, const FiniteChainComplex& b) {
        return a.dims_ == b.dims_ && a.boundary_ == b.boundary_;
    }

private:
    std::map<int, std::size_t> dims_;
    std::map<int, Matrix<F>> boundary_;
};

template <class F>
class ChainMap {
public:
    ChainMap() = default;
    ChainMap(FiniteChainComplex<F> source, FiniteChainComplex<F> target)
        : source_(std::move(source)), target_(std::move(target)) {}

    const FiniteChainComplex<F>& source() const { return source_; }
    const FiniteChainComplex<F>& target() const { return target_; }

    Matrix<F> component(int n) const {
        auto it = components_.find(n);
        if (it != components_.end()) return it->second;
        return Matrix<F>(target_.dim(n), source_.dim(n));
    }

    void set_component(int n, Matrix<F> m) {
        if (m.rows() != target_.dim(n) || m.cols() != source_.dim(n))
            fail(ErrorCode::NotAChainMap, "component in degree " + std::to_string(n) + " has the wrong shape");
        if (m.is_zero())
            components_.erase(n);
        else
            components_[n] = std::move(m);
    }

    std::set<int> support() const {
        auto s = source_.support();
        for (int n : target_.support()) s.insert(n);
        return s;
    }

    void validate() const {
        for (auto& [n, m] : components_)
            if (m.rows() != target_.dim(n) || m.cols() != source_.dim(n))
                fail(ErrorCode::NotAChainMap, "component shape mismatch at degree " + std::to_string(n));
        for (int n : support()) {
            auto lhs = target_.boundary(n) * component(n);
            auto rhs = component(n - 1) * source_.boundary(n);
            if (!(lhs == rhs)) fail(ErrorCode::NotAChainMap, "map does not commute with d at degree " + std::to_string(n));
        }
    }

private:
    FiniteChainComplex<F> source_, target_;
    std::map<int, Matrix<F>> components_;
};

template <class F>
ChainMap<F> identity_map(const FiniteChainComplex<F>& c) {
    ChainMap<F> f(c, c);
    for (auto [n, d] : c.dims()) f.set_component(n, Matrix<F>::identity(d));
    return f;
}

template <class F>
ChainMap<F> zero_map(const FiniteChainComplex<F>& c, const FiniteChainComplex<F>& d) {
    return ChainMap<F>(c, d);
}

/// g after f.
template <class F>
ChainMap<F> compose(const ChainMap<F>& g, const ChainMap<F>& f) {
    ChainMap<F> h(f.source(), g.target());
    for (int n : f.source().support()) h.set_component(n, g.component(n) * f.component(n));
    return h;
}

template <class F>
bool maps_equal(const ChainMap<F>& a, const ChainMap<F>& b) {
    auto s = a.support();
    for (int n : b.support()) s.insert(n);
    for (int n : s)
        if (!(a.component(n) == b.component(n))) return false;
    return true;
}

/// dim H_n = dim C_n - rank d_n - rank d_{n+1}.
template <class F>
std::map<int, std::size_t> homology_dims(const FiniteChainComplex<F>& c) {
    std::map<int, std::size_t> ranks;
    for (auto [n, d] : c.dims()) {
        if (!ranks.count(n)) ranks[n] = rank(c.boundary(n));
        if (!ranks.count(n + 1)) ranks[n + 1] = rank(c.boundary(n + 1));
    }
    std::map<int, std::size_t> h;
    for (auto [n, d] : c.dims()) {
        std::size_t v = d - ranks[n] - ranks[n + 1];
        if (v) h[n] = v;
    }
    return h;
}

template <class F>
bool is_acyclic(const FiniteChainComplex<F>& c) {
    return homology_dims(c).empty();
}

/// Cone_n = D_n + C_{n-1} with d(y, x) = (dy + f x, -dx).
template <class F>
FiniteChainComplex<F> mapping_cone(const ChainMap<F>& f) {
    f.validate();
    const auto& c = f.source();
    const auto& d = f.target();
    FiniteChainComplex<F> k;
    std::set<int> degs;
    for (int n : d.support()) degs.insert(n);
    for (int n : c.support()) degs.insert(n + 1);
    for (int n : degs) k.set_dim(n, d.dim(n) + c.dim(n - 1));
    for (int n : degs) {
        Matrix<F> b(k.dim(n - 1), k.dim(n));
        b.set_block(0, 0, d.boundary(n));
        b.set_block(0, d.dim(n), f.component(n - 1));
        b.set_block(d.dim(n - 1), d.dim(n), -c.boundary(n - 1));
        k.set_boundary(n, std::move(b));
    }
    return k;
}

template <class F>
bool is_quasi_iso(const ChainMap<F>& f) {
    return is_acyclic(mapping_cone(f));
}

template <class F>
struct PathFactorisation {
    FiniteChainComplex<F> path;
    ChainMap<F> i;  // C -> P, a chain homotopy equivalence
    ChainMap<F> p;  // P -> D, degreewise surjective
};

/// P_n = C_n x D_{n+1} x D_n with d(c, e, y) = (dc, -f c - de + y, dy),
/// i = (id, 0, f) and p = pr_3.
template <class F>
PathFactorisation<F> path_factorisation(const ChainMap<F>& f) {
    f.validate();
    const auto& c = f.source();
    const auto& d = f.target();
    std::set<int> degs;
    for (int n : c.support()) degs.insert(n);
    for (int n : d.support()) {
        degs.insert(n);
        degs.insert(n - 1);
    }
    FiniteChainComplex<F> path;
    for (int n : degs) path.set_dim(n, c.dim(n) + d.dim(n + 1) + d.dim(n));
    for (int n : degs) {
        // rows: C_{n-1}, D_n, D_{n-1}; columns: C_n, D_{n+1}, D_n
        const std::size_t r1 = c.dim(n - 1), r2 = d.dim(n);
        const std::size_t c1 = c.dim(n), c2 = d.dim(n + 1);
        Matrix<F> b(path.dim(n - 1), path.dim(n));
        b.set_block(0, 0, c.boundary(n));
        b.set_block(r1, 0, -f.component(n));
        b.set_block(r1, c1, -d.boundary(n + 1));
        b.set_block(r1, c1 + c2, Matrix<F>::identity(d.dim(n)));
        b.set_block(r1 + r2, c1 + c2, d.boundary(n));
        path.set_boundary(n, std::move(b));
    }
    ChainMap<F> i(c, path), p(path, d);
    for (int n : degs) {
        Matrix<F> in(path.dim(n), c.dim(n));
        in.set_block(0, 0, Matrix<F>::identity(c.dim(n)));
        in.set_block(c.dim(n) + d.dim(n + 1), 0, f.component(n));
        i.set_component(n, std::move(in));
        Matrix<F> pr(d.dim(n), path.dim(n));
        pr.set_block(0, c.dim(n) + d.dim(n + 1), Matrix<F>::identity(d.dim(n)));
        p.set_component(n, std::move(pr));
    }
    return {std::move(path), std::move(i), std::move(p)};
}

/// Direct sum of complexes, first summand first in every degree.
template <class F>
FiniteChainComplex<F> direct_sum(const FiniteChainComplex<F>& a, const FiniteChainComplex<F>& b) {
    FiniteChainComplex<F> s;
    auto degs = a.support();
    for (int n : b.support()) degs.insert(n);
    for (int n : degs) s.set_dim(n, a.dim(n) + b.dim(n));
    for (int n : degs) s.set_boundary(n, direct_sum(a.boundary(n), b.boundary(n)));
    return s;
}

/// C[k]_n = C_{n-k} with boundary (-1)^k d.
template <class F>
FiniteChainComplex<F> shift(const FiniteChainComplex<F>& c, int k) {
    FiniteChainComplex<F> s;
    for (auto [n, d] : c.dims()) s.set_dim(n + k, d);
    const F sign = (k % 2 == 0) ? F(1) : F(-1);
    for (auto [n, d] : c.dims()) s.set_boundary(n + k, sign * c.boundary(n));
    return s;
}

} // namespace toric
