#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "toric_holim/integer_matrix.hpp"

namespace toric {

/// a . x >= b, or a . x == b when `equality` is set.
struct LinearConstraint {
    std::vector<Rational> coeffs;
    Rational bound;
    bool equality = false;
};

namespace detail {

struct Halfspace {
    std::vector<Rational> a;  // a . x >= b
    Rational b;

    void normalize() {
        Rational scale(0);
        for (const auto& x : a)
            if (x != 0) {
                scale = abs(x);
                break;
            }
        if (scale == 0) return;
        for (auto& x : a) x /= scale;
        b /= scale;
    }
    bool operator<(const Halfspace& o) const { return std::tie(a, b) < std::tie(o.a, o.b); }
};

inline std::vector<Halfspace> to_halfspaces(const std::vector<LinearConstraint>& cs) {
    std::vector<Halfspace> hs;
    for (const auto& c : cs) {
        hs.push_back({c.coeffs, c.bound});
        if (c.equality) {
            Halfspace neg{c.coeffs, -c.bound};
            for (auto& x : neg.a) x = -x;
            hs.push_back(std::move(neg));
        }
    }
    return hs;
}

// Eliminates variable `var`; returns nullopt on a detected contradiction.
inline std::optional<std::vector<Halfspace>> eliminate(const std::vector<Halfspace>& hs, std::size_t var) {
    std::vector<const Halfspace*> pos, neg;
    std::set<Halfspace> out;
    auto keep = [&](Halfspace h) -> bool {
        h.normalize();
        bool trivial = std::all_of(h.a.begin(), h.a.end(), [](const Rational& x) { return x == 0; });
        if (trivial) return h.b <= 0;
        out.insert(std::move(h));
        return true;
    };
    for (const auto& h : hs) {
        if (h.a[var] > 0)
            pos.push_back(&h);
        else if (h.a[var] < 0)
            neg.push_back(&h);
        else if (!keep(h))
            return std::nullopt;
    }
    for (const auto* p : pos)
        for (const auto* q : neg) {
            Rational sp = -q->a[var], sq = p->a[var];
            Halfspace h{std::vector<Rational>(p->a.size()), sp * p->b + sq * q->b};
            for (std::size_t i = 0; i < h.a.size(); ++i) h.a[i] = sp * p->a[i] + sq * q->a[i];
            h.a[var] = 0;
            if (!keep(std::move(h))) return std::nullopt;
        }
    return std::vector<Halfspace>(out.begin(), out.end());
}

struct Interval {
    std::optional<Rational> lo, hi;
};

// Projection of the feasible set onto variable 0 (rational relaxation).
inline std::optional<Interval> bounds_of_first(std::vector<Halfspace> hs, std::size_t nvars) {
    for (std::size_t v = nvars; v-- > 1;) {
        auto next = eliminate(hs, v);
        if (!next) return std::nullopt;
        hs = std::move(*next);
    }
    Interval iv;
    for (const auto& h : hs) {
        if (h.a[0] == 0) {
            if (h.b > 0) return std::nullopt;
            continue;
        }
        Rational t = h.b / h.a[0];
        if (h.a[0] > 0) {
            if (!iv.lo || t > *iv.lo) iv.lo = t;
        } else {
            if (!iv.hi || t < *iv.hi) iv.hi = t;
        }
    }
    if (iv.lo && iv.hi && *iv.lo > *iv.hi) return std::nullopt;
    return iv;
}

inline Int ceil_of(const Rational& q) {
    auto n = numerator(q), d = denominator(q);
    boost::multiprecision::mpz_int r = n / d;
    if (r * d < n) r += 1;
    return r.convert_to<Int>();
}

inline Int floor_of(const Rational& q) {
    auto n = numerator(q), d = denominator(q);
    boost::multiprecision::mpz_int r = n / d;
    if (r * d > n) r -= 1;
    return r.convert_to<Int>();
}

inline std::optional<LatticeVector> integer_search(const std::vector<Halfspace>& hs, std::size_t nvars, Int radius) {
    if (nvars == 0) {
        for (const auto& h : hs)
            if (h.b > 0) return std::nullopt;
        return LatticeVector{};
    }
    auto iv = bounds_of_first(hs, nvars);
    if (!iv) return std::nullopt;
    Int lo, hi;
    if (iv->lo && iv->hi) {
        lo = ceil_of(*iv->lo);
        hi = std::min(floor_of(*iv->hi), lo + 4 * radius);
    } else if (iv->lo) {
        lo = ceil_of(*iv->lo);
        hi = std::max(lo, Int(0)) + 2 * radius;
    } else if (iv->hi) {
        hi = floor_of(*iv->hi);
        lo = std::min(hi, Int(0)) - 2 * radius;
    } else {
        lo = -radius;
        hi = radius;
    }
    // try values closest to zero first so witnesses stay small and deterministic
    std::vector<Int> order;
    for (Int v = lo; v <= hi; ++v) order.push_back(v);
    std::stable_sort(order.begin(), order.end(), [](Int a, Int b) {
        return std::abs(a) < std::abs(b) || (std::abs(a) == std::abs(b) && a > b);
    });
    for (Int v : order) {
        std::vector<Halfspace> sub;
        sub.reserve(hs.size());
        for (const auto& h : hs) {
            Halfspace s{std::vector<Rational>(h.a.begin() + 1, h.a.end()), h.b - h.a[0] * v};
            sub.push_back(std::move(s));
        }
        if (auto rest = integer_search(sub, nvars - 1, radius)) {
            rest->insert(rest->begin(), v);
            return rest;
        }
    }
    return std::nullopt;
}

} // namespace detail

/// Exact rational feasibility by Fourier-Motzkin elimination.
inline bool rationally_feasible(const std::vector<LinearConstraint>& cs, std::size_t nvars) {
    auto hs = detail::to_halfspaces(cs);
    for (std::size_t v = nvars; v-- > 0;) {
        auto next = detail::eliminate(hs, v);
        if (!next) return false;
        hs = std::move(*next);
    }
    return std::all_of(hs.begin(), hs.end(), [](const detail::Halfspace& h) { return h.b <= 0; });
}

/// Bounded search for an integral point; the window grows twice before
/// giving up. nullopt means "no integral point found", which is definitive
/// whenever the system is rationally infeasible.
inline std::optional<LatticeVector> find_integer_point(const std::vector<LinearConstraint>& cs, std::size_t nvars,
                                                       Int radius) {
    auto hs = detail::to_halfspaces(cs);
    if (!rationally_feasible(cs, nvars)) return std::nullopt;
    for (int attempt = 0; attempt < 3; ++attempt, radius *= 2)
        if (auto p = detail::integer_search(hs, nvars, radius)) return p;
    return std::nullopt;
}

} // namespace toric
