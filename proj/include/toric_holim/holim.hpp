#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include "toric_holim/diagram.hpp"
#include "toric_holim/presheaf.hpp"

namespace toric {

template <class F>
struct FibrantReplacement {
    DiagramComplex<F> diagram;    // PC
    std::vector<ChainMap<F>> j;   // d -> PC, objectwise quasi-isomorphisms
};

/// Cones in ascending order: PC at a cone is the path factorisation of the
/// map into the limit of PC over its proper faces.
template <class F>
FibrantReplacement<F> fibrant_replacement(const DiagramComplex<F>& d) {
    d.validate();
    const Poset& poset = d.poset();
    FibrantReplacement<F> out{DiagramComplex<F>(poset), std::vector<ChainMap<F>>(poset.size())};
    auto& pc = out.diagram;
    for (std::size_t s = 0; s < poset.size(); ++s) {
        auto faces = poset.proper_faces(s);
        if (faces.empty()) {
            pc.set_value(s, d.value(s));
            out.j[s] = identity_map(d.value(s));
            continue;
        }
        Poset sub = poset.restrict_to(faces);
        std::vector<std::size_t> orig(sub.size());
        DiagramComplex<F> sd(sub);
        for (std::size_t e = 0; e < sub.size(); ++e) {
            orig[e] = *poset.index_of(sub.cone(e));
            sd.set_value(e, pc.value(orig[e]));
        }
        for (const auto& cv : sub.covers()) sd.set_structure(cv.from, cv.to, pc.structure(orig[cv.from], orig[cv.to]));
        auto lim = finite_limit(sd);

        const auto& src = d.value(s);
        ChainMap<F> f(src, lim.complex);
        for (int n : src.support()) {
            auto off = lim.offsets.find(n);
            if (off == lim.offsets.end() || lim.complex.dim(n) == 0) continue;
            Matrix<F> stacked(off->second.back(), src.dim(n));
            for (std::size_t e = 0; e < sub.size(); ++e) {
                auto g = compose(out.j[orig[e]], d.map_between(s, orig[e]));
                stacked.set_block(off->second[e], 0, g.component(n));
            }
            f.set_component(n, lim.coordinates(n, stacked));
        }
        auto pf = path_factorisation(f);
        pc.set_value(s, pf.path);
        out.j[s] = pf.i;
        for (const auto& cv : poset.covers()) {
            if (cv.from != s) continue;
            std::size_t e = *sub.index_of(poset.cone(cv.to));
            pc.set_structure(s, cv.to, compose(lim.projections[e], pf.p));
        }
    }
    return out;
}

template <class F>
FiniteChainComplex<F> holim(const DiagramComplex<F>& d) {
    return finite_limit(fibrant_replacement(d).diagram).complex;
}

/// lim^k of a diagram of vector spaces (chain degree 0) from the normalized
/// cochains on strict chains s_0 > s_1 > ... > s_p with values at s_p.
template <class F>
std::map<int, std::size_t> derived_limit_oracle(const DiagramComplex<F>& d) {
    const Poset& poset = d.poset();
    for (const auto& v : d.values())
        for (auto [n, dim] : v.dims())
            if (n != 0) fail(ErrorCode::InconsistentDiagram, "diagram is not concentrated in degree 0");
    auto below = [&](std::size_t a, std::size_t b) { return a != b && poset.leq(b, a); };

    std::vector<std::vector<std::vector<std::size_t>>> chains(1);
    for (std::size_t i = 0; i < poset.size(); ++i) chains[0].push_back({i});
    while (true) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& ch : chains.back())
            for (std::size_t i = 0; i < poset.size(); ++i)
                if (below(ch.back(), i)) {
                    auto c = ch;
                    c.push_back(i);
                    next.push_back(std::move(c));
                }
        if (next.empty()) break;
        chains.push_back(std::move(next));
    }

    auto value_dim = [&](std::size_t i) { return d.value(i).dim(0); };
    std::vector<std::map<std::vector<std::size_t>, std::size_t>> offset(chains.size());
    std::vector<std::size_t> total(chains.size(), 0);
    for (std::size_t p = 0; p < chains.size(); ++p)
        for (const auto& ch : chains[p]) {
            offset[p][ch] = total[p];
            total[p] += value_dim(ch.back());
        }

    std::vector<std::size_t> ranks(chains.size() + 1, 0);
    for (std::size_t p = 0; p + 1 < chains.size(); ++p) {
        Matrix<F> delta(total[p + 1], total[p]);
        for (const auto& ch : chains[p + 1]) {
            const std::size_t row = offset[p + 1][ch];
            const std::size_t h = value_dim(ch.back());
            if (h == 0) continue;
            for (std::size_t j = 0; j <= p; ++j) {
                auto face = ch;
                face.erase(face.begin() + long(j));
                const F sign = (j % 2 == 0) ? F(1) : F(-1);
                auto id = sign * Matrix<F>::identity(h);
                delta.set_block(row, offset[p][face], delta.block(row, offset[p][face], h, h) + id);
            }
            auto face = ch;
            face.pop_back();
            const F sign = ((p + 1) % 2 == 0) ? F(1) : F(-1);
            auto m = sign * d.map_between(ch[p], ch[p + 1]).component(0);
            const std::size_t w = value_dim(ch[p]);
            delta.set_block(row, offset[p][face], delta.block(row, offset[p][face], h, w) + m);
        }
        ranks[p + 1] = rank(delta);
    }
    std::map<int, std::size_t> out;
    for (std::size_t p = 0; p < chains.size(); ++p) {
        std::size_t h = total[p] - ranks[p + 1] - ranks[p];
        if (h) out[int(p)] = h;
    }
    return out;
}

// ------------------------------------------------------------ graded tables

struct Window {
    enum class Kind { Auto, Box };
    Kind kind = Kind::Auto;
    Int bound = 0;                 // auto: |<m, n_rho>| <= bound on every ray
    LatticeVector lo, hi;          // box: lo <= m <= hi coordinatewise
};

struct TableEntry {
    LatticeVector m;
    int degree = 0;  // homological degree of the holim
    std::size_t dim = 0;
};

struct GradedCohomologyTable {
    Window window;
    bool complete = true;  // the boundary shell of the window carries no homology
    std::vector<TableEntry> entries;

    /// Total dimension per homological degree.
    std::map<int, std::size_t> totals() const {
        std::map<int, std::size_t> t;
        for (const auto& e : entries) t[e.degree] += e.dim;
        return t;
    }
};

/// Runs fn(i) for i in [0, n) on up to `threads` workers. The first
/// exception is rethrown on the caller's thread.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex guard;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, n); ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(guard);
                    if (!error) error = std::current_exception();
                    next = n;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

/// Worker count from TORIC_HOLIM_THREADS, defaulting to 1.
inline unsigned default_threads() {
    if (const char* env = std::getenv("TORIC_HOLIM_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return unsigned(v);
    }
    return 1;
}

namespace detail {

// Integral inverse transpose of a unimodular maximal cone, so that points
// are enumerated through their pairings with that cone's rays.
inline IntMatrix pairing_to_degree(const Fan& fan, const Cone& mu) {
    const std::size_t n = fan.rank();
    auto g = fan.generator_matrix(mu);
    Matrix<Rational> gt(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) gt(i, j) = g(j, i);
    auto inv = solve(gt, Matrix<Rational>::identity(n));
    if (!inv) fail(ErrorCode::NotRegular, "maximal cone is not full-dimensional");
    IntMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Rational& x = (*inv)(i, j);
            if (denominator(x) != 1) fail(ErrorCode::NotRegular, "maximal cone is not unimodular");
            out(i, j) = numerator(x).convert_to<Int>();
        }
    return out;
}

inline std::vector<LatticeVector> auto_window_points(const Fan& fan, Int bound) {
    const std::size_t n = fan.rank();
    if (n == 0) return {LatticeVector{}};
    const Cone* mu = nullptr;
    for (const auto& c : fan.maximal_cones())
        if (c.size() == n) {
            mu = &c;
            break;
        }
    if (!mu) fail(ErrorCode::WindowInsufficient, "auto window needs a full-dimensional cone");
    auto inv = pairing_to_degree(fan, *mu);
    std::vector<LatticeVector> pts;
    LatticeVector p(n, -bound);
    while (true) {
        LatticeVector m(n, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m[i] += inv(i, j) * p[j];
        bool inside = true;
        for (const auto& r : fan.rays()) inside = inside && std::abs(dot(m, r)) <= bound;
        if (inside) pts.push_back(std::move(m));
        std::size_t i = 0;
        while (i < n && ++p[i] > bound) p[i++] = -bound;
        if (i == n) break;
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

inline std::vector<LatticeVector> box_points(const LatticeVector& lo, const LatticeVector& hi) {
    const std::size_t n = lo.size();
    for (std::size_t i = 0; i < n; ++i)
        if (lo[i] > hi[i]) return {};
    std::vector<LatticeVector> pts;
    LatticeVector m = lo;
    while (true) {
        pts.push_back(m);
        std::size_t i = n;
        while (i > 0 && m[i - 1] == hi[i - 1]) {
            m[i - 1] = lo[i - 1];
            --i;
        }
        if (i == 0) return pts;
        ++m[i - 1];
    }
}

inline bool on_shell(const Fan& fan, const Window& w, const LatticeVector& m) {
    if (w.kind == Window::Kind::Auto) {
        Int mx = 0;
        for (const auto& r : fan.rays()) mx = std::max(mx, std::abs(dot(m, r)));
        return mx == w.bound;
    }
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] == w.lo[i] || m[i] == w.hi[i]) return true;
    return false;
}

template <class F>
std::map<int, std::size_t> holim_homology_at(const MonomialPresheaf<F>& c, const std::vector<Int>& pairing) {
    auto d = evaluate_presheaf_pairing(c, pairing);
    bool all_zero = std::all_of(d.values().begin(), d.values().end(), [](const auto& v) { return v.is_zero(); });
    if (all_zero) return {};
    return homology_dims(holim(d));
}

template <class F>
GradedCohomologyTable table_on(const MonomialPresheaf<F>& c, const Window& w, const std::vector<LatticeVector>& pts,
                               unsigned threads) {
    std::vector<std::map<int, std::size_t>> results(pts.size());
    parallel_for(pts.size(), threads, [&](std::size_t i) { results[i] = holim_homology_at(c, pairings(c.fan, pts[i])); });
    GradedCohomologyTable t;
    t.window = w;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (auto [deg, dim] : results[i]) {
            t.entries.push_back({pts[i], deg, dim});
            if (on_shell(c.fan, w, pts[i])) t.complete = false;
        }
    return t;
}

template <class F>
Int max_bound(const MonomialPresheaf<F>& c) {
    Int k = 0;
    for (const auto& r : c.all_regions())
        for (const auto& x : r.constraints()) k = std::max(k, std::abs(x.bound));
    return k;
}

} // namespace detail

/// Auto windows start at 1 + max|bound| + rank and widen by rank + 1 at most
/// twice until the shell is clean; box windows are taken as given and only
/// report the shell flag.
template <class F>
GradedCohomologyTable holim_graded(const MonomialPresheaf<F>& c, const Window& window, unsigned threads = 1) {
    c.check();
    if (window.kind == Window::Kind::Box) {
        if (window.lo.size() != c.fan.rank() || window.hi.size() != c.fan.rank())
            fail(ErrorCode::RankMismatch, "window box has the wrong dimension");
        return detail::table_on(c, window, detail::box_points(window.lo, window.hi), threads);
    }
    if (!is_complete(c.fan)) fail(ErrorCode::WindowInsufficient, "auto window needs a complete fan");
    const Int step = Int(c.fan.rank()) + 1;
    Int bound = window.bound > 0 ? window.bound : 1 + detail::max_bound(c) + Int(c.fan.rank());
    for (int attempt = 0; attempt < 3; ++attempt, bound += step) {
        Window w{Window::Kind::Auto, bound, {}, {}};
        auto t = detail::table_on(c, w, detail::auto_window_points(c.fan, bound), threads);
        if (t.complete) return t;
    }
    fail(ErrorCode::WindowInsufficient, "homology on the window shell after two widenings");
}

} // namespace toric
