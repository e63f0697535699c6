#pragma once

#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "toric_holim/holim.hpp"

namespace toric {

struct GeneratorSet {
    std::set<TwistVector> vectors;
    std::size_t depth = 0;  // levels of quotient recursion below this fan
};

namespace detail {

inline std::mutex& r_sigma_mutex() {
    static std::mutex m;
    return m;
}

inline std::map<Fan, GeneratorSet>& r_sigma_memo() {
    static std::map<Fan, GeneratorSet> memo;
    return memo;
}

} // namespace detail

/// Drops every memoized generator set.
inline void clear_r_sigma_memo() {
    std::lock_guard<std::mutex> lock(detail::r_sigma_mutex());
    detail::r_sigma_memo().clear();
}

/// {0} on a fan with one maximal cone; otherwise the union over rays of
/// R_{fan/rho} and rho + R_{fan/rho}, embedded through the ray correspondence
/// with every other component zero.
inline GeneratorSet r_sigma(const Fan& fan) {
    require_regular(fan);
    {
        std::lock_guard<std::mutex> lock(detail::r_sigma_mutex());
        auto it = detail::r_sigma_memo().find(fan);
        if (it != detail::r_sigma_memo().end()) return it->second;
    }
    GeneratorSet out;
    if (fan.maximal_cones().size() == 1) {
        out.vectors.insert(TwistVector(fan.num_rays(), 0));
    } else {
        for (std::size_t rho = 0; rho < fan.num_rays(); ++rho) {
            auto q = quotient_fan(fan, rho);
            auto sub = r_sigma(q.fan);
            out.depth = std::max(out.depth, sub.depth + 1);
            for (const auto& v : sub.vectors) {
                TwistVector w(fan.num_rays(), 0);
                for (std::size_t i = 0; i < v.size(); ++i) w[q.ray_origin[i]] = v[i];
                out.vectors.insert(w);
                w[rho] += 1;
                out.vectors.insert(w);
            }
        }
    }
    std::lock_guard<std::mutex> lock(detail::r_sigma_mutex());
    detail::r_sigma_memo().emplace(fan, out);
    return out;
}

/// How a check scans M: `Chambers` evaluates one witness per realizable
/// membership pattern, which is exact; `Window` scans lattice points.
struct CheckMode {
    enum class Kind { Chambers, Window };
    Kind kind = Kind::Chambers;
    Window window;  // used in window mode
};

struct RelationVerdict {
    std::size_t from = 0, to = 0;  // cone indices, `to` a facet of `from`
    bool pass = true;
    std::map<int, std::size_t> defect;  // homology of the comparison cone at the witness
    std::optional<LatticeVector> witness;
};

struct SheafVerdict {
    CheckMode::Kind mode = CheckMode::Kind::Chambers;
    std::vector<RelationVerdict> relations;
    bool pass() const {
        return std::all_of(relations.begin(), relations.end(), [](const auto& r) { return r.pass; });
    }
};

namespace detail {

/// Degrees to test: chamber witnesses of the given regions, or the points
/// of a window. `shell` marks window points on its boundary.
struct Probe {
    std::vector<LatticeVector> points;
    std::vector<bool> shell;
};

inline Probe chamber_probe(const Fan& fan, const std::vector<Region>& regions) {
    Probe p;
    for (const auto& ch : chamber_patterns(fan, regions).chambers) {
        p.points.push_back(*ch.witness);
        p.shell.push_back(false);
    }
    return p;
}

inline Probe window_probe(const Fan& fan, const Window& w) {
    Probe p;
    if (w.kind == Window::Kind::Box) {
        if (w.lo.size() != fan.rank() || w.hi.size() != fan.rank())
            fail(ErrorCode::RankMismatch, "window box has the wrong dimension");
        p.points = box_points(w.lo, w.hi);
    } else {
        if (!is_complete(fan)) fail(ErrorCode::WindowInsufficient, "auto window needs a complete fan");
        p.points = auto_window_points(fan, w.bound);
    }
    for (const auto& m : p.points) p.shell.push_back(on_shell(fan, w, m));
    return p;
}

/// Bound for an auto window covering every region in play.
inline Int auto_bound(const Fan& fan, const std::vector<Region>& regions) {
    Int k = 0;
    for (const auto& r : regions)
        for (const auto& c : r.constraints()) k = std::max(k, std::abs(c.bound));
    return 1 + k + Int(fan.rank());
}

/// Runs `scan` over a probe and returns the window it settled on. In window
/// mode an auto window is widened by rank + 1 at most twice while `scan`
/// reports trouble on the shell.
template <class Scan>
Window run_probe(const Fan& fan, const CheckMode& mode, const std::vector<Region>& regions, Scan&& scan) {
    if (mode.kind == CheckMode::Kind::Chambers) {
        scan(chamber_probe(fan, regions));
        return {};
    }
    Window w = mode.window;
    if (w.kind == Window::Kind::Box) {
        if (!scan(window_probe(fan, w))) fail(ErrorCode::WindowInsufficient, "defect on the shell of the window box");
        return w;
    }
    if (w.bound <= 0) w.bound = auto_bound(fan, regions);
    for (int attempt = 0; attempt < 3; ++attempt, w.bound += Int(fan.rank()) + 1)
        if (scan(window_probe(fan, w))) return w;
    fail(ErrorCode::WindowInsufficient, "defect on the window shell after two widenings");
}

/// Adjoint comparison C^s localized to t -> C^t at one degree.
template <class F>
ChainMap<F> comparison_at(const MonomialPresheaf<F>& c, std::size_t s, std::size_t t, const std::vector<Int>& pairing) {
    const auto& sigma = c.fan.cones()[s];
    const auto& tau = c.fan.cones()[t];
    auto loc = evaluate_with_positions(localize_along_face(c.values[s], sigma, tau), pairing);
    auto dst = evaluate_with_positions(c.values[t], pairing);
    auto f = evaluate_graded_map(loc, dst, [&](int l) { return c.structure_at(s, t, l); });
    f.validate();
    return f;
}

} // namespace detail

/// For every covering pair, the structure map localized to the facet must be
/// a quasi-isomorphism at every degree.
template <class F>
SheafVerdict is_homotopy_sheaf(const MonomialPresheaf<F>& c, const CheckMode& mode = {}) {
    c.check();
    SheafVerdict v;
    v.mode = mode.kind;
    for (const auto& cv : Poset::of_fan(c.fan).covers()) {
        RelationVerdict rv;
        rv.from = cv.from;
        rv.to = cv.to;
        std::vector<Region> regions;
        for (const auto& r : c.values[cv.from].regions())
            regions.push_back(localize_region(r, c.fan.cones()[cv.from], c.fan.cones()[cv.to]));
        for (const auto& r : c.values[cv.to].regions()) regions.push_back(r);
        detail::run_probe(c.fan, mode, regions, [&](const detail::Probe& p) {
            rv = RelationVerdict{cv.from, cv.to, true, {}, std::nullopt};
            bool clean = true;
            for (std::size_t i = 0; i < p.points.size(); ++i) {
                auto h = homology_dims(mapping_cone(detail::comparison_at(c, cv.from, cv.to, pairings(c.fan, p.points[i]))));
                if (h.empty()) continue;
                if (p.shell[i]) clean = false;
                if (rv.pass) {
                    rv.pass = false;
                    rv.defect = h;
                    rv.witness = p.points[i];
                }
            }
            return clean;
        });
        v.relations.push_back(std::move(rv));
    }
    return v;
}

/// Every value of the presheaf is acyclic at every degree.
template <class F>
bool is_objectwise_acyclic(const MonomialPresheaf<F>& c) {
    c.check();
    for (const auto& v : c.values) {
        auto regions = v.regions();
        for (const auto& ch : chamber_patterns(c.fan, regions).chambers)
            if (!is_acyclic(evaluate_pairing(v, pairings(c.fan, *ch.witness)))) return false;
    }
    return true;
}

template <class F>
bool objectwise_quasi_iso(const PresheafMap<F>& f) {
    f.check();
    return is_objectwise_acyclic(mapping_cone(f));
}

struct ColocalCheck {
    TwistVector k;
    bool acyclic = true;
    std::vector<TableEntry> defects;  // nonzero holim homology, canonical order
};

struct ColocalReport {
    GeneratorSet r_sigma;
    CheckMode mode;        // window mode: the widest window actually scanned
    std::vector<ColocalCheck> checks;
    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.acyclic; });
    }
};

namespace detail {

template <class F>
std::vector<TableEntry> holim_defects(const MonomialPresheaf<F>& c, const CheckMode& mode, Window& used) {
    std::vector<TableEntry> out;
    if (c.is_zero()) return out;
    used = run_probe(c.fan, mode, c.all_regions(), [&](const Probe& p) {
        out.clear();
        bool clean = true;
        for (std::size_t i = 0; i < p.points.size(); ++i)
            for (auto [deg, dim] : holim_homology_at(c, pairings(c.fan, p.points[i]))) {
                out.push_back({p.points[i], deg, dim});
                if (p.shell[i]) clean = false;
            }
        return clean;
    });
    return out;
}

/// holim of twist(c, -k) for k in R, one check per k.
template <class F, class Twisted>
ColocalReport colocal_checks(const GeneratorSet& r, const CheckMode& mode, unsigned threads, Twisted&& twisted) {
    ColocalReport rep;
    rep.r_sigma = r;
    rep.mode = mode;
    std::vector<TwistVector> ks(r.vectors.begin(), r.vectors.end());
    rep.checks.resize(ks.size());
    std::vector<Window> used(ks.size(), mode.window);
    parallel_for(ks.size(), threads, [&](std::size_t i) {
        TwistVector neg = ks[i];
        for (auto& x : neg) x = -x;
        MonomialPresheaf<F> c = twisted(neg);
        rep.checks[i].k = ks[i];
        rep.checks[i].defects = holim_defects(c, mode, used[i]);
        rep.checks[i].acyclic = rep.checks[i].defects.empty();
    });
    if (mode.kind == CheckMode::Kind::Window && mode.window.kind == Window::Kind::Auto)
        for (const auto& w : used) rep.mode.window.bound = std::max(rep.mode.window.bound, w.bound);
    return rep;
}

} // namespace detail

/// f is an R-colocal equivalence iff holim of the cone of f(-k) vanishes for every k in R.
template <class F>
ColocalReport colocal_report(const PresheafMap<F>& f, const GeneratorSet& r, const CheckMode& mode = {},
                             unsigned threads = 1) {
    f.check();
    if (r.vectors.empty()) fail(ErrorCode::InvalidFanData, "generator set is empty");
    return detail::colocal_checks<F>(r, mode, threads,
                                     [&](const TwistVector& k) { return mapping_cone(twist(f, k)); });
}

template <class F>
bool is_colocal_equivalence(const PresheafMap<F>& f, const GeneratorSet& r, const CheckMode& mode = {},
                            unsigned threads = 1) {
    return colocal_report(f, r, mode, threads).pass();
}

template <class F>
ColocalReport acyclicity_report(const MonomialPresheaf<F>& c, const GeneratorSet& r, const CheckMode& mode = {},
                                unsigned threads = 1) {
    c.check();
    if (r.vectors.empty()) fail(ErrorCode::InvalidFanData, "generator set is empty");
    return detail::colocal_checks<F>(r, mode, threads, [&](const TwistVector& k) { return twist(c, k); });
}

template <class F>
bool is_colocally_acyclic(const MonomialPresheaf<F>& c, const GeneratorSet& r, const CheckMode& mode = {},
                          unsigned threads = 1) {
    return acyclicity_report(c, r, mode, threads).pass();
}

struct WeakGeneratorReport {
    bool objectwise_qiso = false;
    bool colocal = false;
    ColocalReport detail;
};

/// Both verdicts for a map of homotopy sheaves; other inputs are refused.
template <class F>
WeakGeneratorReport weak_generator_report(const PresheafMap<F>& f, const CheckMode& mode = {}, unsigned threads = 1) {
    f.check();
    if (!is_homotopy_sheaf(f.source, mode).pass())
        fail(ErrorCode::NotHomotopySheaf, "source is not a homotopy sheaf");
    if (!is_homotopy_sheaf(f.target, mode).pass())
        fail(ErrorCode::NotHomotopySheaf, "target is not a homotopy sheaf");
    WeakGeneratorReport rep;
    rep.objectwise_qiso = objectwise_quasi_iso(f);
    rep.detail = colocal_report(f, r_sigma(f.source.fan), mode, threads);
    rep.colocal = rep.detail.pass();
    return rep;
}

} // namespace toric
