#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "toric_holim/complexes.hpp"
#include "toric_holim/feasibility.hpp"
#include "toric_holim/lattice_fan.hpp"

namespace toric {

enum class Relation { Ge, Eq };

/// <m, n_ray> >= bound, or = bound.
struct Constraint {
    std::size_t ray;
    Relation rel;
    Int bound;

    friend bool operator==(const Constraint& a, const Constraint& b) {
        return a.ray == b.ray && a.rel == b.rel && a.bound == b.bound;
    }
    friend bool operator<(const Constraint& a, const Constraint& b) {
        return std::tie(a.ray, a.rel, a.bound) < std::tie(b.ray, b.rel, b.bound);
    }
};

/// A set of degrees m in M, described by one constraint per ray at most.
/// Ray indices refer to the fan the region lives over; membership only needs
/// the pairings <m, n_ray>.
class Region {
public:
    Region() = default;
    explicit Region(std::vector<Constraint> cs) { normalize(std::move(cs)); }

    static Region everything() { return Region(); }
    static Region nothing() {
        Region r;
        r.empty_ = true;
        return r;
    }

    bool is_empty() const { return empty_; }
    const std::vector<Constraint>& constraints() const { return cs_; }

    std::optional<Constraint> constraint_on(std::size_t ray) const {
        for (const auto& c : cs_)
            if (c.ray == ray) return c;
        return std::nullopt;
    }

    /// `pairing[r]` is <m, n_r>.
    bool contains(const std::vector<Int>& pairing) const {
        if (empty_) return false;
        for (const auto& c : cs_) {
            if (c.ray >= pairing.size()) fail(ErrorCode::RankMismatch, "pairing vector too short");
            Int v = pairing[c.ray];
            if (c.rel == Relation::Ge ? v < c.bound : v != c.bound) return false;
        }
        return true;
    }

    friend bool operator==(const Region& a, const Region& b) { return a.empty_ == b.empty_ && a.cs_ == b.cs_; }
    friend bool operator!=(const Region& a, const Region& b) { return !(a == b); }
    friend bool operator<(const Region& a, const Region& b) {
        return std::tie(a.empty_, a.cs_) < std::tie(b.empty_, b.cs_);
    }

    std::string describe() const {
        if (empty_) return "empty";
        std::string s = "{";
        for (std::size_t i = 0; i < cs_.size(); ++i) {
            const auto& c = cs_[i];
            s += (i ? ", " : "") + std::string("<m,n") + std::to_string(c.ray) + ">" +
                 (c.rel == Relation::Ge ? ">=" : "=") + std::to_string(c.bound);
        }
        return s + "}";
    }

private:
    void normalize(std::vector<Constraint> cs) {
        std::map<std::size_t, std::optional<Int>> ge, eq;
        std::set<std::size_t> rays;
        for (const auto& c : cs) {
            rays.insert(c.ray);
            if (c.rel == Relation::Ge) {
                auto& g = ge[c.ray];
                g = g ? std::max(*g, c.bound) : c.bound;
            } else {
                auto& e = eq[c.ray];
                if (e && *e != c.bound) {
                    *this = nothing();
                    return;
                }
                e = c.bound;
            }
        }
        cs_.clear();
        for (auto r : rays) {
            auto e = eq.count(r) ? eq[r] : std::nullopt;
            auto g = ge.count(r) ? ge[r] : std::nullopt;
            if (e) {
                if (g && *e < *g) {
                    *this = nothing();
                    return;
                }
                cs_.push_back({r, Relation::Eq, *e});
            } else {
                cs_.push_back({r, Relation::Ge, *g});
            }
        }
    }

    std::vector<Constraint> cs_;
    bool empty_ = false;
};

/// Nonzero entry of a monomial matrix. Every map in scope preserves the
/// M-grading, so the shift must be zero; it is kept to reject ill-formed
/// input rather than silently reinterpret it.
template <class F>
struct MonomialEntry {
    std::size_t row = 0, col = 0;
    F coeff = F(0);
    LatticeVector shift;
};

template <class F>
struct MonomialMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<MonomialEntry<F>> entries;

    void add(std::size_t r, std::size_t c, F coeff) {
        if (!is_zero(coeff)) entries.push_back({r, c, std::move(coeff), {}});
    }

    void check(const std::string& what) const {
        for (const auto& e : entries) {
            if (e.row >= rows || e.col >= cols) fail(ErrorCode::InvalidFanData, what + ": entry index out of range");
            if (std::any_of(e.shift.begin(), e.shift.end(), [](Int x) { return x != 0; }))
                fail(ErrorCode::InhomogeneousEntry, what + ": entry has a nonzero degree shift");
        }
    }
};

/// Evaluates a monomial matrix at degree m. `src` and `dst` are the basis
/// positions (or -1) of each summand; entries leaving the target region
/// act as zero.
template <class F>
Matrix<F> evaluate_matrix(const MonomialMatrix<F>& mm, const std::vector<long>& src, std::size_t src_dim,
                          const std::vector<long>& dst, std::size_t dst_dim) {
    Matrix<F> out(dst_dim, src_dim);
    for (const auto& e : mm.entries) {
        long r = dst[e.row], c = src[e.col];
        if (r < 0 || c < 0) continue;
        out(std::size_t(r), std::size_t(c)) += e.coeff;
    }
    return out;
}

/// An M-graded complex of region modules: summands per chain degree and a
/// monomial differential d_l from degree l to degree l-1.
template <class F>
struct MonomialComplex {
    std::map<int, std::vector<Region>> summands;
    std::map<int, MonomialMatrix<F>> differential;

    const std::vector<Region>& at(int l) const {
        static const std::vector<Region> none;
        auto it = summands.find(l);
        return it == summands.end() ? none : it->second;
    }

    MonomialMatrix<F> d(int l) const {
        auto it = differential.find(l);
        if (it != differential.end()) return it->second;
        return {at(l - 1).size(), at(l).size(), {}};
    }

    bool is_zero() const {
        for (const auto& [l, rs] : summands)
            for (const auto& r : rs)
                if (!r.is_empty()) return false;
        return true;
    }

    void check() const {
        for (const auto& [l, mm] : differential) {
            if (mm.rows != at(l - 1).size() || mm.cols != at(l).size())
                fail(ErrorCode::BrokenDifferential, "differential shape mismatch at degree " + std::to_string(l));
            mm.check("differential");
        }
    }

    /// Every region, in canonical order.
    std::vector<Region> regions() const {
        std::vector<Region> out;
        for (const auto& [l, rs] : summands) out.insert(out.end(), rs.begin(), rs.end());
        return out;
    }
};

inline std::vector<Int> pairings(const Fan& fan, const LatticeVector& m) {
    if (m.size() != fan.rank()) fail(ErrorCode::RankMismatch, "degree has the wrong length");
    std::vector<Int> p(fan.num_rays());
    for (std::size_t r = 0; r < p.size(); ++r) p[r] = dot(m, fan.ray(r));
    return p;
}

inline bool region_membership(const Fan& fan, const Region& r, const LatticeVector& m) {
    return r.contains(pairings(fan, m));
}

/// Basis positions of the summands containing the degree.
inline std::vector<long> basis_positions(const std::vector<Region>& rs, const std::vector<Int>& pairing,
                                         std::size_t& count) {
    std::vector<long> pos(rs.size(), -1);
    count = 0;
    for (std::size_t i = 0; i < rs.size(); ++i)
        if (rs[i].contains(pairing)) pos[i] = long(count++);
    return pos;
}

template <class F>
FiniteChainComplex<F> evaluate_pairing(const MonomialComplex<F>& c, const std::vector<Int>& pairing) {
    FiniteChainComplex<F> out;
    std::map<int, std::vector<long>> pos;
    for (const auto& [l, rs] : c.summands) {
        std::size_t count = 0;
        pos[l] = basis_positions(rs, pairing, count);
        out.set_dim(l, count);
    }
    for (const auto& [l, mm] : c.differential) {
        if (!out.dim(l) || !out.dim(l - 1)) continue;
        out.set_boundary(l, evaluate_matrix(mm, pos[l], out.dim(l), pos[l - 1], out.dim(l - 1)));
    }
    out.validate();
    return out;
}

template <class F>
FiniteChainComplex<F> evaluate_degree(const Fan& fan, const MonomialComplex<F>& c, const LatticeVector& m) {
    return evaluate_pairing(c, pairings(fan, m));
}

/// Applies f to every region of a complex, keeping the differential.
template <class F, class Fn>
MonomialComplex<F> map_regions(const MonomialComplex<F>& c, Fn&& f) {
    MonomialComplex<F> out = c;
    for (auto& [l, rs] : out.summands)
        for (auto& r : rs) r = f(r);
    return out;
}

/// Drops constraints on rays of sigma outside tau. An equality there pins a
/// coordinate that the separating form moves, so the localized module is 0.
inline Region localize_region(const Region& r, const Cone& sigma, const Cone& tau) {
    if (r.is_empty()) return r;
    Cone dropped = cone_difference(sigma, tau);
    std::vector<Constraint> keep;
    for (const auto& c : r.constraints()) {
        if (!std::binary_search(dropped.begin(), dropped.end(), c.ray)) {
            keep.push_back(c);
            continue;
        }
        if (c.rel == Relation::Eq) return Region::nothing();
    }
    return Region(std::move(keep));
}

template <class F>
MonomialComplex<F> localize_along_face(const MonomialComplex<F>& c, const Cone& sigma, const Cone& tau) {
    if (!is_subset(tau, sigma)) fail(ErrorCode::NotFace, cone_name(tau) + " is not a face of " + cone_name(sigma));
    return map_regions(c, [&](const Region& r) {
        for (const auto& k : r.constraints())
            if (!std::binary_search(sigma.begin(), sigma.end(), k.ray))
                fail(ErrorCode::NotFace, "region constrains a ray outside " + cone_name(sigma));
        return localize_region(r, sigma, tau);
    });
}

inline Region restrict_region(const Region& r, std::size_t rho) {
    if (r.is_empty()) return r;
    auto c = r.constraint_on(rho);
    if (!c) fail(ErrorCode::NoRhoConstraint, "region " + r.describe() + " has no bound at ray " + std::to_string(rho));
    std::vector<Constraint> cs;
    for (const auto& k : r.constraints()) cs.push_back(k.ray == rho ? Constraint{rho, Relation::Eq, k.bound} : k);
    return Region(std::move(cs));
}

/// Replaces the rho-bound by the equality at that bound in every region.
template <class F>
MonomialComplex<F> restrict_to_divisor(const MonomialComplex<F>& c, std::size_t rho) {
    return map_regions(c, [&](const Region& r) { return restrict_region(r, rho); });
}

/// One realizable membership pattern of a family of regions.
struct Chamber {
    std::vector<bool> pattern;               // membership per input region
    std::optional<LatticeVector> witness;    // nullopt: the cell has no integral point
};

struct ChamberReport {
    std::vector<Chamber> chambers;       // feasible patterns, canonical order
    std::vector<Chamber> infeasible;     // arrangement cells without integral points
    std::vector<bool> region_feasible;   // does each input region contain a lattice point
};

namespace detail {

struct Interval1 {
    std::optional<Int> lo, hi;  // inclusive
};

inline std::vector<LinearConstraint> cell_constraints(const Fan& fan, const std::vector<std::size_t>& rays,
                                                      const std::vector<Interval1>& cell) {
    std::vector<LinearConstraint> cs;
    const std::size_t n = fan.rank();
    for (std::size_t i = 0; i < rays.size(); ++i) {
        std::vector<Rational> a(n);
        for (std::size_t j = 0; j < n; ++j) a[j] = fan.ray(rays[i])[j];
        if (cell[i].lo && cell[i].hi && *cell[i].lo == *cell[i].hi) {
            cs.push_back({a, Rational(*cell[i].lo), true});
            continue;
        }
        if (cell[i].lo) cs.push_back({a, Rational(*cell[i].lo), false});
        if (cell[i].hi) {
            auto neg = a;
            for (auto& x : neg) x = -x;
            cs.push_back({neg, Rational(-*cell[i].hi), false});
        }
    }
    return cs;
}

inline std::vector<LinearConstraint> region_constraints(const Fan& fan, const Region& r) {
    std::vector<LinearConstraint> cs;
    for (const auto& c : r.constraints()) {
        std::vector<Rational> a(fan.rank());
        for (std::size_t j = 0; j < fan.rank(); ++j) a[j] = fan.ray(c.ray)[j];
        cs.push_back({a, Rational(c.bound), c.rel == Relation::Eq});
    }
    return cs;
}

inline Int search_radius(const Fan& fan, const std::vector<Region>& regions) {
    Int k = 0;
    for (const auto& r : regions)
        for (const auto& c : r.constraints()) k = std::max(k, std::abs(c.bound));
    return k + Int(fan.rank()) + 1;
}

} // namespace detail

/// Cells of the arrangement {<m, n_rho> = c} cut out by the constraints of
/// the given regions. Membership of every region is constant on a cell, so a
/// monomial complex built from these regions has the same homology at every
/// point of a cell. Patterns are deduplicated.
inline ChamberReport chamber_patterns(const Fan& fan, const std::vector<Region>& regions) {
    std::map<std::size_t, std::set<Int>> cuts;  // ray -> thresholds t, splitting at < t | >= t
    for (const auto& r : regions)
        for (const auto& c : r.constraints()) {
            cuts[c.ray].insert(c.bound);
            if (c.rel == Relation::Eq) cuts[c.ray].insert(c.bound + 1);
        }
    std::vector<std::size_t> rays;
    std::vector<std::vector<detail::Interval1>> pieces;
    for (const auto& [ray, ts] : cuts) {
        rays.push_back(ray);
        std::vector<detail::Interval1> iv;
        std::optional<Int> prev;
        for (Int t : ts) {
            iv.push_back({prev, t - 1});
            prev = t;
        }
        iv.push_back({prev, std::nullopt});
        pieces.push_back(std::move(iv));
    }
    const Int radius = detail::search_radius(fan, regions);

    ChamberReport out;
    std::map<std::vector<bool>, std::size_t> seen;
    std::set<std::vector<bool>> dead;
    std::vector<std::size_t> choice(rays.size(), 0);
    while (true) {
        std::vector<detail::Interval1> cell(rays.size());
        for (std::size_t i = 0; i < rays.size(); ++i) cell[i] = pieces[i][choice[i]];
        auto w = find_integer_point(detail::cell_constraints(fan, rays, cell), fan.rank(), radius);
        if (w) {
            auto p = pairings(fan, *w);
            std::vector<bool> pattern;
            for (const auto& r : regions) pattern.push_back(r.contains(p));
            if (!seen.count(pattern)) {
                seen[pattern] = out.chambers.size();
                out.chambers.push_back({pattern, w});
            }
        } else {
            // membership on an empty cell is read off the interval endpoints
            std::vector<bool> pattern;
            for (const auto& r : regions) {
                bool in = !r.is_empty();
                for (const auto& c : r.constraints()) {
                    std::size_t i = std::size_t(std::find(rays.begin(), rays.end(), c.ray) - rays.begin());
                    const auto& iv = cell[i];
                    Int probe = iv.lo ? *iv.lo : *iv.hi;
                    in = in && (c.rel == Relation::Ge ? probe >= c.bound : probe == c.bound);
                }
                pattern.push_back(in);
            }
            dead.insert(pattern);
        }
        std::size_t i = 0;
        while (i < rays.size() && ++choice[i] == pieces[i].size()) choice[i++] = 0;
        if (i == rays.size()) break;
    }
    for (const auto& p : dead)
        if (!seen.count(p)) out.infeasible.push_back({p, std::nullopt});
    for (const auto& r : regions)
        out.region_feasible.push_back(
            !r.is_empty() &&
            find_integer_point(detail::region_constraints(fan, r), fan.rank(), radius).has_value());
    return out;
}

} // namespace toric
