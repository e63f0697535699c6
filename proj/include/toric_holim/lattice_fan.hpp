#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "toric_holim/feasibility.hpp"
#include "toric_holim/integer_matrix.hpp"

namespace toric {

/// Sorted ray indices; the empty cone is the origin.
using Cone = std::vector<std::size_t>;
/// One integer per ray of the fan, in ray order.
using TwistVector = std::vector<Int>;

inline bool is_subset(const Cone& a, const Cone& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

inline Cone cone_difference(const Cone& a, const Cone& b) {
    Cone d;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(d));
    return d;
}

inline Cone cone_intersection(const Cone& a, const Cone& b) {
    Cone d;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(d));
    return d;
}

inline bool cone_less(const Cone& a, const Cone& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

inline std::string cone_name(const Cone& c) {
    std::string s = "{";
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
    return s + "}";
}

struct FanSpec {
    std::size_t rank = 0;
    std::vector<LatticeVector> rays;
    std::vector<Cone> max_cones;
};

class Fan;
Fan validate_fan(const FanSpec& spec);

/// A validated simplicial fan. Cones are kept in (dimension, lexicographic)
/// order; index 0 is always the origin.
class Fan {
public:
    Fan() = default;

    std::size_t rank() const { return rank_; }
    std::size_t num_rays() const { return rays_.size(); }
    const std::vector<LatticeVector>& rays() const { return rays_; }
    const LatticeVector& ray(std::size_t i) const { return rays_.at(i); }
    const std::vector<Cone>& cones() const { return cones_; }
    const std::vector<Cone>& maximal_cones() const { return maximal_; }

    std::optional<std::size_t> index_of(const Cone& c) const {
        auto it = index_.find(c);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    bool contains(const Cone& c) const { return index_.count(c) != 0; }

    void check_ray(std::size_t r) const {
        if (r >= rays_.size()) fail(ErrorCode::UnknownRay, "ray " + std::to_string(r) + " out of range");
    }

    /// Generators of `c` as the columns of a rank x |c| matrix.
    IntMatrix generator_matrix(const Cone& c) const {
        IntMatrix g(rank_, c.size());
        for (std::size_t j = 0; j < c.size(); ++j)
            for (std::size_t i = 0; i < rank_; ++i) g(i, j) = rays_[c[j]][i];
        return g;
    }

    friend bool operator==(const Fan& a, const Fan& b) {
        return a.rank_ == b.rank_ && a.rays_ == b.rays_ && a.cones_ == b.cones_;
    }
    friend bool operator<(const Fan& a, const Fan& b) {
        return std::tie(a.rank_, a.rays_, a.cones_) < std::tie(b.rank_, b.rays_, b.cones_);
    }

private:
    friend Fan validate_fan(const FanSpec& spec);

    std::size_t rank_ = 0;
    std::vector<LatticeVector> rays_;
    std::vector<Cone> cones_;
    std::vector<Cone> maximal_;
    std::map<Cone, std::size_t> index_;
};

namespace detail {

// Does cone(a) meet cone(b) outside cone(a ∩ b)?  Only needs one direction
// since simplicial representations are unique.
inline bool overlaps_badly(const std::vector<LatticeVector>& rays, std::size_t rank, const Cone& a,
                           const Cone& b) {
    Cone only_a = cone_difference(a, b);
    if (only_a.empty()) return false;
    const std::size_t nv = a.size() + b.size();
    std::vector<LinearConstraint> cs;
    for (std::size_t i = 0; i < rank; ++i) {
        LinearConstraint c{std::vector<Rational>(nv), Rational(0), true};
        for (std::size_t j = 0; j < a.size(); ++j) c.coeffs[j] = rays[a[j]][i];
        for (std::size_t j = 0; j < b.size(); ++j) c.coeffs[a.size() + j] = -rays[b[j]][i];
        cs.push_back(std::move(c));
    }
    for (std::size_t j = 0; j < nv; ++j) {
        LinearConstraint c{std::vector<Rational>(nv), Rational(0), false};
        c.coeffs[j] = 1;
        cs.push_back(std::move(c));
    }
    LinearConstraint total{std::vector<Rational>(nv), Rational(1), true};
    for (std::size_t j = 0; j < a.size(); ++j)
        if (std::binary_search(only_a.begin(), only_a.end(), a[j])) total.coeffs[j] = 1;
    cs.push_back(std::move(total));
    return rationally_feasible(cs, nv);
}

} // namespace detail

/// Checks rays and cones and completes the face closure.
inline Fan validate_fan(const FanSpec& spec) {
    Fan f;
    f.rank_ = spec.rank;
    std::set<LatticeVector> seen;
    for (std::size_t r = 0; r < spec.rays.size(); ++r) {
        const auto& v = spec.rays[r];
        if (v.size() != spec.rank)
            fail(ErrorCode::InvalidFanData, "ray " + std::to_string(r) + " has wrong length");
        if (content(v) != 1) fail(ErrorCode::NonPrimitiveRay, "ray " + std::to_string(r) + " is not primitive");
        if (!seen.insert(v).second) fail(ErrorCode::InvalidFanData, "duplicate ray " + std::to_string(r));
    }
    f.rays_ = spec.rays;

    std::set<Cone> all{Cone{}};
    for (auto c : spec.max_cones) {
        std::sort(c.begin(), c.end());
        if (std::adjacent_find(c.begin(), c.end()) != c.end())
            fail(ErrorCode::InvalidFanData, "repeated ray in cone " + cone_name(c));
        for (auto r : c)
            if (r >= spec.rays.size()) fail(ErrorCode::InvalidFanData, "cone " + cone_name(c) + " names unknown ray");
        if (rational_rank(f.generator_matrix(c)) != c.size())
            fail(ErrorCode::NotPointed, "generators of cone " + cone_name(c) + " are dependent");
        for (std::size_t mask = 0; mask < (std::size_t(1) << c.size()); ++mask) {
            Cone face;
            for (std::size_t j = 0; j < c.size(); ++j)
                if (mask >> j & 1) face.push_back(c[j]);
            all.insert(face);
        }
    }
    for (std::size_t r = 0; r < spec.rays.size(); ++r) all.insert(Cone{r});

    f.cones_.assign(all.begin(), all.end());
    std::sort(f.cones_.begin(), f.cones_.end(), cone_less);
    for (std::size_t i = 0; i < f.cones_.size(); ++i) f.index_[f.cones_[i]] = i;
    for (const auto& c : f.cones_) {
        bool maximal = std::none_of(f.cones_.begin(), f.cones_.end(),
                                    [&](const Cone& d) { return d.size() > c.size() && is_subset(c, d); });
        if (maximal) f.maximal_.push_back(c);
    }
    for (std::size_t i = 0; i < f.maximal_.size(); ++i)
        for (std::size_t j = 0; j < f.maximal_.size(); ++j) {
            if (i == j) continue;
            if (detail::overlaps_badly(f.rays_, f.rank_, f.maximal_[i], f.maximal_[j]))
                fail(ErrorCode::IntersectionNotFace,
                     "cones " + cone_name(f.maximal_[i]) + " and " + cone_name(f.maximal_[j]) + " overlap");
        }
    return f;
}

inline bool is_regular_cone(const Fan& fan, const Cone& c) {
    auto snf = smith_normal_form(fan.generator_matrix(c));
    if (snf.invariants.size() != c.size()) return false;
    return std::all_of(snf.invariants.begin(), snf.invariants.end(), [](Int d) { return d == 1; });
}

inline bool is_regular(const Fan& fan) {
    for (const auto& c : fan.maximal_cones())
        if (!is_regular_cone(fan, c)) return false;
    return true;
}

inline void require_regular(const Fan& fan) {
    if (!is_regular(fan)) fail(ErrorCode::NotRegular, "fan is not regular");
}

/// Two-facet criterion; the rank-0 fan is complete.
inline bool is_complete(const Fan& fan) {
    const std::size_t n = fan.rank();
    if (n == 0) return true;
    for (const auto& c : fan.maximal_cones())
        if (c.size() != n) return false;
    for (const auto& c : fan.cones()) {
        if (c.size() != n - 1) continue;
        std::size_t count = 0;
        for (const auto& d : fan.maximal_cones())
            if (is_subset(c, d)) ++count;
        if (count != 2) return false;
    }
    return true;
}

inline std::vector<Cone> star(const Fan& fan, std::size_t rho) {
    fan.check_ray(rho);
    std::vector<Cone> out;
    for (const auto& c : fan.cones())
        if (std::binary_search(c.begin(), c.end(), rho)) out.push_back(c);
    return out;
}

inline TwistVector cone_indicator(const Fan& fan, const Cone& c) {
    TwistVector v(fan.num_rays(), 0);
    for (auto r : c) v[r] = 1;
    return v;
}

inline TwistVector unit_twist(const Fan& fan, std::size_t rho) {
    fan.check_ray(rho);
    TwistVector v(fan.num_rays(), 0);
    v[rho] = 1;
    return v;
}

/// The fan of the divisor attached to a ray, with the bookkeeping needed to
/// move gradings between M and the quotient's dual lattice.
struct DivisorQuotient {
    Fan fan;
    std::size_t rho = 0;
    std::vector<std::size_t> ray_origin;  // quotient ray -> ray of the parent fan
    IntMatrix projection;                 // (n-1) x n, N -> N / Z n_rho
    LatticeVector lift;                   // u in M with <u, n_rho> = 1
    std::vector<Cone> star_cones;         // st(rho) in parent cone order
    std::vector<Cone> images;             // images[i] is the quotient cone of star_cones[i]

    /// Quotient cone of a cone containing rho.
    Cone image_of(const Cone& c) const {
        for (std::size_t i = 0; i < star_cones.size(); ++i)
            if (star_cones[i] == c) return images[i];
        fail(ErrorCode::NotFace, "cone " + cone_name(c) + " is not in the star");
    }
    /// Parent cone lying over a quotient cone.
    Cone preimage_of(const Cone& c) const {
        for (std::size_t i = 0; i < images.size(); ++i)
            if (images[i] == c) return star_cones[i];
        fail(ErrorCode::NotFace, "cone " + cone_name(c) + " is not a quotient cone");
    }
    /// Quotient ray index for a parent ray, if that ray spans a 2-cone with rho.
    std::optional<std::size_t> quotient_ray(std::size_t parent) const {
        for (std::size_t i = 0; i < ray_origin.size(); ++i)
            if (ray_origin[i] == parent) return i;
        return std::nullopt;
    }
    /// Embeds M-bar into M as the forms vanishing on n_rho.
    LatticeVector embed(const LatticeVector& mbar) const {
        LatticeVector m(projection.cols(), 0);
        for (std::size_t i = 0; i < projection.rows(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j) m[j] += projection(i, j) * mbar[i];
        return m;
    }
};

inline DivisorQuotient quotient_fan(const Fan& fan, std::size_t rho) {
    fan.check_ray(rho);
    require_regular(fan);
    const std::size_t n = fan.rank();
    IntMatrix col(n, 1);
    for (std::size_t i = 0; i < n; ++i) col(i, 0) = fan.ray(rho)[i];
    auto snf = smith_normal_form(col);
    IntMatrix u = snf.left;
    if (snf.right(0, 0) < 0) detail::negate_row(u, 0);

    DivisorQuotient q;
    q.rho = rho;
    q.lift = row_of(u, 0);
    q.projection = u.block(1, 0, n - 1, n);

    for (const auto& c : fan.cones())
        if (c.size() == 2 && std::binary_search(c.begin(), c.end(), rho)) q.ray_origin.push_back(c[0] == rho ? c[1] : c[0]);
    std::sort(q.ray_origin.begin(), q.ray_origin.end());

    FanSpec spec;
    spec.rank = n - 1;
    for (auto t : q.ray_origin) {
        LatticeVector v(n - 1, 0);
        for (std::size_t i = 0; i + 1 < n; ++i) v[i] = dot(row_of(q.projection, i), fan.ray(t));
        spec.rays.push_back(std::move(v));
    }
    q.star_cones = star(fan, rho);
    for (const auto& c : q.star_cones) {
        Cone img;
        for (auto t : c)
            if (t != rho) img.push_back(*q.quotient_ray(t));
        std::sort(img.begin(), img.end());
        q.images.push_back(img);
        spec.max_cones.push_back(img);
    }
    q.fan = validate_fan(spec);
    return q;
}

namespace detail {

// Reduces f modulo the lattice spanned by the rows of `basis` using its
// Hermite form, giving a canonical coset representative.
inline LatticeVector reduce_modulo(LatticeVector f, const IntMatrix& basis) {
    if (basis.rows() == 0) return f;
    auto h = hermite_normal_form(basis);
    for (std::size_t r = 0; r < h.pivots.size(); ++r) {
        std::size_t p = h.pivots[r];
        Int q = floor_div(f[p], h.form(r, p));
        if (q == 0) continue;
        for (std::size_t j = 0; j < f.size(); ++j) f[j] -= q * h.form(r, j);
    }
    return f;
}

struct DualBasis {
    IntMatrix transform;  // rows 0..k-1 dual to the generators, rows k.. vanish on the cone
    std::size_t k = 0;
};

inline DualBasis dual_basis(const Fan& fan, const Cone& c) {
    if (!is_regular_cone(fan, c)) fail(ErrorCode::NotRegular, "cone " + cone_name(c) + " is not regular");
    auto h = hermite_normal_form(fan.generator_matrix(c));
    return {h.transform, c.size()};
}

inline LatticeVector canonical_form(const LatticeVector& raw, const DualBasis& d, std::size_t n) {
    return reduce_modulo(raw, d.transform.block(d.k, 0, n - d.k, n));
}

} // namespace detail

/// f in M with f(n_rho) = 1 and f = 0 on the other rays of the cone,
/// reduced modulo the forms vanishing on the cone.
inline LatticeVector separating_form(const Fan& fan, const Cone& c, std::size_t rho) {
    fan.check_ray(rho);
    auto pos = std::lower_bound(c.begin(), c.end(), rho);
    if (pos == c.end() || *pos != rho) fail(ErrorCode::NotFace, "ray not in cone " + cone_name(c));
    auto d = detail::dual_basis(fan, c);
    return detail::canonical_form(row_of(d.transform, std::size_t(pos - c.begin())), d, fan.rank());
}

/// f_sigma with f_sigma(n_rho) = -k_rho on the rays of the cone.
inline LatticeVector support_form(const Fan& fan, const Cone& c, const TwistVector& k) {
    if (k.size() != fan.num_rays()) fail(ErrorCode::RankMismatch, "twist vector has wrong length");
    const std::size_t n = fan.rank();
    auto d = detail::dual_basis(fan, c);
    LatticeVector raw(n, 0);
    for (std::size_t j = 0; j < c.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) raw[i] += -k[c[j]] * d.transform(j, i);
    return detail::canonical_form(raw, d, n);
}

} // namespace toric
