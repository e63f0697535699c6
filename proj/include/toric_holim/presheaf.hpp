#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toric_holim/diagram.hpp"
#include "toric_holim/graded_modules.hpp"

namespace toric {

/// Monomial matrices per chain degree, from one complex's summands to another's.
template <class F>
using GradedMonomialMap = std::map<int, MonomialMatrix<F>>;

template <class F>
MonomialMatrix<F> component_or_zero(const GradedMonomialMap<F>& g, int l, std::size_t rows, std::size_t cols) {
    auto it = g.find(l);
    if (it != g.end()) return it->second;
    return {rows, cols, {}};
}

/// A Sigma^op-diagram of monomial complexes. values[i] sits at fan.cones()[i];
/// structure maps are stored for covering pairs only.
template <class F>
struct MonomialPresheaf {
    Fan fan;
    std::vector<MonomialComplex<F>> values;
    std::map<std::pair<std::size_t, std::size_t>, GradedMonomialMap<F>> structure;

    MonomialPresheaf() = default;
    explicit MonomialPresheaf(Fan f) : fan(std::move(f)), values(fan.cones().size()) {}

    const MonomialComplex<F>& at(const Cone& c) const { return values.at(*fan.index_of(c)); }

    MonomialMatrix<F> structure_at(std::size_t from, std::size_t to, int l) const {
        auto it = structure.find({from, to});
        const std::size_t rows = values[to].at(l).size(), cols = values[from].at(l).size();
        if (it == structure.end()) return {rows, cols, {}};
        return component_or_zero(it->second, l, rows, cols);
    }

    /// Shape, shift and locality checks. Chain-map and functoriality
    /// conditions are verified numerically on evaluation.
    void check() const {
        if (values.size() != fan.cones().size())
            fail(ErrorCode::InconsistentDiagram, "presheaf needs one complex per cone");
        for (std::size_t i = 0; i < values.size(); ++i) {
            values[i].check();
            const auto& c = fan.cones()[i];
            for (const auto& r : values[i].regions())
                for (const auto& k : r.constraints())
                    if (!std::binary_search(c.begin(), c.end(), k.ray))
                        fail(ErrorCode::InconsistentDiagram,
                             "region at " + cone_name(c) + " constrains ray " + std::to_string(k.ray));
        }
        for (const auto& [key, g] : structure) {
            auto [from, to] = key;
            const auto& a = fan.cones().at(from);
            const auto& b = fan.cones().at(to);
            if (b.size() + 1 != a.size() || !is_subset(b, a))
                fail(ErrorCode::InconsistentDiagram, "structure map between non-adjacent cones");
            for (const auto& [l, mm] : g) {
                if (mm.rows != values[to].at(l).size() || mm.cols != values[from].at(l).size())
                    fail(ErrorCode::InconsistentDiagram, "structure map shape mismatch");
                mm.check("structure map");
            }
        }
    }

    std::vector<Region> all_regions() const {
        std::vector<Region> out;
        for (const auto& v : values) {
            auto rs = v.regions();
            out.insert(out.end(), rs.begin(), rs.end());
        }
        return out;
    }

    bool is_zero() const {
        for (const auto& v : values)
            if (!v.is_zero()) return false;
        return true;
    }
};

/// A map of presheaves: per cone, monomial matrices between the summands.
template <class F>
struct PresheafMap {
    MonomialPresheaf<F> source, target;
    std::vector<GradedMonomialMap<F>> components;

    PresheafMap() = default;
    PresheafMap(MonomialPresheaf<F> s, MonomialPresheaf<F> t)
        : source(std::move(s)), target(std::move(t)), components(source.values.size()) {}

    MonomialMatrix<F> component_at(std::size_t cone, int l) const {
        return component_or_zero(components.at(cone), l, target.values[cone].at(l).size(),
                                 source.values[cone].at(l).size());
    }

    void check() const {
        source.check();
        target.check();
        if (!(source.fan == target.fan)) fail(ErrorCode::InconsistentDiagram, "map between presheaves on different fans");
        for (std::size_t i = 0; i < components.size(); ++i)
            for (const auto& [l, mm] : components[i]) {
                if (mm.rows != target.values[i].at(l).size() || mm.cols != source.values[i].at(l).size())
                    fail(ErrorCode::NotAChainMap, "map component shape mismatch");
                mm.check("map component");
            }
    }
};

// ---------------------------------------------------------------- evaluation

template <class F>
struct EvaluatedComplex {
    FiniteChainComplex<F> complex;
    std::map<int, std::vector<long>> positions;
};

template <class F>
EvaluatedComplex<F> evaluate_with_positions(const MonomialComplex<F>& c, const std::vector<Int>& pairing) {
    EvaluatedComplex<F> e;
    for (const auto& [l, rs] : c.summands) {
        std::size_t count = 0;
        e.positions[l] = basis_positions(rs, pairing, count);
        e.complex.set_dim(l, count);
    }
    for (const auto& [l, mm] : c.differential) {
        if (!e.complex.dim(l) || !e.complex.dim(l - 1)) continue;
        e.complex.set_boundary(l, evaluate_matrix(mm, e.positions[l], e.complex.dim(l), e.positions[l - 1],
                                                  e.complex.dim(l - 1)));
    }
    e.complex.validate();
    return e;
}

/// Chain map between evaluated complexes given monomial components per degree.
template <class F, class Component>
ChainMap<F> evaluate_graded_map(const EvaluatedComplex<F>& s, const EvaluatedComplex<F>& t, Component&& component) {
    ChainMap<F> f(s.complex, t.complex);
    for (const auto& [l, pos] : s.positions) {
        if (!s.complex.dim(l) || !t.complex.dim(l)) continue;
        auto tp = t.positions.find(l);
        if (tp == t.positions.end()) continue;
        f.set_component(l, evaluate_matrix(component(l), pos, s.complex.dim(l), tp->second, t.complex.dim(l)));
    }
    return f;
}

template <class F>
std::vector<EvaluatedComplex<F>> evaluate_values(const MonomialPresheaf<F>& c, const std::vector<Int>& pairing) {
    std::vector<EvaluatedComplex<F>> vs;
    vs.reserve(c.values.size());
    for (const auto& v : c.values) vs.push_back(evaluate_with_positions(v, pairing));
    return vs;
}

template <class F>
DiagramComplex<F> evaluate_presheaf_pairing(const MonomialPresheaf<F>& c, const std::vector<Int>& pairing,
                                            bool validate = true) {
    auto vs = evaluate_values(c, pairing);
    DiagramComplex<F> d(Poset::of_fan(c.fan));
    for (std::size_t i = 0; i < vs.size(); ++i) d.set_value(i, vs[i].complex);
    for (const auto& cv : d.poset().covers()) {
        auto f = evaluate_graded_map(vs[cv.from], vs[cv.to], [&](int l) { return c.structure_at(cv.from, cv.to, l); });
        d.set_structure(cv.from, cv.to, std::move(f));
    }
    if (validate) d.validate();
    return d;
}

template <class F>
DiagramComplex<F> evaluate_presheaf_degree(const MonomialPresheaf<F>& c, const LatticeVector& m) {
    return evaluate_presheaf_pairing(c, pairings(c.fan, m));
}

/// Per-cone chain maps of a presheaf map at one degree.
template <class F>
std::vector<ChainMap<F>> evaluate_map_pairing(const PresheafMap<F>& f, const std::vector<Int>& pairing) {
    auto s = evaluate_values(f.source, pairing);
    auto t = evaluate_values(f.target, pairing);
    std::vector<ChainMap<F>> out;
    for (std::size_t i = 0; i < s.size(); ++i)
        out.push_back(evaluate_graded_map(s[i], t[i], [&](int l) { return f.component_at(i, l); }));
    return out;
}

// -------------------------------------------------------------- constructors

/// O(k): one degree-0 summand per cone with bounds -k_rho, inclusions as structure maps.
template <class F>
MonomialPresheaf<F> line_bundle(const Fan& fan, const TwistVector& k) {
    require_regular(fan);
    if (k.size() != fan.num_rays()) fail(ErrorCode::RankMismatch, "twist vector has wrong length");
    MonomialPresheaf<F> p(fan);
    for (std::size_t i = 0; i < fan.cones().size(); ++i) {
        std::vector<Constraint> cs;
        for (auto r : fan.cones()[i]) cs.push_back({r, Relation::Ge, -k[r]});
        p.values[i].summands[0] = {Region(std::move(cs))};
    }
    for (const auto& cv : Poset::of_fan(fan).covers()) {
        MonomialMatrix<F> m{1, 1, {}};
        m.add(0, 0, F(1));
        p.structure[{cv.from, cv.to}][0] = std::move(m);
    }
    return p;
}

/// Free generators of a pattern complex, each placed at an offset m0 in M.
template <class F>
struct FreePattern {
    FiniteChainComplex<F> complex;
    std::map<int, std::vector<LatticeVector>> offsets;  // per degree, one per basis vector; default 0

    LatticeVector offset(int l, std::size_t i, std::size_t rank) const {
        auto it = offsets.find(l);
        if (it == offsets.end() || i >= it->second.size()) return LatticeVector(rank, 0);
        return it->second[i];
    }
};

/// S_k over A: one generator in chain degree k at offset 0.
template <class F>
FreePattern<F> sphere_pattern(int k) {
    FreePattern<F> p;
    p.complex.set_dim(k, 1);
    return p;
}

/// F_tau(P): A^sigma (x) P on faces sigma of tau, zero elsewhere.
template <class F>
MonomialPresheaf<F> free_presheaf(const Fan& fan, const Cone& tau, const FreePattern<F>& pat) {
    if (!fan.contains(tau)) fail(ErrorCode::NotFace, "cone " + cone_name(tau) + " is not in the fan");
    pat.complex.validate();
    const std::size_t n = fan.rank();
    MonomialPresheaf<F> p(fan);
    for (std::size_t i = 0; i < fan.cones().size(); ++i) {
        const auto& sigma = fan.cones()[i];
        if (!is_subset(sigma, tau)) continue;
        auto& v = p.values[i];
        for (auto [l, d] : pat.complex.dims()) {
            auto& rs = v.summands[l];
            for (std::size_t g = 0; g < d; ++g) {
                auto m0 = pat.offset(l, g, n);
                std::vector<Constraint> cs;
                for (auto r : sigma) cs.push_back({r, Relation::Ge, dot(m0, fan.ray(r))});
                rs.push_back(Region(std::move(cs)));
            }
        }
        for (auto [l, d] : pat.complex.dims()) {
            auto b = pat.complex.boundary(l);
            MonomialMatrix<F> mm{b.rows(), b.cols(), {}};
            for (std::size_t r = 0; r < b.rows(); ++r)
                for (std::size_t c = 0; c < b.cols(); ++c) {
                    if (is_zero(b(r, c))) continue;
                    if (pat.offset(l, c, n) != pat.offset(l - 1, r, n))
                        fail(ErrorCode::InhomogeneousEntry, "pattern differential joins different offsets");
                    mm.add(r, c, b(r, c));
                }
            if (!mm.entries.empty()) v.differential[l] = std::move(mm);
        }
    }
    for (const auto& cv : Poset::of_fan(fan).covers()) {
        if (!is_subset(fan.cones()[cv.from], tau)) continue;
        for (auto [l, d] : pat.complex.dims()) {
            MonomialMatrix<F> mm{d, d, {}};
            for (std::size_t g = 0; g < d; ++g) mm.add(g, g, F(1));
            p.structure[{cv.from, cv.to}][l] = std::move(mm);
        }
    }
    return p;
}

template <class F>
MonomialPresheaf<F> zero_presheaf(const Fan& fan) {
    return MonomialPresheaf<F>(fan);
}

/// C(k): every bound b at ray rho becomes b - k_rho.
template <class F>
MonomialPresheaf<F> twist(const MonomialPresheaf<F>& c, const TwistVector& k) {
    require_regular(c.fan);
    if (k.size() != c.fan.num_rays()) fail(ErrorCode::RankMismatch, "twist vector has wrong length");
    MonomialPresheaf<F> out = c;
    for (auto& v : out.values)
        v = map_regions(v, [&](const Region& r) {
            if (r.is_empty()) return r;
            std::vector<Constraint> cs = r.constraints();
            for (auto& x : cs) x.bound -= k[x.ray];
            return Region(std::move(cs));
        });
    return out;
}

template <class F>
PresheafMap<F> twist(const PresheafMap<F>& f, const TwistVector& k) {
    PresheafMap<F> g = f;
    g.source = twist(f.source, k);
    g.target = twist(f.target, k);
    return g;
}

namespace detail {

template <class F>
MonomialMatrix<F> block_diag(const MonomialMatrix<F>& a, const MonomialMatrix<F>& b) {
    MonomialMatrix<F> m{a.rows + b.rows, a.cols + b.cols, a.entries};
    for (auto e : b.entries) {
        e.row += a.rows;
        e.col += a.cols;
        m.entries.push_back(std::move(e));
    }
    return m;
}

// Places `part` into `into` at a row/column offset, scaled.
template <class F>
void paste(MonomialMatrix<F>& into, const MonomialMatrix<F>& part, std::size_t r0, std::size_t c0, F scale = F(1)) {
    for (const auto& e : part.entries) into.add(e.row + r0, e.col + c0, scale * e.coeff);
}

template <class F>
std::set<int> degrees_of(const MonomialComplex<F>& c) {
    std::set<int> s;
    for (const auto& [l, rs] : c.summands) s.insert(l);
    return s;
}

} // namespace detail

template <class F>
MonomialComplex<F> direct_sum(const MonomialComplex<F>& a, const MonomialComplex<F>& b) {
    MonomialComplex<F> s;
    auto degs = detail::degrees_of(a);
    for (int l : detail::degrees_of(b)) degs.insert(l);
    for (int l : degs) {
        auto rs = a.at(l);
        rs.insert(rs.end(), b.at(l).begin(), b.at(l).end());
        s.summands[l] = std::move(rs);
    }
    for (int l : degs) {
        auto m = detail::block_diag(a.d(l), b.d(l));
        if (!m.entries.empty()) s.differential[l] = std::move(m);
    }
    return s;
}

template <class F>
MonomialPresheaf<F> direct_sum(const MonomialPresheaf<F>& a, const MonomialPresheaf<F>& b) {
    MonomialPresheaf<F> s(a.fan);
    for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] = direct_sum(a.values[i], b.values[i]);
    for (const auto& cv : Poset::of_fan(a.fan).covers()) {
        auto degs = detail::degrees_of(s.values[cv.from]);
        for (int l : degs) {
            auto m = detail::block_diag(a.structure_at(cv.from, cv.to, l), b.structure_at(cv.from, cv.to, l));
            if (!m.entries.empty()) s.structure[{cv.from, cv.to}][l] = std::move(m);
        }
    }
    return s;
}

/// C[k]: chain degrees move up by k, differentials pick up (-1)^k.
template <class F>
MonomialPresheaf<F> shift(const MonomialPresheaf<F>& c, int k) {
    const F sign = (k % 2 == 0) ? F(1) : F(-1);
    MonomialPresheaf<F> s(c.fan);
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        for (const auto& [l, rs] : c.values[i].summands) s.values[i].summands[l + k] = rs;
        for (const auto& [l, mm] : c.values[i].differential) {
            MonomialMatrix<F> m{mm.rows, mm.cols, {}};
            detail::paste(m, mm, 0, 0, sign);
            s.values[i].differential[l + k] = std::move(m);
        }
    }
    for (const auto& [key, g] : c.structure)
        for (const auto& [l, mm] : g) s.structure[key][l + k] = mm;
    return s;
}

namespace detail {

// Cone of a degree-preserving map of monomial complexes at one cone:
// Cone_l = D_l + C_{l-1}, d = [[dD, f], [0, -dC]].
template <class F, class Component>
MonomialComplex<F> cone_complex(const MonomialComplex<F>& c, const MonomialComplex<F>& d, Component&& f) {
    MonomialComplex<F> k;
    std::set<int> degs = degrees_of(d);
    for (int l : degrees_of(c)) degs.insert(l + 1);
    for (int l : degs) {
        auto rs = d.at(l);
        rs.insert(rs.end(), c.at(l - 1).begin(), c.at(l - 1).end());
        k.summands[l] = std::move(rs);
    }
    for (int l : degs) {
        MonomialMatrix<F> m{k.at(l - 1).size(), k.at(l).size(), {}};
        paste(m, d.d(l), 0, 0);
        paste(m, f(l - 1), 0, d.at(l).size());
        paste(m, c.d(l - 1), d.at(l - 1).size(), d.at(l).size(), F(-1));
        if (!m.entries.empty()) k.differential[l] = std::move(m);
    }
    return k;
}

} // namespace detail

template <class F>
MonomialPresheaf<F> mapping_cone(const PresheafMap<F>& f) {
    const auto& c = f.source;
    const auto& d = f.target;
    MonomialPresheaf<F> k(c.fan);
    for (std::size_t i = 0; i < k.values.size(); ++i)
        k.values[i] = detail::cone_complex(c.values[i], d.values[i], [&](int l) { return f.component_at(i, l); });
    for (const auto& cv : Poset::of_fan(c.fan).covers()) {
        for (const auto& [l, rs] : k.values[cv.from].summands) {
            MonomialMatrix<F> m{k.values[cv.to].at(l).size(), rs.size(), {}};
            detail::paste(m, d.structure_at(cv.from, cv.to, l), 0, 0);
            detail::paste(m, c.structure_at(cv.from, cv.to, l - 1), d.values[cv.to].at(l).size(),
                          d.values[cv.from].at(l).size());
            if (!m.entries.empty()) k.structure[{cv.from, cv.to}][l] = std::move(m);
        }
    }
    return k;
}

/// Inclusion D -> cone(f) and projection cone(f) -> C[1].
template <class F>
PresheafMap<F> cone_inclusion(const PresheafMap<F>& f, const MonomialPresheaf<F>& cone) {
    PresheafMap<F> g(f.target, cone);
    for (std::size_t i = 0; i < cone.values.size(); ++i)
        for (const auto& [l, rs] : f.target.values[i].summands) {
            MonomialMatrix<F> m{cone.values[i].at(l).size(), rs.size(), {}};
            for (std::size_t j = 0; j < rs.size(); ++j) m.add(j, j, F(1));
            if (!m.entries.empty()) g.components[i][l] = std::move(m);
        }
    return g;
}

template <class F>
PresheafMap<F> cone_projection(const PresheafMap<F>& f, const MonomialPresheaf<F>& cone) {
    auto target = shift(f.source, 1);
    PresheafMap<F> g(cone, target);
    for (std::size_t i = 0; i < cone.values.size(); ++i)
        for (const auto& [l, rs] : target.values[i].summands) {
            const std::size_t off = f.target.values[i].at(l).size();
            MonomialMatrix<F> m{rs.size(), cone.values[i].at(l).size(), {}};
            for (std::size_t j = 0; j < rs.size(); ++j) m.add(j, off + j, F(1));
            if (!m.entries.empty()) g.components[i][l] = std::move(m);
        }
    return g;
}

/// P(0 -> C): P_l = C_{l+1} + C_l with d(e, y) = (-de + y, dy); objectwise acyclic.
template <class F>
MonomialPresheaf<F> path_space(const MonomialPresheaf<F>& c) {
    MonomialPresheaf<F> p(c.fan);
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        const auto& v = c.values[i];
        std::set<int> degs;
        for (int l : detail::degrees_of(v)) {
            degs.insert(l);
            degs.insert(l - 1);
        }
        auto& out = p.values[i];
        for (int l : degs) {
            auto rs = v.at(l + 1);
            rs.insert(rs.end(), v.at(l).begin(), v.at(l).end());
            out.summands[l] = std::move(rs);
        }
        for (int l : degs) {
            MonomialMatrix<F> m{out.at(l - 1).size(), out.at(l).size(), {}};
            const std::size_t up = v.at(l + 1).size(), here = v.at(l).size();
            detail::paste(m, v.d(l + 1), 0, 0, F(-1));
            for (std::size_t j = 0; j < here; ++j) m.add(j, up + j, F(1));
            detail::paste(m, v.d(l), here, up);
            if (!m.entries.empty()) out.differential[l] = std::move(m);
        }
    }
    for (const auto& cv : Poset::of_fan(c.fan).covers())
        for (const auto& [l, rs] : p.values[cv.from].summands) {
            MonomialMatrix<F> m{p.values[cv.to].at(l).size(), rs.size(), {}};
            detail::paste(m, c.structure_at(cv.from, cv.to, l + 1), 0, 0);
            detail::paste(m, c.structure_at(cv.from, cv.to, l), c.values[cv.to].at(l + 1).size(),
                          c.values[cv.from].at(l + 1).size());
            if (!m.entries.empty()) p.structure[{cv.from, cv.to}][l] = std::move(m);
        }
    return p;
}

template <class F>
PresheafMap<F> identity_map(const MonomialPresheaf<F>& c) {
    PresheafMap<F> f(c, c);
    for (std::size_t i = 0; i < c.values.size(); ++i)
        for (const auto& [l, rs] : c.values[i].summands) {
            MonomialMatrix<F> m{rs.size(), rs.size(), {}};
            for (std::size_t j = 0; j < rs.size(); ++j) m.add(j, j, F(1));
            if (!m.entries.empty()) f.components[i][l] = std::move(m);
        }
    return f;
}

template <class F>
PresheafMap<F> zero_map(const MonomialPresheaf<F>& a, const MonomialPresheaf<F>& b) {
    return PresheafMap<F>(a, b);
}

/// Summand-wise identity entries between presheaves of the same shape, e.g.
/// O(k - rho) -> O(k).
template <class F>
PresheafMap<F> monomial_inclusion(const MonomialPresheaf<F>& a, const MonomialPresheaf<F>& b) {
    PresheafMap<F> f(a, b);
    for (std::size_t i = 0; i < a.values.size(); ++i)
        for (const auto& [l, rs] : a.values[i].summands) {
            if (rs.size() != b.values[i].at(l).size())
                fail(ErrorCode::NotMonomialInclusion, "summand counts differ at " + cone_name(a.fan.cones()[i]));
            MonomialMatrix<F> m{rs.size(), rs.size(), {}};
            for (std::size_t j = 0; j < rs.size(); ++j)
                if (!rs[j].is_empty()) m.add(j, j, F(1));
            if (!m.entries.empty()) f.components[i][l] = std::move(m);
        }
    return f;
}

template <class F>
PresheafMap<F> direct_sum(const PresheafMap<F>& f, const PresheafMap<F>& g) {
    PresheafMap<F> h(direct_sum(f.source, g.source), direct_sum(f.target, g.target));
    for (std::size_t i = 0; i < h.components.size(); ++i)
        for (const auto& [l, rs] : h.source.values[i].summands) {
            auto m = detail::block_diag(f.component_at(i, l), g.component_at(i, l));
            if (!m.entries.empty()) h.components[i][l] = std::move(m);
        }
    return h;
}

template <class F>
PresheafMap<F> shift(const PresheafMap<F>& f, int k) {
    PresheafMap<F> g(shift(f.source, k), shift(f.target, k));
    for (std::size_t i = 0; i < f.components.size(); ++i)
        for (const auto& [l, mm] : f.components[i]) g.components[i][l + k] = mm;
    return g;
}

/// g after f.
template <class F>
PresheafMap<F> compose(const PresheafMap<F>& g, const PresheafMap<F>& f) {
    PresheafMap<F> h(f.source, g.target);
    for (std::size_t i = 0; i < h.components.size(); ++i)
        for (const auto& [l, rs] : f.source.values[i].summands) {
            auto a = g.component_at(i, l), b = f.component_at(i, l);
            std::map<std::pair<std::size_t, std::size_t>, F> acc;
            for (const auto& x : a.entries)
                for (const auto& y : b.entries)
                    if (x.col == y.row) acc[{x.row, y.col}] += x.coeff * y.coeff;
            MonomialMatrix<F> m{a.rows, b.cols, {}};
            for (auto& [rc, v] : acc) m.add(rc.first, rc.second, v);
            if (!m.entries.empty()) h.components[i][l] = std::move(m);
        }
    return h;
}

// ------------------------------------------------------- divisor operations

namespace detail {

// Drops empty summands and reindexes the matrices that touch them.
template <class F>
void prune_empty(MonomialPresheaf<F>& p) {
    std::vector<std::map<int, std::vector<long>>> renumber(p.values.size());
    for (std::size_t i = 0; i < p.values.size(); ++i)
        for (auto& [l, rs] : p.values[i].summands) {
            std::vector<long> idx(rs.size(), -1);
            std::vector<Region> kept;
            for (std::size_t j = 0; j < rs.size(); ++j)
                if (!rs[j].is_empty()) {
                    idx[j] = long(kept.size());
                    kept.push_back(rs[j]);
                }
            rs = std::move(kept);
            renumber[i][l] = std::move(idx);
        }
    auto remap = [&](const MonomialMatrix<F>& mm, const std::vector<long>& rows, const std::vector<long>& cols,
                     std::size_t nr, std::size_t nc) {
        MonomialMatrix<F> out{nr, nc, {}};
        for (const auto& e : mm.entries) {
            long r = e.row < rows.size() ? rows[e.row] : -1;
            long c = e.col < cols.size() ? cols[e.col] : -1;
            if (r >= 0 && c >= 0) out.add(std::size_t(r), std::size_t(c), e.coeff);
        }
        return out;
    };
    static const std::vector<long> none;
    auto lookup = [&](std::size_t i, int l) -> const std::vector<long>& {
        auto it = renumber[i].find(l);
        return it == renumber[i].end() ? none : it->second;
    };
    for (std::size_t i = 0; i < p.values.size(); ++i) {
        auto& v = p.values[i];
        std::map<int, MonomialMatrix<F>> diff;
        for (const auto& [l, mm] : v.differential) {
            auto m = remap(mm, lookup(i, l - 1), lookup(i, l), v.at(l - 1).size(), v.at(l).size());
            if (!m.entries.empty()) diff[l] = std::move(m);
        }
        v.differential = std::move(diff);
        for (auto it = v.summands.begin(); it != v.summands.end();)
            it = it->second.empty() ? v.summands.erase(it) : std::next(it);
    }
    std::map<std::pair<std::size_t, std::size_t>, GradedMonomialMap<F>> st;
    for (const auto& [key, g] : p.structure)
        for (const auto& [l, mm] : g) {
            auto m = remap(mm, lookup(key.second, l), lookup(key.first, l), p.values[key.second].at(l).size(),
                           p.values[key.first].at(l).size());
            if (!m.entries.empty()) st[key][l] = std::move(m);
        }
    p.structure = std::move(st);
}

// Quotient of b by a when a sits inside b by a single relaxed ge-bound.
inline Region region_quotient(const Region& a, const Region& b) {
    if (a.is_empty()) return b;
    if (a == b) return Region::nothing();
    if (b.is_empty() || a.constraints().size() != b.constraints().size())
        fail(ErrorCode::NotMonomialInclusion, a.describe() + " inside " + b.describe());
    std::optional<Constraint> changed;
    for (std::size_t i = 0; i < a.constraints().size(); ++i) {
        const auto& x = a.constraints()[i];
        const auto& y = b.constraints()[i];
        if (x == y) continue;
        if (changed || x.ray != y.ray || x.rel != Relation::Ge || y.rel != Relation::Ge || x.bound != y.bound + 1)
            fail(ErrorCode::NotMonomialInclusion, a.describe() + " inside " + b.describe());
        changed = y;
    }
    std::vector<Constraint> cs = b.constraints();
    for (auto& c : cs)
        if (c.ray == changed->ray) c.rel = Relation::Eq;
    return Region(std::move(cs));
}

} // namespace detail

/// Cokernel of a summand-wise inclusion of region modules.
template <class F>
MonomialPresheaf<F> cofibre(const PresheafMap<F>& i) {
    i.check();
    MonomialPresheaf<F> q = i.target;
    for (std::size_t c = 0; c < q.values.size(); ++c) {
        const auto& src = i.source.values[c];
        auto degs = detail::degrees_of(src);
        for (int l : detail::degrees_of(q.values[c])) degs.insert(l);
        for (int l : degs) {
            const auto& a = src.at(l);
            const auto& b = i.target.values[c].at(l);
            if (a.size() != b.size())
                fail(ErrorCode::NotMonomialInclusion, "summand counts differ at " + cone_name(q.fan.cones()[c]));
            auto comp = i.component_at(c, l);
            std::vector<bool> hit(a.size(), false);
            for (const auto& e : comp.entries) {
                if (e.row != e.col || !(e.coeff == F(1)) || a[e.col].is_empty())
                    fail(ErrorCode::NotMonomialInclusion, "map is not a summand-wise identity inclusion");
                hit[e.col] = true;
            }
            for (std::size_t j = 0; j < a.size(); ++j)
                if (!a[j].is_empty() && !hit[j])
                    fail(ErrorCode::NotMonomialInclusion, "summand " + std::to_string(j) + " is not included");
            auto& rs = q.values[c].summands[l];
            for (std::size_t j = 0; j < a.size(); ++j) rs[j] = detail::region_quotient(a[j], b[j]);
        }
    }
    detail::prune_empty(q);
    return q;
}

/// zeta: from the quotient fan to the fan, zero off the star of rho.
template <class F>
MonomialPresheaf<F> extension_by_zero(const MonomialPresheaf<F>& c, const Fan& fan, std::size_t rho) {
    auto q = quotient_fan(fan, rho);
    if (!(q.fan == c.fan)) fail(ErrorCode::WrongQuotient, "presheaf does not live on the quotient fan");
    MonomialPresheaf<F> z(fan);
    auto parent_index = [&](const Cone& qc) { return *fan.index_of(q.preimage_of(qc)); };
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        const auto& qc = c.fan.cones()[i];
        z.values[parent_index(qc)] = map_regions(c.values[i], [&](const Region& r) {
            if (r.is_empty()) return r;
            std::vector<Constraint> cs{{rho, Relation::Eq, 0}};
            for (const auto& k : r.constraints()) cs.push_back({q.ray_origin[k.ray], k.rel, k.bound});
            return Region(std::move(cs));
        });
    }
    for (const auto& [key, g] : c.structure)
        z.structure[{parent_index(c.fan.cones()[key.first]), parent_index(c.fan.cones()[key.second])}] = g;
    return z;
}

/// epsilon: restrict to the divisor of rho, expressed over the quotient fan.
/// A summand at level <m, n_rho> = h is identified with M-bar through
/// m = h u + P^T m-bar, where u is the quotient's lift.
template <class F>
MonomialPresheaf<F> restriction(const MonomialPresheaf<F>& c, std::size_t rho) {
    auto q = quotient_fan(c.fan, rho);
    MonomialPresheaf<F> out(q.fan);
    std::vector<std::size_t> parent(q.fan.cones().size());
    for (std::size_t i = 0; i < q.fan.cones().size(); ++i) parent[i] = *c.fan.index_of(q.preimage_of(q.fan.cones()[i]));

    std::vector<std::map<int, std::vector<std::optional<Int>>>> levels(parent.size());
    for (std::size_t i = 0; i < parent.size(); ++i) {
        const auto& src = c.values[parent[i]];
        auto& dst = out.values[i];
        dst = src;
        for (auto& [l, rs] : dst.summands)
            for (auto& r : rs) {
                if (r.is_empty()) {
                    levels[i][l].push_back(std::nullopt);
                    continue;
                }
                auto e = restrict_region(r, rho);
                Int h = e.constraint_on(rho)->bound;
                levels[i][l].push_back(h);
                std::vector<Constraint> cs;
                for (const auto& k : e.constraints()) {
                    if (k.ray == rho) continue;
                    auto qr = q.quotient_ray(k.ray);
                    cs.push_back({*qr, k.rel, k.bound - h * dot(q.lift, c.fan.ray(k.ray))});
                }
                r = Region(std::move(cs));
            }
    }
    auto same_level = [&](std::size_t i, int l, std::size_t a, std::size_t j, int l2, std::size_t b) {
        const auto& x = levels[i][l][a];
        const auto& y = levels[j][l2][b];
        return x && y && *x == *y;
    };
    auto filter = [&](const MonomialMatrix<F>& mm, std::size_t ti, int tl, std::size_t si, int sl) {
        MonomialMatrix<F> m{mm.rows, mm.cols, {}};
        for (const auto& e : mm.entries)
            if (same_level(ti, tl, e.row, si, sl, e.col)) m.entries.push_back(e);
        return m;
    };
    for (std::size_t i = 0; i < parent.size(); ++i) {
        auto& v = out.values[i];
        std::map<int, MonomialMatrix<F>> diff;
        for (const auto& [l, mm] : v.differential) {
            auto m = filter(mm, i, l - 1, i, l);
            if (!m.entries.empty()) diff[l] = std::move(m);
        }
        v.differential = std::move(diff);
    }
    std::map<std::size_t, std::size_t> to_quotient;
    for (std::size_t i = 0; i < parent.size(); ++i) to_quotient[parent[i]] = i;
    for (const auto& [key, g] : c.structure) {
        if (!to_quotient.count(key.first) || !to_quotient.count(key.second)) continue;
        std::size_t a = to_quotient[key.first], b = to_quotient[key.second];
        for (const auto& [l, mm] : g) {
            auto m = filter(mm, b, l, a, l);
            if (!m.entries.empty()) out.structure[{a, b}][l] = std::move(m);
        }
    }
    return out;
}

} // namespace toric
