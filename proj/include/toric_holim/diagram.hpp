#pragma once

#include <map>
#include <utility>
#include <vector>

#include "toric_holim/complexes.hpp"
#include "toric_holim/lattice_fan.hpp"

namespace toric {

/// A face poset of simplicial cones, listed in ascending (dimension, lex)
/// order. Diagrams over it are contravariant: each covering pair has a map
/// from the bigger cone to the smaller one.
class Poset {
public:
    struct Cover {
        std::size_t from;  // bigger cone
        std::size_t to;    // facet of `from`
    };

    Poset() = default;
    explicit Poset(std::vector<Cone> cones) : cones_(std::move(cones)) {
        std::sort(cones_.begin(), cones_.end(), cone_less);
        for (std::size_t i = 0; i < cones_.size(); ++i) index_[cones_[i]] = i;
        for (std::size_t a = 0; a < cones_.size(); ++a)
            for (std::size_t b = 0; b < cones_.size(); ++b)
                if (cones_[b].size() + 1 == cones_[a].size() && is_subset(cones_[b], cones_[a]))
                    covers_.push_back({a, b});
    }

    static Poset of_fan(const Fan& fan) { return Poset(fan.cones()); }

    std::size_t size() const { return cones_.size(); }
    const Cone& cone(std::size_t i) const { return cones_.at(i); }
    const std::vector<Cone>& cones() const& { return cones_; }
    const std::vector<Cover>& covers() const& { return covers_; }
    // by value on temporaries, so `for (auto& c : Poset::of_fan(f).covers())` is safe
    std::vector<Cone> cones() && { return std::move(cones_); }
    std::vector<Cover> covers() && { return std::move(covers_); }

    std::optional<std::size_t> index_of(const Cone& c) const {
        auto it = index_.find(c);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    /// a <= b as cones (a is a face of b).
    bool leq(std::size_t a, std::size_t b) const { return is_subset(cones_[a], cones_[b]); }

    /// Elements strictly below `i`.
    std::vector<std::size_t> proper_faces(std::size_t i) const {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < cones_.size(); ++j)
            if (j != i && leq(j, i)) out.push_back(j);
        return out;
    }

    /// Sub-poset on the given element indices, with its own indexing.
    Poset restrict_to(const std::vector<std::size_t>& elems) const {
        std::vector<Cone> cs;
        for (auto e : elems) cs.push_back(cones_[e]);
        return Poset(std::move(cs));
    }

private:
    std::vector<Cone> cones_;
    std::map<Cone, std::size_t> index_;
    std::vector<Cover> covers_;
};

template <class F>
class DiagramComplex {
public:
    DiagramComplex() = default;
    explicit DiagramComplex(Poset poset) : poset_(std::move(poset)), values_(poset_.size()) {}

    const Poset& poset() const { return poset_; }
    const FiniteChainComplex<F>& value(std::size_t i) const { return values_.at(i); }
    const std::vector<FiniteChainComplex<F>>& values() const { return values_; }

    void set_value(std::size_t i, FiniteChainComplex<F> c) { values_.at(i) = std::move(c); }

    /// Structure map along a covering pair; the zero map when unset.
    ChainMap<F> structure(std::size_t from, std::size_t to) const {
        auto it = maps_.find({from, to});
        if (it != maps_.end()) return it->second;
        return zero_map(values_[from], values_[to]);
    }

    void set_structure(std::size_t from, std::size_t to, ChainMap<F> f) { maps_[{from, to}] = std::move(f); }

    /// Composite structure map for from >= to, along any covering path.
    ChainMap<F> map_between(std::size_t from, std::size_t to) const {
        if (from == to) return identity_map(values_[from]);
        for (const auto& cv : poset_.covers())
            if (cv.from == from && poset_.leq(to, cv.to)) return compose(map_between(cv.to, to), structure(from, cv.to));
        fail(ErrorCode::InconsistentDiagram, "no path between poset elements");
    }

    /// Structure maps are chain maps and squares over covering 2-chains commute.
    void validate() const {
        for (const auto& v : values_) v.validate();
        for (const auto& cv : poset_.covers()) {
            auto f = structure(cv.from, cv.to);
            try {
                f.validate();
            } catch (const Error& e) {
                fail(ErrorCode::InconsistentDiagram, std::string("structure map is not a chain map: ") + e.what());
            }
        }
        const std::size_t n = poset_.size();
        for (std::size_t top = 0; top < n; ++top)
            for (std::size_t bottom = 0; bottom < n; ++bottom) {
                if (poset_.cone(bottom).size() + 2 != poset_.cone(top).size() || !poset_.leq(bottom, top)) continue;
                std::optional<ChainMap<F>> first;
                for (const auto& cv : poset_.covers()) {
                    if (cv.from != top || !poset_.leq(bottom, cv.to)) continue;
                    auto path = compose(structure(cv.to, bottom), structure(top, cv.to));
                    if (!first)
                        first = std::move(path);
                    else if (!maps_equal(*first, path))
                        fail(ErrorCode::InconsistentDiagram,
                             "square at " + cone_name(poset_.cone(top)) + " does not commute");
                }
            }
    }

private:
    Poset poset_;
    std::vector<FiniteChainComplex<F>> values_;
    std::map<std::pair<std::size_t, std::size_t>, ChainMap<F>> maps_;
};

template <class F>
struct LimitResult {
    FiniteChainComplex<F> complex;
    std::vector<ChainMap<F>> projections;  // one per poset element
    std::map<int, std::vector<std::size_t>> free;     // limit coordinates inside the product
    std::map<int, std::vector<std::size_t>> offsets;  // block offsets of each element in the product

    /// Coordinates of a compatible family given as a stacked product vector
    /// (one column per vector).
    Matrix<F> coordinates(int n, const Matrix<F>& stacked) const {
        auto it = free.find(n);
        if (it == free.end()) return Matrix<F>(0, stacked.cols());
        return stacked.select_rows(it->second);
    }
};

/// Limit as the subcomplex of the product cut out by x_to = f(x_from) over
/// covering pairs.
template <class F>
LimitResult<F> finite_limit(const DiagramComplex<F>& d) {
    const auto& poset = d.poset();
    const std::size_t count = poset.size();
    std::set<int> degs;
    for (const auto& v : d.values())
        for (int n : v.support()) degs.insert(n);

    std::map<int, KernelBasis<F>> kernels;
    std::map<int, std::vector<std::size_t>> offsets;
    for (int n : degs) {
        std::vector<std::size_t> off(count + 1, 0);
        for (std::size_t i = 0; i < count; ++i) off[i + 1] = off[i] + d.value(i).dim(n);
        std::size_t rows = 0;
        for (const auto& cv : poset.covers()) rows += d.value(cv.to).dim(n);
        Matrix<F> eq(rows, off[count]);
        std::size_t r = 0;
        for (const auto& cv : poset.covers()) {
            const std::size_t h = d.value(cv.to).dim(n);
            if (h == 0) continue;
            eq.set_block(r, off[cv.from], -d.structure(cv.from, cv.to).component(n));
            eq.set_block(r, off[cv.to], Matrix<F>::identity(h));
            r += h;
        }
        kernels[n] = kernel(eq);
        offsets[n] = std::move(off);
    }

    LimitResult<F> out;
    for (int n : degs) out.complex.set_dim(n, kernels[n].basis.cols());
    auto product_boundary = [&](int n) {
        const auto& off = offsets[n];
        const auto& below = offsets[n - 1];
        Matrix<F> b(below[count], off[count]);
        for (std::size_t i = 0; i < count; ++i) b.set_block(below[i], off[i], d.value(i).boundary(n));
        return b;
    };
    for (int n : degs) {
        if (!degs.count(n - 1) || out.complex.dim(n) == 0 || out.complex.dim(n - 1) == 0) continue;
        // kernel coordinates are the entries at the free positions
        auto image = product_boundary(n) * kernels[n].basis;
        out.complex.set_boundary(n, image.select_rows(kernels[n - 1].free));
    }
    for (std::size_t i = 0; i < count; ++i) {
        ChainMap<F> p(out.complex, d.value(i));
        for (int n : degs) {
            const auto& off = offsets[n];
            p.set_component(n, kernels[n].basis.block(off[i], 0, off[i + 1] - off[i], kernels[n].basis.cols()));
        }
        out.projections.push_back(std::move(p));
    }
    for (int n : degs) out.free[n] = kernels[n].free;
    out.offsets = std::move(offsets);
    return out;
}

} // namespace toric
