#include <gtest/gtest.h>

#include "generators.hpp"

using namespace toric;
using Q = Rational;

namespace {

FiniteChainComplex<Q> sphere(int n) {
    FiniteChainComplex<Q> c;
    c.set_dim(n, 1);
    return c;
}

FiniteChainComplex<Q> disc(int n, Q scale = 1) {
    FiniteChainComplex<Q> c;
    c.set_dim(n, 1);
    c.set_dim(n - 1, 1);
    Matrix<Q> b(1, 1);
    b(0, 0) = scale;
    c.set_boundary(n, b);
    return c;
}

Matrix<Q> mat(std::size_t r, std::size_t c, std::initializer_list<int> xs) {
    Matrix<Q> m(r, c);
    auto it = xs.begin();
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = *it++;
    return m;
}

// Rank by plain Gauss-Jordan with a textbook pivot search.
std::size_t naive_rank(Matrix<Q> m) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            Q t = m(i, c) / m(r, c);
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= t * m(r, j);
        }
        ++r;
    }
    return r;
}

std::map<int, std::size_t> naive_homology(const FiniteChainComplex<Q>& c) {
    std::map<int, std::size_t> h;
    for (auto [n, d] : c.dims()) {
        std::size_t v = d - naive_rank(c.boundary(n)) - naive_rank(c.boundary(n + 1));
        if (v) h[n] = v;
    }
    return h;
}

bool surjective(const Matrix<Q>& m) { return rank(m) == m.rows(); }

} // namespace

TEST(Homology, Examples) {
    EXPECT_TRUE(homology_dims(disc(1, 2)).empty());
    FiniteChainComplex<Q> z;
    z.set_dim(0, 2);
    z.set_dim(3, 1);
    EXPECT_EQ(homology_dims(z), (std::map<int, std::size_t>{{0, 2}, {3, 1}}));
    FiniteChainComplex<Q> c;
    c.set_dim(1, 2);
    c.set_dim(0, 1);
    c.set_boundary(1, mat(1, 2, {1, 1}));
    EXPECT_EQ(homology_dims(c), (std::map<int, std::size_t>{{1, 1}}));
}

TEST(Homology, RejectsBadShapesAndSquares) {
    FiniteChainComplex<Q> c;
    c.set_dim(1, 1);
    c.set_dim(0, 1);
    EXPECT_THROW(c.set_boundary(1, Matrix<Q>(2, 1)), Error);
    FiniteChainComplex<Q> d;
    d.set_dim(2, 1);
    d.set_dim(1, 1);
    d.set_dim(0, 1);
    d.set_boundary(2, mat(1, 1, {1}));
    d.set_boundary(1, mat(1, 1, {1}));
    try {
        d.validate();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BrokenDifferential);
    }
}

TEST(Homology, AgreesWithNaiveOracleAndEuler) {
    std::mt19937 rng(11);
    for (int t = 0; t < 60; ++t) {
        auto c = gen::random_complex(rng, 40, -2, 3);
        c.validate();
        auto h = homology_dims(c);
        EXPECT_EQ(h, naive_homology(c));
        long chi_c = 0, chi_h = 0;
        for (auto [n, d] : c.dims()) chi_c += (n % 2 == 0 ? 1 : -1) * long(d);
        for (auto [n, d] : h) chi_h += (n % 2 == 0 ? 1 : -1) * long(d);
        EXPECT_EQ(chi_c, chi_h);
    }
}

TEST(QuasiIso, Examples) {
    EXPECT_TRUE(is_quasi_iso(identity_map(disc(2))));
    EXPECT_TRUE(is_quasi_iso(identity_map(sphere(0))));
    EXPECT_TRUE(is_quasi_iso(zero_map(FiniteChainComplex<Q>{}, disc(1))));
    EXPECT_FALSE(is_quasi_iso(zero_map(sphere(0), sphere(0))));
    auto k = mapping_cone(zero_map(sphere(0), sphere(0)));
    EXPECT_EQ(homology_dims(k), (std::map<int, std::size_t>{{0, 1}, {1, 1}}));
}

TEST(QuasiIso, RejectsNonChainMap) {
    // S_1 -> D_1 hitting the top cell does not commute with d
    ChainMap<Q> f(sphere(1), disc(1));
    f.set_component(1, mat(1, 1, {1}));
    try {
        is_quasi_iso(f);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotAChainMap);
    }
}

TEST(PathFactorisation, IdentityOnSphere) {
    auto pf = path_factorisation(identity_map(sphere(0)));
    EXPECT_EQ(pf.path.dim(0), 2u);
    EXPECT_EQ(pf.path.dim(-1), 1u);
    EXPECT_EQ(pf.path.dim(1), 0u);
    pf.path.validate();
    EXPECT_TRUE(maps_equal(compose(pf.p, pf.i), identity_map(sphere(0))));
    EXPECT_TRUE(is_quasi_iso(pf.i));
}

TEST(PathFactorisation, FromZeroIsAcyclicPathObject) {
    std::mt19937 rng(3);
    auto d = gen::random_complex(rng, 8);
    auto pf = path_factorisation(zero_map(FiniteChainComplex<Q>{}, d));
    EXPECT_TRUE(is_acyclic(pf.path));
    EXPECT_TRUE(is_quasi_iso(pf.i));
}

TEST(PathFactorisation, ZeroMapOnSphere) {
    auto f = zero_map(sphere(0), sphere(0));
    auto pf = path_factorisation(f);
    EXPECT_TRUE(maps_equal(compose(pf.p, pf.i), f));
    EXPECT_EQ(homology_dims(pf.path), homology_dims(sphere(0)));
}

TEST(PathFactorisation, FuzzedContract) {
    std::mt19937 rng(5);
    for (int t = 0; t < 200; ++t) {
        auto c = gen::random_complex(rng, 5);
        auto d = gen::random_complex(rng, 5);
        auto f = gen::random_chain_map(rng, c, d);
        f.validate();
        auto pf = path_factorisation(f);
        pf.path.validate();
        pf.i.validate();
        pf.p.validate();
        EXPECT_TRUE(maps_equal(compose(pf.p, pf.i), f));
        for (int n : pf.p.support()) EXPECT_TRUE(surjective(pf.p.component(n)));
        EXPECT_TRUE(is_quasi_iso(pf.i));
    }
}

TEST(FiniteLimit, OnePointIsTheValue) {
    std::mt19937 rng(9);
    auto c = gen::random_complex(rng, 6);
    DiagramComplex<Q> d(Poset({Cone{}}));
    d.set_value(0, c);
    auto lim = finite_limit(d);
    EXPECT_EQ(homology_dims(lim.complex), homology_dims(c));
    EXPECT_TRUE(is_quasi_iso(lim.projections[0]));
}

TEST(FiniteLimit, ConstantDiagramOverFan) {
    std::mt19937 rng(10);
    auto c = gen::random_complex(rng, 6);
    Fan fan = validate_fan({2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}, {0, 2}}});
    DiagramComplex<Q> d(Poset::of_fan(fan));
    for (std::size_t i = 0; i < d.poset().size(); ++i) d.set_value(i, c);
    for (const auto& cv : d.poset().covers()) d.set_structure(cv.from, cv.to, identity_map(c));
    d.validate();
    auto lim = finite_limit(d);
    // the trivial cone is initial in the indexing category of the limit
    auto origin = *d.poset().index_of(Cone{});
    EXPECT_TRUE(is_quasi_iso(lim.projections[origin]));
    EXPECT_EQ(lim.complex.dims(), c.dims());
}

TEST(FiniteLimit, UniqueMinimalElementFuzz) {
    std::mt19937 rng(12);
    Fan fan = validate_fan({2, {{1, 0}, {0, 1}}, {{0, 1}}});
    auto poset = Poset::of_fan(fan);
    for (int t = 0; t < 20; ++t) {
        auto d = gen::random_module_diagram(rng, poset);
        d.validate();
        auto lim = finite_limit(d);
        // the maximal cone is the top, its value is the limit of the contravariant diagram
        auto top = *poset.index_of(Cone{0, 1});
        EXPECT_EQ(lim.complex.dim(0), d.value(top).dim(0));
        auto p = lim.projections[top].component(0);
        EXPECT_EQ(rank(p), d.value(top).dim(0));
    }
}

TEST(FiniteLimit, P1PatternHasZeroLimit) {
    Fan fan = validate_fan({1, {{1}, {-1}}, {{0}, {1}}});
    DiagramComplex<Q> d(Poset::of_fan(fan));
    d.set_value(*d.poset().index_of(Cone{}), sphere(0));
    auto lim = finite_limit(d);
    EXPECT_TRUE(lim.complex.is_zero());
}

TEST(FiniteLimit, InconsistentSquareIsRejected) {
    Fan fan = validate_fan({2, {{1, 0}, {0, 1}}, {{0, 1}}});
    DiagramComplex<Q> d(Poset::of_fan(fan));
    for (std::size_t i = 0; i < d.poset().size(); ++i) d.set_value(i, sphere(0));
    for (const auto& cv : d.poset().covers()) d.set_structure(cv.from, cv.to, identity_map(sphere(0)));
    auto top = *d.poset().index_of(Cone{0, 1});
    auto e0 = *d.poset().index_of(Cone{0});
    ChainMap<Q> two(sphere(0), sphere(0));
    two.set_component(0, mat(1, 1, {2}));
    d.set_structure(top, e0, two);
    try {
        d.validate();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InconsistentDiagram);
    }
}
