#include <gtest/gtest.h>

#include <random>

#include "fans.hpp"
#include "generators.hpp"

using namespace toric;
using Q = Rational;

namespace {

Constraint ge(std::size_t r, Int c) { return {r, Relation::Ge, c}; }
Constraint eq(std::size_t r, Int c) { return {r, Relation::Eq, c}; }

const Region& only_region(const MonomialPresheaf<Q>& p, const Cone& c) { return p.at(c).at(0).at(0); }

TwistVector random_twist(std::mt19937& rng, std::size_t n, int lo = -3, int hi = 3) {
    TwistVector k(n);
    for (auto& x : k) x = std::uniform_int_distribution<int>(lo, hi)(rng);
    return k;
}

TwistVector add(TwistVector a, const TwistVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

TwistVector neg(TwistVector a) {
    for (auto& x : a) x = -x;
    return a;
}

// Regions and structure entries agree cone by cone.
void expect_same_presheaf(const MonomialPresheaf<Q>& a, const MonomialPresheaf<Q>& b) {
    ASSERT_EQ(a.values.size(), b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        auto da = a.values[i].summands, db = b.values[i].summands;
        std::erase_if(da, [](const auto& kv) { return kv.second.empty(); });
        std::erase_if(db, [](const auto& kv) { return kv.second.empty(); });
        EXPECT_EQ(da, db) << "cone " << cone_name(a.fan.cones()[i]);
    }
}

void expect_code(ErrorCode code, const std::function<void()>& f) {
    try {
        f();
        ADD_FAILURE() << "expected " << to_string(code);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

} // namespace

TEST(LineBundle, P1Regions) {
    auto p1 = fans::p1();
    auto o = line_bundle<Q>(p1, {2, -1});
    o.check();
    // ray 0 is +1, ray 1 is -1
    EXPECT_EQ(only_region(o, {0}), Region({ge(0, -2)}));
    EXPECT_EQ(only_region(o, {1}), Region({ge(1, 1)}));
    EXPECT_EQ(only_region(o, {}), Region::everything());
    for (Int m = -5; m <= 5; ++m) {
        EXPECT_EQ(region_membership(p1, only_region(o, {0}), {m}), m >= -2);
        EXPECT_EQ(region_membership(p1, only_region(o, {1}), {m}), m <= -1);
    }
}

TEST(LineBundle, TrivialTwistGivesMonoids) {
    auto p2 = fans::p2();
    auto o = line_bundle<Q>(p2, {0, 0, 0});
    for (const auto& c : p2.cones()) {
        std::vector<Constraint> cs;
        for (auto r : c) cs.push_back(ge(r, 0));
        EXPECT_EQ(only_region(o, c), Region(cs));
    }
}

TEST(LineBundle, P2AllOnes) {
    auto p2 = fans::p2();
    auto o = line_bundle<Q>(p2, {1, 1, 1});
    EXPECT_EQ(only_region(o, {0, 1}), Region({ge(0, -1), ge(1, -1)}));
    EXPECT_EQ(only_region(o, {1, 2}), Region({ge(1, -1), ge(2, -1)}));
    EXPECT_EQ(only_region(o, {2}), Region({ge(2, -1)}));
}

TEST(LineBundle, Errors) {
    Fan bad = validate_fan({2, {{1, 0}, {1, 2}}, {{0, 1}}});
    expect_code(ErrorCode::NotRegular, [&] { line_bundle<Q>(bad, {0, 0}); });
    expect_code(ErrorCode::RankMismatch, [&] { line_bundle<Q>(fans::p1(), {0}); });
}

TEST(FreePresheaf, Examples) {
    auto p1 = fans::p1();
    auto f0 = free_presheaf(p1, {}, sphere_pattern<Q>(0));
    EXPECT_EQ(f0.at({}).at(0).size(), 1u);
    EXPECT_TRUE(f0.at({0}).is_zero());
    EXPECT_TRUE(f0.at({1}).is_zero());

    auto fp = free_presheaf(p1, {0}, sphere_pattern<Q>(0));
    EXPECT_EQ(only_region(fp, {0}), Region({ge(0, 0)}));
    EXPECT_EQ(only_region(fp, {}), Region::everything());
    EXPECT_TRUE(fp.at({1}).is_zero());

    auto a2 = fans::a2();
    auto fa = free_presheaf(a2, {0, 1}, sphere_pattern<Q>(0));
    for (const auto& c : a2.cones()) EXPECT_FALSE(fa.at(c).is_zero());
    expect_code(ErrorCode::NotFace, [&] { free_presheaf(p1, {0, 1}, sphere_pattern<Q>(0)); });
}

TEST(Twist, Laws) {
    std::mt19937 rng(2);
    for (const auto& fan : {fans::p1(), fans::p2(), fans::h1()}) {
        for (int t = 0; t < 10; ++t) {
            auto k = random_twist(rng, fan.num_rays());
            auto l = random_twist(rng, fan.num_rays());
            auto o = line_bundle<Q>(fan, k);
            expect_same_presheaf(twist(o, l), line_bundle<Q>(fan, add(k, l)));
            expect_same_presheaf(twist(o, TwistVector(fan.num_rays(), 0)), o);
            auto f = free_presheaf(fan, fan.maximal_cones()[0], sphere_pattern<Q>(1));
            expect_same_presheaf(twist(twist(f, k), neg(k)), f);
            expect_same_presheaf(twist(twist(f, k), l), twist(f, add(k, l)));
        }
    }
}

TEST(ExtensionByZero, BasisDisplay) {
    auto p2 = fans::p2();
    const std::size_t rho = 0;
    auto q = quotient_fan(p2, rho);
    const TwistVector l{2, -1};
    auto z = extension_by_zero(line_bundle<Q>(q.fan, l), p2, rho);
    z.check();
    for (std::size_t i = 0; i < p2.cones().size(); ++i) {
        const auto& s = p2.cones()[i];
        if (!std::binary_search(s.begin(), s.end(), rho)) {
            EXPECT_TRUE(z.values[i].is_zero());
            continue;
        }
        // m(n_rho) = 0 and m(n_tau) >= -l_tau-bar on the other rays
        std::vector<Constraint> cs{eq(rho, 0)};
        for (auto t : s)
            if (t != rho) cs.push_back(ge(t, -l[*q.quotient_ray(t)]));
        EXPECT_EQ(z.values[i].at(0).at(0), Region(cs));
    }
    EXPECT_TRUE(extension_by_zero(zero_presheaf<Q>(q.fan), p2, rho).is_zero());
    expect_code(ErrorCode::WrongQuotient,
                [&] { extension_by_zero(line_bundle<Q>(fans::p1xp1(), {0, 0, 0, 0}), p2, rho); });
}

TEST(Restriction, LineBundleCorrespondence) {
    auto p2 = fans::p2();
    auto r = restriction(line_bundle<Q>(p2, {0, 2, 3}), 0);
    expect_same_presheaf(r, line_bundle<Q>(quotient_fan(p2, 0).fan, {2, 3}));
    EXPECT_TRUE(restriction(zero_presheaf<Q>(p2), 0).is_zero());

    std::mt19937 rng(3);
    for (const auto& fan : {fans::p1(), fans::p2(), fans::p1xp1(), fans::h1(), fans::p3()}) {
        for (std::size_t rho = 0; rho < fan.num_rays(); ++rho) {
            auto q = quotient_fan(fan, rho);
            for (int t = 0; t < 5; ++t) {
                auto k = random_twist(rng, fan.num_rays());
                k[rho] = 0;
                TwistVector l(q.fan.num_rays());
                for (std::size_t i = 0; i < l.size(); ++i) l[i] = k[q.ray_origin[i]];
                expect_same_presheaf(restriction(line_bundle<Q>(fan, k), rho), line_bundle<Q>(q.fan, l));
            }
        }
    }
}

TEST(Restriction, NeedsRhoBound) {
    auto p1 = fans::p1();
    MonomialPresheaf<Q> c(p1);
    c.values[*p1.index_of({0})].summands[0] = {Region::everything()};
    expect_code(ErrorCode::NoRhoConstraint, [&] { restriction(c, 0); });
}

TEST(Cofibre, Examples) {
    auto p1 = fans::p1();
    auto o = line_bundle<Q>(p1, {0, 0});
    EXPECT_TRUE(cofibre(identity_map(o)).is_zero());
    auto c = cofibre(monomial_inclusion(line_bundle<Q>(p1, {-1, 0}), o));
    EXPECT_EQ(c.at({0}).at(0), std::vector<Region>{Region({eq(0, 0)})});
    EXPECT_TRUE(c.at({}).is_zero());
    EXPECT_TRUE(c.at({1}).is_zero());
}

TEST(Cofibre, RejectsNonInclusions) {
    auto p1 = fans::p1();
    auto o = line_bundle<Q>(p1, {0, 0});
    // a gap of two levels is not a single region
    expect_code(ErrorCode::NotMonomialInclusion,
                [&] { cofibre(monomial_inclusion(line_bundle<Q>(p1, {-2, 0}), o)); });
    expect_code(ErrorCode::NotMonomialInclusion, [&] { cofibre(zero_map(o, o)); });
}

TEST(Cofibre, EqualsExtensionOfRestriction) {
    std::mt19937 rng(7);
    for (const auto& fan : {fans::p1(), fans::p2()}) {
        for (std::size_t rho = 0; rho < fan.num_rays(); ++rho)
            for (int t = 0; t < 10; ++t) {
                auto k = random_twist(rng, fan.num_rays());
                k[rho] = 0;
                auto km = k;
                km[rho] = -1;
                auto o = line_bundle<Q>(fan, k);
                auto lhs = cofibre(monomial_inclusion(line_bundle<Q>(fan, km), o));
                auto rhs = extension_by_zero(restriction(o, rho), fan, rho);
                expect_same_presheaf(lhs, rhs);
            }
    }
}

TEST(Evaluate, Examples) {
    auto p1 = fans::p1();
    auto d = evaluate_presheaf_degree(line_bundle<Q>(p1, {0, 0}), {0});
    for (const auto& v : d.values()) EXPECT_EQ(v.dims(), (std::map<int, std::size_t>{{0, 1}}));
    for (const auto& cv : d.poset().covers()) EXPECT_TRUE(maps_equal(d.structure(cv.from, cv.to), identity_map(d.value(cv.to))));

    auto e = evaluate_presheaf_degree(line_bundle<Q>(p1, {-1, -1}), {0});
    EXPECT_EQ(e.value(*e.poset().index_of({})).dim(0), 1u);
    EXPECT_TRUE(e.value(*e.poset().index_of({0})).is_zero());
    EXPECT_TRUE(e.value(*e.poset().index_of({1})).is_zero());

    auto f0 = free_presheaf(p1, {}, sphere_pattern<Q>(0));
    for (Int m = -3; m <= 3; ++m) {
        auto g = evaluate_presheaf_degree(f0, {m});
        EXPECT_EQ(g.value(*g.poset().index_of({})).dim(0), 1u);
        EXPECT_TRUE(g.value(*g.poset().index_of({0})).is_zero());
        EXPECT_TRUE(g.value(*g.poset().index_of({1})).is_zero());
    }
}

TEST(Evaluate, BrokenFunctorialityIsDetected) {
    auto a2 = fans::a2();
    auto o = line_bundle<Q>(a2, {0, 0});
    auto top = *a2.index_of({0, 1}), e0 = *a2.index_of({0});
    MonomialMatrix<Q> two{1, 1, {}};
    two.add(0, 0, Q(2));
    o.structure[{top, e0}][0] = two;
    expect_code(ErrorCode::InconsistentDiagram, [&] { evaluate_presheaf_degree(o, {0, 0}); });
}

TEST(Constructions, ConeAndPathAreValid) {
    auto p1 = fans::p1();
    auto a = line_bundle<Q>(p1, {-1, 0});
    auto b = line_bundle<Q>(p1, {0, 0});
    auto i = monomial_inclusion(a, b);
    auto k = mapping_cone(i);
    auto p = path_space(b);
    for (Int m = -3; m <= 3; ++m) {
        auto dk = evaluate_presheaf_degree(k, {m});
        auto dp = evaluate_presheaf_degree(p, {m});
        for (std::size_t s = 0; s < dp.poset().size(); ++s) EXPECT_TRUE(is_acyclic(dp.value(s)));
        // the cone of an inclusion has the homology of the cofibre
        auto q = evaluate_presheaf_degree(cofibre(i), {m});
        for (std::size_t s = 0; s < dk.poset().size(); ++s)
            EXPECT_EQ(homology_dims(dk.value(s)), homology_dims(q.value(s)));
        auto inc = evaluate_map_pairing(cone_inclusion(i, k), pairings(p1, {m}));
        auto pro = evaluate_map_pairing(cone_projection(i, k), pairings(p1, {m}));
        for (std::size_t s = 0; s < inc.size(); ++s) {
            inc[s].validate();
            pro[s].validate();
            EXPECT_TRUE(maps_equal(compose(pro[s], inc[s]), zero_map(inc[s].source(), pro[s].target())));
        }
    }
}
