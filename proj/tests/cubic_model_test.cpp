#include "doctest.h"
#include "fanolab/instances.hpp"
#include "fanolab/poly_io.hpp"

using namespace fanolab;

namespace {

const VarNames& p5() {
    static VarNames n = VarNames::p5();
    return n;
}

PolyQ pp(const std::string& s) { return parse_poly(s, p5()); }

}  // namespace

TEST_CASE("cover assembly and validation") {
    CubicThreefold c(pp("x2^2"), pp("x1^3"));
    auto y = build_cyclic_cover(c);
    CHECK(y.F == pp("x0*x2^2 + x1^3 + x5^3"));

    // malformed inputs are rejected
    CHECK_THROWS_AS(CubicThreefold(pp("x2^3"), pp("x1^3")), std::domain_error);
    CHECK_THROWS_AS(CubicThreefold(pp("x2^2"), pp("x1^2")), std::domain_error);
    CHECK_THROWS_AS(CubicThreefold(pp("x0*x2"), pp("x1^3")), std::domain_error);
    CHECK_THROWS_AS(CubicThreefold(pp("x1*x2"), pp("x1^3")), std::domain_error);
    CHECK_THROWS_AS(CubicThreefold(pp("x2^2"), pp("x5^3")), std::domain_error);
    CHECK_THROWS_AS(CubicThreefold(pp("0"), pp("x1^3")), std::domain_error);
}

TEST_CASE("eq-2 decomposition against hand-computed pieces") {
    // c3 = 0 instance: the decomposition lives on the original frame
    CubicThreefold c(pp("x2*x4 - x3^2"), pp("x1^2*x3 + x1*x2^2 + x2*x3*x4"));
    auto y = build_cyclic_cover(c);
    REQUIRE(y.dec.has_value());
    CHECK(y.recenter_t == 0);
    CHECK(y.dec->q1 == pp("x2*x4 - x3^2"));
    CHECK(y.dec->h1.is_zero_poly());
    CHECK(y.dec->h2 == pp("x3"));
    CHECK(y.dec->q2 == pp("x2^2"));
    CHECK(y.dec->k2 == pp("x2*x3*x4 + x5^3"));
    // reconstruction identity
    CHECK(y.dec->F ==
          pp("x0*(x2*x4 - x3^2) + x1^2*x3 + x1*x2^2 + x2*x3*x4 + x5^3"));
}

TEST_CASE("eq-2 decomposition recenters when c3 is a nonzero cube") {
    CubicThreefold c(pp("x2*x4 - x3^2"), pp("x1^3 + x1^2*x3"));
    auto y = build_cyclic_cover(c);
    REQUIRE(y.dec.has_value());
    CHECK(y.recenter_t == -1);  // t^3 = -c3 = -1
    // recentered equation still reconstructs from the pieces and has no x1^3
    CHECK(y.F_eq2.coeff(Monomial::var(kP5, 1, 3)) == 0);
    CHECK(y.F_eq2 == y.F.substitute(kP5, {{5, pp("x5 - x1")}}));

    // non-cube coefficient: no rational Eq-2 frame, accessor reports it
    CubicThreefold c2(pp("x2*x4 - x3^2"), pp("2*x1^3 + x1^2*x3"));
    auto y2 = build_cyclic_cover(c2);
    CHECK_FALSE(y2.dec.has_value());
    CHECK_THROWS_AS(y2.eq2(), StructureError);
}

TEST_CASE("rank of the branch quadric") {
    auto mk = [&](const std::string& f2) {
        return build_cyclic_cover(CubicThreefold(pp(f2), pp("x1^2*x2")));
    };
    CHECK(rank_f2(mk("x2*x4 - x3^2")) == 3);
    CHECK(rank_f2(mk("x2^2")) == 1);
    CubicThreefold degenerate(pp("x2^2"), pp("x1^3"));
    CHECK(rank_f2(build_cyclic_cover(degenerate)) == 1);
}

TEST_CASE("sigma singular points per branch type") {
    auto run = [&](int i, uint64_t seed) {
        auto inst = sample_generic_instance(i, seed);
        auto y = build_cyclic_cover(inst.cubic);
        auto pts = sigma_singular_points(y);
        std::vector<std::string> names;
        for (auto& p : pts) {
            REQUIRE(p.type.has_value());
            names.push_back(p.type->name());
        }
        return names;
    };
    CHECK(run(2, 3) == std::vector<std::string>{"A1", "A1", "A1"});
    CHECK(run(3, 3) == std::vector<std::string>{"A5"});
    CHECK(run(4, 3) == std::vector<std::string>{"E7"});
}

TEST_CASE("sigma points over the cyclotomic field satisfy the equations") {
    auto inst = sample_generic_instance(2, 5);
    auto y = build_cyclic_cover(inst.cubic);
    auto pts = sigma_singular_points(y);
    REQUIRE(pts.size() == 3);
    PolyZ3 q = lift_to_zeta3(y.Q), k = lift_to_zeta3(y.K);
    int nonrational = 0;
    for (auto& p : pts) {
        std::vector<Zeta3> v(p.point.begin(), p.point.end());
        CHECK(is_zero(q.evaluate(v)));
        CHECK(is_zero(k.evaluate(v)));
        if (!p.rational) ++nonrational;
    }
    CHECK(nonrational == 2);
}

TEST_CASE("unresolved sigma points carry their minimal polynomial") {
    // x1^3 coefficient 2: the roots of u^3 + 2 are not rational
    CubicThreefold c(pp("x2*x4 - x3^2"), pp("2*x1^3 + x1^2*x3 + x3^2*x4"));
    auto y = build_cyclic_cover(c);
    auto pts = sigma_singular_points(y);
    REQUIRE(pts.size() == 3);
    for (auto& p : pts) {
        CHECK_FALSE(p.type.has_value());
        CHECK(p.minimal_polynomial == "u^3 + (2)");
    }
}

TEST_CASE("sigma points need a rank-3 quadric") {
    CubicThreefold c(pp("x2^2"), pp("x1^3"));
    auto y = build_cyclic_cover(c);
    CHECK_THROWS_AS(sigma_singular_points(y), std::domain_error);
}

TEST_CASE("sampling is reproducible and certified") {
    for (int i = 2; i <= 4; ++i) {
        auto a = sample_generic_instance(i, 7);
        auto b = sample_generic_instance(i, 7);
        CHECK(a.cubic.f2 == b.cubic.f2);
        CHECK(a.cubic.f3 == b.cubic.f3);
        CHECK(a.claimed_type == "A" + std::to_string(i));

        auto c = sample_generic_instance(i, 8);
        bool same = a.cubic.f2 == c.cubic.f2 && a.cubic.f3 == c.cubic.f3;
        CHECK_FALSE(same);

        // certified type with height-bounded coefficients
        auto t = classify(Germ<Rat>(a.cubic.germ_at_p()));
        CHECK(t == SingularityType::A(i));
        for (auto& [m, cc] : a.cubic.f3.terms()) CHECK(height(cc) <= 20);
    }
    CHECK_THROWS_AS(sample_generic_instance(5, 1), std::domain_error);
}

TEST_CASE("wall consistency between the cover germ and sigma") {
    for (int i = 2; i <= 4; ++i) {
        auto inst = sample_generic_instance(i, 11);
        auto y = build_cyclic_cover(inst.cubic);
        auto cover_type = classify_cover_germ(y);
        auto expected = wall_table(cover_type);
        auto pts = sigma_singular_points(y);
        REQUIRE(pts.size() == expected.size());
        for (size_t k = 0; k < pts.size(); ++k) {
            REQUIRE(pts[k].type.has_value());
            CHECK(*pts[k].type == expected[k]);
        }
    }
}

TEST_CASE("isolation evidence") {
    // a certified instance: critical at p, rank 3, finite milnor, clean scans
    auto inst = sample_generic_instance(3, 2);
    auto y = build_cyclic_cover(inst.cubic);
    auto rep = verify_isolated_singularity(y.F, {101, 103});
    CHECK(rep.critical);
    CHECK(rep.hessian_rank == 3);
    CHECK(rep.milnor_finite);
    CHECK(rep.milnor == 6);  // the cover germ of an A3 branch is E6
    REQUIRE(rep.fq_scan_done);
    for (auto& [q, n] : rep.fq_other_singular) CHECK(n == 0);
    CHECK(rep.isolated_evidence);

    // cone-like equation: singular along a plane, evidence must fail
    PolyQ cone = pp("x0*x2^2 + x1^3 + x5^3");
    auto rep2 = verify_isolated_singularity(cone, {101});
    CHECK(rep2.critical);
    CHECK_FALSE(rep2.milnor_finite);
    REQUIRE(rep2.fq_scan_done);
    CHECK(rep2.fq_other_singular[0].second > 0);
    CHECK_FALSE(rep2.isolated_evidence);

    // smooth at p: not even critical
    auto rep3 = verify_isolated_singularity(pp("x0^2*x1 + x2^3 + x5^3"), {101});
    CHECK(rep3.on_hypersurface);
    CHECK_FALSE(rep3.critical);
}
