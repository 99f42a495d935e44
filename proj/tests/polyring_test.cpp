#include <random>

#include "doctest.h"
#include "fanolab/poly.hpp"
#include "fanolab/poly_io.hpp"

using namespace fanolab;

namespace {

const VarNames kXY({"x", "y"});
const VarNames kXYZ({"x", "y", "z"});

PolyQ p2(const std::string& s) { return parse_poly(s, kXY); }
PolyQ p3(const std::string& s) { return parse_poly(s, kXYZ); }

PolyQ random_poly(std::mt19937_64& rng, int nvars, int maxdeg, int terms) {
    PolyQ p(nvars);
    for (int t = 0; t < terms; ++t) {
        Monomial m(nvars);
        int budget = static_cast<int>(rng() % (maxdeg + 1));
        for (int v = 0; v < nvars && budget > 0; ++v) {
            int e = static_cast<int>(rng() % (budget + 1));
            m.set(v, e);
            budget -= e;
        }
        long num = static_cast<long>(rng() % 19) - 9;
        long den = 1 + static_cast<long>(rng() % 4);
        p.add_term(m, rat(num, den));
    }
    return p;
}

}  // namespace

TEST_CASE("arithmetic examples") {
    CHECK(p2("(x+y)*(x-y)") == p2("x^2-y^2"));
    PolyQ p = p2("3*x^2*y - 1/2*y");
    CHECK(p + PolyQ::zero(2) == p);

    // over F_5: (2x)(3x) = x^2
    PolyFp a(1), b(1);
    a.add_term(Monomial::var(1, 0), Fp(5, 2));
    b.add_term(Monomial::var(1, 0), Fp(5, 3));
    PolyFp prod = a * b;
    CHECK(prod.term_count() == 1);
    CHECK(prod.coeff(Monomial::var(1, 0, 2)) == Fp(5, 1));
}

TEST_CASE("arity mismatch is a domain error") {
    CHECK_THROWS_AS(p2("x") + p3("x"), std::domain_error);
}

TEST_CASE("substitution examples") {
    // x^2 with x -> lambda + mu
    VarNames lm({"l", "m"});
    PolyQ x2 = parse_poly("x^2", VarNames({"x"}));
    std::map<int, PolyQ> assign{{0, parse_poly("l+m", lm)}};
    CHECK(x2.substitute(2, assign) == parse_poly("l^2+2*l*m+m^2", lm));

    // identity assignment
    PolyQ p = p2("x^2*y - 3*x");
    std::map<int, PolyQ> ident{{0, p2("x")}};
    CHECK(p.substitute(2, ident) == p);

    // target ring mismatch
    std::map<int, PolyQ> bad{{0, p3("x")}};
    CHECK_THROWS_AS(p.substitute(2, bad), std::domain_error);
}

TEST_CASE("linear change examples") {
    PolyQ p = p2("x^2");
    Matrix<Rat> ident = identity_matrix(2, Rat(1));
    CHECK(linear_change(p, ident) == p);

    Matrix<Rat> unipotent{{Rat(1), Rat(1)}, {Rat(0), Rat(1)}};  // x -> x + y
    CHECK(linear_change(p, unipotent) == p2("x^2+2*x*y+y^2"));

    Matrix<Rat> swap{{Rat(0), Rat(1)}, {Rat(1), Rat(0)}};
    CHECK(linear_change(p2("x^3*0 + x^2"), swap) == p2("y^2"));
    CHECK(linear_change(p2("x^2"), swap) == p2("y^2"));

    Matrix<Rat> singular{{Rat(1), Rat(1)}, {Rat(1), Rat(1)}};
    CHECK_THROWS_AS(linear_change(p, singular), std::domain_error);
}

TEST_CASE("bigraded component examples") {
    PolyQ p = p2("x^2*y + x*y^2");  // x = lambda-group, y = mu-group
    std::vector<bool> mask{true, false};
    CHECK(p.bigraded_component(mask, 2, 1) == p2("x^2*y"));
    CHECK(p.bigraded_component(mask, 5, 0).is_zero_poly());
    CHECK_THROWS_AS(p.bigraded_component(mask, -1, 0), std::domain_error);
}

TEST_CASE("weighted initial part examples") {
    // order 1 initial x^3+y^2+z^3 under (1/3, 1/2, 1/3)
    auto [ord1, init1] =
        weighted_initial_part(p3("x^3+y^2+z^3+x^2*y^2"), {Rat(1, 3), Rat(1, 2), Rat(1, 3)});
    CHECK(ord1 == 1);
    CHECK(init1 == p3("x^3+y^2+z^3"));

    auto [ord2, init2] = weighted_initial_part(p2("x"), {Rat(2, 7), Rat(1, 2)});
    CHECK(ord2 == Rat(2, 7));
    CHECK(init2 == p2("x"));

    // whole polynomial is the initial part under (1/5, 1/2, 1/3)
    auto [ord3, init3] = weighted_initial_part(p3("x^5+y^2+z^3"), {Rat(1, 5), Rat(1, 2), Rat(1, 3)});
    CHECK(ord3 == 1);
    CHECK(init3 == p3("x^5+y^2+z^3"));

    CHECK_THROWS_AS(weighted_initial_part(PolyQ::zero(2), {Rat(1), Rat(1)}), std::domain_error);
}

TEST_CASE("derivatives and hessian rank") {
    VarNames v3({"x1", "x2", "x3"});
    VarNames v4({"x1", "x2", "x3", "x4"});
    CHECK(hessian_rank_at_origin(parse_poly("x1^2+x2^2+x3^2", v3)) == 3);
    CHECK(hessian_rank_at_origin(parse_poly("x1^3+x2^2+x3^2+x4^2", v4)) == 3);
    CHECK(p2("x^2*y").derivative(0) == p2("2*x*y"));
    CHECK_THROWS_AS(hessian_rank_at_origin(p2("x + x^2")), std::domain_error);
}

TEST_CASE("parse and format") {
    VarNames names({"x0", "q", "y"});
    PolyQ p = parse_poly("x0*q + 3/2*y^2", names);
    CHECK(p.term_count() == 2);
    CHECK_THROWS_AS(parse_poly("x^-1", kXY), ParseError);
    CHECK(format_poly(PolyQ::zero(2), kXY) == "0");
    CHECK_THROWS_AS(parse_poly("x + w", kXY), ParseError);

    // error position is reported
    try {
        parse_poly("x + ?", kXY);
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.position == 4);
    }
}

TEST_CASE("ring axioms on randomized polynomials") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 1000; ++trial) {
        PolyQ a = random_poly(rng, 3, 4, 3);
        PolyQ b = random_poly(rng, 3, 4, 3);
        PolyQ c = random_poly(rng, 3, 4, 3);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
    }
}

TEST_CASE("euler identity for homogeneous polynomials") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        int d = 2 + static_cast<int>(rng() % 4);
        PolyQ p(3);
        for (int t = 0; t < 4; ++t) {
            Monomial m(3);
            int rest = d;
            for (int v = 0; v < 2; ++v) {
                int e = static_cast<int>(rng() % (rest + 1));
                m.set(v, e);
                rest -= e;
            }
            m.set(2, rest);
            p.add_term(m, rat(static_cast<long>(rng() % 15) - 7));
        }
        PolyQ euler(3);
        for (int v = 0; v < 3; ++v) euler = euler + PolyQ::variable(3, v, Rat(1)) * p.derivative(v);
        CHECK(euler == p.scaled(Rat(d)));
    }
}

TEST_CASE("bigraded decomposition partitions the polynomial") {
    std::mt19937_64 rng(11);
    std::vector<bool> mask{true, false, true};
    for (int trial = 0; trial < 40; ++trial) {
        PolyQ p = random_poly(rng, 3, 6, 6);
        PolyQ sum(3);
        for (int i = 0; i <= 6; ++i)
            for (int j = 0; j <= 6; ++j) sum = sum + p.bigraded_component(mask, i, j);
        CHECK(sum == p);
    }
}

TEST_CASE("linear change round trip with the inverse matrix") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        Matrix<Rat> m(3, std::vector<Rat>(3));
        do {
            for (auto& row : m)
                for (auto& x : row) x = rat(static_cast<long>(rng() % 21) - 10, 1 + rng() % 3);
        } while (!matrix_inverse(m));
        PolyQ p = random_poly(rng, 3, 4, 5);
        auto inv = matrix_inverse(m);
        CHECK(linear_change(linear_change(p, m), *inv) == p);
    }
}

TEST_CASE("reduction mod p commutes with arithmetic") {
    std::mt19937_64 rng(17);
    const uint32_t prime = 7;
    for (int trial = 0; trial < 60; ++trial) {
        // denominators coprime to 7 by construction
        auto mk = [&](int terms) {
            PolyQ p(2);
            for (int t = 0; t < terms; ++t) {
                Monomial m(2);
                m.set(0, static_cast<int>(rng() % 3));
                m.set(1, static_cast<int>(rng() % 3));
                long den = 1 + static_cast<long>(rng() % 5);
                if (den % prime == 0) den = 1;
                p.add_term(m, rat(static_cast<long>(rng() % 19) - 9, den));
            }
            return p;
        };
        PolyQ a = mk(4), b = mk(4);
        CHECK(reduce_poly_mod_p(a * b, prime) == reduce_poly_mod_p(a, prime) * reduce_poly_mod_p(b, prime));
        CHECK(reduce_poly_mod_p(a + b, prime) ==
              reduce_poly_mod_p(a, prime) + reduce_poly_mod_p(b, prime));
    }
}

TEST_CASE("json round trip") {
    PolyQ p = p2("x^2 - 7/3*x*y + y");
    auto j = poly_to_json(p, kXY);
    VarNames names;
    CHECK(poly_from_json(j, &names) == p);
    CHECK(names.names == kXY.names);

    // parse(format(p)) == p
    CHECK(parse_poly(format_poly(p, kXY), kXY) == p);
    std::mt19937_64 rng(23);
    for (int t = 0; t < 25; ++t) {
        PolyQ q = random_poly(rng, 3, 5, 6);
        CHECK(parse_poly(format_poly(q, kXYZ), kXYZ) == q);
    }
}

TEST_CASE("exact division by variable powers") {
    PolyQ p = p2("x^2*y + x^3");
    CHECK(p.divide_by_var(0, 2) == p2("y + x"));
    CHECK_THROWS_AS(p2("x^2 + y").divide_by_var(0, 1), StructureError);
}
