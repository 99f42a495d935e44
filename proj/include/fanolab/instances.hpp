#pragma once

#include "fanolab/charts.hpp"

namespace fanolab {

namespace detail {

// Pull a linear form and a quadratic form (over x2,x3,x4) back to the conic
// parametrization c(s,t) and report whether they share a root on the conic.
// A common root would be a singular point of Sigma sitting on the rational
// conic, which the construction must exclude.
inline bool forms_share_conic_root(const ConicPlane& conic, const std::vector<Rat>& l5,
                                   const PolyQ& quad) {
    std::vector<PolyQ> c(3, PolyQ(2));
    for (int i = 0; i < 3; ++i) {
        c[i].add_term(Monomial::var(2, 0, 2), conic.Minv[i][0]);
        c[i].add_term(Monomial::var(2, 0) * Monomial::var(2, 1), conic.Minv[i][1]);
        c[i].add_term(Monomial::var(2, 1, 2), conic.Minv[i][2]);
    }
    PolyQ l5c(2);
    for (int i = 0; i < 3; ++i) l5c = l5c + c[i].scaled(l5[i]);
    std::map<int, PolyQ> assign{{0, PolyQ(2)}, {1, PolyQ(2)}, {5, PolyQ(2)},
                                {2, c[0]},     {3, c[1]},     {4, c[2]}};
    PolyQ qc = quad.substitute(2, assign);
    if (l5c.is_zero_poly() || qc.is_zero_poly()) return true;
    auto a = detail::binary_coeffs(l5c, 2);
    auto b = detail::binary_coeffs(qc, 4);
    return detail::binary_form_gcd(a, b).degree() > 0;
}

// value of the dual quadratic form of q1 (a ternary quadric over x2,x3,x4)
// on a linear form with coefficient vector l
inline std::optional<Rat> dual_form_value(const PolyQ& q1, const std::vector<Rat>& l) {
    Matrix<Rat> g(3, std::vector<Rat>(3, Rat(0)));
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            Monomial m = Monomial::var(kP5, 2 + a) * Monomial::var(kP5, 2 + b);
            Rat c = q1.coeff(m);
            g[a][b] = (a == b) ? c : c / 2;
        }
    auto inv = matrix_inverse(g);
    if (!inv) return std::nullopt;
    Rat acc(0);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) acc += l[a] * (*inv)[a][b] * l[b];
    return acc;
}

}  // namespace detail

// Deterministic-in-seed construction of a cubic threefold with a certified
// A_i singularity at p, i in {2,3,4}. The quadric is a pulled-back rational
// conic so Sigma carries a rational curve of points (used by the residual
// line and equivariance pipelines); for i = 2 the x1^3 coefficient is a
// perfect cube so all three singular points of Sigma live over Q(zeta3);
// for i = 4 the x1^2-coefficient form is isotropic for the dual quadric, as
// an A_4 germ requires. Certification covers the germ type, the Milnor
// number, the singular points of Sigma against Wall's table, and emptiness
// of the plane search over F_5 and F_7.
inline SampledInstance sample_generic_instance(int i, uint64_t seed, int max_attempts = 50) {
    if (i < 2 || i > 4) throw std::domain_error("sample_generic_instance needs i in {2,3,4}");
    detail::SeededDraw draw(seed * 0x9E3779B97F4A7C15ULL + static_cast<uint64_t>(i));

    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        Matrix<Rat> m = detail::random_gl3(draw);
        // q1(x) = (Mx)_0 (Mx)_2 - (Mx)_1^2, rank 3 with rational points
        std::vector<PolyQ> mx(3, PolyQ(kP5));
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                if (!(m[r][c] == 0)) mx[r].add_term(Monomial::var(kP5, 2 + c), m[r][c]);
        PolyQ q1 = mx[0] * mx[2] - mx[1] * mx[1];

        std::vector<Rat> lplane(3), l5(3);
        for (auto& x : lplane) x = Rat(draw.range(-1, 1));
        for (auto& x : l5) x = Rat(draw.range(-1, 1));
        PolyQ k = q1 * detail::linear_form_234(lplane) - detail::linear_form_234(l5).pow(3);

        std::vector<Rat> lcoef(3, Rat(0));
        Rat c3(0);
        if (i == 2) {
            c3 = Rat(draw.range(0, 1) == 0 ? 1 : -1);
            for (auto& x : lcoef) x = Rat(draw.range(-2, 2));
        } else if (i == 3) {
            // any direction that is anisotropic for the dual form keeps A_3
            bool found = false;
            for (int tries = 0; tries < 20 && !found; ++tries) {
                for (auto& x : lcoef) x = Rat(draw.range(-2, 2));
                auto val = detail::dual_form_value(q1, lcoef);
                found = val && !(*val == 0);
            }
            if (!found) continue;
        } else {
            // i = 4: isotropic directions of the dual form are the tangent
            // lines of the conic; they pull back from (s^2, 2st, t^2)
            Rat s(draw.range(-2, 2)), t(draw.range(-2, 2));
            if (s == 0 && t == 0) t = 1;
            std::vector<Rat> lbar{s * s, 2 * s * t, t * t};
            Rat scale(draw.nonzero(-1, 1));
            for (int c = 0; c < 3; ++c) {
                lcoef[c] = Rat(0);
                for (int r = 0; r < 3; ++r) lcoef[c] += m[r][c] * lbar[r] * scale;
            }
        }
        PolyQ lform = detail::linear_form_234(lcoef);

        PolyQ quad(kP5);
        for (int a = 2; a <= 4; ++a)
            for (int b = a; b <= 4; ++b) {
                Rat c(draw.range(-2, 2));
                if (!(c == 0)) quad.add_term(Monomial::var(kP5, a) * Monomial::var(kP5, b), c);
            }

        PolyQ f3 = x_(1, 3).scaled(c3) + x_(1, 2) * lform + x_(1) * quad + k;
        if (f3.is_zero_poly()) continue;

        bool heights_ok = true;
        for (auto& [mm, cc] : f3.terms())
            if (height(cc) > 20) heights_ok = false;
        for (auto& [mm, cc] : q1.terms())
            if (height(cc) > 20) heights_ok = false;
        if (!heights_ok) continue;

        try {
            CubicThreefold cubic(q1, f3);
            SingularityType t = classify(Germ<Rat>(cubic.germ_at_p()), 8);
            if (!(t == SingularityType::A(i)) || !t.milnor || *t.milnor != i) continue;

            // Sigma must be smooth along the rational conic: the l5 and
            // x1-quadric pullbacks may not share a root there
            ConicPlane conic{m, *matrix_inverse(m), lplane, l5};
            if (detail::forms_share_conic_root(conic, l5, quad)) continue;

            // no further rational singular points of Y over two scan primes
            if (count_fq_singular_off_p(q1, f3, 29) != 0) continue;
            if (count_fq_singular_off_p(q1, f3, 31) != 0) continue;

            auto cover = build_cyclic_cover(cubic);
            auto pts = sigma_singular_points(cover, 8);
            auto expected = wall_table(classify_cover_germ(cover, 8));
            if (pts.size() != expected.size()) continue;
            bool ok = true;
            for (size_t idx = 0; idx < pts.size(); ++idx)
                if (!pts[idx].type || !(*pts[idx].type == expected[idx])) ok = false;
            if (!ok) continue;

            // no planes through the singular point over two primes
            if (!plane_search(cover, 5).witnesses.empty()) continue;
            if (!plane_search(cover, 7).witnesses.empty()) continue;

            return SampledInstance{cubic, "A" + std::to_string(i), i, seed,
                                   ConicPlane{m, *matrix_inverse(m), lplane, l5}, attempt};
        } catch (const std::exception&) {
            continue;
        }
    }
    throw SamplingFailure("no certified A_" + std::to_string(i) + " instance within " +
                          std::to_string(max_attempts) + " attempts (seed " + std::to_string(seed) + ")");
}

}  // namespace fanolab
