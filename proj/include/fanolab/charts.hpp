#pragma once

#include <array>
#include <thread>

#include "fanolab/cubic.hpp"
#include "fanolab/poly_io.hpp"

namespace fanolab {

// Affine chart of Gr(2,6) around a line through p = (1:0:...:0) and a second
// base point on the x_{pivot1}-axis. The lines of the chart pass through
//   (1 : ... : -p1j : ...)   and   (0 : ... : p0j : ...),
// the pivot coordinates being fixed to 1 resp. 0/1.
struct PlueckerChart {
    int pivot0 = 0;
    int pivot1 = 1;
    std::array<int, 4> free_idx{};

    static PlueckerChart make(int pivot1) {
        PlueckerChart c;
        c.pivot1 = pivot1;
        int k = 0;
        for (int j = 0; j < kP5; ++j)
            if (j != 0 && j != pivot1) c.free_idx[k++] = j;
        return c;
    }
    // chart of section 5, centered at the line p q0 with q0 = (0:1:0:0:0:0)
    static PlueckerChart q0_chart() { return make(1); }
    // chart of section 6, centered at the line through (0:0:1:0:0:0)
    static PlueckerChart leaf_chart() { return make(2); }

    // ring index of p_{row j}, row 0 or 1, j a non-pivot coordinate
    int var(int row, int j) const {
        for (int k = 0; k < 4; ++k)
            if (free_idx[k] == j) return 4 * row + k;
        throw std::domain_error("not a chart coordinate");
    }
    VarNames names() const;  // defined in poly_io-style helpers below
};

inline VarNames PlueckerChart::names() const {
    std::vector<std::string> n;
    for (int row = 0; row < 2; ++row)
        for (int j : free_idx) n.push_back("p" + std::to_string(row) + std::to_string(j));
    return VarNames(n);
}

// The six coordinate functions of the universal line of the chart, in the
// 10-variable ring (8 chart coordinates, lambda = 8, mu = 9).
inline std::array<PolyQ, 6> line_parametrization(const PlueckerChart& chart) {
    constexpr int kRing = 10;
    const int lam = 8, mu = 9;
    std::array<PolyQ, 6> x;
    for (int j = 0; j < kP5; ++j) x[j] = PolyQ(kRing);
    x[chart.pivot0] = PolyQ::variable(kRing, lam, Rat(1));
    x[chart.pivot1] = PolyQ::variable(kRing, mu, Rat(1));
    for (int j : chart.free_idx) {
        PolyQ e(kRing);
        e.add_term(Monomial::var(kRing, lam) * Monomial::var(kRing, chart.var(1, j)), Rat(-1));
        e.add_term(Monomial::var(kRing, mu) * Monomial::var(kRing, chart.var(0, j)), Rat(1));
        x[j] = e;
    }
    return x;
}

struct FanoLocalEquations {
    PlueckerChart chart;
    PolyQ phi30, phi21, phi12, phi03;  // in the 8-variable chart ring

    const PolyQ& phi(int i) const {
        switch (i) {
            case 0: return phi30;
            case 1: return phi21;
            case 2: return phi12;
            default: return phi03;
        }
    }
};

// Substitute the universal line into F and take the bigraded components in
// (lambda, mu); the bidegrees (3,0), (2,1), (1,2), (0,3) exhaust the cubic.
inline FanoLocalEquations fano_equations(const FourfoldDecomposition& dec, const PlueckerChart& chart) {
    if (chart.pivot1 != dec.center)
        throw std::domain_error("chart center does not match the decomposition center");
    auto line = line_parametrization(chart);
    std::map<int, PolyQ> assign;
    for (int j = 0; j < kP5; ++j) assign.emplace(j, line[j]);
    PolyQ sub = dec.F.substitute(10, assign);

    std::array<PolyQ, 4> comps;
    comps.fill(PolyQ(8));
    for (auto& [m, c] : sub.terms()) {
        int i = m[8], j = m[9];
        if (i + j != 3) throw StructureError("line substitution has a component of the wrong bidegree");
        Monomial mm(8);
        for (int v = 0; v < 8; ++v) mm.set(v, m[v]);
        comps[3 - i].add_term(mm, c);
    }
    return FanoLocalEquations{chart, comps[0], comps[1], comps[2], comps[3]};
}

// Exact reconstruction check: sum lambda^i mu^j phi^{ij} == F(line).
inline bool reconstructs_f(const FanoLocalEquations& eqs, const FourfoldDecomposition& dec) {
    auto line = line_parametrization(eqs.chart);
    std::map<int, PolyQ> assign;
    for (int j = 0; j < kP5; ++j) assign.emplace(j, line[j]);
    PolyQ sub = dec.F.substitute(10, assign);

    std::vector<int> embed{0, 1, 2, 3, 4, 5, 6, 7};
    PolyQ acc(10);
    for (int k = 0; k < 4; ++k) {
        PolyQ lifted = eqs.phi(k).embed_vars(10, embed);
        Monomial lm(10);
        lm.set(8, 3 - k);
        lm.set(9, k);
        acc = acc + lifted * PolyQ::monomial(10, lm, Rat(1));
    }
    return acc == sub;
}

// ---------------------------------------------------------------------------
// blow-up chart
// ---------------------------------------------------------------------------

// Ring of the a5 = 1 blow-up chart: (p02, p03, p04, p05, a2, a3, a4, p15).
struct BlowupChartEquations {
    PolyQ e30, e21, e12, e03;
};

inline BlowupChartEquations blowup_equations(const FanoLocalEquations& eqs) {
    if (eqs.chart.pivot1 != 1) throw std::domain_error("blow-up chart is defined over the q0 chart");
    std::map<int, PolyQ> assign;  // chart ring (8 vars) -> blow-up ring (8 vars)
    for (int k = 0; k < 4; ++k) assign.emplace(k, PolyQ::variable(8, k, Rat(1)));  // p0j fixed
    for (int k = 0; k < 3; ++k) {
        PolyQ img(8);
        img.add_term(Monomial::var(8, 7) * Monomial::var(8, 4 + k), Rat(1));  // p1j = p15 * aj
        assign.emplace(4 + k, img);
    }
    assign.emplace(7, PolyQ::variable(8, 7, Rat(1)));  // p15

    auto push = [&](const PolyQ& phi, int p15_power) {
        PolyQ s = phi.substitute(8, assign);
        return p15_power > 0 ? s.divide_by_var(7, p15_power) : s;
    };
    return BlowupChartEquations{push(eqs.phi30, 2), push(eqs.phi21, 1), push(eqs.phi12, 0),
                                push(eqs.phi03, 0)};
}

// Central fiber p0 = 0, p15 = 0, in the 3-variable ring (a2, a3, a4).
inline std::array<PolyQ, 4> central_fiber(const BlowupChartEquations& b) {
    std::map<int, PolyQ> zeros;
    for (int k = 0; k < 4; ++k) zeros.emplace(k, PolyQ(8));
    zeros.emplace(7, PolyQ(8));
    std::array<PolyQ, 4> out;
    const PolyQ* src[4] = {&b.e30, &b.e21, &b.e12, &b.e03};
    for (int k = 0; k < 4; ++k) out[k] = src[k]->substitute(8, zeros).restrict_vars({4, 5, 6});
    return out;
}

// A quadratic form in 3 variables splits into linear factors over the
// algebraic closure iff its rank is at most 2; rank 3 certifies an
// irreducible cone. Returns true when a factorization exists.
inline bool quadric_splits_into_lines(const PolyQ& q3) {
    if (q3.is_zero_poly()) return true;
    return hessian_rank_at_origin(q3) <= 2;
}

// ---------------------------------------------------------------------------
// Appendix-D translation: move a point of Sigma with x1 = 1 to q0
// ---------------------------------------------------------------------------

struct TranslatedChart {
    PolyQ F;  // translated equation
    FourfoldDecomposition dec;
    std::vector<Rat> xbar;
};

inline TranslatedChart translate_chart(const CyclicCubicFourfold& y, const std::vector<Rat>& xbar) {
    if (xbar.size() != 6) throw std::domain_error("point must have six coordinates");
    if (!(xbar[0] == 0)) throw std::domain_error("point must lie in the hyperplane x0 = 0");
    if (xbar[1] == 0) throw std::domain_error("translation chart needs x1 != 0");
    std::vector<Rat> pt = xbar;
    for (auto& c : pt) c /= xbar[1];
    const PolyQ& F = y.eq2().F;
    PolyQ Q = y.eq2().Q, K = y.eq2().K;
    if (!(Q.evaluate(pt) == 0) || !(K.evaluate(pt) == 0))
        throw std::domain_error("point does not lie on Sigma");

    // x_i = t_i + xbar_i t_1 for i = 2..5
    std::map<int, PolyQ> assign;
    for (int i = 2; i <= 5; ++i) {
        PolyQ img = x_(i);
        if (!(pt[i] == 0)) img.add_term(Monomial::var(kP5, 1), pt[i]);
        assign.emplace(i, img);
    }
    PolyQ Ft = F.substitute(kP5, assign);
    return TranslatedChart{Ft, decompose_fourfold(Ft, 1), pt};
}

// s-degree-j part of g(t + s*xbar): the polar component used by the
// Appendix-D expansion identities.
inline PolyQ polar_component(const PolyQ& g, const std::vector<Rat>& xbar, int j) {
    // substitute x_i -> x_i + s * xbar_i in a ring with s appended
    const int n = g.nvars();
    std::map<int, PolyQ> assign;
    for (int i = 0; i < n; ++i) {
        PolyQ img = PolyQ::variable(n + 1, i, Rat(1));
        if (i < static_cast<int>(xbar.size()) && !(xbar[i] == 0))
            img.add_term(Monomial::var(n + 1, n), xbar[i]);
        assign.emplace(i, img);
    }
    PolyQ sub = g.substitute(n + 1, assign);
    PolyQ out(n);
    for (auto& [m, c] : sub.terms()) {
        if (m[n] != j) continue;
        Monomial mm(n);
        for (int v = 0; v < n; ++v) mm.set(v, m[v]);
        out.add_term(mm, c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// local model Gamma at a smooth point of Sigma (section-6 chart)
// ---------------------------------------------------------------------------

struct GammaResult {
    Germ<Rat> germ;             // three variables (p11, p14, p15)
    SingularityType type;       // classification at the requested jet order
    FourfoldDecomposition dec;  // normalized center-2 decomposition
    Matrix<Rat> frame;          // x = frame * t normalization change
    int jet_order = 8;
};

namespace detail {

struct GammaFrame {
    Matrix<Rat> t6, t6b;
    FourfoldDecomposition d2;
};

// One normalization attempt for a given completion of the conic point to a
// basis of the quadric block. Throws StructureError on chart degeneration.
inline GammaFrame gamma_frame_attempt(const CyclicCubicFourfold& y, const std::vector<Rat>& xbar,
                                      const Matrix<Rat>& b3) {
    Matrix<Rat> t6 = identity_matrix(kP5, Rat(1));
    for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 3; ++s) t6[2 + r][2 + s] = b3[r][s];
    t6[1][2] = xbar[1];
    t6[5][2] = xbar[5];
    PolyQ f1 = linear_change(y.F, t6);
    FourfoldDecomposition d1 = decompose_fourfold(f1, 2);

    // normalize h1 -> t3 and give h3 a nonzero t4 coefficient
    Rat al = d1.h1.coeff(Monomial::var(kP5, 3));
    Rat be = d1.h1.coeff(Monomial::var(kP5, 4));
    if (al == 0 && be == 0) throw StructureError("h1 vanishes: quadric cone is degenerate at the point");
    Rat a3 = d1.h2.coeff(Monomial::var(kP5, 3));
    Rat a4 = d1.h2.coeff(Monomial::var(kP5, 4));
    // e4' spans ker(h1) in the (t3,t4) plane; h3 must not vanish on it
    Rat h3_on_e4 = a3 * be - a4 * al;
    if (h3_on_e4 == 0)
        throw StructureError("chart degeneration: h3 proportional to h1 on the conic plane");
    Matrix<Rat> c2(2, std::vector<Rat>(2));
    if (!(al == 0)) {
        c2[0][0] = Rat(1) / al;
        c2[1][0] = 0;
    } else {
        c2[0][0] = 0;
        c2[1][0] = Rat(1) / be;
    }
    c2[0][1] = be;
    c2[1][1] = -al;
    Matrix<Rat> t6b = identity_matrix(kP5, Rat(1));
    for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) t6b[3 + r][3 + s] = c2[r][s];
    PolyQ f2n = linear_change(f1, t6b);
    FourfoldDecomposition d2 = decompose_fourfold(f2n, 2);
    if (!(d2.h1 == x_(3))) throw StructureError("h1 normalization failed");
    if (d2.h2.coeff(Monomial::var(kP5, 4)) == 0) throw StructureError("h3 normalization failed");
    return GammaFrame{t6, t6b, d2};
}

}  // namespace detail

inline GammaResult gamma_local_model(const CyclicCubicFourfold& y, const std::vector<Rat>& xbar,
                                     int jet_order = 8) {
    if (xbar.size() != 6 || !(xbar[0] == 0)) throw std::domain_error("point must lie in {x0 = 0}");
    if (!(y.Q.evaluate(xbar) == 0) || !(y.K.evaluate(xbar) == 0))
        throw std::domain_error("point does not lie on Sigma");
    std::vector<Rat> c{xbar[2], xbar[3], xbar[4]};
    if (c[0] == 0 && c[1] == 0 && c[2] == 0)
        throw std::domain_error("point lies on the vertex line: not a smooth point of Sigma");
    {
        // smoothness: the Jacobian of (Q, K) has rank 2 at the point
        Matrix<Rat> jac(2, std::vector<Rat>(5));
        for (int j = 1; j <= 5; ++j) {
            jac[0][j - 1] = y.Q.derivative(j).evaluate(xbar);
            jac[1][j - 1] = y.K.derivative(j).evaluate(xbar);
        }
        if (matrix_rank(jac) != 2) throw std::domain_error("point is a singular point of Sigma");
    }

    // frame change x = T t with T(e2) = xbar and the quadric block preserved:
    // complete the conic point to a basis, trying each standard pair, since a
    // particular complement can degenerate against K even at a good point
    std::optional<detail::GammaFrame> frame;
    std::string last_error = "conic-point frame is degenerate";
    for (int u = 0; u < 3 && !frame; ++u)
        for (int v = u + 1; v < 3 && !frame; ++v) {
            Matrix<Rat> cand(3, std::vector<Rat>(3, Rat(0)));
            for (int r = 0; r < 3; ++r) cand[r][0] = c[r];
            cand[u][1] = 1;
            cand[v][2] = 1;
            if (!matrix_inverse(cand)) continue;
            try {
                frame = detail::gamma_frame_attempt(y, xbar, cand);
            } catch (const StructureError& e) {
                last_error = e.what();
            }
        }
    if (!frame) throw StructureError(last_error);
    const Matrix<Rat>& t6 = frame->t6;
    const Matrix<Rat>& t6b = frame->t6b;
    const FourfoldDecomposition& d2 = frame->d2;

    // Fano equations on the leaf chart, restricted to p01 = p05 = 0
    FanoLocalEquations eqs = fano_equations(d2, PlueckerChart::leaf_chart());
    std::map<int, PolyQ> zero01;
    zero01.emplace(0, PolyQ(8));  // p01
    zero01.emplace(3, PolyQ(8));  // p05
    auto restrict6 = [&](const PolyQ& g) {
        return g.substitute(8, zero01).restrict_vars({1, 2, 4, 5, 6, 7});
    };
    // restricted ring: (p03, p04, p11, p13, p14, p15)
    PolyQ r30 = restrict6(eqs.phi30);
    PolyQ r21 = restrict6(eqs.phi21);
    PolyQ r12 = restrict6(eqs.phi12);
    PolyQ r03 = restrict6(eqs.phi03);
    for (auto& [m, cc] : r30.terms())
        if (m[0] > 0 || m[1] > 0) throw StructureError("phi30 involves p0 coordinates");

    auto psi = solve_implicit<Rat>({r12, r03}, {0, 1}, jet_order);
    std::map<int, PolyQ> sub0{{0, psi[0]}, {1, psi[1]}};
    PolyQ f21bar = r21.substitute(6, sub0, jet_order);
    PolyQ psi13 = solve_implicit_one(f21bar, 3, jet_order);
    std::map<int, PolyQ> sub1{{3, psi13}};
    PolyQ germ_poly = r30.substitute(6, sub1, jet_order).restrict_vars({2, 4, 5});

    Matrix<Rat> composed(kP5, std::vector<Rat>(kP5, Rat(0)));
    for (int i = 0; i < kP5; ++i)
        for (int j = 0; j < kP5; ++j) {
            Rat acc(0);
            for (int k = 0; k < kP5; ++k) acc += t6[i][k] * t6b[k][j];
            composed[i][j] = acc;
        }

    GammaResult out{Germ<Rat>(germ_poly), SingularityType{}, d2, composed, jet_order};
    out.type = classify(out.germ, jet_order);
    return out;
}

// ---------------------------------------------------------------------------
// residual lines, the map phi, and sigma-equivariance
// ---------------------------------------------------------------------------

template <class K>
using Pt6 = std::array<K, 6>;

template <class K>
Pt6<K> lift_point(const std::vector<Rat>& p) {
    Pt6<K> out;
    for (int i = 0; i < 6; ++i) out[i] = K(p[i]);
    return out;
}

// length-two subscheme of Sigma: two distinct points, or a point with a
// tangent direction (non-reduced case)
template <class K>
struct LengthTwoScheme {
    Pt6<K> a, b;
    bool tangent = false;
};

template <class K>
struct ProjLine {
    Matrix<K> rref;  // canonical 2x6 row-reduced basis
    Pt6<K> u, v;     // a spanning pair

    friend bool operator==(const ProjLine& l1, const ProjLine& l2) { return l1.rref == l2.rref; }
    friend bool operator!=(const ProjLine& l1, const ProjLine& l2) { return !(l1 == l2); }
};

template <class K>
Matrix<K> row_reduce_canonical(Matrix<K> m) {
    const int rows = m.size();
    const int cols = rows ? static_cast<int>(m[0].size()) : 0;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (!is_zero(m[i][c])) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(m[r], m[piv]);
        K d = m[r][c];
        for (int j = 0; j < cols; ++j) m[r][j] = m[r][j] / d;
        for (int i = 0; i < rows; ++i) {
            if (i == r || is_zero(m[i][c])) continue;
            K f = m[i][c];
            for (int j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    m.resize(r);
    return m;
}

template <class K>
ProjLine<K> make_line(const Pt6<K>& u, const Pt6<K>& v) {
    Matrix<K> m(2, std::vector<K>(6));
    for (int i = 0; i < 6; ++i) {
        m[0][i] = u[i];
        m[1][i] = v[i];
    }
    Matrix<K> r = row_reduce_canonical(m);
    if (r.size() != 2) throw std::domain_error("points do not span a line");
    return ProjLine<K>{r, u, v};
}

template <class K>
bool point_on_line(const ProjLine<K>& l, const Pt6<K>& p) {
    Matrix<K> m = l.rref;
    std::vector<K> row(p.begin(), p.end());
    m.push_back(row);
    return static_cast<int>(row_reduce_canonical(m).size()) == 2;
}

template <class K>
bool line_in_hypersurface(const Poly<K>& f, const ProjLine<K>& l) {
    std::map<int, Poly<K>> assign;
    for (int i = 0; i < 6; ++i) {
        Poly<K> e(2);
        if (!is_zero(l.u[i])) e.add_term(Monomial::var(2, 0), l.u[i]);
        if (!is_zero(l.v[i])) e.add_term(Monomial::var(2, 1), l.v[i]);
        assign.emplace(i, e);
    }
    return f.substitute(2, assign).is_zero_poly();
}

template <class K>
struct ResidualLineResult {
    ProjLine<K> line;
    bool through_p = false;
    Poly<K> plane_cubic;  // F restricted to the plane, in (b0, b1, b2)
};

// Restrict F to the plane spanned by p, the scheme's support and its second
// point (or tangent direction); strip the two cone factors; the remaining
// linear factor is the residual line.
template <class K>
ResidualLineResult<K> residual_line(const Poly<K>& F, const Poly<K>& Q, const Poly<K>& Kc,
                                    const LengthTwoScheme<K>& xi) {
    auto check_on_sigma = [&](const Pt6<K>& pt) {
        if (!is_zero(pt[0])) throw std::domain_error("scheme points must lie in {x0 = 0}");
        std::vector<K> v(pt.begin(), pt.end());
        if (!is_zero(Q.evaluate(v)) || !is_zero(Kc.evaluate(v)))
            throw std::domain_error("scheme point does not lie on Sigma");
    };
    check_on_sigma(xi.a);
    if (!xi.tangent) {
        check_on_sigma(xi.b);
    } else {
        // tangency: the direction annihilates both differentials at a
        std::vector<K> av(xi.a.begin(), xi.a.end());
        K dq{}, dk{};
        for (int j = 0; j < 6; ++j) {
            dq += Q.derivative(j).evaluate(av) * xi.b[j];
            dk += Kc.derivative(j).evaluate(av) * xi.b[j];
        }
        if (!is_zero(dq) || !is_zero(dk))
            throw std::domain_error("direction is not tangent to Sigma at the point");
        if (!is_zero(xi.b[0])) throw std::domain_error("tangent direction must lie in {x0 = 0}");
    }

    // plane (b0 : b1 : b2) -> b0 p + b1 a + b2 b
    std::map<int, Poly<K>> assign;
    for (int i = 0; i < 6; ++i) {
        Poly<K> e(3);
        if (i == 0) e.add_term(Monomial::var(3, 0), FieldOps<K>::one());
        if (!is_zero(xi.a[i])) e.add_term(Monomial::var(3, 1), xi.a[i]);
        if (!is_zero(xi.b[i])) e.add_term(Monomial::var(3, 2), xi.b[i]);
        assign.emplace(i, e);
    }
    Poly<K> g = F.substitute(3, assign);
    if (g.is_zero_poly()) throw StructureError("degenerate: the plane lies inside the fourfold");

    Poly<K> linear = xi.tangent ? g.divide_by_var(2, 2) : g.divide_by_var(2, 1).divide_by_var(1, 1);
    if (linear.total_degree() != 1)
        throw StructureError("restricted cubic does not factor as cone times line");

    K c0 = linear.coeff(Monomial::var(3, 0));
    K c1 = linear.coeff(Monomial::var(3, 1));
    K c2 = linear.coeff(Monomial::var(3, 2));
    std::array<K, 3> w1{}, w2{};
    if (!is_zero(c0)) {
        w1 = {-c1, c0, K{}};
        w2 = {-c2, K{}, c0};
    } else if (!is_zero(c1)) {
        w1 = {FieldOps<K>::one(), K{}, K{}};
        w2 = {K{}, -c2, c1};
    } else {
        w1 = {FieldOps<K>::one(), K{}, K{}};
        w2 = {K{}, FieldOps<K>::one(), K{}};
    }
    auto to_p5 = [&](const std::array<K, 3>& w) {
        Pt6<K> out{};
        for (int i = 0; i < 6; ++i) {
            K acc = i == 0 ? w[0] : K{};
            acc += w[1] * xi.a[i];
            acc += w[2] * xi.b[i];
            out[i] = acc;
        }
        return out;
    };
    ResidualLineResult<K> out{make_line(to_p5(w1), to_p5(w2)), false, g};
    Pt6<K> p{};
    p[0] = FieldOps<K>::one();
    out.through_p = point_on_line(out.line, p);
    return out;
}

// the covering automorphism x5 -> zeta * x5
inline Pt6<Zeta3> sigma_point(Pt6<Zeta3> p) {
    p[5] = p[5] * Zeta3::zeta();
    return p;
}
inline ProjLine<Zeta3> sigma_line(const ProjLine<Zeta3>& l) {
    return make_line(sigma_point(l.u), sigma_point(l.v));
}
inline LengthTwoScheme<Zeta3> sigma_scheme(LengthTwoScheme<Zeta3> xi) {
    xi.a = sigma_point(xi.a);
    xi.b = sigma_point(xi.b);  // for tangent schemes this is d_sigma, which acts the same way
    return xi;
}

inline LengthTwoScheme<Zeta3> lift_scheme(const LengthTwoScheme<Rat>& xi) {
    LengthTwoScheme<Zeta3> out;
    for (int i = 0; i < 6; ++i) {
        out.a[i] = Zeta3(xi.a[i]);
        out.b[i] = Zeta3(xi.b[i]);
    }
    out.tangent = xi.tangent;
    return out;
}

// residual_line(sigma(xi)) == sigma(residual_line(xi)), exactly over Q(zeta3)
inline bool equivariance_check(const CyclicCubicFourfold& y, const LengthTwoScheme<Rat>& xi) {
    PolyZ3 F = lift_to_zeta3(y.F), Q = lift_to_zeta3(y.Q), Kc = lift_to_zeta3(y.K);
    auto xz = lift_scheme(xi);
    auto base = residual_line(F, Q, Kc, xz);
    auto mapped = sigma_line(base.line);
    auto other = residual_line(F, Q, Kc, sigma_scheme(xz));
    return mapped == other.line;
}

// residual conic of the plane Pi_a through l0, per the section-5 proof
inline PolyQ residual_conic(const CyclicCubicFourfold& y, const std::vector<Rat>& a) {
    if (a.size() != 4) throw std::domain_error("plane parameter needs 4 coordinates (a2:a3:a4:a5)");
    const auto& d = y.eq2();
    std::vector<Rat> a6{Rat(0), Rat(0), a[0], a[1], a[2], a[3]};
    PolyQ conic(3);
    Monomial b0b2 = Monomial::var(3, 0) * Monomial::var(3, 2);
    Monomial b1b1 = Monomial::var(3, 1, 2);
    Monomial b1b2 = Monomial::var(3, 1) * Monomial::var(3, 2);
    Monomial b2b2 = Monomial::var(3, 2, 2);
    conic.add_term(b0b2, d.q1.evaluate(a6));
    conic.add_term(b1b1, d.h2.evaluate(a6));
    conic.add_term(b1b2, d.q2.evaluate(a6));
    conic.add_term(b2b2, d.k2.evaluate(a6));
    return conic;
}

// ---------------------------------------------------------------------------
// Appendix-A plane search over F_p
// ---------------------------------------------------------------------------

struct PlaneWitness {
    std::array<uint32_t, 5> a{}, b{};  // coordinates x1..x5
};

struct PlaneSearchResult {
    uint32_t prime = 0;
    bool small_field_caveat = false;
    long sigma_cone_points = 0;
    std::vector<PlaneWitness> witnesses;
};

// Exhaustive enumeration of planes through p inside Y over F_p: pairs of
// points of the cone over Sigma satisfying the polarized cubic conditions.
inline PlaneSearchResult plane_search(const CyclicCubicFourfold& y, uint32_t prime, int threads = 1) {
    if (prime < 2 || prime > 13) throw std::domain_error("plane_search expects a prime p <= 13");
    for (uint32_t d = 2; d * d <= prime; ++d)
        if (prime % d == 0) throw std::domain_error("plane_search modulus must be prime");
    PlaneSearchResult out;
    out.prime = prime;
    out.small_field_caveat = prime <= 3;

    PolyFp q5 = reduce_poly_mod_p(y.Q.restrict_vars({1, 2, 3, 4, 5}), prime);
    PolyFp k5 = reduce_poly_mod_p(y.K.restrict_vars({1, 2, 3, 4, 5}), prime);

    // collect the F_p points of the affine cone over Sigma, projectively
    // normalized (last nonzero coordinate = 1)
    std::vector<std::array<uint32_t, 5>> cone;
    for (int last = 0; last < 5; ++last) {
        std::array<uint32_t, 5> c{};
        c[last] = 1;
        std::function<void(int)> walk = [&](int idx) {
            if (idx == last) {
                std::vector<Fp> pt(5);
                for (int j = 0; j < 5; ++j) pt[j] = Fp(prime, c[j]);
                if (is_zero(q5.evaluate(pt)) && is_zero(k5.evaluate(pt))) cone.push_back(c);
                return;
            }
            for (uint32_t v = 0; v < prime; ++v) {
                c[idx] = v;
                walk(idx + 1);
            }
            c[idx] = 0;
        };
        walk(0);
    }
    out.sigma_cone_points = static_cast<long>(cone.size());

    auto eval_at = [&](const PolyFp& f, const std::array<uint32_t, 5>& a,
                       const std::array<uint32_t, 5>& b, uint32_t sa, uint32_t sb) {
        std::vector<Fp> pt(5);
        for (int j = 0; j < 5; ++j) pt[j] = Fp(prime, static_cast<long>(sa * a[j] + sb * b[j]));
        return f.evaluate(pt);
    };

    const int n = static_cast<int>(cone.size());
    int nthreads = std::max(1, threads);
    std::vector<std::vector<PlaneWitness>> found(nthreads);
    auto worker = [&](int tid) {
        for (int i = tid; i < n; i += nthreads) {
            for (int j = i + 1; j < n; ++j) {
                const auto& a = cone[i];
                const auto& b = cone[j];
                // B(a,b) = Q(a+b) since Q(a) = Q(b) = 0
                if (!is_zero(eval_at(q5, a, b, 1, 1))) continue;
                if (prime == 2) {
                    // cannot separate the two cubic polars over F_2
                    if (!is_zero(eval_at(k5, a, b, 1, 1))) continue;
                } else {
                    Fp s11 = eval_at(k5, a, b, 1, 1);  // K21 + K12
                    Fp s12 = eval_at(k5, a, b, 1, 2);  // 2 K21 + 4 K12
                    Fp two = Fp(prime, 2);
                    Fp k12 = (s12 - two * s11) / two;
                    Fp k21 = s11 - k12;
                    if (!is_zero(k21) || !is_zero(k12)) continue;
                }
                found[tid].push_back(PlaneWitness{a, b});
            }
        }
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    for (auto& v : found)
        for (auto& w : v) out.witnesses.push_back(w);
    return out;
}

}  // namespace fanolab
