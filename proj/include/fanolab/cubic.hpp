#pragma once

#include <array>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fanolab/classify.hpp"
#include "fanolab/poly.hpp"

namespace fanolab {

// All projective objects live in the 6-variable ring x0..x5.
constexpr int kP5 = 6;

inline PolyQ x_(int i, int pow = 1) { return PolyQ::monomial(kP5, Monomial::var(kP5, i, pow), Rat(1)); }

// Cubic threefold x0 f2 + f3 = 0 in P^4, singular at p = (1:0:0:0:0),
// already in the normalized frame where f2 is a quadric in (x2,x3,x4).
struct CubicThreefold {
    PolyQ f2, f3;

    CubicThreefold(PolyQ f2_in, PolyQ f3_in) : f2(std::move(f2_in)), f3(std::move(f3_in)) {
        auto check = [](const PolyQ& f, int deg, int lowest_var, const char* what) {
            if (f.nvars() != kP5) throw std::domain_error(std::string(what) + " must live in the x0..x5 ring");
            int d;
            if (!f.is_homogeneous(&d) || (!f.is_zero_poly() && d != deg))
                throw std::domain_error(std::string(what) + " must be homogeneous of the stated degree");
            for (auto& [m, c] : f.terms())
                if (m[0] > 0 || m[5] > 0 || (lowest_var > 1 && m[1] > 0))
                    throw std::domain_error(std::string(what) + " involves a forbidden variable");
        };
        check(f2, 2, 2, "f2");
        check(f3, 3, 1, "f3");
        if (f2.is_zero_poly()) throw std::domain_error("f2 must be nonzero");
    }

    // Affine germ of the threefold at p in the chart x0 = 1, variables x1..x4.
    PolyQ germ_at_p() const { return (f2 + f3).restrict_vars({1, 2, 3, 4}); }
};

// x_c-graded pieces of a cubic fourfold F = x0 Q + K with Q(center) = 0 and
// K(center) = 0. For center 1 this is the Eq-(2) shape (h1 = 0 for cyclic
// covers); for center 2 it is the section-6 shape where the paper writes
// (h1, q1, h3, q3, k2) -- here h2 and q2 play the roles of h3 and q3.
struct FourfoldDecomposition {
    int center = 1;
    PolyQ F, Q, K;
    PolyQ h1, q1;      // Q = x_c h1 + q1
    PolyQ h2, q2, k2;  // K = x_c^2 h2 + x_c q2 + k2
};

inline FourfoldDecomposition decompose_fourfold(const PolyQ& F, int center) {
    if (F.nvars() != kP5) throw std::domain_error("fourfold equation must live in the x0..x5 ring");
    if (center != 1 && center != 2) throw std::domain_error("decomposition center must be x1 or x2");
    int d;
    if (!F.is_homogeneous(&d) || d != 3) throw std::domain_error("fourfold equation must be a cubic form");
    FourfoldDecomposition out;
    out.center = center;
    out.F = F;
    for (auto& [m, c] : F.terms())
        if (m[0] > 1) throw StructureError("equation is not linear in x0");
    out.Q = F.derivative(0);
    out.K = F - x_(0) * out.Q;
    // Q is a quadric in (x_c, x2, x3, x4): linear in x_c (the h1 part, zero
    // for covers in the pure cyclic frame), never touching x0 or x5
    for (auto& [m, c] : out.Q.terms())
        if (m[0] > 0 || m[5] > 0 || (center == 2 && m[1] > 0))
            throw StructureError("Q involves a variable outside the quadric block");

    auto grade = [&](const PolyQ& g, int var, int j) {
        PolyQ part(kP5);
        for (auto& [m, c] : g.terms())
            if (m[var] == j) {
                Monomial mm = m;
                mm.set(var, 0);
                part.add_term(mm, c);
            }
        return part;
    };
    if (!grade(out.K, center, 3).is_zero_poly())
        throw StructureError("K does not vanish at the decomposition center");
    out.h2 = grade(out.K, center, 2);
    out.q2 = grade(out.K, center, 1);
    out.k2 = grade(out.K, center, 0);
    if (!grade(out.Q, center, 2).is_zero_poly())
        throw StructureError("Q does not vanish at the decomposition center");
    out.h1 = grade(out.Q, center, 1);
    out.q1 = grade(out.Q, center, 0);

    PolyQ rebuilt = x_(0) * (x_(center) * out.h1 + out.q1) + x_(center, 2) * out.h2 +
                    x_(center) * out.q2 + out.k2;
    if (rebuilt != F) throw StructureError("decomposition does not reconstruct the equation");
    return out;
}

// Rational conic worth of points on Sigma, recorded with each sampled
// instance: the plane {x1 = 0, x5 = l5(x2,x3,x4)} meets Sigma in the conic
// q1 = 0, and q1 = (x2 x4 - x3^2) o M is rationally parametrized.
struct ConicPlane {
    Matrix<Rat> M, Minv;     // 3x3 over (x2,x3,x4)
    std::vector<Rat> l, l5;  // linear-form coefficients over (x2,x3,x4)

    std::vector<Rat> conic_coords(const Rat& s, const Rat& t) const {
        std::vector<Rat> base{s * s, s * t, t * t};
        std::vector<Rat> c(3, Rat(0));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) c[i] += Minv[i][j] * base[j];
        return c;
    }
    std::vector<Rat> point(const Rat& s, const Rat& t) const {
        auto c = conic_coords(s, t);
        Rat x5 = l5[0] * c[0] + l5[1] * c[1] + l5[2] * c[2];
        return {Rat(0), Rat(0), c[0], c[1], c[2], x5};
    }
    // Direction spanning (with the point itself) the tangent line of the
    // conic at parameter (s:t); it is tangent to Sigma there.
    std::vector<Rat> tangent(const Rat& s, const Rat& t) const {
        bool use_s = !(t == 0);
        std::vector<Rat> dbase = use_s ? std::vector<Rat>{2 * s, t, Rat(0)}
                                       : std::vector<Rat>{Rat(0), s, 2 * t};
        std::vector<Rat> c(3, Rat(0));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) c[i] += Minv[i][j] * dbase[j];
        Rat x5 = l5[0] * c[0] + l5[1] * c[1] + l5[2] * c[2];
        return {Rat(0), Rat(0), c[0], c[1], c[2], x5};
    }
};

struct CyclicCubicFourfold {
    CubicThreefold branch;
    PolyQ F;     // x0 f2 + f3 + x5^3
    PolyQ Q, K;  // the cyclic frame: Q = f2, K = f3 + x5^3
    // The Eq-(2) shape needs the x1^3 coefficient of K to vanish, i.e. a
    // singular point of Sigma at q0 = (0:1:0:0:0:0). When it does not, the
    // equation is recentered by x5 -> x5 + t x1 with t^3 = -c3; the shifted
    // equation and its decomposition live here. F_eq2 = F when c3 = 0.
    Rat recenter_t;
    PolyQ F_eq2;
    std::optional<FourfoldDecomposition> dec;
    std::optional<ConicPlane> conic;  // present on sampled instances

    const FourfoldDecomposition& eq2() const {
        if (!dec)
            throw StructureError("no Eq-(2) frame: the x1^3 coefficient is not a rational cube");
        return *dec;
    }
};

inline CyclicCubicFourfold build_cyclic_cover(const CubicThreefold& c) {
    PolyQ F = x_(0) * c.f2 + c.f3 + x_(5, 3);
    // p = (1:0:...:0) is singular by construction; verify exactly anyway
    std::vector<Rat> p{Rat(1), Rat(0), Rat(0), Rat(0), Rat(0), Rat(0)};
    if (!(F.evaluate(p) == 0)) throw std::domain_error("branch construction is not singular at p");
    for (int j = 0; j < kP5; ++j)
        if (!(F.derivative(j).evaluate(p) == 0))
            throw std::domain_error("branch construction is not singular at p");

    CyclicCubicFourfold y{c, F, c.f2, c.f3 + x_(5, 3), Rat(0), F, std::nullopt, std::nullopt};
    Rat c3 = c.f3.coeff(Monomial::var(kP5, 1, 3));
    if (c3 == 0) {
        y.dec = decompose_fourfold(F, 1);
    } else {
        Rat t0;
        if (rational_cube_root(-c3, t0)) {
            y.recenter_t = t0;
            PolyQ x5_image = x_(5) + x_(1).scaled(t0);
            y.F_eq2 = F.substitute(kP5, {{5, x5_image}});
            y.dec = decompose_fourfold(y.F_eq2, 1);
        }
    }
    return y;
}

inline int rank_f2(const CyclicCubicFourfold& y) {
    if (y.branch.f2.is_zero_poly()) return 0;
    return hessian_rank_at_origin(y.branch.f2);
}

// ---------------------------------------------------------------------------
// Sigma = {Q = 0} cap {K = 0} in the hyperplane x0 = 0 and its singular points
// ---------------------------------------------------------------------------

struct SigmaPoint {
    std::vector<Zeta3> point;  // projective coordinates in Q(zeta3), x0..x5
    std::optional<SingularityType> type;
    std::string minimal_polynomial;  // set when the point is not resolvable over Q(zeta3)
    bool rational = false;
};

namespace detail {

// Germ of Sigma at the candidate point (0 : 1 : 0 : 0 : 0 : t): eliminate one
// variable from K = 0 by jets and restrict Q to the resulting smooth chart.
template <class K>
SingularityType classify_sigma_point(const Poly<K>& Q6, const Poly<K>& K6, const K& t, int jet_order) {
    // affine chart x1 = 1, local coordinates u = (x2, x3, x4, x5 - t)
    const int n = 4;
    std::map<int, Poly<K>> to_local;
    to_local.emplace(0, Poly<K>::zero(n));
    to_local.emplace(1, Poly<K>::constant(n, FieldOps<K>::one()));
    for (int j = 2; j <= 4; ++j) to_local.emplace(j, Poly<K>::variable(n, j - 2, FieldOps<K>::one()));
    {
        Poly<K> x5 = Poly<K>::variable(n, 3, FieldOps<K>::one());
        x5 = x5 + Poly<K>::constant(n, t);
        to_local.emplace(5, x5);
    }
    Poly<K> k_loc = K6.substitute(n, to_local);
    Poly<K> q_loc = Q6.substitute(n, to_local);
    if (!is_zero(k_loc.coeff(Monomial(n))) || !is_zero(q_loc.coeff(Monomial(n))))
        throw std::domain_error("candidate point does not lie on Sigma");

    int solve_var = -1;
    for (int j = 3; j >= 0; --j)
        if (!is_zero(k_loc.coeff(Monomial::var(n, j)))) {
            solve_var = j;
            break;
        }
    if (solve_var < 0)
        throw StructureError("Q and K both singular at the candidate: line through p singular");

    Poly<K> psi = solve_implicit_one(k_loc, solve_var, jet_order);
    std::map<int, Poly<K>> assign{{solve_var, psi}};
    Poly<K> restricted = q_loc.substitute(n, assign, jet_order);
    std::vector<int> keep;
    for (int j = 0; j < n; ++j)
        if (j != solve_var) keep.push_back(j);
    Poly<K> germ3 = restricted.restrict_vars(keep);
    return classify(Germ<K>(germ3), jet_order);
}

}  // namespace detail

// Candidate singular points of Sigma sit on the vertex line of the rank-3
// quadric cone; they are cut out by c3 x1^3 + x5^3 = 0 with c3 the x1^3
// coefficient of f3. Rational and Q(zeta3) roots are classified; other roots
// are reported symbolically.
inline std::vector<SigmaPoint> sigma_singular_points(const CyclicCubicFourfold& y, int jet_order = 8) {
    if (rank_f2(y) != 3) throw std::domain_error("sigma_singular_points needs a rank-3 quadric");
    Monomial x1cubed = Monomial::var(kP5, 1, 3);
    Rat c3 = y.branch.f3.coeff(x1cubed);
    std::vector<SigmaPoint> out;

    auto classify_at = [&](const Zeta3& t, bool rational) {
        SigmaPoint sp;
        sp.rational = rational;
        sp.point = {Zeta3(), Zeta3(Rat(1)), Zeta3(), Zeta3(), Zeta3(), t};
        if (rational) {
            sp.type = detail::classify_sigma_point<Rat>(y.Q, y.K, t.a, jet_order);
        } else {
            sp.type = detail::classify_sigma_point<Zeta3>(lift_to_zeta3(y.Q), lift_to_zeta3(y.K), t,
                                                          jet_order);
        }
        return sp;
    };

    if (c3 == 0) {
        out.push_back(classify_at(Zeta3(), true));
        return out;
    }
    Rat t0;
    if (rational_cube_root(-c3, t0)) {
        out.push_back(classify_at(Zeta3(t0), true));
        // the conjugates t0*zeta and t0*zeta^2
        Zeta3 z = Zeta3::zeta();
        out.push_back(classify_at(Zeta3(t0) * z, false));
        out.push_back(classify_at(Zeta3(t0) * z * z, false));
        return out;
    }
    for (int r = 0; r < 3; ++r) {
        SigmaPoint sp;
        sp.minimal_polynomial = "u^3 + (" + c3.get_str() + ")";
        out.push_back(sp);
    }
    return out;
}

// Classify the fourfold's own germ at p (affine chart x0 = 1, 5 variables).
inline SingularityType classify_cover_germ(const CyclicCubicFourfold& y, int jet_order = 8) {
    PolyQ germ = (y.branch.f2 + y.branch.f3 + x_(5, 3)).restrict_vars({1, 2, 3, 4, 5});
    return classify(Germ<Rat>(germ), jet_order);
}

// ---------------------------------------------------------------------------
// seeded generic instances
// ---------------------------------------------------------------------------

struct SampledInstance {
    CubicThreefold cubic;
    std::string claimed_type;
    int i = 0;
    uint64_t seed = 0;
    ConicPlane conic;
    int attempts = 0;
};

namespace detail {

class SeededDraw {
  public:
    explicit SeededDraw(uint64_t seed) : rng_(seed) {}
    long range(long lo, long hi) {  // inclusive, deterministic across platforms
        uint64_t span = static_cast<uint64_t>(hi - lo + 1);
        return lo + static_cast<long>(rng_() % span);
    }
    long nonzero(long lo, long hi) {
        long v = 0;
        while (v == 0) v = range(lo, hi);
        return v;
    }

  private:
    std::mt19937_64 rng_;
};

inline Matrix<Rat> random_gl3(SeededDraw& draw) {
    while (true) {
        Matrix<Rat> m(3, std::vector<Rat>(3));
        for (auto& row : m)
            for (auto& x : row) x = Rat(draw.range(-1, 1));
        auto inv = matrix_inverse(m);
        if (inv) return m;
    }
}

inline PolyQ linear_form_234(const std::vector<Rat>& c) {
    PolyQ f(kP5);
    for (int j = 0; j < 3; ++j)
        if (!(c[j] == 0)) f.add_term(Monomial::var(kP5, 2 + j), c[j]);
    return f;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// isolation evidence
// ---------------------------------------------------------------------------

struct IsolationReport {
    bool on_hypersurface = false;
    bool critical = false;
    int hessian_rank = -1;
    bool milnor_finite = false;
    long milnor = -1;
    bool fq_scan_done = false;
    std::vector<std::pair<uint32_t, long>> fq_other_singular;  // (q, count of singular points != p)
    bool isolated_evidence = false;
};

// Count the rational singular points of x0 f2 + f3 + x5^3 over F_q other
// than p itself. The cyclic shape forces x5 = 0 (q != 3) and reduces the
// search to x in P^3(F_q) with f2(x) = 0 and x0 grad(f2) = -grad(f3).
inline long count_fq_singular_off_p(const PolyQ& f2, const PolyQ& f3_no_x5, uint32_t q) {
    PolyFp f2p = reduce_poly_mod_p(f2.restrict_vars({1, 2, 3, 4}), q);
    PolyFp f3p = reduce_poly_mod_p(f3_no_x5.restrict_vars({1, 2, 3, 4}), q);
    std::vector<PolyFp> df2, df3;
    for (int j = 0; j < 4; ++j) {
        df2.push_back(f2p.derivative(j));
        df3.push_back(f3p.derivative(j));
    }
    long bad = 0;
    auto check_point = [&](const std::vector<Fp>& pt) {
        if (!is_zero(f2p.evaluate(pt))) return;
        std::vector<Fp> g2(4), g3(4);
        for (int j = 0; j < 4; ++j) {
            g2[j] = df2[j].evaluate(pt);
            g3[j] = df3[j].evaluate(pt);
        }
        bool g2zero = true, g3zero = true;
        for (auto& v : g2)
            if (!is_zero(v)) g2zero = false;
        for (auto& v : g3)
            if (!is_zero(v)) g3zero = false;
        if (g2zero) {
            if (g3zero) ++bad;  // singular for every x0: a whole singular pencil
            return;
        }
        Fp x0;
        bool found = false, consistent = true;
        for (int j = 0; j < 4; ++j) {
            if (is_zero(g2[j])) {
                if (!is_zero(g3[j])) consistent = false;
                continue;
            }
            Fp cand = (-g3[j]) / g2[j];
            if (!found) {
                x0 = cand;
                found = true;
            } else if (!(cand == x0)) {
                consistent = false;
            }
        }
        if (consistent) ++bad;
    };
    for (int L = 0; L < 4; ++L) {
        std::vector<Fp> pt(4, Fp(q, 0));
        pt[L] = Fp(q, 1);
        std::function<void(int)> walk = [&](int idx) {
            if (idx == L) {
                check_point(pt);
                return;
            }
            for (uint32_t v = 0; v < q; ++v) {
                pt[idx] = Fp(q, static_cast<long>(v));
                walk(idx + 1);
            }
            pt[idx] = Fp(q, 0);
        };
        walk(0);
    }
    return bad;
}

// Exact criticality at p = (1:0:...:0) plus two probabilistic layers of
// isolation evidence: a finite Milnor number for the affine germ and an
// absence of further rational singular points over F_q. The scan uses the
// cyclic shape (x5 appears only as x5^3), so it is skipped for other F.
inline IsolationReport verify_isolated_singularity(const PolyQ& F,
                                                   const std::vector<uint32_t>& primes = {101, 103}) {
    IsolationReport rep;
    std::vector<Rat> p{Rat(1), Rat(0), Rat(0), Rat(0), Rat(0), Rat(0)};
    rep.on_hypersurface = F.evaluate(p) == 0;
    if (!rep.on_hypersurface) return rep;
    rep.critical = true;
    for (int j = 0; j < kP5; ++j)
        if (!(F.derivative(j).evaluate(p) == 0)) rep.critical = false;
    if (!rep.critical) return rep;

    PolyQ germ = F.substitute(kP5, {{0, PolyQ::constant(kP5, Rat(1))}}).restrict_vars({1, 2, 3, 4, 5});
    rep.hessian_rank = hessian_rank_at_origin(germ);
    auto mo = milnor_number(germ, 20);
    rep.milnor_finite = mo.bounded;
    rep.milnor = mo.mu;

    // cyclic shape check: F = x0 f2(x1..x4) + f3(x1..x4) + c x5^3
    bool cyclic_shape = true;
    for (auto& [m, c] : F.terms()) {
        if (m[0] > 1) cyclic_shape = false;
        if (m[5] > 0 && !(m[5] == 3 && m.degree() == 3)) cyclic_shape = false;
        if (m[0] == 1 && m[5] > 0) cyclic_shape = false;
    }
    if (cyclic_shape) {
        PolyQ f2q = F.derivative(0);
        PolyQ f3q = F - x_(0) * f2q;
        Monomial x53 = Monomial::var(kP5, 5, 3);
        Rat c5 = f3q.coeff(x53);
        f3q.add_term(x53, -c5);
        rep.fq_scan_done = true;
        for (uint32_t q : primes)
            rep.fq_other_singular.emplace_back(q, count_fq_singular_off_p(f2q, f3q, q));
    }
    bool scans_clean = true;
    for (auto& [q, n] : rep.fq_other_singular)
        if (n != 0) scans_clean = false;
    rep.isolated_evidence = rep.milnor_finite && rep.fq_scan_done && scans_clean;
    return rep;
}

}  // namespace fanolab
