#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fanolab/germ.hpp"
#include "fanolab/milnor.hpp"

namespace fanolab {

enum class SingKind { Smooth, A, D, E6, E7, E8, NonSimpleOrUnknown };

struct SingularityType {
    SingKind kind = SingKind::NonSimpleOrUnknown;
    int index = 0;  // k for A_k / D_k; 6/7/8 for E
    int corank = -1;
    std::optional<std::vector<Rat>> weights;
    std::optional<long> milnor;
    int jet_order = 0;

    static SingularityType simple(SingKind kind, int index) {
        SingularityType t;
        t.kind = kind;
        t.index = index;
        return t;
    }
    static SingularityType A(int k) { return simple(SingKind::A, k); }
    static SingularityType D(int k) { return simple(SingKind::D, k); }
    static SingularityType E(int k) {
        return simple(k == 6 ? SingKind::E6 : k == 7 ? SingKind::E7 : SingKind::E8, k);
    }

    bool is_simple() const {
        return kind == SingKind::A || kind == SingKind::D || kind == SingKind::E6 ||
               kind == SingKind::E7 || kind == SingKind::E8;
    }
    long expected_milnor() const { return index; }

    std::string name() const {
        switch (kind) {
            case SingKind::Smooth: return "Smooth";
            case SingKind::A: return "A" + std::to_string(index);
            case SingKind::D: return "D" + std::to_string(index);
            case SingKind::E6: return "E6";
            case SingKind::E7: return "E7";
            case SingKind::E8: return "E8";
            default: return "NonSimpleOrUnknown";
        }
    }

    friend bool operator==(const SingularityType& a, const SingularityType& b) {
        return a.kind == b.kind && (!a.is_simple() || a.index == b.index);
    }
    friend bool operator!=(const SingularityType& a, const SingularityType& b) { return !(a == b); }
};

inline SingularityType parse_type_name(const std::string& s) {
    if (s == "Smooth") return SingularityType::simple(SingKind::Smooth, 0);
    if (s == "E6") return SingularityType::E(6);
    if (s == "E7") return SingularityType::E(7);
    if (s == "E8") return SingularityType::E(8);
    if (s.size() >= 2 && (s[0] == 'A' || s[0] == 'D')) {
        int k = std::stoi(s.substr(1));
        return s[0] == 'A' ? SingularityType::A(k) : SingularityType::D(k);
    }
    return SingularityType{};
}

// Wall's T -> T-hat table for the singularities of the surface Sigma.
inline std::vector<SingularityType> wall_table(const SingularityType& t) {
    if (!t.is_simple()) throw std::domain_error("wall_table needs a simple singularity type");
    switch (t.kind) {
        case SingKind::A:
            if (t.index <= 2) return {};
            return {SingularityType::A(t.index - 2)};
        case SingKind::D:
            if (t.index == 4) return {SingularityType::A(1), SingularityType::A(1), SingularityType::A(1)};
            return {SingularityType::A(1), SingularityType::D(t.index - 2)};
        case SingKind::E6: return {SingularityType::A(5)};
        case SingKind::E7: return {SingularityType::D(6)};
        case SingKind::E8: return {SingularityType::E(7)};
        default: throw std::domain_error("wall_table needs a simple singularity type");
    }
}

namespace detail {

// ---- binary forms (homogeneous in 2 variables) -----------------------------

template <class K>
std::vector<K> binary_coeffs(const Poly<K>& form, int deg) {
    std::vector<K> c(deg + 1, K{});
    for (auto& [m, k] : form.terms()) c[m[1]] = k;  // coefficient of x^(deg-i) y^i
    return c;
}

template <class K>
K binary_cubic_disc(const std::vector<K>& c) {
    const K &a = c[0], &b = c[1], &cc = c[2], &d = c[3];
    auto i = [](long v) { return FieldOps<K>::from_int(v); };
    return i(18) * a * b * cc * d - i(4) * b * b * b * d + b * b * cc * cc - i(4) * a * cc * cc * cc -
           i(27) * a * a * d * d;
}

template <class K>
std::vector<K> poly_trim(std::vector<K> v) {
    while (!v.empty() && is_zero(v.back())) v.pop_back();
    return v;
}

// univariate gcd, monic; coefficient vectors are low-degree-first
template <class K>
std::vector<K> univariate_gcd(std::vector<K> a, std::vector<K> b) {
    a = poly_trim(std::move(a));
    b = poly_trim(std::move(b));
    while (!b.empty()) {
        // a mod b
        while (a.size() >= b.size() && !a.empty()) {
            K f = a.back() / b.back();
            size_t shift = a.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
            a = poly_trim(std::move(a));
        }
        std::swap(a, b);
    }
    if (!a.empty()) {
        K lead = a.back();
        for (auto& x : a) x = x / lead;
    }
    return a;
}

// gcd of two binary forms; returns (multiplicity of the factor y, univariate
// gcd in t = x/y of the y-free parts, total degree of the form gcd)
template <class K>
struct FormGcd {
    int y_mult = 0;
    std::vector<K> t_part;  // monic, low-first, in t
    int degree() const { return y_mult + (t_part.empty() ? 0 : static_cast<int>(t_part.size()) - 1); }
};

template <class K>
FormGcd<K> binary_form_gcd(const std::vector<K>& a, const std::vector<K>& b) {
    // a_i is the coefficient of x^(da-i) y^i; substitute y=1: poly in x of
    // degree da - (y-multiplicity). y^m | A iff a_0..: the pure-x coefficient
    // a_0 corresponds to x^da; y divides A iff a_0 = 0.
    auto split = [](const std::vector<K>& c) {
        int m = 0;
        while (m < static_cast<int>(c.size()) && is_zero(c[m])) ++m;  // leading x-powers absent
        // c[i] coeff of x^(d-i) y^i; A = y^m * sum_{i>=m} c_i x^(d-i) y^(i-m)
        // dehomogenized in t = x (y = 1): poly with low-first coefficients reversed
        std::vector<K> t;
        for (int i = static_cast<int>(c.size()) - 1; i >= m; --i) t.push_back(c[i]);
        return std::make_pair(m, poly_trim(std::move(t)));
    };
    auto [ma, ta] = split(a);
    auto [mb, tb] = split(b);
    FormGcd<K> g;
    g.y_mult = std::min(ma, mb);
    g.t_part = univariate_gcd(ta, tb);
    return g;
}

// Given a linear form l = u*x + v*y (u, v not both 0), return a linear change
// (x, y) -> (X, Y) with l = X in the new coordinates; applied to a polynomial.
template <class K>
Poly<K> change_to_make_form_first(const Poly<K>& p, const K& u, const K& v) {
    // choose m independent of l, then solve [l; m] (X,Y)^T = ... substitution:
    // x = A^{-1} (X,Y) with A = [[u, v], [m0, m1]]
    K m0 = K{}, m1 = K{};
    if (!is_zero(u))
        m1 = FieldOps<K>::one();
    else
        m0 = FieldOps<K>::one();
    Matrix<K> a = {{u, v}, {m0, m1}};
    auto inv = matrix_inverse(a);
    if (!inv) throw StructureError("degenerate linear form normalization");
    return linear_change(p, *inv);
}

// order of a univariate-in-y polynomial collected from a 2-var poly's x-free part
template <class K>
int order_in_y(const Poly<K>& p) {
    int ord = -1;
    for (auto& [m, c] : p.terms())
        if (ord < 0 || m[1] < ord) ord = m[1];
    return ord;  // -1 for zero
}

}  // namespace detail

// Forward declarations of the stage handlers so classify stays readable.
template <class K>
SingularityType classify(const Germ<K>& g, int jet_order = 8);

namespace detail {

template <class K>
std::optional<long> cross_check_mu(const Poly<K>& germ, long expected) {
    MilnorOutcome mo = milnor_number(germ, std::max<long>(expected + 2, 20));
    if (!mo.bounded) return std::nullopt;
    return mo.mu;
}

// A-series: corank one residual must be c * t^(k+1) + higher.
template <class K>
SingularityType classify_corank1(const Poly<K>& residual, int jet_order) {
    SingularityType out;
    if (residual.is_zero_poly()) return out;  // jet order insufficient or non-isolated
    int ord = residual.total_degree();
    for (auto& [m, c] : residual.terms()) ord = std::min(ord, m.degree());
    if (ord < 3) throw StructureError("corank-1 residual with quadratic part");
    SingularityType t = SingularityType::A(ord - 1);
    t.weights = std::vector<Rat>{Rat(1, ord)};
    return t;
}

// D- and E-series recognition on a 2-variable residual with zero 2-jet.
template <class K>
SingularityType classify_corank2(Poly<K> h, int jet_order) {
    SingularityType unknown;
    Poly<K> cubic(2);
    for (auto& [m, c] : h.terms())
        if (m.degree() == 3) cubic.add_term(m, c);
    if (cubic.is_zero_poly()) return unknown;  // 3-jet zero: not simple

    auto c3 = binary_coeffs(cubic, 3);
    K disc = binary_cubic_disc(c3);
    if (!is_zero(disc)) {
        SingularityType t = SingularityType::D(4);
        t.weights = std::vector<Rat>{Rat(1, 3), Rat(1, 3)};
        return t;
    }

    // repeated factor l of the cubic = gcd of its partials
    auto dx = binary_coeffs(cubic.derivative(0), 2);
    auto dy = binary_coeffs(cubic.derivative(1), 2);
    FormGcd<K> g = binary_form_gcd(dx, dy);
    int gdeg = g.degree();
    if (gdeg == 1) {
        // double line: D_k series. Normalize l -> x.
        K u, v;
        if (g.y_mult == 1) {
            u = K{};
            v = FieldOps<K>::one();
        } else {
            // t_part = (c0, c1) monic: l = x + c0 y... t_part low-first: c0 + t
            u = FieldOps<K>::one();
            v = g.t_part[0];
        }
        Poly<K> w = change_to_make_form_first(h, u, v);
        // cubic part is now X^2 * (e X + f Y); shear Y' = e X + f Y
        Poly<K> wc(2);
        for (auto& [m, c] : w.terms())
            if (m.degree() == 3) wc.add_term(m, c);
        K e = wc.coeff(Monomial::var(2, 0, 3));
        Monomial x2y(2);
        x2y.set(0, 2);
        x2y.set(1, 1);
        K f = wc.coeff(x2y);
        if (is_zero(f)) return unknown;  // would be a triple line; inconsistent
        // substitution realizing Y' = eX + fY: X = X, Y = (Y' - e X)/f
        Matrix<K> m2 = {{FieldOps<K>::one(), K{}}, {-(e / f), FieldOps<K>::one() / f}};
        w = linear_change(w, m2);

        // now cubic part is exactly X^2 Y; normalize the x^2-coefficient to y
        // by the substitution y := alpha(x, y), iterated to jet order
        for (int pass = 0; pass <= jet_order; ++pass) {
            Poly<K> alpha(2);  // f = x^2*alpha + x*beta(y) + gamma(y)
            for (auto& [m, c] : w.terms()) {
                if (m[0] >= 2) {
                    Monomial mm(2);
                    mm.set(0, m[0] - 2);
                    mm.set(1, m[1]);
                    alpha.add_term(mm, c);
                }
            }
            Poly<K> dev = alpha - Poly<K>::variable(2, 1, FieldOps<K>::one());
            if (dev.is_zero_poly()) break;
            if (pass == jet_order) return unknown;
            // w(x, y) with y = psi(x, Y) inverting alpha(x, y) = Y:
            // solve alpha(x,y) - Y = 0 for y in the ring (x, y, Y)
            Poly<K> a3 = alpha.embed_vars(3, {0, 1});
            Poly<K> eq = a3 - Poly<K>::variable(3, 2, FieldOps<K>::one());
            Poly<K> psi = solve_implicit_one(eq, 1, jet_order);
            Poly<K> w3 = w.embed_vars(3, {0, 1});
            std::map<int, Poly<K>> assign{{1, psi}};
            w3 = w3.substitute(3, assign, jet_order);
            w = w3.restrict_vars({0, 2});
        }

        // kill the x-linear part: x^2 y + x b(y) + c(y) = x'^2 y + c(y) - b^2/(4y)
        Poly<K> beta(2), gamma(2);
        for (auto& [m, c] : w.terms()) {
            if (m[0] == 1) {
                Monomial mm(2);
                mm.set(1, m[1]);
                beta.add_term(mm, c);
            } else if (m[0] == 0) {
                gamma.add_term(m, c);
            }
        }
        Poly<K> correction(2);
        if (!beta.is_zero_poly()) {
            Poly<K> b_over_y = beta.divide_by_var(1, 1);
            correction = (b_over_y * beta).scaled(FieldOps<K>::one() / FieldOps<K>::from_int(4));
        }
        Poly<K> gtil = (gamma - correction).truncated(jet_order);
        int ord = order_in_y(gtil);
        if (ord < 0 || ord >= jet_order) return unknown;
        if (ord < 4) throw StructureError("D-series residual of unexpected order");
        SingularityType t = SingularityType::D(ord + 1);
        t.weights = std::vector<Rat>{Rat(ord - 1, 2 * ord), Rat(1, ord)};
        return t;
    }
    if (gdeg == 2) {
        // triple line: E-series. Extract l from the perfect-square gcd.
        K u, v;
        if (g.y_mult == 2) {
            u = K{};
            v = FieldOps<K>::one();
        } else if (g.y_mult == 1) {
            return unknown;  // gcd = y * (x + c): two distinct lines, impossible here
        } else {
            // t_part = c0 + c1 t + t^2, perfect square iff c1^2 = 4 c0
            K c0 = g.t_part[0], c1 = g.t_part[1];
            if (c1 * c1 != FieldOps<K>::from_int(4) * c0) return unknown;
            u = FieldOps<K>::one();
            v = c1 / FieldOps<K>::from_int(2);
        }
        Poly<K> w = change_to_make_form_first(h, u, v);
        Poly<K> wc(2);
        for (auto& [m, c] : w.terms())
            if (m.degree() == 3) wc.add_term(m, c);
        K e = wc.coeff(Monomial::var(2, 0, 3));
        if (is_zero(e) || wc.term_count() != 1) return unknown;  // not an exact triple line

        // Tschirnhaus: remove x^2 y^j terms bottom-up
        for (int pass = 0; pass <= jet_order + 2; ++pass) {
            Poly<K> a(2);
            for (auto& [m, c] : w.terms())
                if (m[0] == 2) {
                    Monomial mm(2);
                    mm.set(1, m[1]);
                    a.add_term(mm, c);
                }
            if (a.is_zero_poly()) break;
            if (pass == jet_order + 2) return unknown;
            int j = order_in_y(a);
            Monomial yj(2);
            yj.set(1, j);
            K cj = a.coeff(yj);
            // x -> x - (cj / 3e) y^j
            Poly<K> img = Poly<K>::variable(2, 0, FieldOps<K>::one());
            img.add_term(yj, -(cj / (FieldOps<K>::from_int(3) * e)));
            std::map<int, Poly<K>> assign{{0, img}};
            w = w.substitute(2, assign, jet_order);
        }

        Poly<K> b(2), cfree(2);
        for (auto& [m, c] : w.terms()) {
            if (m[0] == 1) {
                Monomial mm(2);
                mm.set(1, m[1]);
                b.add_term(mm, c);
            } else if (m[0] == 0) {
                cfree.add_term(m, c);
            }
        }
        int ob = order_in_y(b);
        int oc = order_in_y(cfree);
        if (oc == 4) {
            SingularityType t = SingularityType::E(6);
            t.weights = std::vector<Rat>{Rat(1, 3), Rat(1, 4)};
            return t;
        }
        if (ob == 3) {
            SingularityType t = SingularityType::E(7);
            t.weights = std::vector<Rat>{Rat(1, 3), Rat(2, 9)};
            return t;
        }
        if (oc == 5) {
            SingularityType t = SingularityType::E(8);
            t.weights = std::vector<Rat>{Rat(1, 3), Rat(1, 5)};
            return t;
        }
        return unknown;  // J_10 and beyond: not simple
    }
    return unknown;
}

}  // namespace detail

// ADE classification via corank, jet-order Morse splitting and SQH weight
// recognition, cross-checked against the Milnor oracle. Never returns a wrong
// simple type: any ambiguity or mismatch yields NonSimpleOrUnknown.
template <class K>
SingularityType classify(const Germ<K>& g, int jet_order) {
    SingularityType out;
    out.jet_order = jet_order;
    const int c = corank(g);
    out.corank = c;

    SingularityType rec;
    if (c == 0) {
        rec = SingularityType::A(1);
        rec.weights = std::vector<Rat>{};
    } else if (c <= 2) {
        auto split = morse_split(g, jet_order);
        rec = (c == 1) ? detail::classify_corank1(split.residual, jet_order)
                       : detail::classify_corank2(split.residual, jet_order);
    } else {
        return out;  // corank >= 3: not simple
    }
    if (!rec.is_simple()) return out;

    auto mu = detail::cross_check_mu(g.p, rec.expected_milnor());
    if (!mu || *mu != rec.expected_milnor()) return out;  // never guess

    rec.corank = c;
    rec.jet_order = jet_order;
    rec.milnor = *mu;
    return rec;
}

}  // namespace fanolab
