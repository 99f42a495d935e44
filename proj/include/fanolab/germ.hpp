#pragma once

#include <vector>

#include "fanolab/jets.hpp"
#include "fanolab/poly.hpp"

namespace fanolab {

// Hypersurface germ at the origin: no constant or linear terms.
template <class K>
struct Germ {
    Poly<K> p;

    explicit Germ(const Poly<K>& poly) : p(poly) {
        for (auto& [m, c] : p.terms())
            if (m.degree() < 2) throw std::domain_error("germ must have a critical origin (no constant/linear terms)");
    }
    int nvars() const { return p.nvars(); }
};

template <class K>
int corank(const Germ<K>& g) {
    return g.nvars() - hessian_rank_at_origin(g.p);
}

// Congruence diagonalization of a symmetric matrix: returns P with
// P^T H P = diag(d_1..d_r, 0...). Requires char != 2.
template <class K>
std::pair<Matrix<K>, std::vector<K>> diagonalize_symmetric(Matrix<K> h) {
    const int n = static_cast<int>(h.size());
    const K one = FieldOps<K>::one();
    Matrix<K> p = identity_matrix(n, one);

    auto add_col = [&](Matrix<K>& m, int dst, int src, const K& f) {
        for (int r = 0; r < n; ++r) m[r][dst] += f * m[r][src];
    };
    auto add_row = [&](Matrix<K>& m, int dst, int src, const K& f) {
        for (int c = 0; c < n; ++c) m[dst][c] += f * m[src][c];
    };
    auto swap_col = [&](Matrix<K>& m, int a, int b) {
        for (int r = 0; r < n; ++r) std::swap(m[r][a], m[r][b]);
    };

    std::vector<K> diag;
    int k = 0;
    while (k < n) {
        int piv = -1;
        for (int j = k; j < n; ++j)
            if (!is_zero(h[j][j])) {
                piv = j;
                break;
            }
        if (piv < 0) {
            // look for an off-diagonal entry in the remaining block
            int a = -1, b = -1;
            for (int i = k; i < n && a < 0; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (!is_zero(h[i][j])) {
                        a = i;
                        b = j;
                        break;
                    }
            if (a < 0) break;  // remaining block is zero
            // x_a += x_b makes the (a,a) entry 2*h[a][b] != 0 (char != 2)
            add_row(h, a, b, one);
            add_col(h, a, b, one);
            add_col(p, a, b, one);
            piv = a;
        }
        if (piv != k) {
            swap_col(h, k, piv);
            std::swap(h[k], h[piv]);
            swap_col(p, k, piv);
        }
        K d = h[k][k];
        for (int j = k + 1; j < n; ++j) {
            if (is_zero(h[k][j])) continue;
            K f = -(h[k][j] / d);
            add_row(h, j, k, f);
            add_col(h, j, k, f);
            add_col(p, j, k, f);
        }
        diag.push_back(d);
        ++k;
    }
    return {p, diag};
}

template <class K>
struct MorseSplit {
    Poly<K> residual;      // germ in the corank variables (own small ring)
    int rank = 0;          // number of squares split off
    std::vector<K> diag;   // their diagonal coefficients
};

// Generalized Morse lemma, order by order: after a linear change making the
// quadratic part diagonal, the nondegenerate variables are solved from the
// critical-point equations as jets in the kernel variables; the residual is
// the germ restricted to that critical section, truncated at jet_order.
template <class K>
MorseSplit<K> morse_split(const Germ<K>& g, int jet_order) {
    if (jet_order < 3) throw std::domain_error("morse_split needs jet_order >= 3");
    const int n = g.nvars();
    auto h = hessian_at_origin(g.p);
    auto [pmat, diag] = diagonalize_symmetric<K>(h);
    const int r = static_cast<int>(diag.size());

    MorseSplit<K> out;
    out.rank = r;
    out.diag = diag;
    if (r == 0) {
        out.residual = g.p.truncated(jet_order);
        return out;
    }

    // change coordinates x = P y; quadratic part becomes sum d_i y_i^2
    Poly<K> gp = linear_change(g.p, pmat).truncated(jet_order);

    std::vector<Poly<K>> grads;
    std::vector<int> solve_vars;
    for (int i = 0; i < r; ++i) {
        grads.push_back(gp.derivative(i));
        solve_vars.push_back(i);
    }
    auto psi = solve_implicit<K>(grads, solve_vars, jet_order);

    std::map<int, Poly<K>> assign;
    for (int i = 0; i < r; ++i) assign.emplace(i, psi[i]);
    Poly<K> res = gp.substitute(n, assign, jet_order);

    std::vector<int> keep;
    for (int i = r; i < n; ++i) keep.push_back(i);
    out.residual = res.restrict_vars(keep);
    return out;
}

}  // namespace fanolab
