#pragma once

#include <map>
#include <vector>

#include "fanolab/poly.hpp"

namespace fanolab {

// Solve F_i(z, w) = 0 for the variables z (indices `solve_vars`) as truncated
// power series in the remaining variables, to total degree `order`. Requires
// F(0) = 0 and an invertible constant Jacobian dF/dz(0). The returned series
// live in the same ring with the solved variables absent from their support.
template <class K>
std::vector<Poly<K>> solve_implicit(const std::vector<Poly<K>>& eqs,
                                    const std::vector<int>& solve_vars, int order) {
    const int m = static_cast<int>(eqs.size());
    if (m == 0 || m != static_cast<int>(solve_vars.size()))
        throw std::domain_error("solve_implicit needs as many equations as unknowns");
    const int n = eqs[0].nvars();
    for (auto& f : eqs)
        if (f.nvars() != n) throw std::domain_error("equations live in different rings");
    for (auto& f : eqs)
        if (!is_zero(f.coeff(Monomial(n)))) throw std::domain_error("equations must vanish at the origin");

    Matrix<K> jac(m, std::vector<K>(m, K{}));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) jac[i][j] = eqs[i].coeff(Monomial::var(n, solve_vars[j]));
    auto jinv = matrix_inverse(jac);
    if (!jinv) throw StructureError("implicit-function Jacobian is singular at the origin");

    std::vector<Poly<K>> z(m, Poly<K>(n));
    for (int it = 0; it <= order + 1; ++it) {
        std::map<int, Poly<K>> assign;
        for (int j = 0; j < m; ++j) assign.emplace(solve_vars[j], z[j]);
        std::vector<Poly<K>> resid(m);
        bool all_zero = true;
        for (int i = 0; i < m; ++i) {
            resid[i] = eqs[i].substitute(n, assign, order);
            if (!resid[i].is_zero_poly()) all_zero = false;
        }
        if (all_zero) return z;
        for (int j = 0; j < m; ++j) {
            Poly<K> delta(n);
            for (int i = 0; i < m; ++i)
                if (!is_zero((*jinv)[j][i])) delta = delta + resid[i].scaled((*jinv)[j][i]);
            z[j] = (z[j] - delta).truncated(order);
        }
    }
    throw StructureError("implicit-function iteration failed to stabilize");
}

// Convenience overload for a single equation / single unknown.
template <class K>
Poly<K> solve_implicit_one(const Poly<K>& eq, int solve_var, int order) {
    return solve_implicit<K>({eq}, {solve_var}, order)[0];
}

}  // namespace fanolab
