#pragma once

#include <functional>
#include <map>
#include <vector>

#include "fanolab/poly.hpp"

namespace fanolab {

// Row-echelon accumulator for sparse vectors indexed by monomials.
template <class K>
struct MonomialEchelon {
    std::map<Monomial, Poly<K>> pivots;  // leading monomial -> normalized row

    static Monomial leading(const Poly<K>& p) { return p.terms().rbegin()->first; }

    // Fully reduce p against the stored rows; returns the remainder.
    Poly<K> reduce(Poly<K> p) const {
        while (!p.is_zero_poly()) {
            Monomial lead = leading(p);
            auto it = pivots.find(lead);
            if (it == pivots.end()) return p;
            p = p - it->second.scaled(p.coeff(lead));
        }
        return p;
    }

    bool insert(const Poly<K>& row) {
        Poly<K> r = reduce(row);
        if (r.is_zero_poly()) return false;
        K lc = r.coeff(leading(r));
        r = r.scaled(FieldOps<K>::one() / lc);
        pivots.emplace(leading(r), r);
        return true;
    }

    bool contains(const Poly<K>& p) const { return reduce(p).is_zero_poly(); }
    size_t rank() const { return pivots.size(); }
};

inline void enumerate_monomials_up_to(int nvars, int maxdeg,
                                      const std::function<void(const Monomial&)>& fn) {
    Monomial m(nvars);
    std::function<void(int, int)> rec = [&](int var, int remaining) {
        if (var == nvars) {
            fn(m);
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            m.set(var, e);
            rec(var + 1, remaining - e);
        }
        m.set(var, 0);
    };
    rec(0, maxdeg);
}

inline long count_monomials_up_to(int nvars, int maxdeg) {
    // C(maxdeg + nvars, nvars)
    long r = 1;
    for (int i = 1; i <= nvars; ++i) r = r * (maxdeg + i) / i;
    return r;
}

struct MilnorOutcome {
    bool bounded = false;
    long mu = -1;
    int certified_power = -1;  // s with m^s contained in the Jacobian ideal
    int truncation_used = -1;
};

// Milnor number of an isolated hypersurface germ, by exact linear algebra on
// truncated monomial spaces. The quotient dimension at truncation D is a
// lower bound for mu and equals it once every monomial of some degree s <= D
// lies in the span of the truncated Jacobian multiples (Nakayama argument),
// which the routine certifies before reporting a bounded answer.
template <class K>
MilnorOutcome milnor_number(const Poly<K>& germ, long mu_max = 20) {
    const int n = germ.nvars();
    MilnorOutcome out;
    std::vector<Poly<K>> partials;
    std::vector<int> orders;
    for (int i = 0; i < n; ++i) {
        Poly<K> d = germ.derivative(i);
        if (d.is_zero_poly()) continue;
        int ord = d.total_degree();
        for (auto& [m, c] : d.terms()) ord = std::min(ord, m.degree());
        partials.push_back(d);
        orders.push_back(ord);
    }
    if (partials.empty()) return out;  // zero germ: unbounded

    int dmax;
    switch (n) {
        case 0:
        case 1: dmax = 26; break;
        case 2: dmax = 24; break;
        case 3: dmax = 16; break;
        case 4: dmax = 12; break;
        case 5: dmax = 9; break;
        default: dmax = 7; break;
    }

    for (int D = 2; D <= dmax; ++D) {
        MonomialEchelon<K> ech;
        for (size_t g = 0; g < partials.size(); ++g) {
            Poly<K> base = partials[g].truncated(D);
            enumerate_monomials_up_to(n, D - orders[g], [&](const Monomial& m) {
                Poly<K> row(n);
                for (auto& [mm, c] : base.terms()) {
                    Monomial prod = mm * m;
                    if (prod.degree() <= D) row.add_term(prod, c);
                }
                if (!row.is_zero_poly()) ech.insert(row);
            });
        }
        long dim = count_monomials_up_to(n, D) - static_cast<long>(ech.rank());
        if (dim > mu_max) return out;  // exceeds budget: report unbounded

        for (int s = 1; s <= D; ++s) {
            bool all_in = true;
            enumerate_monomials_up_to(n, s, [&](const Monomial& m) {
                if (!all_in || m.degree() != s) return;
                Poly<K> unit = Poly<K>::monomial(n, m, FieldOps<K>::one());
                if (!ech.contains(unit)) all_in = false;
            });
            if (all_in) {
                out.bounded = true;
                out.mu = dim;
                out.certified_power = s;
                out.truncation_used = D;
                return out;
            }
        }
    }
    return out;
}

}  // namespace fanolab
