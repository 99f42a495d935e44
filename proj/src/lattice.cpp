#include "fanolab/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace fanolab {

namespace {

IntMatrix identity(int n) {
    IntMatrix m(n, std::vector<Int>(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b) {
    int n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
    IntMatrix r(n, std::vector<Int>(m, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < (int)m; ++j)
            for (int t = 0; t < k; ++t) r[i][j] += a[i][t] * b[t][j];
    return r;
}

IntMatrix transpose(const IntMatrix& a) {
    int n = a.size(), m = n ? a[0].size() : 0;
    IntMatrix r(m, std::vector<Int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) r[j][i] = a[i][j];
    return r;
}

}  // namespace

IntegralLattice::IntegralLattice(IntMatrix g, std::vector<std::string> base_labels)
    : gram(std::move(g)), labels(std::move(base_labels)) {
    const int n = gram.size();
    if (labels.empty()) {
        for (int i = 0; i < n; ++i) labels.push_back("e" + std::to_string(i + 1));
    }
    if (static_cast<int>(labels.size()) != n) throw std::domain_error("label count must match rank");
    for (const auto& row : gram)
        if (static_cast<int>(row.size()) != n) throw std::domain_error("gram matrix must be square");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (gram[i][j] != gram[j][i]) throw std::domain_error("gram matrix must be symmetric");
    if (n > 0 && determinant() == 0) throw std::domain_error("degenerate lattice rejected");
}

Int IntegralLattice::determinant() const { return int_matrix_det(gram); }

// fraction-free Bareiss elimination
Int int_matrix_det(IntMatrix m) {
    const int n = m.size();
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m[k][k] == 0) {
            int piv = -1;
            for (int r = k + 1; r < n; ++r)
                if (m[r][k] != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) return 0;
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

Isometry::Isometry(const IntegralLattice& lattice, IntMatrix m) : matrix(std::move(m)) {
    const int n = lattice.rank();
    if (static_cast<int>(matrix.size()) != n) throw std::domain_error("isometry size mismatch");
    for (const auto& row : matrix)
        if (static_cast<int>(row.size()) != n) throw std::domain_error("isometry must be square");
    IntMatrix gtg = mat_mul(mat_mul(transpose(matrix), lattice.gram), matrix);
    if (gtg != lattice.gram) throw std::domain_error("matrix does not preserve the gram form");
}

int Isometry::order(int cap) const {
    const int n = matrix.size();
    IntMatrix p = matrix;
    IntMatrix id = identity(n);
    for (int k = 1; k <= cap; ++k) {
        if (p == id) return k;
        p = mat_mul(p, matrix);
    }
    throw std::domain_error("isometry has no finite order within the cap");
}

IntegralLattice lattice_A(int n) {
    if (n < 1) throw std::domain_error("A_n needs n >= 1");
    IntMatrix g(n, std::vector<Int>(n, 0));
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) {
        g[i][i] = 2;
        if (i + 1 < n) g[i][i + 1] = g[i + 1][i] = -1;
        labels.push_back("a" + std::to_string(i + 1));
    }
    return IntegralLattice(g, labels);
}

IntegralLattice lattice_D(int n) {
    if (n < 4) throw std::domain_error("D_n needs n >= 4");
    IntMatrix g(n, std::vector<Int>(n, 0));
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) {
        g[i][i] = 2;
        labels.push_back("d" + std::to_string(i + 1));
    }
    // path on nodes 0..n-2, extra node n-1 attached to node n-3
    for (int i = 0; i + 1 < n - 1; ++i) g[i][i + 1] = g[i + 1][i] = -1;
    g[n - 3][n - 1] = g[n - 1][n - 3] = -1;
    return IntegralLattice(g, labels);
}

IntegralLattice lattice_E(int n) {
    if (n < 6 || n > 8) throw std::domain_error("E_n needs n in {6,7,8}");
    IntMatrix g(n, std::vector<Int>(n, 0));
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) {
        g[i][i] = 2;
        labels.push_back("e" + std::to_string(i + 1));
    }
    // path on nodes 0..n-2, branch node n-1 attached to node 2
    for (int i = 0; i + 1 < n - 1; ++i) g[i][i + 1] = g[i + 1][i] = -1;
    g[2][n - 1] = g[n - 1][2] = -1;
    return IntegralLattice(g, labels);
}

IntegralLattice lattice_rank1(long k) {
    if (k == 0) throw std::domain_error("rank-1 lattice needs a nonzero norm");
    return IntegralLattice({{Int(k)}}, {"v"});
}

IntegralLattice lattice_U() { return IntegralLattice({{0, 1}, {1, 0}}, {"u1", "u2"}); }

IntegralLattice twist(const IntegralLattice& l, long m) {
    if (m == 0) throw std::domain_error("twist by zero is degenerate");
    IntMatrix g = l.gram;
    for (auto& row : g)
        for (auto& x : row) x *= m;
    return IntegralLattice(g, l.labels);
}

IntegralLattice direct_sum(const IntegralLattice& a, const IntegralLattice& b) {
    const int n = a.rank(), m = b.rank();
    IntMatrix g(n + m, std::vector<Int>(n + m, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g[i][j] = a.gram[i][j];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) g[n + i][n + j] = b.gram[i][j];
    std::vector<std::string> labels = a.labels;
    for (auto& s : b.labels) labels.push_back(s + "'");
    return IntegralLattice(g, labels);
}

namespace {

// Smith reduction, optionally tracking the right transform V (m = U D V).
std::vector<Int> snf_impl(IntMatrix m, IntMatrix* v_out) {
    const int rows = m.size();
    const int cols = rows ? m[0].size() : 0;
    IntMatrix v = identity(cols);

    int t = 0;
    const int steps = std::min(rows, cols);
    while (t < steps) {
        // pivot: minimal nonzero absolute value in the trailing block
        int pi = -1, pj = -1;
        Int best = 0;
        for (int i = t; i < rows; ++i)
            for (int j = t; j < cols; ++j) {
                if (m[i][j] == 0) continue;
                Int a = abs(m[i][j]);
                if (pi < 0 || a < best) {
                    best = a;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break;
        std::swap(m[t], m[pi]);
        if (pj != t) {
            for (int i = 0; i < rows; ++i) std::swap(m[i][t], m[i][pj]);
            std::swap(v[pj], v[t]);
        }
        bool clean = true;
        for (int i = t + 1; i < rows; ++i) {
            if (m[i][t] == 0) continue;
            Int q = m[i][t] / m[t][t];
            if (q != 0)
                for (int j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
            if (m[i][t] != 0) clean = false;
        }
        for (int j = t + 1; j < cols; ++j) {
            if (m[t][j] == 0) continue;
            Int q = m[t][j] / m[t][t];
            if (q != 0)
                for (int i = 0; i < rows; ++i) m[i][j] -= q * m[i][t];
            if (q != 0)
                for (int c = 0; c < cols; ++c) v[j][c] -= q * v[t][c];
            if (m[t][j] != 0) clean = false;
        }
        if (!clean) continue;  // smaller remainders appeared; re-pivot this block
        ++t;
    }

    // enforce the divisibility chain d1 | d2 | ...
    std::vector<Int> d;
    for (int i = 0; i < steps; ++i) d.push_back(abs(m[i][i]));
    for (bool changed = true; changed;) {
        changed = false;
        for (size_t i = 0; i + 1 < d.size(); ++i) {
            if (d[i] == 0 && d[i + 1] != 0) {
                std::swap(d[i], d[i + 1]);
                changed = true;
                continue;
            }
            if (d[i] != 0 && d[i + 1] % d[i] != 0) {
                Int g = gcd(d[i], d[i + 1]);
                Int l = d[i] / g * d[i + 1];
                d[i] = g;
                d[i + 1] = l;
                changed = true;
            }
        }
    }
    if (v_out) *v_out = v;
    return d;
}

}  // namespace

std::vector<Int> smith_normal_form(IntMatrix m) { return snf_impl(std::move(m), nullptr); }

std::vector<Int> discriminant_group(const IntegralLattice& l) {
    auto d = smith_normal_form(l.gram);
    std::vector<Int> factors;
    for (auto& x : d)
        if (x != 0 && x != 1) factors.push_back(x);
    return factors;
}

IntMatrix integer_kernel(const IntMatrix& m, int cols) {
    const int rows = m.size();
    if (rows == 0) return identity(cols);
    if (cols != static_cast<int>(m[0].size())) throw std::domain_error("kernel column count mismatch");

    // Track the right transform V of the Smith reduction (as V^T rows); the
    // columns of V whose image under m vanishes form a basis of the kernel,
    // and a kernel basis extracted from a unimodular V is saturated.
    IntMatrix v_track;
    IntMatrix copy = m;
    snf_impl(copy, &v_track);
    std::vector<std::vector<Int>> basis_cols;
    for (int j = 0; j < cols; ++j) {
        const std::vector<Int>& col = v_track[j];
        bool zero = true;
        for (int i = 0; i < rows && zero; ++i) {
            Int acc = 0;
            for (int k = 0; k < cols; ++k) acc += m[i][k] * col[k];
            if (acc != 0) zero = false;
        }
        if (zero) basis_cols.push_back(col);
    }
    IntMatrix out(cols, std::vector<Int>(basis_cols.size()));
    for (size_t j = 0; j < basis_cols.size(); ++j)
        for (int i = 0; i < cols; ++i) out[i][j] = basis_cols[j][i];
    return out;
}

InvariantSplit invariant_sublattice(const IntegralLattice& l, const Isometry& g) {
    const int n = l.rank();
    g.order();  // validates finite order
    IntMatrix gmi = g.matrix;
    for (int i = 0; i < n; ++i) gmi[i][i] -= 1;
    IntMatrix inv_basis = integer_kernel(gmi, n);  // n x r

    // coinvariant = saturated orthogonal complement of the invariant part
    IntMatrix bt_g = mat_mul(transpose(inv_basis), l.gram);  // r x n
    IntMatrix coinv_basis = integer_kernel(bt_g, n);

    auto name_sublattice = [&](const IntMatrix& basis, const std::string& prefix) {
        int r = basis.empty() ? 0 : basis[0].size();
        if (r == 0) return IntegralLattice(IntMatrix{}, std::vector<std::string>{});
        std::vector<std::string> labels;
        for (int i = 0; i < r; ++i) labels.push_back(prefix + std::to_string(i + 1));
        IntMatrix gram = mat_mul(transpose(basis), mat_mul(l.gram, basis));
        return IntegralLattice(gram, labels);
    };

    return InvariantSplit{name_sublattice(inv_basis, "f"), name_sublattice(coinv_basis, "c"),
                          inv_basis, coinv_basis};
}

LatticeTableRow verify_paper_table(int i) {
    if (i < 2 || i > 4) throw std::domain_error("table rows exist for i in {2,3,4}");
    auto six = lattice_rank1(6);
    IntegralLattice t = i == 2 ? direct_sum(six, lattice_A(2))
                                : direct_sum(six, lattice_E(i == 3 ? 6 : 8));
    IntegralLattice r = i == 2 ? direct_sum(six, lattice_D(4))
                                : direct_sum(six, lattice_E(i == 3 ? 6 : 8));
    LatticeTableRow row;
    row.i = i;
    row.rank_T = t.rank();
    row.rank_R = r.rank();
    row.det_T = t.determinant();
    row.det_R = r.determinant();
    row.disc_T = discriminant_group(t);
    row.disc_R = discriminant_group(r);
    row.rank_compatible = row.rank_T <= row.rank_R;
    row.det_T_neg = twist(t, -1).determinant();
    row.det_R_neg = twist(r, -1).determinant();
    return row;
}

}  // namespace fanolab
