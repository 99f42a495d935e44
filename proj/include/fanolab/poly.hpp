#pragma once

#include <map>
#include <optional>
#include <vector>

#include "fanolab/errors.hpp"
#include "fanolab/fields.hpp"
#include "fanolab/monomial.hpp"

namespace fanolab {

// Sparse exact multivariate polynomial over a field K. Immutable in spirit:
// all operations return fresh values, stored zero coefficients are erased
// eagerly, so equality is term-map equality.
template <class K>
class Poly {
  public:
    using Terms = std::map<Monomial, K>;

    Poly() : nvars_(0) {}
    explicit Poly(int nvars) : nvars_(nvars) {
        if (nvars < 0 || nvars > Monomial::kMaxVars) throw std::domain_error("unsupported variable count");
    }

    static Poly zero(int nvars) { return Poly(nvars); }
    static Poly constant(int nvars, const K& c) {
        Poly p(nvars);
        if (!is_zero(c)) p.terms_.emplace(Monomial(nvars), c);
        return p;
    }
    static Poly variable(int nvars, int i, const K& coeff) {
        Poly p(nvars);
        if (i < 0 || i >= nvars) throw std::domain_error("variable index out of range");
        if (!is_zero(coeff)) p.terms_.emplace(Monomial::var(nvars, i), coeff);
        return p;
    }
    static Poly monomial(int nvars, const Monomial& m, const K& coeff) {
        Poly p(nvars);
        if (m.arity() != nvars) throw std::domain_error("monomial arity mismatch");
        if (!is_zero(coeff)) p.terms_.emplace(m, coeff);
        return p;
    }

    int nvars() const { return nvars_; }
    const Terms& terms() const { return terms_; }
    bool is_zero_poly() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    int total_degree() const {
        int d = -1;
        for (auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;  // -1 for the zero polynomial
    }

    K coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        if (it == terms_.end()) return K{};
        return it->second;
    }

    void add_term(const Monomial& m, const K& c) {
        if (m.arity() != nvars_) throw std::domain_error("monomial arity mismatch");
        if (is_zero(c)) return;
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (is_zero(it->second)) terms_.erase(it);
        }
    }

    static void check_same_ring(const Poly& a, const Poly& b) {
        if (a.nvars_ != b.nvars_) throw std::domain_error("polynomial ring arity mismatch");
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        check_same_ring(a, b);
        Poly r = a;
        for (auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        check_same_ring(a, b);
        Poly r = a;
        for (auto& [m, c] : b.terms_) r.add_term(m, -c);
        return r;
    }
    Poly operator-() const {
        Poly r(nvars_);
        for (auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        check_same_ring(a, b);
        Poly r(a.nvars_);
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    Poly scaled(const K& c) const {
        Poly r(nvars_);
        if (is_zero(c)) return r;
        for (auto& [m, k] : terms_) r.terms_.emplace(m, k * c);
        return r;
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.nvars_ == b.nvars_ && a.terms_ == b.terms_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    // Drop every term of total degree > maxdeg.
    Poly truncated(int maxdeg) const {
        Poly r(nvars_);
        for (auto& [m, c] : terms_)
            if (m.degree() <= maxdeg) r.terms_.emplace(m, c);
        return r;
    }

    static Poly mul_trunc(const Poly& a, const Poly& b, int maxdeg) {
        check_same_ring(a, b);
        Poly r(a.nvars_);
        for (auto& [ma, ca] : a.terms_) {
            int da = ma.degree();
            if (da > maxdeg) continue;
            for (auto& [mb, cb] : b.terms_) {
                if (da + mb.degree() > maxdeg) continue;
                r.add_term(ma * mb, ca * cb);
            }
        }
        return r;
    }

    Poly pow(int k) const {
        if (k < 0) throw std::domain_error("negative power");
        Poly r = constant(nvars_, FieldOps<K>::one());
        Poly base = *this;
        while (k > 0) {
            if (k & 1) r = r * base;
            base = base * base;
            k >>= 1;
        }
        return r;
    }

    // Substitution into a (possibly different) target ring. Variables without
    // an assignment map to the same index of the target ring. Truncation at
    // maxdeg < 0 means exact.
    Poly substitute(int target_nvars, const std::map<int, Poly>& assign, int maxdeg = -1) const {
        std::vector<const Poly*> images(nvars_, nullptr);
        for (auto& [i, q] : assign) {
            if (i < 0 || i >= nvars_) throw std::domain_error("assignment to unknown variable");
            if (q.nvars() != target_nvars) throw std::domain_error("assigned polynomial lives in the wrong ring");
            images[i] = &q;
        }
        for (int i = 0; i < nvars_; ++i)
            if (!images[i] && i >= target_nvars)
                throw std::domain_error("unassigned variable does not exist in target ring");

        // per-variable power cache
        std::vector<std::vector<Poly>> powers(nvars_);
        auto power_of = [&](int i, int e) -> const Poly& {
            auto& cache = powers[i];
            if (cache.empty()) {
                cache.push_back(Poly::constant(target_nvars, FieldOps<K>::one()));
                if (images[i])
                    cache.push_back(maxdeg >= 0 ? images[i]->truncated(maxdeg) : *images[i]);
                else
                    cache.push_back(Poly::variable(target_nvars, i, FieldOps<K>::one()));
            }
            while (static_cast<int>(cache.size()) <= e) {
                const Poly& prev = cache.back();
                cache.push_back(maxdeg >= 0 ? mul_trunc(prev, cache[1], maxdeg) : prev * cache[1]);
            }
            return cache[e];
        };

        Poly out(target_nvars);
        for (auto& [m, c] : terms_) {
            Poly t = Poly::constant(target_nvars, c);
            for (int i = 0; i < nvars_ && !t.is_zero_poly(); ++i) {
                if (m[i] == 0) continue;
                t = maxdeg >= 0 ? mul_trunc(t, power_of(i, m[i]), maxdeg) : t * power_of(i, m[i]);
            }
            out = out + t;
        }
        return out;
    }

    K evaluate(const std::vector<K>& point) const {
        if (static_cast<int>(point.size()) != nvars_) throw std::domain_error("evaluation point arity mismatch");
        K acc{};
        for (auto& [m, c] : terms_) {
            K t = c;
            for (int i = 0; i < nvars_; ++i)
                for (int j = 0; j < m[i]; ++j) t = t * point[i];
            acc += t;
        }
        return acc;
    }

    Poly derivative(int var) const {
        if (var < 0 || var >= nvars_) throw std::domain_error("variable index out of range");
        Poly r(nvars_);
        for (auto& [m, c] : terms_) {
            int e = m[var];
            if (e == 0) continue;
            Monomial d = m;
            d.set(var, e - 1);
            r.add_term(d, c * scalar_from_int(c, e));
        }
        return r;
    }

    bool is_homogeneous(int* deg_out = nullptr) const {
        int d = -1;
        for (auto& [m, c] : terms_) {
            if (d < 0)
                d = m.degree();
            else if (m.degree() != d)
                return false;
        }
        if (deg_out) *deg_out = d;
        return true;
    }

    // Degree in a subset of the variables.
    int degree_in(const std::vector<int>& vars) const {
        int d = -1;
        for (auto& [m, c] : terms_) {
            int s = 0;
            for (int v : vars) s += m[v];
            d = std::max(d, s);
        }
        return d;
    }

    // Terms whose degree in `group_one` is exactly i and whose degree in the
    // complementary variables is exactly j.
    Poly bigraded_component(const std::vector<bool>& group_one, int i, int j) const {
        if (static_cast<int>(group_one.size()) != nvars_) throw std::domain_error("group mask arity mismatch");
        if (i < 0 || j < 0) throw std::domain_error("bigraded degrees must be non-negative");
        Poly r(nvars_);
        for (auto& [m, c] : terms_) {
            int d1 = 0, d2 = 0;
            for (int v = 0; v < nvars_; ++v) (group_one[v] ? d1 : d2) += m[v];
            if (d1 == i && d2 == j) r.terms_.emplace(m, c);
        }
        return r;
    }

    // Exact division by var^mult; throws StructureError when a term is not
    // divisible.
    Poly divide_by_var(int var, int mult) const {
        Poly r(nvars_);
        for (auto& [m, c] : terms_) {
            if (m[var] < mult)
                throw StructureError("division by variable power leaves a remainder");
            Monomial d = m;
            d.set(var, m[var] - mult);
            r.terms_.emplace(d, c);
        }
        return r;
    }

    // Restrict to a sub-ring: keep_vars[i] is the old index carried to new
    // index i; every dropped variable must be absent from the support.
    Poly restrict_vars(const std::vector<int>& keep_vars) const {
        int k = static_cast<int>(keep_vars.size());
        std::vector<int> where(nvars_, -1);
        for (int i = 0; i < k; ++i) where[keep_vars[i]] = i;
        Poly r(k);
        for (auto& [m, c] : terms_) {
            Monomial mm(k);
            for (int v = 0; v < nvars_; ++v) {
                if (m[v] == 0) continue;
                if (where[v] < 0) throw std::domain_error("polynomial involves a dropped variable");
                mm.set(where[v], m[v]);
            }
            r.add_term(mm, c);
        }
        return r;
    }

    // Embed into a larger ring: new index of old variable i is embed[i].
    Poly embed_vars(int target_nvars, const std::vector<int>& embed) const {
        if (static_cast<int>(embed.size()) != nvars_) throw std::domain_error("embedding arity mismatch");
        Poly r(target_nvars);
        for (auto& [m, c] : terms_) {
            Monomial mm(target_nvars);
            for (int v = 0; v < nvars_; ++v)
                if (m[v] > 0) mm.set(embed[v], m[v]);
            r.add_term(mm, c);
        }
        return r;
    }

    template <class K2, class Fn>
    Poly<K2> map_coefficients(Fn&& fn) const {
        Poly<K2> r(nvars_);
        for (auto& [m, c] : terms_) r.add_term(m, fn(c));
        return r;
    }

  private:
    int nvars_;
    Terms terms_;
};

using PolyQ = Poly<Rat>;
using PolyZ3 = Poly<Zeta3>;
using PolyFp = Poly<Fp>;

// --- basic linear algebra over a field -------------------------------------

template <class K>
using Matrix = std::vector<std::vector<K>>;

template <class K>
Matrix<K> identity_matrix(int n, const K& one) {
    Matrix<K> m(n, std::vector<K>(n, K{}));
    for (int i = 0; i < n; ++i) m[i][i] = one;
    return m;
}

template <class K>
int matrix_rank(Matrix<K> m) {
    int rows = m.size();
    if (rows == 0) return 0;
    int cols = m[0].size();
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (!is_zero(m[r][col])) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(m[rank], m[pivot]);
        for (int r = 0; r < rows; ++r) {
            if (r == rank || is_zero(m[r][col])) continue;
            K f = m[r][col] / m[rank][col];
            for (int c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
        }
        ++rank;
    }
    return rank;
}

template <class K>
std::optional<Matrix<K>> matrix_inverse(Matrix<K> m) {
    int n = m.size();
    if (n == 0) return Matrix<K>{};
    K one;
    bool found_one = false;
    for (auto& row : m)
        for (auto& x : row)
            if (!is_zero(x)) {
                one = x / x;
                found_one = true;
                break;
            }
    if (!found_one) return std::nullopt;
    Matrix<K> inv = identity_matrix(n, one);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (!is_zero(m[r][col])) {
                pivot = r;
                break;
            }
        if (pivot < 0) return std::nullopt;
        std::swap(m[col], m[pivot]);
        std::swap(inv[col], inv[pivot]);
        K d = m[col][col];
        for (int c = 0; c < n; ++c) {
            m[col][c] = m[col][c] / d;
            inv[col][c] = inv[col][c] / d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || is_zero(m[r][col])) continue;
            K f = m[r][col];
            for (int c = 0; c < n; ++c) {
                m[r][c] -= f * m[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

// Composition with an invertible linear change of coordinates x -> M x.
template <class K>
Poly<K> linear_change(const Poly<K>& p, const Matrix<K>& m) {
    int n = p.nvars();
    if (static_cast<int>(m.size()) != n) throw std::domain_error("matrix size must match ring arity");
    for (auto& row : m)
        if (static_cast<int>(row.size()) != n) throw std::domain_error("matrix must be square");
    if (!matrix_inverse(m)) throw std::domain_error("linear change requires an invertible matrix");
    std::map<int, Poly<K>> assign;
    for (int i = 0; i < n; ++i) {
        Poly<K> img(n);
        for (int j = 0; j < n; ++j)
            if (!is_zero(m[i][j])) img.add_term(Monomial::var(n, j), m[i][j]);
        assign.emplace(i, img);
    }
    return p.substitute(n, assign);
}

// Symmetric matrix of second partials at the origin. Requires a critical
// origin (no constant or linear terms).
template <class K>
Matrix<K> hessian_at_origin(const Poly<K>& p) {
    int n = p.nvars();
    for (auto& [m, c] : p.terms())
        if (m.degree() < 2) throw std::domain_error("hessian at origin needs a critical origin (no constant/linear terms)");
    Matrix<K> h(n, std::vector<K>(n, K{}));
    for (auto& [m, c] : p.terms()) {
        if (m.degree() != 2) continue;
        int i = -1, j = -1;
        for (int v = 0; v < n; ++v) {
            if (m[v] == 2) i = j = v;
            if (m[v] == 1) (i < 0 ? i : j) = v;
        }
        if (i == j) {
            h[i][i] = c + c;
        } else {
            h[i][j] = c;
            h[j][i] = c;
        }
    }
    return h;
}

template <class K>
int hessian_rank_at_origin(const Poly<K>& p) {
    return matrix_rank(hessian_at_origin(p));
}

// Minimal weighted order and the sum of terms achieving it.
template <class K>
std::pair<Rat, Poly<K>> weighted_initial_part(const Poly<K>& p, const std::vector<Rat>& weights) {
    if (p.is_zero_poly()) throw std::domain_error("weighted initial part of the zero polynomial");
    if (static_cast<int>(weights.size()) != p.nvars()) throw std::domain_error("weight vector arity mismatch");
    for (auto& w : weights)
        if (w <= 0) throw std::domain_error("weights must be strictly positive");
    bool first = true;
    Rat best(0);
    for (auto& [m, c] : p.terms()) {
        Rat d(0);
        for (int v = 0; v < p.nvars(); ++v) d += weights[v] * m[v];
        if (first || d < best) {
            best = d;
            first = false;
        }
    }
    Poly<K> init(p.nvars());
    for (auto& [m, c] : p.terms()) {
        Rat d(0);
        for (int v = 0; v < p.nvars(); ++v) d += weights[v] * m[v];
        if (d == best) init.add_term(m, c);
    }
    return {best, init};
}

inline PolyFp reduce_poly_mod_p(const PolyQ& p, uint32_t prime) {
    return p.map_coefficients<Fp>([&](const Rat& c) { return reduce_mod_p(c, prime); });
}

inline PolyZ3 lift_to_zeta3(const PolyQ& p) {
    return p.map_coefficients<Zeta3>([](const Rat& c) { return Zeta3(c); });
}

}  // namespace fanolab
