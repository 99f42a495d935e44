#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

namespace fanolab {

// Exponent vector with inline storage. Ordering is total degree first,
// then lexicographic, which fixes the canonical term order everywhere.
struct Monomial {
    static constexpr int kMaxVars = 12;
    std::array<uint8_t, kMaxVars> e{};
    uint8_t n = 0;

    Monomial() = default;
    explicit Monomial(int nvars) : n(static_cast<uint8_t>(nvars)) {
        if (nvars < 0 || nvars > kMaxVars) throw std::domain_error("unsupported variable count");
    }

    int arity() const { return n; }
    int degree() const {
        int d = 0;
        for (int i = 0; i < n; ++i) d += e[i];
        return d;
    }
    int operator[](int i) const { return e[i]; }
    void set(int i, int v) {
        if (v < 0 || v > 255) throw std::domain_error("exponent out of range");
        e[i] = static_cast<uint8_t>(v);
    }

    static Monomial var(int nvars, int i, int power = 1) {
        Monomial m(nvars);
        m.set(i, power);
        return m;
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial r = a;
        for (int i = 0; i < a.n; ++i) {
            int s = a.e[i] + b.e[i];
            if (s > 255) throw std::domain_error("exponent overflow");
            r.e[i] = static_cast<uint8_t>(s);
        }
        return r;
    }

    bool divisible_by(const Monomial& d) const {
        for (int i = 0; i < n; ++i)
            if (e[i] < d.e[i]) return false;
        return true;
    }
    Monomial divide(const Monomial& d) const {
        Monomial r = *this;
        for (int i = 0; i < n; ++i) r.e[i] = static_cast<uint8_t>(e[i] - d.e[i]);
        return r;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) {
        if (a.n != b.n) return false;
        for (int i = 0; i < a.n; ++i)
            if (a.e[i] != b.e[i]) return false;
        return true;
    }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }
    friend bool operator<(const Monomial& a, const Monomial& b) {
        int da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        for (int i = 0; i < a.n && i < b.n; ++i)
            if (a.e[i] != b.e[i]) return a.e[i] < b.e[i];
        return false;
    }
};

}  // namespace fanolab
