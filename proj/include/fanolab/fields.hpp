#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fanolab {

using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat rat_from_strings(const std::string& num, const std::string& den) {
    Rat r{Int(num), Int(den)};
    if (r.get_den() == 0) throw std::domain_error("rational with zero denominator");
    r.canonicalize();
    return r;
}

// max(|numerator|, denominator) of a canonical rational
inline Int height(const Rat& r) {
    Int n = abs(r.get_num());
    Int d = r.get_den();
    return n > d ? n : d;
}

// If q = c^3 for a rational c, store it in root and return true.
inline bool rational_cube_root(const Rat& q, Rat& root) {
    Int num = q.get_num(), den = q.get_den();
    Int rn, rd;
    // mpz_root returns nonzero iff the root is exact; negative operands
    // are fine for odd roots.
    int exact_n = mpz_root(rn.get_mpz_t(), num.get_mpz_t(), 3);
    int exact_d = mpz_root(rd.get_mpz_t(), den.get_mpz_t(), 3);
    if (!exact_n || !exact_d) return false;
    root = Rat(rn, rd);
    root.canonicalize();
    return true;
}

inline bool is_zero(const Rat& r) { return r == 0; }
inline std::string to_string(const Rat& r) { return r.get_str(); }

// ---------------------------------------------------------------------------
// Prime field F_p with runtime modulus (p < 2^16). A default-constructed
// element is the modulus-agnostic zero so containers can erase cancelled
// coefficients without knowing p.
// ---------------------------------------------------------------------------
struct Fp {
    uint32_t v = 0;
    uint32_t p = 0;

    Fp() = default;
    Fp(uint32_t prime, long value) : p(prime) {
        if (prime < 2 || prime >= (1u << 16)) throw std::domain_error("prime out of range [2, 2^16)");
        long m = value % static_cast<long>(prime);
        if (m < 0) m += prime;
        v = static_cast<uint32_t>(m);
    }

    static void check(const Fp& a, const Fp& b) {
        if (a.p != 0 && b.p != 0 && a.p != b.p) throw std::domain_error("prime field mismatch");
    }
    uint32_t modulus(const Fp& other) const { return p != 0 ? p : other.p; }

    friend Fp operator+(const Fp& a, const Fp& b) {
        check(a, b);
        uint32_t m = a.modulus(b);
        if (m == 0) return Fp{};
        Fp r;
        r.p = m;
        r.v = (a.v + b.v) % m;
        return r;
    }
    friend Fp operator-(const Fp& a, const Fp& b) {
        check(a, b);
        uint32_t m = a.modulus(b);
        if (m == 0) return Fp{};
        Fp r;
        r.p = m;
        r.v = (a.v + m - b.v % m) % m;
        return r;
    }
    friend Fp operator*(const Fp& a, const Fp& b) {
        check(a, b);
        uint32_t m = a.modulus(b);
        if (m == 0) return Fp{};
        Fp r;
        r.p = m;
        r.v = static_cast<uint32_t>((uint64_t(a.v) * b.v) % m);
        return r;
    }
    Fp operator-() const {
        Fp r = *this;
        if (p != 0) r.v = (p - v % p) % p;
        return r;
    }
    Fp inverse() const {
        if (p == 0 || v == 0) throw std::domain_error("inverse of zero in F_p");
        // extended Euclid
        int64_t a = v, b = p, x0 = 1, x1 = 0;
        while (b != 0) {
            int64_t q = a / b;
            int64_t t = a - q * b;
            a = b;
            b = t;
            t = x0 - q * x1;
            x0 = x1;
            x1 = t;
        }
        if (a != 1) throw std::domain_error("non-invertible element (modulus not prime?)");
        return Fp(p, static_cast<long>(x0));
    }
    friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inverse(); }
    friend bool operator==(const Fp& a, const Fp& b) {
        check(a, b);
        return a.v == b.v;
    }
    friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }
    Fp& operator+=(const Fp& o) { return *this = *this + o; }
    Fp& operator-=(const Fp& o) { return *this = *this - o; }
    Fp& operator*=(const Fp& o) { return *this = *this * o; }
};

inline bool is_zero(const Fp& a) { return a.v == 0; }
inline std::string to_string(const Fp& a) { return std::to_string(a.v); }

// Reduce a rational mod p; the denominator must be a unit.
inline Fp reduce_mod_p(const Rat& r, uint32_t p) {
    Int num = r.get_num() % p;
    Int den = r.get_den() % p;
    long n = num.get_si(), d = den.get_si();
    if (d % p == 0) throw std::domain_error("denominator divisible by p in reduction");
    return Fp(p, n) / Fp(p, d);
}

// ---------------------------------------------------------------------------
// Q(zeta_3), zeta^2 = -1 - zeta. Stored as a + b*zeta with exact rationals.
// ---------------------------------------------------------------------------
struct Zeta3 {
    Rat a, b;

    Zeta3() : a(0), b(0) {}
    Zeta3(const Rat& re) : a(re), b(0) {}
    Zeta3(const Rat& x, const Rat& y) : a(x), b(y) {}
    static Zeta3 zeta() { return Zeta3(Rat(0), Rat(1)); }

    friend Zeta3 operator+(const Zeta3& x, const Zeta3& y) { return Zeta3(x.a + y.a, x.b + y.b); }
    friend Zeta3 operator-(const Zeta3& x, const Zeta3& y) { return Zeta3(x.a - y.a, x.b - y.b); }
    Zeta3 operator-() const { return Zeta3(-a, -b); }
    friend Zeta3 operator*(const Zeta3& x, const Zeta3& y) {
        // (a + b z)(c + d z) = ac - bd + (ad + bc - bd) z
        Rat ac = x.a * y.a, bd = x.b * y.b;
        return Zeta3(ac - bd, x.a * y.b + x.b * y.a - bd);
    }
    Rat norm() const { return a * a - a * b + b * b; }
    Zeta3 conjugate() const { return Zeta3(a - b, -b); }
    Zeta3 inverse() const {
        Rat n = norm();
        if (n == 0) throw std::domain_error("inverse of zero in Q(zeta3)");
        Zeta3 c = conjugate();
        return Zeta3(c.a / n, c.b / n);
    }
    friend Zeta3 operator/(const Zeta3& x, const Zeta3& y) { return x * y.inverse(); }
    friend bool operator==(const Zeta3& x, const Zeta3& y) { return x.a == y.a && x.b == y.b; }
    friend bool operator!=(const Zeta3& x, const Zeta3& y) { return !(x == y); }
    Zeta3& operator+=(const Zeta3& o) { return *this = *this + o; }
    Zeta3& operator-=(const Zeta3& o) { return *this = *this - o; }
    Zeta3& operator*=(const Zeta3& o) { return *this = *this * o; }
};

inline bool is_zero(const Zeta3& z) { return z.a == 0 && z.b == 0; }
inline std::string to_string(const Zeta3& z) {
    if (z.b == 0) return z.a.get_str();
    return z.a.get_str() + "+(" + z.b.get_str() + ")*w";
}

// Field traits used by generic code to make constants of the right kind.
template <class K>
struct FieldOps;

template <>
struct FieldOps<Rat> {
    static Rat zero() { return Rat(0); }
    static Rat one() { return Rat(1); }
    static Rat from_int(long n) { return Rat(n); }
};
template <>
struct FieldOps<Zeta3> {
    static Zeta3 zero() { return Zeta3(); }
    static Zeta3 one() { return Zeta3(Rat(1)); }
    static Zeta3 from_int(long n) { return Zeta3(Rat(n)); }
};
// Fp has no modulus-free one(); generic code that needs constants in F_p
// threads an exemplar element through instead.
inline Rat scalar_from_int(const Rat&, long n) { return Rat(n); }
inline Zeta3 scalar_from_int(const Zeta3&, long n) { return Zeta3(Rat(n)); }
inline Fp scalar_from_int(const Fp& exemplar, long n) { return Fp(exemplar.p, n); }

}  // namespace fanolab
