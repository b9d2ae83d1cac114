#pragma once
// Exact arithmetic in Z[zeta_L], zeta_L = exp(2*pi*i/L).
//
// Values are integer coefficient vectors over the powers zeta^0..zeta^{L-1},
// multiplied cyclically (zeta^L = 1).  Equality with zero is decided exactly:
// p(zeta) = 0 iff the L-th cyclotomic polynomial Phi_L divides p, so the
// polynomial remainder mod Phi_L is computed over Z and compared with zero.

#include <cstdint>
#include <vector>

namespace qds {

std::vector<long long> cyclotomic_poly(int L);

struct Cyc {
    int L = 1;
    std::vector<long long> c;  // c[k] multiplies zeta^k

    Cyc() : c(1, 0) {}
    explicit Cyc(int order) : L(order), c(order, 0) {}
    static Cyc zero(int order) { return Cyc(order); }
    static Cyc integer(int order, long long v);
    static Cyc root(int order, long long k);  // zeta^k

    Cyc& operator+=(const Cyc& o);
    Cyc& operator-=(const Cyc& o);
    friend Cyc operator+(Cyc a, const Cyc& b) { return a += b; }
    friend Cyc operator-(Cyc a, const Cyc& b) { return a -= b; }
    Cyc operator*(const Cyc& o) const;
    Cyc operator*(long long s) const;
    bool is_zero() const;
    bool operator==(const Cyc& o) const;

    // Canonical remainder mod Phi_L (degree < phi(L)).
    std::vector<long long> reduced() const;
    // For values that are rational integers: the integer itself.
    long long as_integer() const;
};

}  // namespace qds
