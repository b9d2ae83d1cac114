#include "qdstab/cyclotomic.h"

#include <stdexcept>

namespace qds {

namespace {

// Quotient of exact polynomial division (monic divisor), remainder discarded.
std::vector<long long> poly_div_exact(std::vector<long long> num,
                                      const std::vector<long long>& den) {
    int dn = static_cast<int>(num.size()) - 1;
    int dd = static_cast<int>(den.size()) - 1;
    std::vector<long long> q(dn - dd + 1, 0);
    for (int k = dn - dd; k >= 0; k--) {
        long long f = num[dd + k];  // den is monic
        q[k] = f;
        if (f == 0) continue;
        for (int j = 0; j <= dd; j++) num[j + k] -= f * den[j];
    }
    for (long long v : num)
        if (v != 0) throw std::logic_error("poly_div_exact: nonzero remainder");
    return q;
}

}  // namespace

std::vector<long long> cyclotomic_poly(int L) {
    // x^L - 1 = prod_{e | L} Phi_e, so divide out the proper divisors.
    std::vector<long long> p(L + 1, 0);
    p[0] = -1;
    p[L] = 1;
    for (int e = 1; e < L; e++) {
        if (L % e != 0) continue;
        p = poly_div_exact(p, cyclotomic_poly(e));
    }
    return p;
}

Cyc Cyc::integer(int order, long long v) {
    Cyc out(order);
    out.c[0] = v;
    return out;
}

Cyc Cyc::root(int order, long long k) {
    Cyc out(order);
    k %= order;
    if (k < 0) k += order;
    out.c[k] = 1;
    return out;
}

Cyc& Cyc::operator+=(const Cyc& o) {
    if (L != o.L) throw std::invalid_argument("Cyc: mixed orders");
    for (int k = 0; k < L; k++) c[k] += o.c[k];
    return *this;
}

Cyc& Cyc::operator-=(const Cyc& o) {
    if (L != o.L) throw std::invalid_argument("Cyc: mixed orders");
    for (int k = 0; k < L; k++) c[k] -= o.c[k];
    return *this;
}

Cyc Cyc::operator*(const Cyc& o) const {
    if (L != o.L) throw std::invalid_argument("Cyc: mixed orders");
    Cyc out(L);
    for (int a = 0; a < L; a++) {
        if (c[a] == 0) continue;
        for (int b = 0; b < L; b++) {
            if (o.c[b] == 0) continue;
            out.c[(a + b) % L] += c[a] * o.c[b];
        }
    }
    return out;
}

Cyc Cyc::operator*(long long s) const {
    Cyc out = *this;
    for (auto& v : out.c) v *= s;
    return out;
}

std::vector<long long> Cyc::reduced() const {
    std::vector<long long> phi = cyclotomic_poly(L);
    std::vector<long long> rem = c;
    int dd = static_cast<int>(phi.size()) - 1;
    for (int k = static_cast<int>(rem.size()) - 1; k >= dd; k--) {
        long long f = rem[k];
        if (f == 0) continue;
        for (int j = 0; j <= dd; j++) rem[k - dd + j] -= f * phi[j];
    }
    rem.resize(dd);
    return rem;
}

bool Cyc::is_zero() const {
    for (long long v : reduced())
        if (v != 0) return false;
    return true;
}

bool Cyc::operator==(const Cyc& o) const {
    Cyc diff = *this;
    diff -= o;
    return diff.is_zero();
}

long long Cyc::as_integer() const {
    std::vector<long long> rem = reduced();
    for (size_t k = 1; k < rem.size(); k++) {
        if (rem[k] != 0) throw std::logic_error("Cyc::as_integer: value is not an integer");
    }
    return rem.empty() ? 0 : rem[0];
}

}  // namespace qds
