#pragma once
// Test-only oracles, deliberately independent of the production code paths:
// a dense matrix representation of Pauli operators with exact cyclotomic
// entries, and brute-force span enumeration over Z_n.

#include "qdstab/cyclotomic.h"
#include "qdstab/intmat.h"
#include "qdstab/pauli.h"

#include <cassert>
#include <set>
#include <vector>

namespace oracle {

struct CycMat {
    int L = 1;
    int n = 0;
    std::vector<qds::Cyc> a;

    CycMat(int order, int dim) : L(order), n(dim), a(dim * dim, qds::Cyc(order)) {}
    qds::Cyc& at(int i, int j) { return a[i * n + j]; }
    const qds::Cyc& at(int i, int j) const { return a[i * n + j]; }

    static CycMat identity(int order, int dim) {
        CycMat m(order, dim);
        for (int i = 0; i < dim; i++) m.at(i, i) = qds::Cyc::integer(order, 1);
        return m;
    }
};

inline CycMat mul(const CycMat& x, const CycMat& y) {
    assert(x.n == y.n && x.L == y.L);
    CycMat out(x.L, x.n);
    for (int i = 0; i < x.n; i++) {
        for (int k = 0; k < x.n; k++) {
            if (x.at(i, k).is_zero()) continue;
            for (int j = 0; j < x.n; j++) out.at(i, j) += x.at(i, k) * y.at(k, j);
        }
    }
    return out;
}

inline CycMat scale(const qds::Cyc& s, const CycMat& x) {
    CycMat out(x.L, x.n);
    for (int i = 0; i < x.n * x.n; i++) out.a[i] = s * x.a[i];
    return out;
}

inline bool eq(const CycMat& x, const CycMat& y) {
    if (x.n != y.n || x.L != y.L) return false;
    for (int i = 0; i < x.n * x.n; i++) {
        if (!(x.a[i] == y.a[i])) return false;
    }
    return true;
}

inline CycMat mat_pow(CycMat m, long long t) {
    CycMat out = CycMat::identity(m.L, m.n);
    for (; t > 0; t--) out = mul(out, m);
    return out;
}

// Matrix of w^phi prod X^x Z^z on the listed qudits, dimension d^k with
// qudits[0] as the least significant digit.  X|j> = |j+1>, Z|j> = w^j|j>.
inline CycMat matrix_of(const qds::PauliOp& p, const std::vector<qds::EdgeId>& qudits) {
    for (const auto& [e, f] : p.sites) {
        (void)f;
        assert(std::find(qudits.begin(), qudits.end(), e) != qudits.end());
    }
    int d = p.d;
    int dim = 1;
    for (size_t i = 0; i < qudits.size(); i++) dim *= d;
    CycMat m(d, dim);
    for (int in = 0; in < dim; in++) {
        long long ph = p.phase;
        int out = 0, base = 1, t = in;
        for (const qds::EdgeId& e : qudits) {
            int j = t % d;
            t /= d;
            qds::XZ f = p.at(e);
            ph += static_cast<long long>(f.z) * j;
            out += ((j + f.x) % d) * base;
            base *= d;
        }
        m.at(out, in) += qds::Cyc::root(d, ((ph % d) + d) % d);
    }
    return m;
}

// All vectors reachable as Z-combinations of the rows, mod n.
inline std::set<qds::ZVec> span_mod(const qds::ZMat& rows, long long n) {
    size_t len = rows.empty() ? 0 : rows[0].size();
    std::set<qds::ZVec> seen;
    seen.insert(qds::ZVec(len, 0));
    bool grew = true;
    while (grew) {
        grew = false;
        std::set<qds::ZVec> next = seen;
        for (const auto& v : seen) {
            for (const auto& r : rows) {
                qds::ZVec w(len);
                for (size_t i = 0; i < len; i++) w[i] = ((v[i] + r[i]) % n + n) % n;
                if (next.insert(w).second) grew = true;
            }
        }
        seen = std::move(next);
    }
    return seen;
}

}  // namespace oracle
