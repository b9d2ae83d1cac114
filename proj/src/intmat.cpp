#include "qdstab/intmat.h"

#include <numeric>
#include <stdexcept>

namespace qds {

namespace {

BigInt big_abs(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

void swap_rows(BigMat& m, size_t a, size_t b) { std::swap(m[a], m[b]); }

void swap_cols(BigMat& m, size_t a, size_t b) {
    for (auto& row : m) std::swap(row[a], row[b]);
}

// row[a] += f * row[b]
void add_row(BigMat& m, size_t a, size_t b, const BigInt& f) {
    for (size_t j = 0; j < m[a].size(); j++) m[a][j] += f * m[b][j];
}

// col[a] += f * col[b]
void add_col(BigMat& m, size_t a, size_t b, const BigInt& f) {
    for (auto& row : m) row[a] += f * row[b];
}

long long llmod(long long v, long long n) {
    long long m = v % n;
    return m < 0 ? m + n : m;
}

long long xgcd(long long a, long long b, long long& x, long long& y) {
    if (b == 0) {
        x = 1;
        y = 0;
        return a;
    }
    long long x1, y1;
    long long g = xgcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

long long inv_mod(long long a, long long n) {
    long long x, y;
    long long g = xgcd(llmod(a, n), n, x, y);
    if (g != 1) throw std::logic_error("inv_mod: not invertible");
    return llmod(x, n);
}

// Unit c mod n with c * e = gcd(e, n) (mod n).
long long unit_for(long long e, long long n) {
    e = llmod(e, n);
    long long g = std::gcd(e, n);
    long long np = n / g;
    long long c0 = np == 1 ? 1 : inv_mod(e / g, np);
    for (long long t = 0;; t++) {
        long long c = c0 + np * t;
        if (std::gcd(llmod(c, n), n) == 1) return llmod(c, n);
        if (t > n) throw std::logic_error("unit_for: no unit found");
    }
}

}  // namespace

BigMat to_big(const ZMat& m) {
    BigMat out(m.size());
    for (size_t i = 0; i < m.size(); i++) {
        out[i].assign(m[i].begin(), m[i].end());
    }
    return out;
}

SmithForm smith_normal_form(const BigMat& input) {
    SmithForm f;
    f.rows = input.size();
    f.cols = f.rows ? input[0].size() : 0;
    BigMat m = input;
    f.U.assign(f.rows, std::vector<BigInt>(f.rows, 0));
    f.V.assign(f.cols, std::vector<BigInt>(f.cols, 0));
    for (size_t i = 0; i < f.rows; i++) f.U[i][i] = 1;
    for (size_t j = 0; j < f.cols; j++) f.V[j][j] = 1;

    size_t t = 0;
    while (t < f.rows && t < f.cols) {
        // Locate the smallest nonzero entry in the remaining block.
        size_t pi = t, pj = t;
        BigInt best = 0;
        for (size_t i = t; i < f.rows; i++) {
            for (size_t j = t; j < f.cols; j++) {
                if (m[i][j] != 0 && (best == 0 || big_abs(m[i][j]) < best)) {
                    best = big_abs(m[i][j]);
                    pi = i;
                    pj = j;
                }
            }
        }
        if (best == 0) break;
        if (pi != t) {
            swap_rows(m, pi, t);
            swap_rows(f.U, pi, t);
        }
        if (pj != t) {
            swap_cols(m, pj, t);
            swap_rows(f.V, pj, t);  // V stored transposed during elimination
        }

        bool clean = false;
        while (!clean) {
            clean = true;
            for (size_t i = t + 1; i < f.rows; i++) {
                if (m[i][t] == 0) continue;
                BigInt q = m[i][t] / m[t][t];
                if (q != 0) {
                    add_row(m, i, t, -q);
                    add_row(f.U, i, t, -q);
                }
                if (m[i][t] != 0) {
                    swap_rows(m, i, t);
                    swap_rows(f.U, i, t);
                    clean = false;
                }
            }
            for (size_t j = t + 1; j < f.cols; j++) {
                if (m[t][j] == 0) continue;
                BigInt q = m[t][j] / m[t][t];
                if (q != 0) {
                    add_col(m, j, t, -q);
                    add_row(f.V, j, t, -q);
                }
                if (m[t][j] != 0) {
                    swap_cols(m, j, t);
                    swap_rows(f.V, j, t);
                    clean = false;
                }
            }
            if (!clean) continue;
            // Enforce divisibility of the remaining block by the pivot.
            for (size_t i = t + 1; i < f.rows && clean; i++) {
                for (size_t j = t + 1; j < f.cols && clean; j++) {
                    if (m[i][j] % m[t][t] != 0) {
                        add_row(m, t, i, 1);
                        add_row(f.U, t, i, 1);
                        clean = false;
                    }
                }
            }
        }
        if (m[t][t] < 0) {
            for (size_t j = 0; j < f.cols; j++) m[t][j] = -m[t][j];
            for (size_t j = 0; j < f.rows; j++) f.U[t][j] = -f.U[t][j];
        }
        t++;
    }
    for (size_t i = 0; i < std::min(f.rows, f.cols); i++) {
        if (m[i][i] != 0) {
            f.diag.push_back(m[i][i]);
            f.rank++;
        }
    }
    // V was built transposed (rows = column ops); transpose back.
    BigMat vt(f.cols, std::vector<BigInt>(f.cols, 0));
    for (size_t i = 0; i < f.cols; i++)
        for (size_t j = 0; j < f.cols; j++) vt[j][i] = f.V[i][j];
    f.V = std::move(vt);
    return f;
}

namespace {

long long big_llmod(const BigInt& v, long long n) {
    BigInt m = v % n;
    if (m < 0) m += n;
    return m.convert_to<long long>();
}

// Howell form of [m mod n | I].  Rows whose left block vanishes are exactly
// the left-kernel combinations; entries never leave [0, n).
ZMat augmented_howell(const BigMat& m, long long n) {
    size_t r = m.size();
    size_t c = r ? m[0].size() : 0;
    ZMat aug(r, ZVec(c + r, 0));
    for (size_t i = 0; i < r; i++) {
        for (size_t j = 0; j < c; j++) aug[i][j] = big_llmod(m[i][j], n);
        aug[i][c + i] = 1;
    }
    return howell_form(aug, n);
}

}  // namespace

BigInt rowspace_order_mod(const BigMat& m, long long n) {
    if (m.empty()) return 1;
    size_t cols = m[0].size();
    ZMat red(m.size(), ZVec(cols, 0));
    for (size_t i = 0; i < m.size(); i++)
        for (size_t j = 0; j < cols; j++) red[i][j] = big_llmod(m[i][j], n);
    return howell_span_order(howell_form(std::move(red), n), n);
}

ZMat left_kernel_mod(const BigMat& m, long long n) {
    size_t r = m.size();
    if (r == 0) return {};
    size_t c = m[0].size();
    ZMat kernel;
    for (const auto& row : augmented_howell(m, n)) {
        bool left_zero = true;
        for (size_t j = 0; j < c && left_zero; j++) left_zero = row[j] == 0;
        if (left_zero) kernel.emplace_back(row.begin() + c, row.end());
    }
    return howell_form(std::move(kernel), n);
}

std::optional<ZVec> solve_left_mod(const BigMat& m, const ZVec& v, long long n) {
    size_t r = m.size();
    size_t cols = r ? m[0].size() : v.size();
    if (v.size() != cols) throw std::invalid_argument("solve_left_mod: size mismatch");
    if (r == 0) {
        for (long long x : v)
            if (llmod(x, n) != 0) return std::nullopt;
        return ZVec{};
    }
    ZMat h = augmented_howell(m, n);
    ZVec target(cols + r, 0);
    for (size_t j = 0; j < cols; j++) target[j] = llmod(v[j], n);
    ZVec res = howell_reduce(h, std::move(target), n);
    for (size_t j = 0; j < cols; j++)
        if (res[j] != 0) return std::nullopt;
    // target - res is a span combination; its right block is the solution.
    ZVec u(r, 0);
    for (size_t i = 0; i < r; i++) u[i] = llmod(-res[cols + i], n);
    return u;
}

BigMat left_kernel_lattice(const BigMat& m, long long n) {
    size_t r = m.size();
    if (r == 0) return {};
    ZMat kernel = left_kernel_mod(m, n);
    std::vector<char> covered(r, 0);
    BigMat basis;
    basis.reserve(r);
    for (const auto& row : kernel) {
        size_t lead = 0;
        while (lead < r && row[lead] == 0) lead++;
        covered[lead] = 1;
        basis.emplace_back(row.begin(), row.end());
    }
    // Columns without a kernel pivot contribute the trivial relation n e_j;
    // together with the lifted Howell rows these span the integer kernel
    // lattice (Howell closure absorbs n times each pivot row).
    for (size_t j = 0; j < r; j++) {
        if (covered[j]) continue;
        std::vector<BigInt> e(r, 0);
        e[j] = n;
        basis.push_back(std::move(e));
    }
    return basis;
}

std::vector<BigInt> quotient_invariants(const BigMat& c) {
    SmithForm f = smith_normal_form(c);
    if (f.rank < std::min(f.rows, f.cols) || f.rows < f.cols) {
        throw std::logic_error("quotient_invariants: quotient is infinite");
    }
    std::vector<BigInt> out;
    for (const BigInt& v : f.diag) {
        if (v > 1) out.push_back(v);
    }
    return out;
}

std::map<long long, int> lattice_quotient_factors(const BigMat& lattice,
                                                  const std::vector<long long>& orders) {
    size_t k = lattice.size();
    if (orders.size() != k) throw std::invalid_argument("lattice_quotient_factors: size mismatch");
    if (k == 0) return {};
    SmithForm f = smith_normal_form(lattice);
    if (f.rank != k) throw std::logic_error("lattice_quotient_factors: lattice not full rank");
    // Solve row_i * lattice = orders[i] * e_i for each i; stack into C.
    BigMat c(k, std::vector<BigInt>(k, 0));
    for (size_t i = 0; i < k; i++) {
        // b = (orders[i] e_i) V
        std::vector<BigInt> b(k);
        for (size_t j = 0; j < k; j++) b[j] = BigInt(orders[i]) * f.V[i][j];
        std::vector<BigInt> w(k);
        for (size_t j = 0; j < k; j++) {
            if (b[j] % f.diag[j] != 0) {
                throw std::logic_error("lattice_quotient_factors: trivial relation not in lattice");
            }
            w[j] = b[j] / f.diag[j];
        }
        for (size_t j = 0; j < k; j++) {
            BigInt s = 0;
            for (size_t t = 0; t < k; t++) s += w[t] * f.U[t][j];
            c[i][j] = s;
        }
    }
    std::map<long long, int> out;
    for (const BigInt& v : quotient_invariants(c)) {
        out[v.convert_to<long long>()]++;
    }
    return out;
}

ZMat howell_form(ZMat m, long long n) {
    for (auto& row : m)
        for (auto& v : row) v = llmod(v, n);
    size_t cols = m.empty() ? 0 : m[0].size();
    size_t r = 0;
    for (size_t j = 0; j < cols; j++) {
        // Combine all rows >= r so that only row r has a nonzero entry in col j.
        size_t lead = r;
        while (lead < m.size() && m[lead][j] == 0) lead++;
        if (lead == m.size()) continue;
        std::swap(m[r], m[lead]);
        for (size_t i = r + 1; i < m.size(); i++) {
            if (m[i][j] == 0) continue;
            long long a, b;
            long long g = xgcd(m[r][j], m[i][j], a, b);
            long long mr = m[r][j] / g, mi = m[i][j] / g;
            ZVec nr(cols), ni(cols);
            for (size_t t = 0; t < cols; t++) {
                nr[t] = llmod(a * m[r][t] + b * m[i][t], n);
                ni[t] = llmod(mr * m[i][t] - mi * m[r][t], n);
            }
            m[r] = std::move(nr);
            m[i] = std::move(ni);
        }
        // Scale the pivot to the canonical divisor of n.
        long long c = unit_for(m[r][j], n);
        for (size_t t = 0; t < cols; t++) m[r][t] = llmod(c * m[r][t], n);
        long long p = m[r][j];
        // Reduce the entries above the pivot.
        for (size_t i = 0; i < r; i++) {
            long long q = m[i][j] / p;
            if (q)
                for (size_t t = 0; t < cols; t++) m[i][t] = llmod(m[i][t] - q * m[r][t], n);
        }
        // Howell closure: (n/p) * row has pivot 0 but may span new rows.
        if (p != 0 && n / p != 1) {
            ZVec extra(cols);
            bool nonzero = false;
            for (size_t t = 0; t < cols; t++) {
                extra[t] = llmod((n / p) * m[r][t], n);
                nonzero |= extra[t] != 0;
            }
            if (nonzero) m.push_back(std::move(extra));
        }
        r++;
    }
    m.resize(r);
    return m;
}

BigInt howell_span_order(const ZMat& howell, long long n) {
    BigInt order = 1;
    for (const auto& row : howell) {
        for (long long v : row) {
            if (v != 0) {
                order *= n / v;
                break;
            }
        }
    }
    return order;
}

ZVec howell_reduce(const ZMat& howell, ZVec v, long long n) {
    for (auto& x : v) x = llmod(x, n);
    for (const auto& row : howell) {
        size_t j = 0;
        while (j < row.size() && row[j] == 0) j++;
        if (j == row.size()) continue;
        long long q = v[j] / row[j];
        if (q)
            for (size_t t = 0; t < v.size(); t++) v[t] = llmod(v[t] - q * row[t], n);
    }
    return v;
}

}  // namespace qds
