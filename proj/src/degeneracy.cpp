#include "qdstab/degeneracy.h"

#include "json.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace qds {

namespace {

long long to_ll(const BigInt& v) { return v.convert_to<long long>(); }

BigInt big_pow(long long base, long long exp) {
    BigInt out = 1;
    for (long long i = 0; i < exp; ++i) out *= base;
    return out;
}

ZMat transpose(const ZMat& m) {
    if (m.empty()) return {};
    ZMat out(m[0].size(), ZVec(m.size(), 0));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m[i].size(); ++j) out[j][i] = m[i][j];
    return out;
}

int env_worker_count() {
    const char* raw = std::getenv("QDSTAB_WORKERS");
    if (!raw) return 1;
    int v = std::atoi(raw);
    return v > 1 ? v : 1;
}

}  // namespace

ZMat exponent_matrix(const StabilizerModel& m) {
    ZMat rows;
    rows.reserve(m.generators.size());
    for (const auto& g : m.generators) rows.push_back(row_from_op(g.op, m));
    return rows;
}

ZVec row_from_op(const PauliOp& p, const StabilizerModel& m) {
    const size_t n = m.qudits.size();
    ZVec row(2 * n, 0);
    for (const auto& [e, f] : p.sites) {
        int idx = m.qudit_index(e);
        if (idx < 0) throw std::invalid_argument("operator acts outside the qudit registry: " + to_string(e));
        row[idx] = f.x;
        row[n + idx] = f.z;
    }
    return row;
}

PauliOp op_from_row(const ZVec& row, const StabilizerModel& m) {
    const size_t n = m.qudits.size();
    if (row.size() != 2 * n) throw std::invalid_argument("row length does not match the registry");
    PauliOp p = PauliOp::identity(m.d);
    for (size_t j = 0; j < n; ++j) {
        int x = static_cast<int>(((row[j] % m.d) + m.d) % m.d);
        int z = static_cast<int>(((row[n + j] % m.d) + m.d) % m.d);
        if (x || z) p.mul_site(m.qudits[j], x, z);
    }
    return p;
}

BigInt group_order(const StabilizerModel& m) {
    if (m.generators.empty()) return 1;
    ZMat E = exponent_matrix(m);
    BigInt ord = rowspace_order_mod(to_big(E), m.d);
    BigMat rel = left_kernel_lattice(to_big(E), m.d);
    for (const auto& u : rel) {
        PauliOp prod = PauliOp::identity(m.d);
        for (size_t i = 0; i < m.generators.size(); ++i) {
            long long mi = operator_order(m.generators[i].op);
            long long t = to_ll(((u[i] % mi) + mi) % mi);
            if (t) prod = multiply(prod, pauli_power(m.generators[i].op, t));
        }
        if (!prod.sites.empty()) throw std::logic_error("relation lattice row is not a relation");
        if (prod.phase != 0)
            throw std::runtime_error("scalar obstruction: a product of generators equals w^" +
                                     std::to_string(prod.phase));
    }
    return ord;
}

BigInt gsd_absolute(const StabilizerModel& m) {
    return big_pow(m.d, static_cast<long long>(m.qudits.size())) / group_order(m);
}

std::map<long long, long long> generator_orders(const StabilizerModel& m) {
    std::map<long long, long long> out;
    for (const auto& g : m.generators) {
        long long ord = operator_order(g.op);
        if (ord > 1) ++out[ord];
    }
    return out;
}

std::map<long long, long long> relation_orders(const StabilizerModel& m) {
    if (m.generators.empty()) return {};
    ZMat E = exponent_matrix(m);
    BigMat rel = left_kernel_lattice(to_big(E), m.d);
    std::vector<long long> orders;
    orders.reserve(m.generators.size());
    for (const auto& g : m.generators) orders.push_back(operator_order(g.op));
    std::map<long long, long long> out;
    for (const auto& [f, c] : lattice_quotient_factors(rel, orders)) out[f] += c;
    return out;
}

DeltaRecord delta_between(const StabilizerModel& before, const StabilizerModel& after) {
    if (before.d != after.d) throw std::invalid_argument("qudit dimensions differ");
    DeltaRecord rec;
    rec.d = before.d;
    rec.qudit_delta = static_cast<long long>(after.qudits.size()) -
                      static_cast<long long>(before.qudits.size());
    for (const auto& [ord, c] : generator_orders(after)) rec.dn[ord] += c;
    for (const auto& [ord, c] : generator_orders(before)) rec.dn[ord] -= c;
    for (const auto& [ord, c] : relation_orders(after)) rec.dl[ord] += c;
    for (const auto& [ord, c] : relation_orders(before)) rec.dl[ord] -= c;
    std::erase_if(rec.dn, [](const auto& kv) { return kv.second == 0; });
    std::erase_if(rec.dl, [](const auto& kv) { return kv.second == 0; });
    return rec;
}

BigInt gsd_update(const BigInt& old_gsd, const DeltaRecord& delta) {
    BigInt num = old_gsd, den = 1;
    if (delta.qudit_delta >= 0)
        num *= big_pow(delta.d, delta.qudit_delta);
    else
        den *= big_pow(delta.d, -delta.qudit_delta);
    std::map<long long, long long> exps = delta.dn;
    for (const auto& [ord, c] : delta.dl) exps[ord] -= c;
    for (const auto& [ord, e] : exps) {
        if (e >= 0)
            den *= big_pow(ord, e);
        else
            num *= big_pow(ord, -e);
    }
    if (num % den != 0) throw std::runtime_error("inconsistent delta: updated GSD is not an integer");
    return num / den;
}

BigInt gsd_bruteforce(const StabilizerModel& m) {
    const int d = m.d;
    const size_t n = m.qudits.size();
    BigInt dim = big_pow(d, static_cast<long long>(n));
    if (dim > (BigInt(1) << 20)) throw std::runtime_error("brute-force cap exceeded: d^n > 2^20");

    for (size_t i = 0; i < m.generators.size(); ++i)
        for (size_t j = i + 1; j < m.generators.size(); ++j)
            if (!commute(m.generators[i].op, m.generators[j].op))
                throw std::invalid_argument("generators " + m.generators[i].tag + " and " +
                                            m.generators[j].tag + " do not commute");

    auto mul = [&](const std::vector<uint8_t>& a, int pa, const std::vector<uint8_t>& b, int pb,
                   std::vector<uint8_t>& out) {
        long long carry = 0;
        for (size_t j = 0; j < n; ++j) carry += static_cast<long long>(a[n + j]) * b[j];
        for (size_t j = 0; j < 2 * n; ++j) out[j] = static_cast<uint8_t>((a[j] + b[j]) % d);
        return static_cast<int>((pa + pb + carry) % d);
    };

    std::map<std::vector<uint8_t>, int> elems;
    elems.emplace(std::vector<uint8_t>(2 * n, 0), 0);
    for (const auto& g : m.generators) {
        std::vector<uint8_t> gv(2 * n, 0);
        ZVec grow = row_from_op(g.op, m);
        for (size_t j = 0; j < 2 * n; ++j) gv[j] = static_cast<uint8_t>(grow[j]);
        long long ord = operator_order(g.op);
        std::vector<std::pair<std::vector<uint8_t>, int>> pows;
        std::vector<uint8_t> cur = gv;
        int cphase = g.op.phase;
        for (long long t = 1; t < ord; ++t) {
            pows.emplace_back(cur, cphase);
            std::vector<uint8_t> next(2 * n);
            cphase = mul(cur, cphase, gv, g.op.phase, next);
            cur = next;
        }
        auto snapshot = elems;
        std::vector<uint8_t> scratch(2 * n);
        for (const auto& [v, ph] : snapshot)
            for (const auto& [pv, pp] : pows) {
                int phase = mul(v, ph, pv, pp, scratch);
                auto [it, inserted] = elems.emplace(scratch, phase);
                if (!inserted && it->second != phase)
                    throw std::runtime_error("scalar obstruction: group contains a nontrivial phase");
            }
    }

    BigInt order = static_cast<long long>(elems.size());
    if (dim % order != 0) throw std::logic_error("group order does not divide the space dimension");
    return dim / order;
}

int qubit_weight(const XZ& f, int d) {
    if (f.x == 0 && f.z == 0) return 0;
    if (d != 4) return 1;
    if (f.x % 2 || f.z % 2) return 2;
    return (f.x ? 1 : 0) + (f.z ? 1 : 0);
}

int qubit_weight(const PauliOp& p) {
    int w = 0;
    for (const auto& [e, f] : p.sites) w += qubit_weight(f, p.d);
    return w;
}

std::vector<PauliOp> logical_generators(const StabilizerModel& m) {
    const int d = m.d;
    const size_t n = m.qudits.size();
    const size_t k = m.generators.size();
    ZMat E = exponent_matrix(m);
    BigInt gsd = gsd_absolute(m);
    if (gsd == 1) return {};

    ZMat pairing(2 * n, ZVec(k, 0));
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < n; ++j) {
            pairing[j][i] = (d - E[i][n + j] % d) % d;
            pairing[n + j][i] = E[i][j];
        }
    ZMat kernel = left_kernel_mod(to_big(pairing), d);

    auto centralizes = [&](const ZVec& v) {
        for (size_t i = 0; i < k; ++i) {
            long long s = 0;
            for (size_t j = 0; j < n; ++j) s += v[n + j] * E[i][j] - v[j] * E[i][n + j];
            if (((s % d) + d) % d != 0) return false;
        }
        return true;
    };

    std::vector<ZVec> cands;
    for (const auto& r : kernel) {
        ZVec xpart(2 * n, 0), zpart(2 * n, 0);
        bool has_x = false, has_z = false;
        for (size_t j = 0; j < n; ++j) {
            xpart[j] = r[j];
            zpart[n + j] = r[n + j];
            has_x |= r[j] != 0;
            has_z |= r[n + j] != 0;
        }
        if (has_x && has_z) {
            if (centralizes(xpart)) cands.push_back(xpart);
            if (centralizes(zpart)) cands.push_back(zpart);
        }
        cands.push_back(r);
    }
    std::sort(cands.begin(), cands.end(), [&](const ZVec& a, const ZVec& b) {
        int wa = qubit_weight(op_from_row(a, m));
        int wb = qubit_weight(op_from_row(b, m));
        return wa != wb ? wa < wb : a < b;
    });
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    ZMat accepted = howell_form(E, d);
    BigInt base = howell_span_order(accepted, d);
    BigInt target = base * gsd * gsd;
    BigInt reached = base;
    std::vector<PauliOp> out;
    for (const auto& c : cands) {
        if (reached == target) break;
        ZVec res = howell_reduce(accepted, c, d);
        if (std::all_of(res.begin(), res.end(), [](long long v) { return v == 0; })) continue;
        ZMat next = accepted;
        next.push_back(c);
        next = howell_form(next, d);
        BigInt next_order = howell_span_order(next, d);
        if (next_order == reached) continue;
        accepted = next;
        reached = next_order;
        out.push_back(op_from_row(c, m));
    }
    if (reached != target) throw std::logic_error("logical basis extraction fell short of GSD^2");
    return out;
}

bool is_logical(const StabilizerModel& m, const PauliOp& op) {
    for (const auto& g : m.generators)
        if (!commute(g.op, op)) return false;
    ZMat H = howell_form(exponent_matrix(m), m.d);
    ZVec res = howell_reduce(H, row_from_op(op, m), m.d);
    return !std::all_of(res.begin(), res.end(), [](long long v) { return v == 0; });
}

bool in_group(const StabilizerModel& m, const PauliOp& op) {
    if (op.d != m.d) return false;
    for (const auto& [e, f] : op.sites)
        if (m.qudit_index(e) < 0) return false;
    auto u = solve_left_mod(to_big(exponent_matrix(m)), row_from_op(op, m), m.d);
    if (!u) return false;
    PauliOp w;
    w.d = m.d;
    for (size_t i = 0; i < u->size(); ++i)
        if ((*u)[i]) w = multiply(w, pauli_power(m.generators[i].op, (*u)[i]));
    return w.phase == op.phase && w.sites == op.sites;
}

bool same_group(const StabilizerModel& a, const StabilizerModel& b) {
    if (a.d != b.d || a.qudits != b.qudits) return false;
    if (group_order(a) != group_order(b)) return false;
    for (const auto& g : b.generators)
        if (!in_group(a, g.op)) return false;
    return true;
}

namespace {

// Weight-ordered search for nonzero v with A v = 0 (mod d) and v outside the
// span tested by `outside`, by qubit weight.  Columns are scanned in order;
// once the scan passes the last supporting column of a row, that row's
// accumulated syndrome must already vanish.
struct PureSearcher {
    int d = 2;
    size_t n = 0;
    ZMat a;                                    // constraint rows (all-zero rows removed)
    std::vector<std::vector<int>> col_rows;    // rows supported on each column
    std::vector<std::vector<int>> rows_ending; // rows whose last support is this column
    std::function<bool(const std::vector<uint8_t>&)> outside;
    int site_weight_max = 1;

    PureSearcher(int d_, size_t n_, ZMat rows) : d(d_), n(n_) {
        for (auto& r : rows)
            if (std::any_of(r.begin(), r.end(), [](long long v) { return v != 0; })) a.push_back(r);
        col_rows.assign(n, {});
        rows_ending.assign(n, {});
        for (size_t i = 0; i < a.size(); ++i) {
            int last = -1;
            for (size_t j = 0; j < n; ++j)
                if (a[i][j]) {
                    col_rows[j].push_back(static_cast<int>(i));
                    last = static_cast<int>(j);
                }
            rows_ending[last].push_back(static_cast<int>(i));
        }
        site_weight_max = d == 4 ? 2 : 1;
    }

    int site_weight(int e) const { return qubit_weight(XZ{e, 0}, d); }

    // Exhaustive scan at exactly `target` qubits with the first nonzero entry
    // at column `first`.  Returns true on a hit.
    bool dfs_from(size_t first, int target) const {
        std::vector<int> syn(a.size(), 0);
        std::vector<uint8_t> assign(n, 0);
        bool hit = false;
        std::function<void(size_t, int)> rec = [&](size_t col, int rem) {
            if (hit) return;
            if (col > first)
                for (int i : rows_ending[col - 1])
                    if (syn[i] != 0) return;
            if (col == n) {
                if (rem == 0 && outside(assign)) hit = true;
                return;
            }
            if (rem > static_cast<int>(n - col) * site_weight_max) return;
            if (col > first) rec(col + 1, rem);
            for (int e = 1; e < d && !hit; ++e) {
                int w = site_weight(e);
                if (w > rem) continue;
                for (int i : col_rows[col]) syn[i] = static_cast<int>((syn[i] + e * a[i][col]) % d);
                assign[col] = static_cast<uint8_t>(e);
                rec(col + 1, rem - w);
                assign[col] = 0;
                for (int i : col_rows[col]) syn[i] = static_cast<int>(((syn[i] - e * a[i][col]) % d + d) % d);
            }
        };
        // Columns before `first` stay zero; their ending rows carry no syndrome.
        rec(first, target);
        return hit;
    }

    bool scan_weight(int target, int workers) const {
        if (workers <= 1) {
            for (size_t first = 0; first < n; ++first)
                if (dfs_from(first, target)) return true;
            return false;
        }
        std::vector<char> results(n, 0);
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t)
            pool.emplace_back([&, t]() {
                for (size_t first = t; first < n; first += workers)
                    results[first] = dfs_from(first, target) ? 1 : 0;
            });
        for (auto& th : pool) th.join();
        return std::any_of(results.begin(), results.end(), [](char c) { return c != 0; });
    }

};

}  // namespace

DistanceBound pure_distance(const StabilizerModel& m, bool x_side, int weight_cap) {
    const int d = m.d;
    const size_t n = m.qudits.size();
    ZMat E = exponent_matrix(m);
    const size_t k = E.size();

    ZMat a(k, ZVec(n, 0));
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < n; ++j) a[i][j] = x_side ? E[i][n + j] : E[i][j];

    DistanceBound out;
    if (n == 0) return out;

    BigInt total = big_pow(d, static_cast<long long>(n));
    BigInt image = a.empty() ? BigInt(1) : rowspace_order_mod(to_big(transpose(a)), d);
    BigInt kernel_order = total / image;
    ZMat with_units = E;
    for (size_t j = 0; j < n; ++j) {
        ZVec unit(2 * n, 0);
        unit[x_side ? j : n + j] = 1;
        with_units.push_back(unit);
    }
    BigInt s_order = E.empty() ? BigInt(1) : rowspace_order_mod(to_big(E), d);
    BigInt pure_in_s = s_order * total / rowspace_order_mod(to_big(with_units), d);
    out.exists = kernel_order > pure_in_s;
    if (!out.exists) return out;

    ZMat H = howell_form(E, d);
    auto outside = [&](const std::vector<uint8_t>& v) {
        ZVec full(2 * n, 0);
        for (size_t j = 0; j < n; ++j) full[x_side ? j : n + j] = v[j];
        ZVec res = howell_reduce(H, full, d);
        return !std::all_of(res.begin(), res.end(), [](long long r) { return r == 0; });
    };

    PureSearcher searcher(d, n, a);
    searcher.outside = outside;
    int workers = env_worker_count();
    for (int w = 1; w <= weight_cap; ++w) {
        if (searcher.scan_weight(w, workers)) {
            out.value = w;
            out.certified = true;
            return out;
        }
    }
    out.value = weight_cap;
    out.certified = false;
    return out;
}

CodeParameters distance(const StabilizerModel& m, int weight_cap) {
    CodeParameters cp;
    cp.n_qubits = static_cast<long long>(m.qudits.size()) * (m.d == 4 ? 2 : 1);
    cp.gsd = gsd_absolute(m);
    BigInt g = cp.gsd;
    cp.k = 0;
    while (g % 2 == 0) {
        g /= 2;
        ++cp.k;
    }
    cp.k_integral = g == 1;
    cp.logicals = logical_generators(m);
    if (cp.gsd > 1) {
        cp.d_x = pure_distance(m, true, weight_cap);
        cp.d_z = pure_distance(m, false, weight_cap);
    }
    return cp;
}

std::string code_report_json(const CodeParameters& p) {
    nlohmann::json j;
    if (p.gsd <= BigInt(std::numeric_limits<long long>::max()))
        j["gsd"] = to_ll(p.gsd);
    else
        j["gsd"] = p.gsd.str();
    if (p.k_integral)
        j["k"] = p.k;
    else
        j["k"] = nullptr;
    j["logicals"] = nlohmann::json::array();
    for (const auto& l : p.logicals) j["logicals"].push_back(to_string(l));
    auto emit = [&](const char* key, const DistanceBound& b) {
        if (!b.exists)
            j[key] = nullptr;
        else
            j[key] = b.value;
    };
    emit("d_X", p.d_x);
    emit("d_Z", p.d_z);
    bool certified = true;
    if (p.d_x.exists && !p.d_x.certified) certified = false;
    if (p.d_z.exists && !p.d_z.certified) certified = false;
    j["certified"] = certified;
    return j.dump(2);
}

}  // namespace qds
