#include "qdstab/anyon.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace qds {

namespace {

long long mod(long long v, long long n) {
    long long m = v % n;
    return m < 0 ? m + n : m;
}

std::set<long long> close_indices(const AnyonTheory& t, std::set<long long> seen) {
    seen.insert(0);
    bool grew = true;
    while (grew) {
        grew = false;
        std::set<long long> next = seen;
        for (long long a : seen)
            for (long long b : seen)
                if (next.insert(t.add(a, b)).second) grew = true;
        seen = std::move(next);
    }
    return seen;
}

long long isqrt_exact(long long n) {
    long long r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(n))));
    while (r * r > n) r--;
    while ((r + 1) * (r + 1) <= n) r++;
    if (r * r != n) throw std::invalid_argument("theory size is not a perfect square");
    return r;
}

std::vector<Cyc> braiding_matrix(const AnyonTheory& t, long long order) {
    long long n = t.label_count();
    long long step = order / t.spin_den;
    std::vector<Cyc> s(n * n, Cyc(static_cast<int>(order)));
    for (long long a = 0; a < n; a++)
        for (long long b = 0; b < n; b++)
            s[a * n + b] = Cyc::root(static_cast<int>(order), step * t.braid(a, b));
    return s;
}

}  // namespace

long long AnyonTheory::label_count() const {
    long long n = 1;
    for (long long m : cyc) n *= m;
    return n;
}

ZVec AnyonTheory::vec_of(long long index) const {
    ZVec v(cyc.size());
    for (size_t i = cyc.size(); i-- > 0;) {
        v[i] = index % cyc[i];
        index /= cyc[i];
    }
    return v;
}

long long AnyonTheory::index_of(const ZVec& v) const {
    if (v.size() != cyc.size()) throw std::invalid_argument("label vector length mismatch");
    long long idx = 0;
    for (size_t i = 0; i < cyc.size(); i++) idx = idx * cyc[i] + mod(v[i], cyc[i]);
    return idx;
}

long long AnyonTheory::add(long long a, long long b) const {
    ZVec va = vec_of(a), vb = vec_of(b);
    for (size_t i = 0; i < va.size(); i++) va[i] = mod(va[i] + vb[i], cyc[i]);
    return index_of(va);
}

long long AnyonTheory::neg(long long a) const {
    ZVec v = vec_of(a);
    for (size_t i = 0; i < v.size(); i++) v[i] = mod(-v[i], cyc[i]);
    return index_of(v);
}

long long AnyonTheory::braid(long long a, long long b) const {
    return mod(spin[add(a, b)] - spin[a] - spin[b], spin_den);
}

std::string AnyonTheory::name_of(long long a) const {
    if (a >= 0 && a < static_cast<long long>(names.size()) && !names[a].empty()) return names[a];
    ZVec v = vec_of(a);
    std::string s = "(";
    for (size_t i = 0; i < v.size(); i++) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s + ")";
}

void validate_theory(const AnyonTheory& t) {
    long long n = t.label_count();
    if (static_cast<long long>(t.spin.size()) != n)
        throw std::invalid_argument("spin table size does not match label count");
    for (long long s : t.spin)
        if (s < 0 || s >= t.spin_den) throw std::invalid_argument("spin exponent out of range");
    if (t.spin[0] != 0) throw std::invalid_argument("vacuum must have trivial spin");
    for (long long a = 0; a < n; a++)
        for (long long b = 0; b < n; b++)
            for (long long c = 0; c < n; c++) {
                long long lhs = t.braid(a, t.add(b, c));
                long long rhs = mod(t.braid(a, b) + t.braid(a, c), t.spin_den);
                if (lhs != rhs)
                    throw std::invalid_argument("spin table is not a quadratic form");
            }
}

AnyonTheory zd_double(long long d) {
    if (d < 2) throw std::invalid_argument("double requires d >= 2");
    AnyonTheory t;
    t.cyc = {d, d};
    t.spin_den = d;
    t.spin.resize(d * d);
    t.names.resize(d * d);
    for (long long p = 0; p < d; p++)
        for (long long q = 0; q < d; q++) {
            long long idx = p * d + q;
            t.spin[idx] = mod(p * q, d);
            std::string s;
            if (p == 1) s += "e";
            if (p > 1) s += "e^" + std::to_string(p);
            if (q == 1) s += "m";
            if (q > 1) s += "m^" + std::to_string(q);
            t.names[idx] = s.empty() ? "1" : s;
        }
    return t;
}

AnyonTheory ds_theory() {
    AnyonTheory t;
    t.cyc = {2, 2};
    t.spin_den = 4;
    t.spin = {0, 0, 1, 3};
    t.names = {"1", "b", "s", "sbar"};
    return t;
}

AnyonTheory trivial_theory() {
    AnyonTheory t;
    t.spin = {0};
    t.names = {"1"};
    return t;
}

AnyonTheory product_theory(const AnyonTheory& a, const AnyonTheory& b) {
    AnyonTheory t;
    t.cyc = a.cyc;
    t.cyc.insert(t.cyc.end(), b.cyc.begin(), b.cyc.end());
    t.spin_den = std::lcm(a.spin_den, b.spin_den);
    long long na = a.label_count(), nb = b.label_count();
    t.spin.resize(na * nb);
    t.names.resize(na * nb);
    for (long long i = 0; i < na; i++)
        for (long long j = 0; j < nb; j++) {
            t.spin[i * nb + j] =
                mod(a.spin[i] * (t.spin_den / a.spin_den) + b.spin[j] * (t.spin_den / b.spin_den),
                    t.spin_den);
            t.names[i * nb + j] = "(" + a.name_of(i) + "," + b.name_of(j) + ")";
        }
    return t;
}

AnyonTheory opposite_theory(const AnyonTheory& t) {
    AnyonTheory o = t;
    for (auto& s : o.spin) s = mod(-s, o.spin_den);
    return o;
}

AnyonSubgroup subgroup_closure(const AnyonTheory& t, const std::vector<ZVec>& gens) {
    std::set<long long> seen;
    for (const auto& g : gens) seen.insert(t.index_of(g));
    seen = close_indices(t, std::move(seen));
    return AnyonSubgroup(seen.begin(), seen.end());
}

bool is_lagrangian(const AnyonTheory& t, const AnyonSubgroup& s) {
    for (long long a : s)
        if (t.spin[a] != 0) return false;
    for (long long a : s)
        for (long long b : s)
            if (t.braid(a, b) != 0) return false;
    std::set<long long> members(s.begin(), s.end());
    for (long long y = 0; y < t.label_count(); y++) {
        if (members.count(y)) continue;
        bool detected = false;
        for (long long a : s)
            if (t.braid(y, a) != 0) {
                detected = true;
                break;
            }
        if (!detected) return false;
    }
    return true;
}

std::vector<AnyonSubgroup> enumerate_subgroups(const AnyonTheory& t) {
    std::set<AnyonSubgroup> known;
    AnyonSubgroup base = {0};
    known.insert(base);
    std::vector<AnyonSubgroup> queue = {base};
    while (!queue.empty()) {
        AnyonSubgroup s = queue.back();
        queue.pop_back();
        std::set<long long> members(s.begin(), s.end());
        for (long long x = 0; x < t.label_count(); x++) {
            if (members.count(x)) continue;
            std::set<long long> grown = members;
            grown.insert(x);
            grown = close_indices(t, std::move(grown));
            AnyonSubgroup next(grown.begin(), grown.end());
            if (known.insert(next).second) queue.push_back(next);
        }
    }
    return std::vector<AnyonSubgroup>(known.begin(), known.end());
}

std::vector<AnyonSubgroup> enumerate_lagrangian(const AnyonTheory& t) {
    std::vector<AnyonSubgroup> out;
    for (auto& s : enumerate_subgroups(t))
        if (is_lagrangian(t, s)) out.push_back(s);
    return out;
}

CondensedTheory condense_theory(const AnyonTheory& t, const std::vector<ZVec>& gens) {
    for (const auto& gv : gens) {
        long long g = t.index_of(gv);
        if (t.spin[g] != 0)
            throw std::invalid_argument("condensation subgroup contains a non-boson: " +
                                        t.name_of(g));
    }
    for (const auto& av : gens)
        for (const auto& bv : gens) {
            long long a = t.index_of(av), b = t.index_of(bv);
            if (t.braid(a, b) != 0)
                throw std::invalid_argument("condensation subgroup braids nontrivially: " +
                                            t.name_of(a) + " with " + t.name_of(b));
        }
    AnyonSubgroup c = subgroup_closure(t, gens);
    for (long long a : c)
        if (t.spin[a] != 0)
            throw std::invalid_argument("condensation subgroup contains a non-boson: " +
                                        t.name_of(a));

    long long n = t.label_count();
    CondensedTheory out;
    if (c.size() == 1) {
        out.quotient = t;
        out.label_map.resize(n);
        for (long long x = 0; x < n; x++) out.label_map[x] = x;
        return out;
    }

    std::vector<long long> rep(n, -1);
    std::vector<long long> reps;
    for (long long x = 0; x < n; x++) {
        bool deconfined = true;
        for (long long a : c)
            if (t.braid(x, a) != 0) {
                deconfined = false;
                break;
            }
        if (!deconfined) continue;
        long long r = x;
        for (long long a : c) r = std::min(r, t.add(x, a));
        rep[x] = r;
        if (r == x) reps.push_back(x);
    }
    auto qadd = [&](long long a, long long b) { return rep[t.add(a, b)]; };

    // Greedy basis for the quotient group: repeatedly take a coset of
    // maximal order modulo the span so far. This yields the invariant
    // factors largest-first and a coordinate system for the labels.
    std::vector<long long> basis, factors;
    std::set<long long> span = {0};
    while (true) {
        long long best = -1, best_ord = 1;
        for (long long r : reps) {
            long long acc = r, ord = 1;
            while (!span.count(acc)) {
                acc = qadd(acc, r);
                ord++;
            }
            if (ord > best_ord) {
                best_ord = ord;
                best = r;
            }
        }
        if (best < 0) break;
        basis.push_back(best);
        factors.push_back(best_ord);
        span.insert(best);
        bool grew = true;
        while (grew) {
            grew = false;
            std::set<long long> next = span;
            for (long long a : span)
                for (long long b : span)
                    if (next.insert(qadd(a, b)).second) grew = true;
            span = std::move(next);
        }
    }
    if (span.size() != reps.size())
        throw std::logic_error("quotient decomposition did not cover all cosets");

    out.quotient.cyc = factors;
    out.quotient.spin_den = t.spin_den;
    long long qn = out.quotient.label_count();
    if (qn != static_cast<long long>(reps.size()))
        throw std::logic_error("quotient decomposition order mismatch");
    out.quotient.spin.assign(qn, 0);

    std::map<long long, long long> coset_index;
    for (long long idx = 0; idx < qn; idx++) {
        ZVec tuple = out.quotient.vec_of(idx);
        long long elem = 0;
        for (size_t i = 0; i < basis.size(); i++)
            for (long long k = 0; k < tuple[i]; k++) elem = qadd(elem, basis[i]);
        if (!coset_index.emplace(elem, idx).second)
            throw std::logic_error("quotient coordinates are not a bijection");
        out.quotient.spin[idx] = t.spin[elem];
    }

    out.label_map.assign(n, -1);
    for (long long x = 0; x < n; x++) {
        if (rep[x] < 0) continue;
        out.label_map[x] = coset_index.at(rep[x]);
        if (t.spin[x] != out.quotient.spin[out.label_map[x]])
            throw std::logic_error("spin is not constant on a condensation class");
    }
    return out;
}

bool theories_equivalent(const AnyonTheory& a, const AnyonTheory& b) {
    long long n = a.label_count();
    if (n != b.label_count()) return false;
    long long den = std::lcm(a.spin_den, b.spin_den);
    auto spin_a = [&](long long x) { return a.spin[x] * (den / a.spin_den); };
    auto spin_b = [&](long long x) { return b.spin[x] * (den / b.spin_den); };

    size_t k = a.cyc.size();
    std::vector<std::vector<long long>> candidates(k);
    for (size_t i = 0; i < k; i++) {
        for (long long y = 0; y < n; y++) {
            long long acc = 0;
            for (long long step = 0; step < a.cyc[i]; step++) acc = b.add(acc, y);
            if (acc == 0) candidates[i].push_back(y);
        }
    }
    if (k == 0) return n == 1;
    std::vector<size_t> pick(k, 0);
    while (true) {
        std::vector<long long> image(n, 0);
        bool bijective = true;
        std::set<long long> seen;
        for (long long x = 0; x < n && bijective; x++) {
            ZVec v = a.vec_of(x);
            long long y = 0;
            for (size_t i = 0; i < k; i++)
                for (long long step = 0; step < v[i]; step++)
                    y = b.add(y, candidates[i][pick[i]]);
            image[x] = y;
            bijective = seen.insert(y).second;
        }
        if (bijective) {
            bool match = true;
            for (long long x = 0; x < n && match; x++) match = spin_a(x) == spin_b(image[x]);
            if (match) return true;
        }
        size_t i = 0;
        for (; i < k && ++pick[i] == candidates[i].size(); i++) pick[i] = 0;
        if (i == k) break;
    }
    return false;
}

TunnelingMatrix tunneling_identity(const AnyonTheory& t) {
    TunnelingMatrix m{t, t, {}};
    long long n = t.label_count();
    m.w.assign(n, ZVec(n, 0));
    for (long long i = 0; i < n; i++) m.w[i][i] = 1;
    return m;
}

TunnelingMatrix tunneling_matrix(const AnyonTheory& t, const CondensedTheory& c) {
    TunnelingMatrix m{t, c.quotient, {}};
    m.w.assign(c.quotient.label_count(), ZVec(t.label_count(), 0));
    for (long long a = 0; a < t.label_count(); a++)
        if (c.label_map[a] >= 0) m.w[c.label_map[a]][a] = 1;
    return m;
}

TunnelingMatrix tunneling_automorphism(const AnyonTheory& t, const ZMat& action) {
    size_t k = t.cyc.size();
    if (action.size() != k || (k && action[0].size() != k))
        throw std::invalid_argument("automorphism matrix has wrong shape");
    for (size_t i = 0; i < k; i++)
        for (size_t j = 0; j < k; j++)
            if (mod(action[i][j] * t.cyc[j], t.cyc[i]) != 0)
                throw std::invalid_argument("matrix does not respect the factor orders");
    long long n = t.label_count();
    std::vector<long long> image(n);
    std::set<long long> seen;
    for (long long x = 0; x < n; x++) {
        ZVec v = t.vec_of(x), w(k, 0);
        for (size_t i = 0; i < k; i++) {
            long long acc = 0;
            for (size_t j = 0; j < k; j++) acc += action[i][j] * v[j];
            w[i] = mod(acc, t.cyc[i]);
        }
        image[x] = t.index_of(w);
        if (!seen.insert(image[x]).second)
            throw std::invalid_argument("matrix is not a bijection on labels");
    }
    TunnelingMatrix m{t, t, {}};
    m.w.assign(n, ZVec(n, 0));
    for (long long x = 0; x < n; x++) m.w[image[x]][x] = 1;
    return m;
}

bool check_tunneling(const TunnelingMatrix& m) {
    long long na = m.domain.label_count(), nb = m.codomain.label_count();
    if (static_cast<long long>(m.w.size()) != nb)
        throw std::invalid_argument("tunneling matrix row count mismatch");
    for (const auto& row : m.w)
        if (static_cast<long long>(row.size()) != na)
            throw std::invalid_argument("tunneling matrix column count mismatch");

    for (const auto& row : m.w)
        for (long long v : row)
            if (v < 0) return false;
    if (m.w[0][0] != 1) return false;

    long long order = std::lcm(m.domain.spin_den, m.codomain.spin_den);
    for (long long b = 0; b < nb; b++)
        for (long long a = 0; a < na; a++) {
            if (m.w[b][a] == 0) continue;
            if (m.domain.spin[a] * (order / m.domain.spin_den) !=
                m.codomain.spin[b] * (order / m.codomain.spin_den))
                return false;
        }

    auto sa = braiding_matrix(m.domain, order);
    auto sb = braiding_matrix(m.codomain, order);
    long long ra = isqrt_exact(na), rb = isqrt_exact(nb);
    for (long long b = 0; b < nb; b++)
        for (long long a = 0; a < na; a++) {
            Cyc lhs(static_cast<int>(order)), rhs(static_cast<int>(order));
            for (long long j = 0; j < nb; j++)
                lhs += sb[b * nb + j] * m.w[j][a];
            for (long long j = 0; j < na; j++)
                rhs += sa[j * na + a] * m.w[b][j];
            if (!(lhs * ra == rhs * rb)) return false;
        }

    for (long long i = 0; i < nb; i++)
        for (long long j = 0; j < nb; j++)
            for (long long a = 0; a < na; a++)
                for (long long b = 0; b < na; b++) {
                    long long need = m.w[i][a] * m.w[j][b];
                    if (need > m.w[m.codomain.add(i, j)][m.domain.add(a, b)]) return false;
                }
    return true;
}

nlohmann::json theory_to_json(const AnyonTheory& t) {
    nlohmann::json j;
    j["cyc"] = t.cyc;
    j["spin_den"] = t.spin_den;
    j["spin"] = t.spin;
    if (!t.names.empty()) j["names"] = t.names;
    return j;
}

AnyonTheory theory_from_json(const nlohmann::json& j) {
    if (j.contains("zd_double")) return zd_double(j.at("zd_double").get<long long>());
    if (j.contains("ds") && j.at("ds").get<bool>()) return ds_theory();
    AnyonTheory t;
    t.cyc = j.at("cyc").get<std::vector<long long>>();
    t.spin_den = j.at("spin_den").get<long long>();
    t.spin = j.at("spin").get<std::vector<long long>>();
    if (j.contains("names")) t.names = j.at("names").get<std::vector<std::string>>();
    validate_theory(t);
    return t;
}

nlohmann::json tunneling_to_json(const TunnelingMatrix& m) {
    nlohmann::json j;
    j["domain"] = theory_to_json(m.domain);
    j["codomain"] = theory_to_json(m.codomain);
    j["w"] = m.w;
    return j;
}

TunnelingMatrix tunneling_from_json(const nlohmann::json& j) {
    TunnelingMatrix m{theory_from_json(j.at("domain")), theory_from_json(j.at("codomain")), {}};
    m.w = j.at("w").get<ZMat>();
    return m;
}

}  // namespace qds
