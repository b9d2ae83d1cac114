#include "qdstab/condense.h"

#include "qdstab/intmat.h"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace qds {

namespace {

long long llmod(long long a, long long n) {
    long long r = a % n;
    return r < 0 ? r + n : r;
}

long long inv_mod(long long a, long long n) {
    long long t = 0, nt = 1, r = n, nr = llmod(a, n);
    while (nr != 0) {
        long long q = r / nr;
        t = std::exchange(nt, t - q * nt);
        r = std::exchange(nr, r - q * nr);
    }
    if (r != 1) throw std::invalid_argument("inv_mod: not a unit");
    return llmod(t, n);
}

char dir_char(Dir d) {
    switch (d) {
        case Dir::Up: return 'U';
        case Dir::Down: return 'D';
        case Dir::Left: return 'L';
        case Dir::Right: return 'R';
    }
    return '?';
}

// One dyon step on one layer, skipping factors whose exponent vanishes and
// refusing anchors whose needed edges fall off the lattice.
std::optional<PauliOp> segment_on_layer(const StabilizerModel& m, int p, int q,
                                        Coord a, Dir dir) {
    const Lattice& l = m.lattice;
    PauliOp op;
    op.d = m.d;
    bool ok = true;
    auto put = [&](EdgeId e, int x, int z) {
        if (llmod(x, m.d) == 0 && llmod(z, m.d) == 0) return;
        if (!l.has_edge(e)) {
            ok = false;
            return;
        }
        op.mul_site(e, x, z);
    };
    // A dyon with both charge and flux odd moves diagonally: pairing the Z
    // part with the X part one column to the left is the unique short shape
    // whose translates commute with every X^2 Z^2 operator of the twisted
    // model, so strings of it create semions without evicting the bulk.
    if (llmod(p, 2) == 1 && llmod(q, 2) == 1) {
        switch (dir) {
            case Dir::Up:
                put(l.v_edge(a.c, a.r), 0, p);
                put(l.h_edge(a.c - 1, a.r), -q, 0);
                break;
            case Dir::Down:
                put(l.v_edge(a.c, a.r - 1), 0, -p);
                put(l.h_edge(a.c - 1, a.r - 1), q, 0);
                break;
            case Dir::Right:
            case Dir::Left:
                return std::nullopt;
        }
        if (!ok) return std::nullopt;
        return op;
    }
    switch (dir) {
        case Dir::Up:
            put(l.v_edge(a.c, a.r), 0, p);
            put(l.h_edge(a.c, a.r + 1), -q, 0);
            break;
        case Dir::Right:
            put(l.h_edge(a.c, a.r), 0, p);
            put(l.v_edge(a.c + 1, a.r), -q, 0);
            break;
        case Dir::Down:
            put(l.v_edge(a.c, a.r - 1), 0, -p);
            put(l.h_edge(a.c, a.r), q, 0);
            break;
        case Dir::Left:
            put(l.h_edge(a.c - 1, a.r), 0, -p);
            put(l.v_edge(a.c, a.r), q, 0);
            break;
    }
    if (!ok) return std::nullopt;
    return op;
}

std::optional<PauliOp> pair_segment(const StabilizerModel& m, const DyonGenerator& g,
                                    Coord a, Dir dir, Coord off = {0, 0}) {
    auto first = segment_on_layer(m, g.p1, g.q1, a, dir);
    if (!first) return std::nullopt;
    if (llmod(g.p2, m.d) == 0 && llmod(g.q2, m.d) == 0) return first;
    Coord b = m.lattice.cell(a.c + off.c, a.r + off.r);
    auto second = segment_on_layer(m, g.p2, g.q2, b, dir);
    if (!second) return std::nullopt;
    return multiply(*first, mirror_op(*second, m.lattice.width, 1));
}

int wrapped_dist(int a, int b, int extent, bool wrap) {
    int v = std::abs(a - b);
    if (wrap && extent > 0) {
        v %= extent;
        v = std::min(v, extent - v);
    }
    return v;
}

int edge_dist(const Lattice& l, const EdgeId& a, const EdgeId& b) {
    // Folded layers stack at their unfolded position, so measure there.
    EdgeId ua = a.layer == 1 ? mirror_edge(a, l.width, 0) : a;
    EdgeId ub = b.layer == 1 ? mirror_edge(b, l.width, 0) : b;
    int dc = wrapped_dist(ua.c, ub.c, l.width, l.wrap_x);
    int dr = wrapped_dist(ua.r, ub.r, l.height, l.wrap_y);
    return std::max(dc, dr);
}

bool within_radius(const Lattice& l, const PauliOp& h, const PauliOp& g, int radius) {
    for (const auto& [he, hf] : h.sites) {
        int best = -1;
        for (const auto& [ge, gf] : g.sites) {
            int dist = edge_dist(l, he, ge);
            if (best < 0 || dist < best) best = dist;
        }
        if (best < 0 || best > radius) return false;
    }
    return true;
}

// Greedy descent: multiply by nearby pool operators while the qubit weight
// strictly drops.
void reduce_weight(PauliOp& g, const std::vector<PauliOp>& pool, const Lattice& lattice,
                   int radius) {
    bool improved = true;
    while (improved) {
        improved = false;
        for (const PauliOp& h : pool) {
            if (!within_radius(lattice, h, g, radius)) continue;
            long long ord = operator_order(h);
            for (long long t = 1; t < ord; ++t) {
                PauliOp cand = multiply(g, pauli_power(h, t));
                if (qubit_weight(cand) < qubit_weight(g)) {
                    g = std::move(cand);
                    improved = true;
                }
            }
        }
    }
}

void append_layer_label(std::string& out, int p, int q) {
    if (p == 0 && q == 0) {
        out += '1';
        return;
    }
    auto pow_part = [&](char base, int exp) {
        if (exp == 0) return;
        out += base;
        if (exp != 1) out += std::to_string(exp);
    };
    pow_part('e', p);
    pow_part('m', q);
}

}  // namespace

Region rect_region(int c0, int r0, int c1, int r1) {
    Region out;
    for (int c = c0; c <= c1; ++c)
        for (int r = r0; r <= r1; ++r) out.cells.insert(Coord{c, r});
    return out;
}

bool touches_region(const EdgeId& e, const Region& region, const Lattice& lattice) {
    // Layer-1 edges are stored mirrored; test them at their unfolded position
    // so one region addresses the same spot on both layers.
    EdgeId u = e.layer == 1 ? mirror_edge(e, lattice.width, 0) : e;
    // h(c,r) borders cells (c,r-1) and (c,r); v(c,r) borders (c-1,r) and (c,r).
    Coord a = lattice.cell(u.c, u.r);
    Coord b = u.kind == 'H' ? lattice.cell(u.c, u.r - 1) : lattice.cell(u.c - 1, u.r);
    return region.cells.count(a) > 0 || region.cells.count(b) > 0;
}

std::string to_string(const DyonGenerator& g) {
    std::string out;
    append_layer_label(out, g.p1, g.q1);
    if (g.p2 != 0 || g.q2 != 0) {
        out += '|';
        append_layer_label(out, g.p2, g.q2);
    }
    return out;
}

std::optional<DyonGenerator> parse_dyon(const std::string& s) {
    auto parse_layer = [](const std::string& part, int& p, int& q) {
        if (part.empty()) return false;
        if (part == "1") return true;
        size_t i = 0;
        while (i < part.size()) {
            char base = part[i++];
            if (base != 'e' && base != 'm') return false;
            int sign = 1, exp = 0;
            bool digits = false;
            if (i < part.size() && part[i] == '-') {
                sign = -1;
                ++i;
            }
            while (i < part.size() && std::isdigit(static_cast<unsigned char>(part[i]))) {
                exp = exp * 10 + (part[i++] - '0');
                digits = true;
            }
            if (!digits) exp = 1;
            (base == 'e' ? p : q) += sign * exp;
        }
        return true;
    };
    DyonGenerator g;
    size_t bar = s.find('|');
    std::string first = s.substr(0, bar);
    if (!parse_layer(first, g.p1, g.q1)) return std::nullopt;
    if (bar != std::string::npos) {
        if (!parse_layer(s.substr(bar + 1), g.p2, g.q2)) return std::nullopt;
    }
    return g;
}

void require_condensable(const CondensationJob& job) {
    const long long d = job.model.d;
    auto twist = [&](const DyonGenerator& a, const DyonGenerator& b) {
        long long t = static_cast<long long>(a.p1) * b.q1 + static_cast<long long>(a.q1) * b.p1 -
                      static_cast<long long>(a.p2) * b.q2 - static_cast<long long>(a.q2) * b.p2;
        return llmod(t, d);
    };
    for (const DyonGenerator& g : job.subgroup) {
        long long spin = llmod(static_cast<long long>(g.p1) * g.q1 -
                                   static_cast<long long>(g.p2) * g.q2,
                               d);
        if (spin != 0)
            throw std::invalid_argument("subgroup not condensable: " + to_string(g) +
                                        " is not a boson");
    }
    for (size_t i = 0; i < job.subgroup.size(); ++i)
        for (size_t j = i + 1; j < job.subgroup.size(); ++j)
            if (twist(job.subgroup[i], job.subgroup[j]) != 0)
                throw std::invalid_argument(
                    "subgroup not condensable: " + to_string(job.subgroup[i]) + " and " +
                    to_string(job.subgroup[j]) + " braid nontrivially");
}

std::vector<Generator> ribbon_generators(const CondensationJob& job) {
    require_condensable(job);
    const StabilizerModel& m = job.model;
    std::vector<Dir> dirs{Dir::Up, Dir::Right, Dir::Down, Dir::Left};
    if (job.wall_axis) {
        if (*job.wall_axis == 'V')
            dirs = {Dir::Up};
        else if (*job.wall_axis == 'H')
            dirs = {Dir::Right};
        else
            throw std::invalid_argument("wall axis must be 'H' or 'V'");
    }
    // Segments only touch edges incident to their anchor cell, so anchoring
    // from the region plus its side neighbors reaches every edge of the
    // region closure; the support filter below discards the overshoot.
    std::set<Coord> anchors;
    for (const Coord& cell : job.region.cells) {
        anchors.insert(m.lattice.cell(cell.c, cell.r));
        anchors.insert(m.lattice.cell(cell.c + 1, cell.r));
        anchors.insert(m.lattice.cell(cell.c - 1, cell.r));
        anchors.insert(m.lattice.cell(cell.c, cell.r + 1));
        anchors.insert(m.lattice.cell(cell.c, cell.r - 1));
    }
    // On a folded model the two halves of a pair segment need not share an
    // anchor: any rigid per-generator offset of the mirrored half yields the
    // same condensed subgroup, and mixed subgroups may only admit a commuting
    // segment family at a nonzero offset. Try the aligned layout first, then
    // search small offsets.
    auto emit = [&](const std::vector<Coord>& offs) -> std::optional<std::vector<Generator>> {
        std::vector<Generator> out;
        std::set<std::string> seen;
        for (const Coord& cell : anchors) {
            for (size_t gi = 0; gi < job.subgroup.size(); ++gi) {
                const DyonGenerator& g = job.subgroup[gi];
                for (Dir dir : dirs) {
                    auto rib = pair_segment(m, g, cell, dir, offs[gi]);
                    if (!rib || rib->is_identity()) continue;
                    bool inside = true;
                    for (const auto& [e, f] : rib->sites)
                        if (m.qudit_index(e) < 0 || !touches_region(e, job.region, m.lattice)) {
                            inside = false;
                            break;
                        }
                    if (!inside) continue;
                    if (!seen.insert(to_string(*rib)).second) continue;
                    std::string tag = "L[" + to_string(g) + "]" + dir_char(dir) + "(" +
                                      std::to_string(cell.c) + "," + std::to_string(cell.r) + ")";
                    out.push_back(Generator{std::move(tag), std::move(*rib)});
                }
            }
        }
        for (size_t i = 0; i < out.size(); ++i)
            for (size_t j = i + 1; j < out.size(); ++j)
                if (!commute(out[i].op, out[j].op)) return std::nullopt;
        return out;
    };
    const size_t k = job.subgroup.size();
    if (auto got = emit(std::vector<Coord>(k, Coord{0, 0}))) return *got;
    std::vector<Coord> shifts;
    for (int dc = -1; dc <= 1; ++dc)
        for (int dr = -1; dr <= 1; ++dr) shifts.push_back(Coord{dc, dr});
    std::sort(shifts.begin(), shifts.end(), [](const Coord& a, const Coord& b) {
        int wa = std::abs(a.c) + std::abs(a.r), wb = std::abs(b.c) + std::abs(b.r);
        return wa != wb ? wa < wb : std::make_pair(a.c, a.r) < std::make_pair(b.c, b.r);
    });
    std::vector<size_t> pick(k, 0);
    while (true) {
        std::vector<Coord> offs(k);
        for (size_t i = 0; i < k; ++i) offs[i] = shifts[pick[i]];
        if (auto got = emit(offs)) return *got;
        size_t i = k;
        while (i > 1 && pick[i - 1] + 1 == shifts.size()) pick[--i] = 0;
        if (i <= 1) break;
        ++pick[i - 1];
    }
    throw std::invalid_argument("subgroup not condensable: no commuting segment layout found");
}

std::vector<Generator> promoted_generators(const std::vector<Generator>& removed,
                                           const std::vector<Generator>& kept,
                                           const Lattice& lattice, int d,
                                           int locality_radius) {
    if (removed.empty()) return {};
    const size_t k = removed.size();
    ZMat pairing(k, ZVec(std::max<size_t>(kept.size(), 1), 0));
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < kept.size(); ++j)
            pairing[i][j] = llmod(symplectic_product(removed[i].op, kept[j].op), d);
    ZMat ker = left_kernel_mod(to_big(pairing), d);
    if (ker.empty()) return {};

    std::vector<PauliOp> prods;
    for (const ZVec& u : ker) {
        PauliOp p = PauliOp::identity(d);
        for (size_t i = 0; i < k; ++i)
            if (u[i]) p = multiply(p, pauli_power(removed[i].op, u[i]));
        prods.push_back(std::move(p));
    }

    // Howell-canonical basis of the products, with trailing carrier columns
    // recording which combination each basis row is.
    std::set<EdgeId> su;
    for (const PauliOp& p : prods)
        for (const auto& [e, f] : p.sites) su.insert(e);
    std::vector<EdgeId> support(su.begin(), su.end());
    const size_t w = 2 * support.size();
    auto col_of = [&](const EdgeId& e) {
        return static_cast<size_t>(std::lower_bound(support.begin(), support.end(), e) -
                                   support.begin());
    };
    ZMat rows(prods.size(), ZVec(w + prods.size(), 0));
    for (size_t i = 0; i < prods.size(); ++i) {
        for (const auto& [e, f] : prods[i].sites) {
            rows[i][col_of(e)] = f.x;
            rows[i][support.size() + col_of(e)] = f.z;
        }
        rows[i][w + i] = 1;
    }

    std::vector<Generator> out;
    std::vector<PauliOp> pool;
    for (const Generator& g : kept) pool.push_back(g.op);
    for (const ZVec& row : howell_form(rows, d)) {
        bool live = std::any_of(row.begin(), row.begin() + static_cast<long>(w),
                                [](long long v) { return v != 0; });
        if (!live) continue;
        PauliOp g = PauliOp::identity(d);
        for (size_t j = 0; j < prods.size(); ++j)
            if (row[w + j]) g = multiply(g, pauli_power(prods[j], row[w + j]));
        if (g.is_scalar()) {
            if (g.phase != 0)
                throw std::runtime_error("promoted generator reduced to a scalar: w^" +
                                         std::to_string(g.phase));
            continue;
        }
        reduce_weight(g, pool, lattice, locality_radius);
        pool.push_back(g);
        out.push_back(Generator{"P" + std::to_string(out.size()), std::move(g)});
    }
    return out;
}

namespace {

// Restricts every generator off the qudit set `which` by dividing out a
// matching element of the subgroup supported entirely there, then drops the
// set.  Callers ensure that subgroup has order d^|which|.
void erase_set(StabilizerModel& m, const std::vector<size_t>& which) {
    const long long d = m.d;
    const size_t n = m.qudits.size();
    const size_t k = which.size();
    std::vector<char> in_set(n, 0);
    for (size_t qi : which) in_set[qi] = 1;
    std::string label;
    for (size_t qi : which) label += (label.empty() ? "" : ",") + to_string(m.qudits[qi]);

    ZMat full = exponent_matrix(m);
    ZMat reduced(m.generators.size(), ZVec(2 * (n - k), 0));
    for (size_t i = 0; i < full.size(); ++i) {
        size_t c = 0;
        for (size_t j = 0; j < 2 * n; ++j) {
            if (in_set[j % n]) continue;
            reduced[i][c++] = full[i][j];
        }
    }
    auto set_xz = [&](const PauliOp& p) {
        ZVec xz(2 * k, 0);
        for (size_t t = 0; t < k; ++t) {
            XZ f = p.at(m.qudits[which[t]]);
            xz[t] = f.x;
            xz[k + t] = f.z;
        }
        return xz;
    };
    std::vector<PauliOp> pinned;
    ZMat pinned_xz;
    for (const ZVec& u : left_kernel_mod(to_big(reduced), d)) {
        PauliOp h = PauliOp::identity(m.d);
        for (size_t i = 0; i < u.size(); ++i)
            if (u[i]) h = multiply(h, pauli_power(m.generators[i].op, u[i]));
        ZVec xz = set_xz(h);
        if (std::all_of(xz.begin(), xz.end(), [](long long v) { return v == 0; })) {
            if (h.phase != 0)
                throw std::runtime_error("scalar obstruction: condensed set " + label +
                                         " carries a phase");
            continue;
        }
        pinned.push_back(std::move(h));
        pinned_xz.push_back(std::move(xz));
    }
    for (Generator& g : m.generators) {
        ZVec target = set_xz(g.op);
        if (std::all_of(target.begin(), target.end(), [](long long v) { return v == 0; }))
            continue;
        auto sol = solve_left_mod(to_big(pinned_xz), target, d);
        if (!sol)
            throw std::runtime_error("non-gappable configuration: cannot restrict " + g.tag +
                                     " off " + label);
        PauliOp h = PauliOp::identity(m.d);
        for (size_t j = 0; j < sol->size(); ++j)
            if ((*sol)[j]) h = multiply(h, pauli_power(pinned[j], (*sol)[j]));
        g.op = multiply(g.op, inverse(h));
    }
    std::vector<size_t> desc = which;
    std::sort(desc.rbegin(), desc.rend());
    for (size_t qi : desc) m.qudits.erase(m.qudits.begin() + static_cast<long>(qi));
    std::erase_if(m.generators, [](const Generator& g) {
        if (!g.op.is_scalar()) return false;
        if (g.op.phase != 0)
            throw std::runtime_error("scalar obstruction: restricting " + g.tag +
                                     " left a phase");
        return true;
    });
}

// Qudit indices of a fully pinned window, or empty when none qualifies.  A
// window collects the qudits both of whose incident cells (at the unfolded
// position for layer 1) lie in the region within Chebyshev radius rho of a
// region cell; it is fully pinned when the stabilizer subgroup supported
// entirely on it has order d^|window|.  Pair and block condensates pin such
// windows without ever pinning a single qudit.
std::vector<size_t> condensed_window(const StabilizerModel& m, const Region& region,
                                     int max_radius) {
    const long long d = m.d;
    const size_t n = m.qudits.size();
    if (n == 0) return {};
    std::vector<std::array<Coord, 2>> incident(n);
    for (size_t i = 0; i < n; ++i) {
        EdgeId u = m.qudits[i].layer == 1 ? mirror_edge(m.qudits[i], m.lattice.width, 0)
                                          : m.qudits[i];
        incident[i] = {m.lattice.cell(u.c, u.r),
                       u.kind == 'H' ? m.lattice.cell(u.c, u.r - 1)
                                     : m.lattice.cell(u.c - 1, u.r)};
    }
    ZMat full = exponent_matrix(m);
    auto cell_near = [&](const Coord& a, const Coord& b, int rho) {
        return wrapped_dist(a.c, b.c, m.lattice.width, m.lattice.wrap_x) <= rho &&
               wrapped_dist(a.r, b.r, m.lattice.height, m.lattice.wrap_y) <= rho;
    };
    for (int rho = 1; rho <= max_radius; ++rho) {
        for (const Coord& center : region.cells) {
            std::vector<size_t> window;
            for (size_t i = 0; i < n; ++i) {
                bool in = true;
                for (const Coord& cell : incident[i])
                    if (!region.cells.count(cell) || !cell_near(cell, center, rho)) in = false;
                if (in) window.push_back(i);
            }
            if (window.empty()) continue;
            std::vector<char> in_set(n, 0);
            for (size_t qi : window) in_set[qi] = 1;
            ZMat perm(full.size(), ZVec(2 * n, 0));
            const size_t out_cols = 2 * (n - window.size());
            for (size_t i = 0; i < full.size(); ++i) {
                size_t a = 0, b = out_cols;
                for (size_t j = 0; j < 2 * n; ++j)
                    perm[i][in_set[j % n] ? b++ : a++] = full[i][j];
            }
            ZMat inside;
            for (const ZVec& row : howell_form(perm, d)) {
                bool outside = false;
                for (size_t j = 0; j < out_cols; ++j)
                    if (row[j] != 0) outside = true;
                if (outside) continue;
                inside.emplace_back(row.begin() + static_cast<long>(out_cols), row.end());
            }
            BigInt want = 1;
            for (size_t t = 0; t < window.size(); ++t) want *= d;
            if (!inside.empty() && howell_span_order(howell_form(inside, d), d) == want)
                return window;
        }
    }
    return {};
}

// Registry index of a qudit whose single-qudit stabilizer subgroup has order
// d, or -1 when none qualifies.  Uses |S_q| = |S| d^2 / |span(S, X_q, Z_q)|.
int condensed_qudit(const StabilizerModel& m) {
    const long long d = m.d;
    const size_t n = m.qudits.size();
    ZMat h = howell_form(exponent_matrix(m), d);
    BigInt order = howell_span_order(h, d);
    for (size_t qi = 0; qi < n; ++qi) {
        ZMat aug = h;
        aug.emplace_back(2 * n, 0);
        aug.back()[qi] = 1;
        aug.emplace_back(2 * n, 0);
        aug.back()[n + qi] = 1;
        BigInt joint = howell_span_order(howell_form(aug, d), d);
        if (order * d * d / joint == d) return static_cast<int>(qi);
    }
    return -1;
}

}  // namespace

CondensationResult apply_condensation(const CondensationJob& job) {
    const StabilizerModel& in = job.model;
    std::vector<Generator> ribbons = ribbon_generators(job);

    std::vector<Generator> kept, removed;
    for (const Generator& g : in.generators) {
        bool ok = std::all_of(ribbons.begin(), ribbons.end(),
                              [&](const Generator& r) { return commute(r.op, g.op); });
        (ok ? kept : removed).push_back(g);
    }
    std::vector<Generator> pool = ribbons;
    pool.insert(pool.end(), kept.begin(), kept.end());
    std::vector<Generator> promoted =
        promoted_generators(removed, pool, in.lattice, in.d, job.locality_radius);

    CondensationResult res;
    for (const Generator& g : removed) res.removed_tags.push_back(g.tag);
    res.promoted_count = static_cast<long long>(promoted.size());

    StabilizerModel out = in;
    out.generators.clear();
    std::set<std::string> seen;
    auto push = [&](const Generator& g) {
        if (g.op.is_identity()) return;
        if (!seen.insert(to_string(g.op)).second) return;
        out.generators.push_back(g);
    };
    for (const Generator& g : ribbons) push(g);
    for (const Generator& g : kept) push(g);
    for (const Generator& g : promoted) push(g);

    for (size_t pass = 0; pass < in.qudits.size(); ++pass) {
        std::vector<size_t> gone;
        if (int qi = condensed_qudit(out); qi >= 0)
            gone.push_back(static_cast<size_t>(qi));
        else
            gone = condensed_window(out, job.region, job.locality_radius);
        if (gone.empty()) break;
        for (size_t qi : gone) res.erased.push_back(out.qudits[qi]);
        erase_set(out, gone);
        ModelCheck chk = validate_model(out);
        if (!chk.commuting)
            throw std::runtime_error("non-gappable configuration: " + chk.detail);
        if (!chk.scalar_free) throw std::runtime_error("scalar obstruction: " + chk.detail);
    }

    res.delta = delta_between(in, out);
    res.model = std::move(out);
    return res;
}

StabilizerModel unfold_and_stitch(const StabilizerModel& m) {
    struct Stitch {
        EdgeId keep, drop;
        int keep_x = 0, drop_x = 0;
        PauliOp op;
    };
    std::vector<Stitch> stitches;
    std::set<std::string> seen;
    std::map<EdgeId, size_t> owner;
    for (const Generator& g : m.generators) {
        const PauliOp& p = g.op;
        if (p.sites.size() != 2) continue;
        auto it = p.sites.begin();
        auto [e1, f1] = *it++;
        auto [e2, f2] = *it;
        if (f1.z != 0 || f2.z != 0) continue;
        if (std::gcd(static_cast<long long>(f1.x), static_cast<long long>(m.d)) != 1 ||
            std::gcd(static_cast<long long>(f2.x), static_cast<long long>(m.d)) != 1)
            continue;
        if (e1.layer == e2.layer) continue;
        if (!seen.insert(to_string(p)).second) continue;
        for (const EdgeId& e : {e1, e2})
            if (owner.count(e))
                throw std::runtime_error("conflicting identifications at " + to_string(e));
        owner[e1] = stitches.size();
        owner[e2] = stitches.size();
        stitches.push_back(Stitch{e1, e2, f1.x, f2.x, p});
    }
    if (stitches.empty()) return m;

    const long long d = m.d;
    StabilizerModel out = m;
    out.generators.clear();
    std::set<std::string> kept_ops;
    for (const Generator& g : m.generators) {
        PauliOp p = g.op;
        bool consumed = false;
        for (const Stitch& s : stitches)
            if (to_string(p) == to_string(s.op)) {
                consumed = true;
                break;
            }
        if (consumed) continue;
        for (const Stitch& s : stitches) {
            if (llmod(symplectic_product(p, s.op), d) != 0)
                throw std::runtime_error("generator " + g.tag +
                                         " does not commute with identification at " +
                                         to_string(s.drop));
            XZ f = p.at(s.drop);
            if (f.x != 0) {
                long long c = llmod(-static_cast<long long>(f.x) * inv_mod(s.drop_x, d), d);
                p = multiply(p, pauli_power(s.op, c));
            }
            p.sites.erase(s.drop);
        }
        if (p.is_scalar()) {
            if (p.phase != 0)
                throw std::runtime_error("scalar obstruction: stitching " + g.tag +
                                         " left a phase");
            continue;
        }
        if (!kept_ops.insert(to_string(p)).second) continue;
        out.generators.push_back(Generator{g.tag, std::move(p)});
    }

    std::erase_if(out.qudits, [&](const EdgeId& e) {
        auto it = owner.find(e);
        return it != owner.end() && stitches[it->second].drop == e;
    });

    // Every stitch pins the layer-0 column k to the stored layer-1 column s
    // of the same kind and row; reflecting the surviving layer-1 sheet across
    // the stitch line is then the cyclic shift c -> c + (k - s) on stored
    // coordinates.  When all stitches agree on that shift and the shifted
    // sheet lands on free layer-0 slots, the output is a single-layer model;
    // otherwise the glued model keeps both layers.
    const int width = m.lattice.width;
    std::optional<int> delta;
    bool aligned = m.lattice.wrap_x && width > 0;
    for (const Stitch& s : stitches) {
        const EdgeId& k = s.keep.layer == 0 ? s.keep : s.drop;
        const EdgeId& t = s.keep.layer == 0 ? s.drop : s.keep;
        if (k.layer != 0 || t.layer != 1 || k.kind != t.kind || k.r != t.r) {
            aligned = false;
            break;
        }
        int shift = ((k.c - t.c) % width + width) % width;
        if (!delta)
            delta = shift;
        else if (*delta != shift)
            aligned = false;
    }
    auto shifted = [&](const EdgeId& e) {
        EdgeId ne = e;
        ne.layer = 0;
        ne.c = static_cast<int16_t>(((e.c + *delta) % width + width) % width);
        return ne;
    };
    bool single = aligned && delta.has_value();
    if (single) {
        std::set<EdgeId> taken;
        for (const EdgeId& e : out.qudits)
            if (e.layer == 0) taken.insert(e);
        for (const EdgeId& e : out.qudits)
            if (e.layer == 1 && !taken.insert(shifted(e)).second) {
                single = false;
                break;
            }
    }
    auto remap = [&](const EdgeId& e) {
        if (e.layer != 1) return e;
        return single ? shifted(e) : mirror_edge(e, width, 1);
    };
    for (EdgeId& e : out.qudits) e = remap(e);
    out.sort_registry();
    for (Generator& g : out.generators) {
        PauliOp np;
        np.d = g.op.d;
        np.phase = g.op.phase;
        for (const auto& [e, f] : g.op.sites) np.sites[remap(e)] = f;
        g.op = std::move(np);
    }

    ModelCheck chk = validate_model(out);
    if (!chk.commuting) throw std::runtime_error("non-gappable configuration: " + chk.detail);
    if (!chk.scalar_free) throw std::runtime_error("scalar obstruction: " + chk.detail);
    return out;
}

std::string region_to_json(const Region& r) {
    nlohmann::json cells = nlohmann::json::array();
    for (const Coord& c : r.cells) cells.push_back({c.c, c.r});
    return nlohmann::json{{"cells", cells}}.dump();
}

Region region_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Region out;
    if (j.contains("rect")) {
        auto v = j.at("rect");
        return rect_region(v.at(0), v.at(1), v.at(2), v.at(3));
    }
    for (const auto& c : j.at("cells")) out.cells.insert(Coord{c.at(0), c.at(1)});
    return out;
}

std::string job_to_json(const CondensationJob& job) {
    nlohmann::json j;
    j["model"] = nlohmann::json::parse(model_to_json(job.model));
    j["region"] = nlohmann::json::parse(region_to_json(job.region));
    nlohmann::json subgroup = nlohmann::json::array();
    for (const DyonGenerator& g : job.subgroup) subgroup.push_back(to_string(g));
    j["subgroup"] = subgroup;
    if (job.wall_axis) j["wall_axis"] = std::string(1, *job.wall_axis);
    j["locality_radius"] = job.locality_radius;
    return j.dump(2);
}

CondensationJob job_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    CondensationJob job;
    job.model = model_from_json(j.at("model").dump());
    job.region = region_from_json(j.at("region").dump());
    for (const auto& s : j.at("subgroup")) {
        auto g = parse_dyon(s.get<std::string>());
        if (!g) throw std::invalid_argument("bad dyon label: " + s.get<std::string>());
        job.subgroup.push_back(*g);
    }
    if (j.contains("wall_axis")) {
        std::string axis = j.at("wall_axis").get<std::string>();
        if (axis.size() != 1) throw std::invalid_argument("bad wall axis: " + axis);
        job.wall_axis = axis[0];
    }
    job.locality_radius = j.value("locality_radius", 2);
    return job;
}

}  // namespace qds
