#include "qdstab/model.h"

#include "qdstab/intmat.h"

#include <json.hpp>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qds {

namespace {

using nlohmann::json;

PauliOp from_incidence(int d, const std::vector<std::pair<EdgeId, int>>& inc, bool z_type,
                       int exponent) {
    PauliOp op;
    op.d = d;
    for (const auto& [e, sign] : inc) {
        int v = sign * exponent;
        op.mul_site(e, z_type ? 0 : v, z_type ? v : 0);
    }
    return op;
}

std::string coord_tag(const char* name, Coord c) {
    std::ostringstream os;
    os << name << "(" << c.c << "," << c.r << ")";
    return os.str();
}

bool side_trimmed(BoundaryKind k) {
    return k == BoundaryKind::Rough || k == BoundaryKind::Even || k == BoundaryKind::DsVacuum;
}

void check_geometry(const Lattice& l, const BoundarySpec& spec) {
    auto expect = [](bool closed_dir, bool trimmed, bool cut, bool ds_cuts, BoundaryKind k,
                     const char* side) {
        if (k == BoundaryKind::Closed) {
            if (!closed_dir) throw std::invalid_argument(std::string("open side declared Closed: ") + side);
            return;
        }
        if (closed_dir) throw std::invalid_argument(std::string("wrapped side declared open: ") + side);
        if (side_trimmed(k) != trimmed)
            throw std::invalid_argument(std::string("boundary kind does not match trim on side ") + side);
        if ((ds_cuts && k == BoundaryKind::DsVacuum) != cut)
            throw std::invalid_argument(std::string("boundary kind does not match cut on side ") + side);
    };
    expect(l.wrap_y, l.trim_bottom, l.cut_bottom, false, spec.bottom, "bottom");
    expect(l.wrap_y, l.trim_top, l.cut_top, true, spec.top, "top");
    expect(l.wrap_x, l.trim_left, l.cut_left, false, spec.left, "left");
    expect(l.wrap_x, l.trim_right, l.cut_right, true, spec.right, "right");
}

// Which trimmed sides a cell is missing an edge toward.
std::vector<BoundaryKind> missing_sides(const Lattice& l, const BoundarySpec& spec, Coord p) {
    std::vector<BoundaryKind> out;
    if (!l.wrap_y && l.trim_bottom && p.r == 0) out.push_back(spec.bottom);
    if (!l.wrap_y && l.trim_top && p.r == l.height - 1) out.push_back(spec.top);
    if (!l.wrap_x && l.trim_left && p.c == 0) out.push_back(spec.left);
    if (!l.wrap_x && l.trim_right && p.c == l.width - 1) out.push_back(spec.right);
    return out;
}

// Dangling edges introduced by a trimmed (uncut) side, with the side's kind.
std::vector<std::pair<EdgeId, BoundaryKind>> dangling_edges(const Lattice& l,
                                                            const BoundarySpec& spec) {
    std::vector<std::pair<EdgeId, BoundaryKind>> out;
    auto push = [&](EdgeId e, BoundaryKind k) {
        if (l.has_edge(e)) out.emplace_back(e, k);
    };
    if (!l.wrap_y && l.trim_bottom)
        for (int c = l.vertex_c0(); c <= l.vertex_c1(); c++) push(l.v_edge(c, 0), spec.bottom);
    if (!l.wrap_y && l.trim_top)
        for (int c = l.vertex_c0(); c <= l.vertex_c1(); c++)
            push(l.v_edge(c, l.height - 1), spec.top);
    if (!l.wrap_x && l.trim_left)
        for (int r = l.vertex_r0(); r <= l.vertex_r1(); r++) push(l.h_edge(0, r), spec.left);
    if (!l.wrap_x && l.trim_right)
        for (int r = l.vertex_r0(); r <= l.vertex_r1(); r++)
            push(l.h_edge(l.width - 1, r), spec.right);
    return out;
}

void push_generator(StabilizerModel& m, const std::string& tag, PauliOp op) {
    if (op.sites.empty()) return;  // degenerate geometry (e.g. 1x1 torus)
    m.generators.push_back(Generator{tag, std::move(op)});
}

void dedupe_generators(StabilizerModel& m) {
    std::vector<Generator> kept;
    for (auto& g : m.generators) {
        bool dup = std::any_of(kept.begin(), kept.end(), [&](const Generator& h) {
            return h.op.phase == g.op.phase && h.op.sites == g.op.sites;
        });
        if (!dup) kept.push_back(std::move(g));
    }
    m.generators = std::move(kept);
}

}  // namespace

int StabilizerModel::qudit_index(const EdgeId& e) const {
    auto it = std::lower_bound(qudits.begin(), qudits.end(), e);
    if (it == qudits.end() || *it != e) return -1;
    return static_cast<int>(it - qudits.begin());
}

void StabilizerModel::sort_registry() { std::sort(qudits.begin(), qudits.end()); }

std::optional<ModelKind> model_kind_from_string(const std::string& s) {
    if (s == "zd_bulk") return ModelKind::ZdBulk;
    if (s == "zd_smooth_boundary") return ModelKind::ZdSmoothBoundary;
    if (s == "zd_rough_boundary") return ModelKind::ZdRoughBoundary;
    if (s == "zd_even_boundary") return ModelKind::ZdEvenBoundary;
    if (s == "ds_bulk") return ModelKind::DsBulk;
    if (s == "ds_boundary") return ModelKind::DsBoundary;
    return std::nullopt;
}

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::ZdBulk: return "zd_bulk";
        case ModelKind::ZdSmoothBoundary: return "zd_smooth_boundary";
        case ModelKind::ZdRoughBoundary: return "zd_rough_boundary";
        case ModelKind::ZdEvenBoundary: return "zd_even_boundary";
        case ModelKind::DsBulk: return "ds_bulk";
        case ModelKind::DsBoundary: return "ds_boundary";
    }
    return "?";
}

Lattice lattice_for(const BoundarySpec& spec, int width, int height) {
    Lattice l;
    l.width = width;
    l.height = height;
    l.wrap_y = spec.bottom == BoundaryKind::Closed && spec.top == BoundaryKind::Closed;
    l.wrap_x = spec.left == BoundaryKind::Closed && spec.right == BoundaryKind::Closed;
    l.trim_bottom = !l.wrap_y && side_trimmed(spec.bottom);
    l.trim_top = !l.wrap_y && side_trimmed(spec.top);
    l.trim_left = !l.wrap_x && side_trimmed(spec.left);
    l.trim_right = !l.wrap_x && side_trimmed(spec.right);
    // The dyon hoppers step up and right, so a vacuum boundary pins away the
    // dangling line only on the top and right sides.
    l.cut_top = !l.wrap_y && spec.top == BoundaryKind::DsVacuum;
    l.cut_right = !l.wrap_x && spec.right == BoundaryKind::DsVacuum;
    return l;
}

StabilizerModel build_zd_model(int d, const Lattice& lattice, const BoundarySpec& spec) {
    check_geometry(lattice, spec);
    for (BoundaryKind k : {spec.bottom, spec.top, spec.left, spec.right}) {
        if (k == BoundaryKind::DsVacuum)
            throw std::invalid_argument("build_zd_model: ds boundary belongs to the twisted model");
        if (k == BoundaryKind::Even && d != 4)
            throw std::invalid_argument("build_zd_model: even boundary requires d = 4");
    }
    StabilizerModel m;
    m.d = d;
    m.lattice = lattice;
    m.qudits = lattice.edges();
    m.sort_registry();
    for (Coord v : lattice.vertices()) {
        push_generator(m, coord_tag("A", v), from_incidence(d, lattice.star(v), false, 1));
    }
    for (Coord p : lattice.cells()) {
        auto sides = missing_sides(lattice, spec, p);
        bool even = std::any_of(sides.begin(), sides.end(),
                                [](BoundaryKind k) { return k == BoundaryKind::Even; });
        auto inc = lattice.plaquette(p);
        if (even) {
            push_generator(m, coord_tag("B2", p), from_incidence(d, inc, true, d / 2));
        } else {
            push_generator(m, coord_tag("B", p), from_incidence(d, inc, true, 1));
        }
    }
    for (const auto& [e, kind] : dangling_edges(lattice, spec)) {
        if (kind != BoundaryKind::Even) continue;
        PauliOp op;
        op.d = d;
        op.mul_site(e, d / 2, 0);
        push_generator(m, "X2(" + to_string(e) + ")", std::move(op));
    }
    dedupe_generators(m);
    return m;
}

StabilizerModel build_ds_model(const Lattice& lattice, const BoundarySpec& spec) {
    check_geometry(lattice, spec);
    const int d = 4;
    for (BoundaryKind k : {spec.bottom, spec.top, spec.left, spec.right}) {
        if (k != BoundaryKind::Closed && k != BoundaryKind::DsVacuum)
            throw std::invalid_argument("build_ds_model: only the {1,b} boundary is supported");
    }
    StabilizerModel m;
    m.d = d;
    m.lattice = lattice;
    m.qudits = lattice.edges();
    m.sort_registry();

    // Interior vertices pair with the cell to their upper right; at a trimmed
    // boundary that cell is incomplete or absent and the star survives only
    // through its square (see the boundary terms below).
    auto cell_exists = [&](int c, int r) {
        Coord p = lattice.cell(c, r);
        return p.c >= 0 && p.c < lattice.width && p.r >= 0 && p.r < lattice.height;
    };
    auto full_plaquette = [&](Coord p) { return lattice.plaquette(p).size() == 4; };
    auto full_star = [&](Coord v) { return lattice.star(v).size() == 4; };

    for (Coord v : lattice.vertices()) {
        if (cell_exists(v.c, v.r) && full_plaquette(lattice.cell(v.c, v.r)) && full_star(v)) {
            PauliOp a = from_incidence(d, lattice.star(v), false, 1);
            PauliOp b = from_incidence(d, lattice.plaquette(lattice.cell(v.c, v.r)), true, 1);
            push_generator(m, coord_tag("F", v), multiply(a, b));
        } else {
            push_generator(m, coord_tag("A2", v), from_incidence(d, lattice.star(v), false, 2));
        }
    }
    for (Coord p : lattice.cells()) {
        push_generator(m, coord_tag("B2", p), from_incidence(d, lattice.plaquette(p), true, 2));
    }
    // Dyon hopping terms wherever both edges exist; truncated ones appear at
    // a boundary as their surviving halves.
    for (Coord a : lattice.cells()) {
        for (Dir dir : {Dir::Up, Dir::Right}) {
            EdgeId ze = dir == Dir::Up ? lattice.v_edge(a.c, a.r) : lattice.h_edge(a.c, a.r);
            EdgeId xe = dir == Dir::Up ? lattice.h_edge(a.c, a.r + 1) : lattice.v_edge(a.c + 1, a.r);
            const char* tag = dir == Dir::Up ? "C1" : "C2";
            if (lattice.has_edge(ze) && lattice.has_edge(xe)) {
                push_generator(m, coord_tag(tag, a), dyon_segment(d, lattice, 2, 2, a, dir));
            } else if (lattice.has_edge(ze)) {
                PauliOp op;
                op.d = d;
                op.mul_site(ze, 0, 2);
                push_generator(m, coord_tag(tag, a) + "~", std::move(op));
            } else if (lattice.has_edge(xe)) {
                PauliOp op;
                op.d = d;
                op.mul_site(xe, 2, 0);
                push_generator(m, coord_tag(tag, a) + "~", std::move(op));
            }
        }
    }
    dedupe_generators(m);
    return m;
}

StabilizerModel build_model(ModelKind kind, const Lattice& lattice, int d) {
    BoundaryKind open = BoundaryKind::Closed;
    switch (kind) {
        case ModelKind::ZdBulk: open = BoundaryKind::Closed; break;
        case ModelKind::ZdSmoothBoundary: open = BoundaryKind::Smooth; break;
        case ModelKind::ZdRoughBoundary: open = BoundaryKind::Rough; break;
        case ModelKind::ZdEvenBoundary: open = BoundaryKind::Even; break;
        case ModelKind::DsBulk: open = BoundaryKind::Closed; break;
        case ModelKind::DsBoundary: open = BoundaryKind::DsVacuum; break;
    }
    BoundarySpec spec;
    spec.bottom = lattice.wrap_y ? BoundaryKind::Closed : open;
    spec.top = lattice.wrap_y ? BoundaryKind::Closed : open;
    spec.left = lattice.wrap_x ? BoundaryKind::Closed : open;
    spec.right = lattice.wrap_x ? BoundaryKind::Closed : open;
    if (kind == ModelKind::DsBulk || kind == ModelKind::DsBoundary) {
        return build_ds_model(lattice, spec);
    }
    return build_zd_model(d, lattice, spec);
}

PauliOp dyon_segment(int d, const Lattice& lattice, int p, int q, Coord a, Dir dir) {
    PauliOp op;
    op.d = d;
    auto put = [&](EdgeId e, int x, int z) {
        if (!lattice.has_edge(e)) throw std::invalid_argument("dyon_segment: edge off lattice");
        op.mul_site(e, x, z);
    };
    switch (dir) {
        case Dir::Up:
            put(lattice.v_edge(a.c, a.r), 0, p);
            put(lattice.h_edge(a.c, a.r + 1), -q, 0);
            break;
        case Dir::Right:
            put(lattice.h_edge(a.c, a.r), 0, p);
            put(lattice.v_edge(a.c + 1, a.r), -q, 0);
            break;
        case Dir::Down:
            put(lattice.v_edge(a.c, a.r - 1), 0, -p);
            put(lattice.h_edge(a.c, a.r), q, 0);
            break;
        case Dir::Left:
            put(lattice.h_edge(a.c - 1, a.r), 0, -p);
            put(lattice.v_edge(a.c, a.r), q, 0);
            break;
    }
    return op;
}

PauliOp string_operator(int d, const Lattice& lattice, int p, int q, Coord anchor,
                        const std::vector<Dir>& steps) {
    PauliOp op = PauliOp::identity(d);
    Coord a = anchor;
    for (Dir dir : steps) {
        op = multiply(op, dyon_segment(d, lattice, p, q, a, dir));
        switch (dir) {
            case Dir::Up: a.r++; break;
            case Dir::Down: a.r--; break;
            case Dir::Left: a.c--; break;
            case Dir::Right: a.c++; break;
        }
        if (lattice.wrap_x) a.c = (a.c % lattice.width + lattice.width) % lattice.width;
        if (lattice.wrap_y) a.r = (a.r % lattice.height + lattice.height) % lattice.height;
    }
    return op;
}

EdgeId mirror_edge(const EdgeId& e, int width, int8_t target_layer) {
    EdgeId out = e;
    out.layer = target_layer;
    if (e.kind == 'H') {
        out.c = static_cast<int16_t>(width - 1 - e.c);
    } else {
        int c = width - e.c;
        c = ((c % width) + width) % width;
        out.c = static_cast<int16_t>(c);
    }
    return out;
}

PauliOp mirror_op(const PauliOp& p, int width, int8_t target_layer) {
    PauliOp out;
    out.d = p.d;
    out.phase = (p.d - p.phase) % p.d;
    for (const auto& [e, f] : p.sites) {
        EdgeId me = mirror_edge(e, width, target_layer);
        int x = f.x, z = f.z;
        if (e.kind == 'H') {
            z = (p.d - z) % p.d;
        } else {
            x = (p.d - x) % p.d;
        }
        out.sites[me] = XZ{x, z};
    }
    return out;
}

StabilizerModel fold(const StabilizerModel& a, const StabilizerModel& b) {
    if (a.d != b.d) throw std::invalid_argument("fold: mismatched dimension");
    if (!(a.lattice == b.lattice)) throw std::invalid_argument("fold: mismatched lattice");
    if (!a.lattice.wrap_x) throw std::invalid_argument("fold: requires an x-wrapped lattice");
    StabilizerModel m;
    m.d = a.d;
    m.lattice = a.lattice;
    for (EdgeId e : a.qudits) m.qudits.push_back(e);
    for (EdgeId e : b.qudits) m.qudits.push_back(mirror_edge(e, a.lattice.width, 1));
    m.sort_registry();
    for (const auto& g : a.generators) m.generators.push_back(g);
    for (const auto& g : b.generators) {
        m.generators.push_back(Generator{g.tag + "'", mirror_op(g.op, a.lattice.width, 1)});
    }
    return m;
}

PauliOp translate(const PauliOp& p, const Lattice& lattice, int dc, int dr) {
    PauliOp out;
    out.d = p.d;
    out.phase = p.phase;
    for (const auto& [e, f] : p.sites) {
        EdgeId t = e.kind == 'H' ? lattice.h_edge(e.c + dc, e.r + dr)
                                 : lattice.v_edge(e.c + dc, e.r + dr);
        t.layer = e.layer;
        if (!lattice.has_edge(EdgeId{0, t.kind, t.c, t.r}))
            throw std::invalid_argument("translate: op leaves the lattice");
        out.sites[t] = f;
    }
    return out;
}

ModelCheck validate_model(const StabilizerModel& m) {
    ModelCheck out;
    for (size_t i = 0; i < m.generators.size() && out.commuting; i++) {
        for (size_t j = i + 1; j < m.generators.size(); j++) {
            if (symplectic_product(m.generators[i].op, m.generators[j].op) != 0) {
                out.commuting = false;
                out.detail = m.generators[i].tag + " and " + m.generators[j].tag + " do not commute";
                break;
            }
        }
    }
    if (!out.commuting) return out;
    // Scalar freeness: every vector relation must carry phase 0, and each
    // generator's vector order must already be its operator order.
    size_t n = m.qudits.size();
    BigMat mat(m.generators.size(), std::vector<BigInt>(2 * n, 0));
    for (size_t i = 0; i < m.generators.size(); i++) {
        for (const auto& [e, f] : m.generators[i].op.sites) {
            int j = m.qudit_index(e);
            if (j < 0) {
                out.scalar_free = false;
                out.detail = "generator touches unregistered qudit " + to_string(e);
                return out;
            }
            mat[i][j] = f.x;
            mat[i][n + j] = f.z;
        }
    }
    for (const auto& g : m.generators) {
        long long n0 = 1;
        for (const auto& [e, f] : g.op.sites) {
            int gg = std::gcd(m.d, std::gcd(f.x, f.z));
            n0 = std::lcm(n0, static_cast<long long>(m.d / gg));
        }
        if (pauli_power(g.op, n0).phase != 0) {
            out.scalar_free = false;
            out.detail = "generator power is a nontrivial scalar: " + g.tag;
            return out;
        }
    }
    for (const ZVec& u : left_kernel_mod(mat, m.d)) {
        PauliOp prod = PauliOp::identity(m.d);
        for (size_t i = 0; i < u.size(); i++) {
            if (u[i]) prod = multiply(prod, pauli_power(m.generators[i].op, u[i]));
        }
        if (!prod.sites.empty()) throw std::logic_error("validate_model: kernel vector not a relation");
        if (prod.phase != 0) {
            out.scalar_free = false;
            out.detail = "relation with nontrivial scalar";
            return out;
        }
    }
    return out;
}

std::string model_to_json(const StabilizerModel& m) {
    json j;
    j["d"] = m.d;
    j["lattice"] = json::parse(lattice_to_json(m.lattice));
    json q = json::array();
    for (const EdgeId& e : m.qudits) q.push_back(to_string(e));
    j["qudits"] = q;
    json gens = json::array();
    for (const auto& g : m.generators) {
        json jg;
        jg["tag"] = g.tag;
        jg["phase"] = g.op.phase;
        json sites = json::object();
        for (const auto& [e, f] : g.op.sites) sites[to_string(e)] = json::array({f.x, f.z});
        jg["sites"] = sites;
        gens.push_back(jg);
    }
    j["generators"] = gens;
    return j.dump(2);
}

StabilizerModel model_from_json(const std::string& text) {
    json j = json::parse(text);
    StabilizerModel m;
    m.d = j.at("d").get<int>();
    m.lattice = lattice_from_json(j.at("lattice").dump());
    for (const auto& q : j.at("qudits")) {
        auto e = parse_edge(q.get<std::string>());
        if (!e) throw std::invalid_argument("model_from_json: bad edge " + q.get<std::string>());
        m.qudits.push_back(*e);
    }
    m.sort_registry();
    for (const auto& jg : j.at("generators")) {
        Generator g;
        g.tag = jg.value("tag", "");
        g.op.d = m.d;
        g.op.phase = jg.value("phase", 0);
        for (const auto& [k, v] : jg.at("sites").items()) {
            auto e = parse_edge(k);
            if (!e) throw std::invalid_argument("model_from_json: bad edge " + k);
            g.op.mul_site(*e, v.at(0).get<int>(), v.at(1).get<int>());
        }
        m.generators.push_back(std::move(g));
    }
    return m;
}

std::string lattice_to_json(const Lattice& l) {
    json j;
    j["width"] = l.width;
    j["height"] = l.height;
    j["wrap_x"] = l.wrap_x;
    j["wrap_y"] = l.wrap_y;
    if (l.trim_left) j["trim_left"] = true;
    if (l.trim_right) j["trim_right"] = true;
    if (l.trim_bottom) j["trim_bottom"] = true;
    if (l.trim_top) j["trim_top"] = true;
    if (l.cut_left) j["cut_left"] = true;
    if (l.cut_right) j["cut_right"] = true;
    if (l.cut_bottom) j["cut_bottom"] = true;
    if (l.cut_top) j["cut_top"] = true;
    return j.dump(2);
}

Lattice lattice_from_json(const std::string& text) {
    json j = json::parse(text);
    Lattice l;
    l.width = j.at("width").get<int>();
    l.height = j.at("height").get<int>();
    l.wrap_x = j.value("wrap_x", true);
    l.wrap_y = j.value("wrap_y", true);
    l.trim_left = j.value("trim_left", false);
    l.trim_right = j.value("trim_right", false);
    l.trim_bottom = j.value("trim_bottom", false);
    l.trim_top = j.value("trim_top", false);
    l.cut_left = j.value("cut_left", false);
    l.cut_right = j.value("cut_right", false);
    l.cut_bottom = j.value("cut_bottom", false);
    l.cut_top = j.value("cut_top", false);
    return l;
}

}  // namespace qds
