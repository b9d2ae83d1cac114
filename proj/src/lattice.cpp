#include "qdstab/lattice.h"

#include <stdexcept>

namespace qds {

namespace {

int wrap(int v, int n) {
    int m = v % n;
    return m < 0 ? m + n : m;
}

}  // namespace

bool Lattice::has_vertex(int c, int r) const {
    if (wrap_x) c = wrap(c, width);
    if (wrap_y) r = wrap(r, height);
    return c >= vertex_c0() && c <= vertex_c1() && r >= vertex_r0() && r <= vertex_r1();
}

EdgeId Lattice::h_edge(int c, int r) const {
    if (wrap_x) c = wrap(c, width);
    if (wrap_y) r = wrap(r, height);
    return EdgeId{0, 'H', static_cast<int16_t>(c), static_cast<int16_t>(r)};
}

EdgeId Lattice::v_edge(int c, int r) const {
    if (wrap_x) c = wrap(c, width);
    if (wrap_y) r = wrap(r, height);
    return EdgeId{0, 'V', static_cast<int16_t>(c), static_cast<int16_t>(r)};
}

Coord Lattice::cell(int c, int r) const {
    return Coord{wrap_x ? wrap(c, width) : c, wrap_y ? wrap(r, height) : r};
}

bool Lattice::has_edge(const EdgeId& e) const {
    if (e.kind == 'H') {
        if (e.c < (cut_left ? 1 : 0)) return false;
        if (e.c >= width - (cut_right ? 1 : 0)) return false;
        return e.r >= vertex_r0() && e.r <= vertex_r1();
    }
    if (e.kind == 'V') {
        if (e.r < (cut_bottom ? 1 : 0)) return false;
        if (e.r >= height - (cut_top ? 1 : 0)) return false;
        return e.c >= vertex_c0() && e.c <= vertex_c1();
    }
    return false;
}

std::vector<EdgeId> Lattice::edges() const {
    std::vector<EdgeId> out;
    for (int c = 0; c < width; c++) {
        for (int r = vertex_r0(); r <= vertex_r1(); r++) {
            if (has_edge(h_edge(c, r))) out.push_back(h_edge(c, r));
        }
    }
    for (int c = vertex_c0(); c <= vertex_c1(); c++) {
        for (int r = 0; r < height; r++) {
            if (has_edge(v_edge(c, r))) out.push_back(v_edge(c, r));
        }
    }
    return out;
}

std::vector<Coord> Lattice::vertices() const {
    std::vector<Coord> out;
    for (int c = vertex_c0(); c <= vertex_c1(); c++) {
        for (int r = vertex_r0(); r <= vertex_r1(); r++) out.push_back(Coord{c, r});
    }
    return out;
}

std::vector<Coord> Lattice::cells() const {
    std::vector<Coord> out;
    for (int c = 0; c < width; c++) {
        for (int r = 0; r < height; r++) out.push_back(Coord{c, r});
    }
    return out;
}

std::vector<std::pair<EdgeId, int>> Lattice::star(Coord v) const {
    if (!has_vertex(v.c, v.r)) throw std::invalid_argument("star: no such vertex");
    std::vector<std::pair<EdgeId, int>> out;
    auto push = [&](EdgeId e, int sign) {
        if (has_edge(e)) out.emplace_back(e, sign);
    };
    push(h_edge(v.c, v.r), +1);
    push(v_edge(v.c, v.r), +1);
    if (wrap_x || v.c - 1 >= 0) push(h_edge(v.c - 1, v.r), -1);
    if (wrap_y || v.r - 1 >= 0) push(v_edge(v.c, v.r - 1), -1);
    return out;
}

std::vector<std::pair<EdgeId, int>> Lattice::plaquette(Coord p) const {
    if (p.c < 0 || p.c >= width || p.r < 0 || p.r >= height)
        throw std::invalid_argument("plaquette: no such cell");
    std::vector<std::pair<EdgeId, int>> out;
    auto push = [&](EdgeId e, int sign) {
        if (has_edge(e)) out.emplace_back(e, sign);
    };
    push(h_edge(p.c, p.r), +1);
    if (wrap_x || p.c + 1 <= width) push(v_edge(p.c + 1, p.r), +1);
    if (wrap_y || p.r + 1 <= height) push(h_edge(p.c, p.r + 1), -1);
    push(v_edge(p.c, p.r), -1);
    return out;
}

}  // namespace qds
