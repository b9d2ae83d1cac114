#pragma once
// Square-lattice geometry with optional periodic directions and trimmed sides.
//
//      (c,r+1) ---h(c,r+1)--- (c+1,r+1)
//         |                      |
//      v(c,r)     cell (c,r)  v(c+1,r)
//         |                      |
//      (c,r)  ----h(c,r)----  (c+1,r)
//
// Horizontal edge h(c,r) points from vertex (c,r) to (c+1,r); vertical edge
// v(c,r) points from (c,r) to (c,r+1).  Cells are indexed by their lower-left
// vertex.  "Trimming" an open side removes the outermost vertex line together
// with the boundary-parallel edge line, leaving the perpendicular edges
// dangling; this is the geometry used by rough-type boundaries.  Untrimmed
// open sides keep the full outer line (smooth-type geometry).  "Cutting" a
// side removes the dangling perpendicular edges of a trimmed side as well
// (set cut together with trim); this is the geometry left behind when a
// condensation fully pins the dangling line, as the dyon-condensed boundary
// does.
//
// Edge presence rules: h-edges occupy cell columns [0,width) and vertex rows;
// v-edges occupy vertex columns and cell rows [0,height).  A trimmed side
// only restricts the vertex range of its own direction.

#include "qdstab/pauli.h"

#include <utility>
#include <vector>

namespace qds {

struct Coord {
    int c = 0;
    int r = 0;
    auto operator<=>(const Coord&) const = default;
};

struct Lattice {
    int width = 1;
    int height = 1;
    bool wrap_x = true;
    bool wrap_y = true;
    bool trim_left = false, trim_right = false;
    bool trim_bottom = false, trim_top = false;
    bool cut_left = false, cut_right = false;
    bool cut_bottom = false, cut_top = false;

    bool operator==(const Lattice&) const = default;

    int vertex_c0() const { return !wrap_x && trim_left ? 1 : 0; }
    int vertex_c1() const { return wrap_x ? width - 1 : (trim_right ? width - 1 : width); }
    int vertex_r0() const { return !wrap_y && trim_bottom ? 1 : 0; }
    int vertex_r1() const { return wrap_y ? height - 1 : (trim_top ? height - 1 : height); }

    bool has_vertex(int c, int r) const;
    bool has_edge(const EdgeId& e) const;

    EdgeId h_edge(int c, int r) const;  // canonicalizes wrapped coordinates
    EdgeId v_edge(int c, int r) const;
    Coord cell(int c, int r) const;

    std::vector<EdgeId> edges() const;
    std::vector<Coord> vertices() const;
    std::vector<Coord> cells() const;

    // Incident edges with orientation signs (+1 outgoing/right/up convention
    // for stars, +1 bottom/right for plaquettes); missing edges are skipped.
    std::vector<std::pair<EdgeId, int>> star(Coord v) const;
    std::vector<std::pair<EdgeId, int>> plaquette(Coord p) const;
};

}  // namespace qds
