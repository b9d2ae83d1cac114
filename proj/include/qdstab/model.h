#pragma once
// Stabilizer models for Z_d gauge theory on a lattice, the double-semion-type
// variant at d = 4, and their gapped boundaries.
//
// Bulk generators on qudit edges:
//
//   A(v) = X_{h(c,r)} X_{v(c,r)} X'_{h(c-1,r)} X'_{v(c,r-1)}     (X' = X^{-1})
//   B(p) = Z_{h(c,r)} Z_{v(c+1,r)} Z'_{h(c,r+1)} Z'_{v(c,r)}
//
// for vertex/cell (c,r).  Every A commutes with every B.  The twisted (dyon
// condensed) model at d = 4 uses F(v) = A(v) B(p(v)) with p(v) the cell whose
// lower-left corner is v, the squares B(p)^2, and the two-edge dyon hopping
// terms
//
//   C1(c,r) = Z^2_{v(c,r)} X^2_{h(c,r+1)}      (upward step)
//   C2(c,r) = Z^2_{h(c,r)} X^2_{v(c+1,r)}      (rightward step)
//
// String operators transport a dyon e^p m^q: each unit step places Z^{+-p} on
// a direct edge and X^{-+q} on the crossed dual edge, with the anchor (c,r)
// naming both the current vertex and the cell to its upper right.

#include "qdstab/lattice.h"
#include "qdstab/pauli.h"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qds {

struct Generator {
    std::string tag;
    PauliOp op;
};

struct StabilizerModel {
    int d = 2;
    Lattice lattice;
    std::vector<EdgeId> qudits;  // sorted registry
    std::vector<Generator> generators;

    int qudit_index(const EdgeId& e) const;  // -1 if absent
    void sort_registry();
};

enum class BoundaryKind {
    Closed,   // wrapped direction, no boundary
    Smooth,   // m condenses; untrimmed geometry
    Rough,    // e condenses; trimmed geometry
    Even,     // e^2, m^2 condense; trimmed geometry
    DsVacuum  // {1, b} boundary of the twisted model; trimmed geometry
};

struct BoundarySpec {
    BoundaryKind bottom = BoundaryKind::Closed;
    BoundaryKind top = BoundaryKind::Closed;
    BoundaryKind left = BoundaryKind::Closed;
    BoundaryKind right = BoundaryKind::Closed;
};

enum class ModelKind {
    ZdBulk,
    ZdSmoothBoundary,
    ZdRoughBoundary,
    ZdEvenBoundary,
    DsBulk,
    DsBoundary
};

std::optional<ModelKind> model_kind_from_string(const std::string& s);
std::string to_string(ModelKind k);

// Geometry consistent with the given boundaries (trimmed where needed).
Lattice lattice_for(const BoundarySpec& spec, int width, int height);

// Open sides all receive the boundary implied by `kind`.
StabilizerModel build_model(ModelKind kind, const Lattice& lattice, int d);

// Mixed per-side boundaries.
StabilizerModel build_zd_model(int d, const Lattice& lattice, const BoundarySpec& spec);
StabilizerModel build_ds_model(const Lattice& lattice, const BoundarySpec& spec);

enum class Dir { Up, Down, Left, Right };

// Product of unit dyon steps starting at anchor (c,r).
PauliOp string_operator(int d, const Lattice& lattice, int p, int q, Coord anchor,
                        const std::vector<Dir>& steps);
// One unit step (Z part on the direct edge, X part on the crossed dual edge).
PauliOp dyon_segment(int d, const Lattice& lattice, int p, int q, Coord anchor, Dir dir);

// Antiunitary layer mirror: reflect c -> width-1-c (h-edges), c -> width-c
// (v-edges), negate z on h-edges, x on v-edges, and negate the phase.  Flips
// the sign of every symplectic product.
PauliOp mirror_op(const PauliOp& p, int width, int8_t target_layer);
EdgeId mirror_edge(const EdgeId& e, int width, int8_t target_layer);

// Two-layer model: layer 0 carries `a`, layer 1 the mirror image of `b`.
// Both inputs must share the same wrapped lattice.
StabilizerModel fold(const StabilizerModel& a, const StabilizerModel& b);

// Translation by whole cells (wrapped directions only).
PauliOp translate(const PauliOp& p, const Lattice& lattice, int dc, int dr);

struct ModelCheck {
    bool commuting = true;
    bool scalar_free = true;
    std::string detail;
};
ModelCheck validate_model(const StabilizerModel& m);

std::string model_to_json(const StabilizerModel& m);
StabilizerModel model_from_json(const std::string& text);
std::string lattice_to_json(const Lattice& l);
Lattice lattice_from_json(const std::string& text);

}  // namespace qds
