#pragma once
// Anyon condensation on stabilizer models.  A condensation job names a cell
// region, a subgroup of dyon pair labels, and a locality radius; applying it
// adds short ribbon generators for the subgroup along the region, removes the
// bulk generators the ribbons fail to commute with, promotes the surviving
// products of removed generators back into the group, and erases every qudit
// whose single-qudit stabilizer subgroup reaches order d.
//
// Subgroup members are labelled e^{p1} m^{q1} on layer 0 and e^{p2} m^{q2}
// on the mirrored layer of a folded model; single-layer jobs leave layer 1
// trivial.  Spins and mutual braiding phases on the mirrored layer enter
// with opposite sign.  Members must be bosons and braid trivially with each
// other, otherwise the job is rejected.

#include "qdstab/degeneracy.h"
#include "qdstab/model.h"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qds {

// Cells selected for condensation; ribbons anchor at these cells and may
// touch any edge incident to one of them (on either layer).
struct Region {
    std::set<Coord> cells;

    bool operator==(const Region&) const = default;
};

// Inclusive corner coordinates.
Region rect_region(int c0, int r0, int c1, int r1);

// True when the edge is incident to a region cell; incidence respects the
// wrapped directions of the lattice, so region cells must use canonical
// coordinates.
bool touches_region(const EdgeId& e, const Region& region, const Lattice& lattice);

// One subgroup generator: e^{p1} m^{q1} on layer 0, e^{p2} m^{q2} on layer 1.
struct DyonGenerator {
    int p1 = 0, q1 = 0;
    int p2 = 0, q2 = 0;

    bool operator==(const DyonGenerator&) const = default;
};

// Label syntax: "e2m2" for layer 0, "e2m2|em3" for a layer pair, "1" for the
// trivial label on either side.
std::string to_string(const DyonGenerator& g);
std::optional<DyonGenerator> parse_dyon(const std::string& s);

struct CondensationJob {
    StabilizerModel model;
    Region region;
    std::vector<DyonGenerator> subgroup;
    // Walls restrict ribbon steps to run along the wall: 'V' keeps upward
    // steps, 'H' keeps rightward ones.  Boundary jobs leave this unset and
    // use all four directions.
    std::optional<char> wall_axis;
    int locality_radius = 2;
};

// Throws std::invalid_argument unless every member is a boson and all pairs
// braid trivially, with layer-1 contributions negated.
void require_condensable(const CondensationJob& job);

// Shortest ribbon segments for every subgroup generator anchored at every
// region cell, filtered to edges of the model inside or on the rim of the
// region, deduplicated.  Throws if the result fails to commute pairwise.
std::vector<Generator> ribbon_generators(const CondensationJob& job);

// Products of `removed` generators that commute with everything in `kept`,
// canonicalized to a Howell-form basis and then reduced against nearby kept
// and already-emitted generators within the given cell radius.
std::vector<Generator> promoted_generators(const std::vector<Generator>& removed,
                                           const std::vector<Generator>& kept,
                                           const Lattice& lattice, int d,
                                           int locality_radius);

struct CondensationResult {
    StabilizerModel model;
    DeltaRecord delta;
    std::vector<EdgeId> erased;
    std::vector<std::string> removed_tags;
    long long promoted_count = 0;
};

// Runs the full pipeline: ribbons, removal, promotion, then iterated
// restriction and erasure of condensed qudits.  Erased qudits leave the
// registry; the generators acting on them are restricted to their surviving
// support with exact phases.  Throws std::runtime_error("non-gappable
// configuration: ...") if a restriction pass breaks commutation.
CondensationResult apply_condensation(const CondensationJob& job);

// Consumes two-qudit identification generators X1^{+-1} X2 (pure X, unit
// exponents), merging each pair into its first qudit by symplectic
// elimination, then reflects surviving layer-1 coordinates back through the
// fold mirror.  A model without identifications is returned unchanged; a
// qudit shared between two identifications is an error.
StabilizerModel unfold_and_stitch(const StabilizerModel& m);

std::string job_to_json(const CondensationJob& job);
CondensationJob job_from_json(const std::string& text);
std::string region_to_json(const Region& r);
Region region_from_json(const std::string& text);

}  // namespace qds
