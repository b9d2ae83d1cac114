#pragma once
// Ground state degeneracy three ways, logical operators, and code distance.
//
// The absolute route divides d^n by the stabilizer group order (Smith normal
// form).  The incremental route replays a re-gauging step from its
// DeltaRecord: GSD' = GSD * d^{qudit_delta} / prod_m m^{dn_m - dl_m}.  The
// brute-force route evaluates the projector trace (1/|S|) sum_{s in S} Tr(s)
// by enumerating the group, with root-of-unity sums kept exact; it is the
// oracle the other two are checked against.
//
// Dependency counts l_m are the invariant factors of the quotient of the
// relation lattice {u : prod g_i^{u_i} = 1} by the trivial power relations
// g_i^{m_i} = 1, so they are basis independent.
//
// Distances are reported in qubits: a d=4 qudit counts as two qubits, and a
// single-site factor with both exponents even touches only one of them.  d_X
// (d_Z) is the minimum qubit weight of a pure-X (pure-Z) centralizer element
// outside the stabilizer group.

#include "qdstab/intmat.h"
#include "qdstab/model.h"

#include <map>
#include <string>
#include <vector>

namespace qds {

// Rows: generators; columns: x block then z block over the sorted registry.
ZMat exponent_matrix(const StabilizerModel& m);
ZVec row_from_op(const PauliOp& p, const StabilizerModel& m);
PauliOp op_from_row(const ZVec& row, const StabilizerModel& m);

// Order of the generated group; throws on a scalar obstruction (a product of
// generators equal to a nontrivial phase).
BigInt group_order(const StabilizerModel& m);

// d^{#qudits} / group order.
BigInt gsd_absolute(const StabilizerModel& m);

// Generator count by operator order (the n_m of the counting formula).
std::map<long long, long long> generator_orders(const StabilizerModel& m);

// Dependency count by order (the l_m).
std::map<long long, long long> relation_orders(const StabilizerModel& m);

// Bookkeeping of one re-gauging step.
struct DeltaRecord {
    int d = 2;
    long long qudit_delta = 0;  // #qudits after - before
    std::map<long long, long long> dn;
    std::map<long long, long long> dl;
};

DeltaRecord delta_between(const StabilizerModel& before, const StabilizerModel& after);

// Throws std::runtime_error if the update does not land on an integer.
BigInt gsd_update(const BigInt& old_gsd, const DeltaRecord& delta);

// Projector trace by group enumeration; requires d^{#qudits} <= 2^20.
BigInt gsd_bruteforce(const StabilizerModel& m);

// Low-weight basis of centralizer(S)/S; the basis generates, together with
// the stabilizers, a group of order GSD^2 * |S|.  Pure-type representatives
// are preferred when the quotient splits.
std::vector<PauliOp> logical_generators(const StabilizerModel& m);

// Qubit weight of one site factor / of a whole operator.
int qubit_weight(const XZ& f, int d);
int qubit_weight(const PauliOp& p);

struct DistanceBound {
    bool exists = false;     // some pure-type logical of this kind exists
    long long value = 0;     // the distance, or the highest weight ruled out
    bool certified = false;  // true: value exact; false: distance > value
};

struct CodeParameters {
    long long n_qubits = 0;
    BigInt gsd = 1;
    bool k_integral = true;
    long long k = 0;  // log2(gsd) when k_integral
    DistanceBound d_x, d_z;
    std::vector<PauliOp> logicals;
};

// Weight-ordered search for pure-type logicals up to weight_cap qubits.
CodeParameters distance(const StabilizerModel& m, int weight_cap);

// Minimum qubit weight of a pure-Z (x_side=false) or pure-X vector in the
// centralizer but outside the group, capped; exposed for the slab checks.
DistanceBound pure_distance(const StabilizerModel& m, bool x_side, int weight_cap);

// True when op commutes with every generator but is not in the group.
bool is_logical(const StabilizerModel& m, const PauliOp& op);

// Exact membership, exponents and phase; the model must be scalar-free for
// the phase comparison to be solution independent.
bool in_group(const StabilizerModel& m, const PauliOp& op);

// Equal registries, equal group order, and every generator of b a member of
// the group of a.
bool same_group(const StabilizerModel& a, const StabilizerModel& b);

std::string code_report_json(const CodeParameters& p);

}  // namespace qds
