#pragma once
// Generalized Pauli operators on Z_d qudits.
//
// Single-qudit operators are normal-ordered monomials w^phi X^x Z^z with
// w = exp(2*pi*i/d).  The defining actions are
//
//     X|j> = |j+1 mod d>,      Z|j> = w^j |j>,
//
// so the reordering rule is Z^b X^a = w^{ab} X^a Z^b.  A multi-qudit operator
// is w^phi prod_e X_e^{x_e} Z_e^{z_e} with site factors stored sparsely.
// Two operators P, Q commute iff their symplectic product
//
//     sp(P,Q) = sum_e (z_P(e) x_Q(e) - x_P(e) z_Q(e))  mod d
//
// vanishes; in general P Q = w^{sp(P,Q)} Q P.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qds {

// One qudit, living on a lattice edge.  `kind` is 'H' for the edge from
// vertex (c,r) to (c+1,r) and 'V' for the edge from (c,r) to (c,r+1).
// `layer` is 0 for ordinary models and 1 for the mirrored sheet of a folded
// (two-layer) model.
struct EdgeId {
    int8_t layer = 0;
    char kind = 'H';
    int16_t c = 0;
    int16_t r = 0;
    auto operator<=>(const EdgeId&) const = default;
};

std::string to_string(const EdgeId& e);
std::optional<EdgeId> parse_edge(const std::string& s);

// Exponent pair of one site factor X^x Z^z, kept reduced to [0, d).
struct XZ {
    int x = 0;
    int z = 0;
    bool operator==(const XZ&) const = default;
};

struct PauliOp {
    int d = 2;
    int phase = 0;                 // exponent of w
    std::map<EdgeId, XZ> sites;    // nonidentity site factors only

    static PauliOp identity(int d) { return PauliOp{d, 0, {}}; }
    bool is_identity() const { return phase == 0 && sites.empty(); }
    bool is_scalar() const { return sites.empty(); }

    // Multiplies X^x Z^z into site e on the right, carrying the reordering
    // phase from the Z factors already present at e.
    PauliOp& mul_site(EdgeId e, int x, int z);
    XZ at(EdgeId e) const;
    int weight() const { return static_cast<int>(sites.size()); }
};

PauliOp multiply(const PauliOp& p, const PauliOp& q);
PauliOp inverse(const PauliOp& p);
PauliOp pauli_power(const PauliOp& p, long long t);
long long symplectic_product(const PauliOp& p, const PauliOp& q);
bool commute(const PauliOp& p, const PauliOp& q);
// Smallest t >= 1 with p^t equal to the identity, phase included.
long long operator_order(const PauliOp& p);

// Literal syntax: optional phase prefix "w^k", then whitespace-separated site
// factors "X2Z1@e(3,4,H)".  Zero exponents are omitted, the identity prints
// as "I".  Layer-1 edges carry a fourth component: "e(3,4,H,1)".
std::string to_string(const PauliOp& p);
std::optional<PauliOp> parse_pauli(const std::string& s, int d);

}  // namespace qds
