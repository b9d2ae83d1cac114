#pragma once
// Abelian anyon theories. Labels form a finite abelian group, stored as
// vectors over cyclic factors cyc = (m_1, ..., m_k) and indexed
// lexicographically with the first coordinate most significant. Fusion is
// group addition. The topological spin of label a is the phase
// e^{2 pi i spin[a] / spin_den}, and mutual braiding is derived from it:
//
//     braid(a,b) = spin(a+b) - spin(a) - spin(b)  mod spin_den.
//
// For the double of Z_d the labels are e^p m^q with spin exponent pq and
// braiding exponent ps + qr, both over spin_den = d.

#include "qdstab/cyclotomic.h"
#include "qdstab/intmat.h"

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qds {

struct AnyonTheory {
    std::vector<long long> cyc;
    long long spin_den = 1;
    std::vector<long long> spin;
    std::vector<std::string> names;

    long long label_count() const;
    ZVec vec_of(long long index) const;
    long long index_of(const ZVec& v) const;
    long long add(long long a, long long b) const;
    long long neg(long long a) const;
    long long spin_of(long long a) const { return spin[a]; }
    long long braid(long long a, long long b) const;
    std::string name_of(long long a) const;
};

// Throws if the spin table is not a quadratic form on the fusion group
// (identity spin nonzero, or derived braiding not bilinear).
void validate_theory(const AnyonTheory& t);

AnyonTheory zd_double(long long d);
AnyonTheory ds_theory();
AnyonTheory trivial_theory();
AnyonTheory product_theory(const AnyonTheory& a, const AnyonTheory& b);
AnyonTheory opposite_theory(const AnyonTheory& t);

// Subgroups are sorted lists of label indices, closed under fusion.
using AnyonSubgroup = std::vector<long long>;

AnyonSubgroup subgroup_closure(const AnyonTheory& t, const std::vector<ZVec>& gens);
bool is_lagrangian(const AnyonTheory& t, const AnyonSubgroup& s);
std::vector<AnyonSubgroup> enumerate_subgroups(const AnyonTheory& t);
std::vector<AnyonSubgroup> enumerate_lagrangian(const AnyonTheory& t);

// Anyon condensation at the level of abstract theories. label_map sends
// each old label to its class in the quotient theory, or to -1 if the
// label braids nontrivially with the condensed subgroup (confined).
struct CondensedTheory {
    AnyonTheory quotient;
    std::vector<long long> label_map;
};

CondensedTheory condense_theory(const AnyonTheory& t, const std::vector<ZVec>& gens);

// True iff there is a fusion-group isomorphism matching spins exactly
// (spins compared as reduced fractions of a full turn).
bool theories_equivalent(const AnyonTheory& a, const AnyonTheory& b);

struct TunnelingMatrix {
    AnyonTheory domain;
    AnyonTheory codomain;
    ZMat w;  // w[b][a], rows over codomain labels
};

TunnelingMatrix tunneling_identity(const AnyonTheory& t);
TunnelingMatrix tunneling_matrix(const AnyonTheory& t, const CondensedTheory& c);
// action is a k x k integer matrix on label coordinate vectors; throws
// unless it defines a fusion-group automorphism.
TunnelingMatrix tunneling_automorphism(const AnyonTheory& t, const ZMat& action);

// The domain-wall consistency conditions: vacuum maps to vacuum with
// multiplicity one, tunneling preserves spin, the braiding matrices
// intertwine (with modular normalization sqrt|A|, sqrt|B|), and the
// channel counts satisfy the fusion stability inequality
// W_{ia} W_{jb} <= W_{i+j,a+b}.
bool check_tunneling(const TunnelingMatrix& m);

nlohmann::json theory_to_json(const AnyonTheory& t);
AnyonTheory theory_from_json(const nlohmann::json& j);
nlohmann::json tunneling_to_json(const TunnelingMatrix& m);
TunnelingMatrix tunneling_from_json(const nlohmann::json& j);

}  // namespace qds
