#pragma once
// Exact integer linear algebra used by the stabilizer bookkeeping.
//
// Smith normal form over Z with unimodular transforms gives, for a generator
// matrix M over Z_n (rows = generators, columns = symplectic coordinates):
//   * the order of the row span mod n:      prod_i n / gcd(n, s_i)
//   * a basis of the left kernel mod n:     rows (n/gcd(n,s_i)) * U_i
//   * solutions u of u M = v (mod n)
// Howell form over Z_n provides an independent route to span orders and a
// canonical basis; it is used for cross checks and for reducing promoted
// generators.

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <optional>
#include <vector>

namespace qds {

using BigInt = boost::multiprecision::cpp_int;
using BigMat = std::vector<std::vector<BigInt>>;
using ZVec = std::vector<long long>;
using ZMat = std::vector<ZVec>;

struct SmithForm {
    BigMat U, V;               // U * M * V = S with U, V unimodular
    std::vector<BigInt> diag;  // diagonal of S, d1 | d2 | ...
    size_t rows = 0, cols = 0;
    size_t rank = 0;           // number of nonzero diagonal entries
};

SmithForm smith_normal_form(const BigMat& m);

BigMat to_big(const ZMat& m);

// Order of {u M mod n : u in Z^k}.
BigInt rowspace_order_mod(const BigMat& m, long long n);

// Basis (as rows over Z_n) of {u : u M = 0 mod n}.  The returned rows
// generate the full solution group.
ZMat left_kernel_mod(const BigMat& m, long long n);

// One solution of u M = v (mod n), if any.
std::optional<ZVec> solve_left_mod(const BigMat& m, const ZVec& v, long long n);

// Basis of the integer lattice {u in Z^k : u M = 0 mod n}; always full rank k.
BigMat left_kernel_lattice(const BigMat& m, long long n);

// Invariant factors (> 1) of Z^k / row lattice of C.
std::vector<BigInt> quotient_invariants(const BigMat& c);

// Multiset of invariant factors of L / T where L is a full-rank integer
// lattice basis (k x k) and T = direct sum of orders[i] * Z (with T inside L).
// Used for the relation counts l_m: L is the relation lattice of a generator
// list, T the trivial power relations g_i^{m_i} = 1.
std::map<long long, int> lattice_quotient_factors(const BigMat& lattice,
                                                  const std::vector<long long>& orders);

// Howell form of m over Z_n (rows canonicalized, pivots divide n).
ZMat howell_form(ZMat m, long long n);

// Order of the row span of a Howell form: prod (n / pivot).
BigInt howell_span_order(const ZMat& howell, long long n);

// Reduces v modulo the row span of a Howell form; returns the canonical
// residue (zero iff v is in the span).
ZVec howell_reduce(const ZMat& howell, ZVec v, long long n);

}  // namespace qds
