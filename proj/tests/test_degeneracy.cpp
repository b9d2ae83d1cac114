#include "doctest.h"

#include "json.hpp"
#include "qdstab/degeneracy.h"
#include "qdstab/model.h"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <vector>

using namespace qds;

namespace {

StabilizerModel torus(ModelKind kind, int d, int w, int h) {
    return build_model(kind, lattice_for(BoundarySpec{}, w, h), d);
}

StabilizerModel surface(int d, int w, int h) {
    BoundarySpec spec{BoundaryKind::Rough, BoundaryKind::Rough, BoundaryKind::Smooth,
                      BoundaryKind::Smooth};
    return build_zd_model(d, lattice_for(spec, w, h), spec);
}

StabilizerModel cylinder_two_rough(int d, int w, int h) {
    BoundarySpec spec{BoundaryKind::Rough, BoundaryKind::Rough, BoundaryKind::Closed,
                      BoundaryKind::Closed};
    return build_zd_model(d, lattice_for(spec, w, h), spec);
}

StabilizerModel disk(BoundaryKind side, int d, int w, int h) {
    BoundarySpec spec{side, side, side, side};
    return build_zd_model(d, lattice_for(spec, w, h), spec);
}

using OrderMap = std::map<long long, long long>;

BigInt pow_big(long long base, long long exp) {
    BigInt v = 1;
    for (long long i = 0; i < exp; ++i) v *= base;
    return v;
}

}  // namespace

TEST_CASE("exponent rows round trip operators") {
    auto m = surface(2, 3, 3);
    size_t n = m.qudits.size();
    for (const auto& g : m.generators) {
        ZVec row = row_from_op(g.op, m);
        CHECK_EQ(row.size(), 2 * n);
        CHECK_EQ(row_from_op(op_from_row(row, m), m), row);
    }
    PauliOp off = PauliOp::identity(2);
    off.mul_site(EdgeId{0, 'H', 9, 9}, 1, 0);
    CHECK_THROWS_AS(row_from_op(off, m), std::invalid_argument);
    CHECK_THROWS_AS(op_from_row(ZVec(3, 0), m), std::invalid_argument);
}

TEST_CASE("ground state degeneracy of closed and open models") {
    CHECK_EQ(gsd_absolute(torus(ModelKind::ZdBulk, 2, 1, 1)), 4);
    CHECK_EQ(gsd_absolute(torus(ModelKind::ZdBulk, 2, 2, 2)), 4);
    CHECK_EQ(gsd_absolute(torus(ModelKind::ZdBulk, 2, 3, 3)), 4);
    CHECK_EQ(gsd_absolute(torus(ModelKind::ZdBulk, 4, 3, 3)), 16);
    CHECK_EQ(gsd_absolute(torus(ModelKind::DsBulk, 4, 3, 3)), 4);
    CHECK_EQ(gsd_absolute(surface(2, 3, 3)), 2);
    CHECK_EQ(gsd_absolute(disk(BoundaryKind::Smooth, 2, 3, 3)), 1);
    CHECK_EQ(gsd_absolute(disk(BoundaryKind::Rough, 2, 3, 3)), 1);
    CHECK_EQ(gsd_absolute(cylinder_two_rough(2, 3, 3)), 2);

    BoundarySpec even{BoundaryKind::Even, BoundaryKind::Even, BoundaryKind::Closed,
                      BoundaryKind::Closed};
    CHECK_EQ(gsd_absolute(build_zd_model(4, lattice_for(even, 3, 3), even)), 4);
    BoundarySpec dsb{BoundaryKind::DsVacuum, BoundaryKind::DsVacuum, BoundaryKind::Closed,
                     BoundaryKind::Closed};
    CHECK_EQ(gsd_absolute(build_ds_model(lattice_for(dsb, 3, 4), dsb)), 2);
}

TEST_CASE("degeneracy matches brute force enumeration") {
    std::vector<StabilizerModel> models;
    models.push_back(torus(ModelKind::ZdBulk, 2, 1, 1));
    models.push_back(torus(ModelKind::ZdBulk, 2, 2, 1));
    models.push_back(torus(ModelKind::ZdBulk, 2, 2, 2));
    models.push_back(torus(ModelKind::ZdBulk, 2, 3, 2));
    models.push_back(torus(ModelKind::ZdBulk, 2, 3, 3));
    models.push_back(torus(ModelKind::ZdBulk, 4, 1, 1));
    models.push_back(torus(ModelKind::ZdBulk, 4, 2, 2));
    models.push_back(torus(ModelKind::DsBulk, 4, 2, 2));
    models.push_back(surface(2, 2, 2));
    models.push_back(surface(2, 3, 3));
    models.push_back(cylinder_two_rough(2, 3, 3));
    models.push_back(disk(BoundaryKind::Smooth, 2, 2, 2));
    models.push_back(disk(BoundaryKind::Rough, 2, 2, 2));
    BoundarySpec even{BoundaryKind::Even, BoundaryKind::Even, BoundaryKind::Closed,
                      BoundaryKind::Closed};
    models.push_back(build_zd_model(4, lattice_for(even, 2, 2), even));
    for (const auto& m : models) {
        CAPTURE(m.qudits.size());
        CHECK_EQ(gsd_absolute(m), gsd_bruteforce(m));
    }
}

TEST_CASE("brute force refuses oversized models") {
    CHECK_THROWS_WITH_AS(gsd_bruteforce(torus(ModelKind::ZdBulk, 2, 4, 3)),
                         doctest::Contains("cap exceeded"), std::runtime_error);
    CHECK_THROWS_AS(gsd_bruteforce(torus(ModelKind::ZdBulk, 4, 3, 3)), std::runtime_error);
}

TEST_CASE("scalar obstruction is reported") {
    StabilizerModel m;
    m.d = 2;
    m.lattice = lattice_for(BoundarySpec{}, 1, 1);
    m.qudits = m.lattice.edges();
    PauliOp both = PauliOp::identity(2);
    for (const auto& e : m.qudits) both.mul_site(e, 1, 0);
    PauliOp flipped = both;
    flipped.phase = 1;
    m.generators.push_back({"g0", both});
    m.generators.push_back({"g1", flipped});
    CHECK_THROWS_WITH_AS(group_order(m), doctest::Contains("scalar obstruction"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(gsd_bruteforce(m), doctest::Contains("scalar obstruction"),
                         std::runtime_error);

    StabilizerModel nc = m;
    nc.generators.clear();
    PauliOp xop = PauliOp::identity(2), zop = PauliOp::identity(2);
    xop.mul_site(m.qudits[0], 1, 0);
    zop.mul_site(m.qudits[0], 0, 1);
    nc.generators.push_back({"x", xop});
    nc.generators.push_back({"z", zop});
    CHECK_THROWS_AS(gsd_bruteforce(nc), std::invalid_argument);
}

TEST_CASE("generator and relation order census") {
    auto check = [](const StabilizerModel& m, const OrderMap& gens, const OrderMap& rels) {
        CHECK_EQ(generator_orders(m), gens);
        CHECK_EQ(relation_orders(m), rels);
        BigInt stab = 1;
        for (const auto& [ord, c] : gens) stab *= pow_big(ord, c);
        for (const auto& [ord, c] : rels) stab /= pow_big(ord, c);
        CHECK_EQ(pow_big(m.d, m.qudits.size()), gsd_absolute(m) * stab);
    };
    check(torus(ModelKind::ZdBulk, 2, 3, 3), OrderMap{{2, 18}}, OrderMap{{2, 2}});
    check(torus(ModelKind::ZdBulk, 4, 3, 3), OrderMap{{4, 18}}, OrderMap{{4, 2}});
    check(torus(ModelKind::DsBulk, 4, 3, 3), OrderMap{{2, 27}, {4, 9}}, OrderMap{{2, 9}, {4, 1}});
    check(surface(2, 3, 3), OrderMap{{2, 17}}, OrderMap{});
    check(disk(BoundaryKind::Smooth, 2, 3, 3), OrderMap{{2, 25}}, OrderMap{{2, 1}});
    check(cylinder_two_rough(2, 3, 3), OrderMap{{2, 15}}, OrderMap{{2, 1}});
}

TEST_CASE("delta bookkeeping reproduces recomputed degeneracy") {
    auto roundtrip = [](const StabilizerModel& before, const StabilizerModel& after) {
        DeltaRecord rec = delta_between(before, after);
        CHECK_EQ(gsd_update(gsd_absolute(before), rec), gsd_absolute(after));
    };
    auto sdisk = disk(BoundaryKind::Smooth, 2, 3, 3);
    auto surf = surface(2, 3, 3);
    auto cyl = cylinder_two_rough(2, 3, 3);
    auto tor2 = torus(ModelKind::ZdBulk, 2, 3, 3);
    roundtrip(sdisk, surf);
    roundtrip(surf, cyl);
    roundtrip(cyl, tor2);
    roundtrip(torus(ModelKind::ZdBulk, 4, 3, 3), torus(ModelKind::DsBulk, 4, 3, 3));

    DeltaRecord cut = delta_between(surf, cyl);
    CHECK_EQ(cut.qudit_delta, -3);
    CHECK_EQ(cut.dn, OrderMap{{2, -2}});
    CHECK_EQ(cut.dl, OrderMap{{2, 1}});

    CHECK_THROWS_AS(delta_between(tor2, torus(ModelKind::ZdBulk, 4, 3, 3)),
                    std::invalid_argument);

    DeltaRecord bad;
    bad.d = 2;
    bad.dn[2] = 2;
    CHECK_THROWS_WITH_AS(gsd_update(2, bad), doctest::Contains("inconsistent delta"),
                         std::runtime_error);
    CHECK_EQ(gsd_update(7, DeltaRecord{}), 7);
}

TEST_CASE("logical operators commute and complete the centralizer") {
    auto surf = surface(2, 3, 3);
    auto logs = logical_generators(surf);
    REQUIRE_EQ(logs.size(), 2);
    std::vector<int> weights{qubit_weight(logs[0]), qubit_weight(logs[1])};
    std::sort(weights.begin(), weights.end());
    CHECK_EQ(weights, std::vector<int>{3, 4});
    CHECK_EQ(symplectic_product(logs[0], logs[1]) % 2, 1);
    for (const auto& l : logs) {
        CHECK(is_logical(surf, l));
        bool pure_x = true, pure_z = true;
        for (const auto& [e, f] : l.sites) {
            pure_x &= f.z == 0;
            pure_z &= f.x == 0;
        }
        CHECK((pure_x || pure_z));
    }

    auto tor4 = torus(ModelKind::ZdBulk, 4, 2, 2);
    auto loops = logical_generators(tor4);
    REQUIRE_EQ(loops.size(), 4);
    for (const auto& l : loops) {
        CHECK(is_logical(tor4, l));
        CHECK_EQ(operator_order(l), 4);
    }

    CHECK(logical_generators(disk(BoundaryKind::Smooth, 2, 3, 3)).empty());

    PauliOp column = PauliOp::identity(2);
    for (int r = 0; r < 3; ++r) column.mul_site(surf.lattice.v_edge(0, r), 0, 1);
    CHECK(is_logical(surf, column));
    PauliOp lone = PauliOp::identity(2);
    lone.mul_site(surf.lattice.v_edge(0, 0), 0, 1);
    CHECK_FALSE(is_logical(surf, lone));
    CHECK_FALSE(is_logical(surf, surf.generators.front().op));
}

TEST_CASE("code distance certification") {
    auto cp = distance(surface(2, 3, 3), 6);
    CHECK_EQ(cp.n_qubits, 18);
    CHECK(cp.k_integral);
    CHECK_EQ(cp.k, 1);
    CHECK(cp.d_z.exists);
    CHECK(cp.d_z.certified);
    CHECK_EQ(cp.d_z.value, 3);
    CHECK(cp.d_x.exists);
    CHECK(cp.d_x.certified);
    CHECK_EQ(cp.d_x.value, 4);

    auto small = distance(surface(2, 2, 2), 5);
    CHECK_EQ(small.d_z.value, 2);
    CHECK_EQ(small.d_x.value, 3);

    auto tor4 = distance(torus(ModelKind::ZdBulk, 4, 2, 2), 4);
    CHECK_EQ(tor4.n_qubits, 16);
    CHECK_EQ(tor4.k, 4);
    CHECK_EQ(tor4.d_z.value, 2);
    CHECK_EQ(tor4.d_x.value, 2);
    CHECK(tor4.d_z.certified);

    auto ds = distance(torus(ModelKind::DsBulk, 4, 2, 2), 4);
    CHECK_EQ(ds.k, 2);
    CHECK_EQ(ds.d_z.value, 2);
    CHECK_EQ(ds.d_x.value, 2);

    auto capped = pure_distance(surface(2, 3, 3), false, 2);
    CHECK(capped.exists);
    CHECK_FALSE(capped.certified);
    CHECK_EQ(capped.value, 2);

    auto none = distance(disk(BoundaryKind::Smooth, 2, 3, 3), 4);
    CHECK_EQ(none.k, 0);
    CHECK(none.logicals.empty());
    CHECK_FALSE(none.d_z.exists);
    CHECK_FALSE(none.d_x.exists);
}

TEST_CASE("qubit weight convention") {
    CHECK_EQ(qubit_weight(XZ{0, 0}, 4), 0);
    CHECK_EQ(qubit_weight(XZ{1, 0}, 4), 2);
    CHECK_EQ(qubit_weight(XZ{2, 0}, 4), 1);
    CHECK_EQ(qubit_weight(XZ{0, 2}, 4), 1);
    CHECK_EQ(qubit_weight(XZ{2, 2}, 4), 2);
    CHECK_EQ(qubit_weight(XZ{1, 2}, 4), 2);
    CHECK_EQ(qubit_weight(XZ{3, 3}, 4), 2);
    CHECK_EQ(qubit_weight(XZ{1, 1}, 2), 1);
    CHECK_EQ(qubit_weight(XZ{2, 2}, 3), 1);

    PauliOp p = PauliOp::identity(4);
    p.mul_site(EdgeId{0, 'H', 0, 0}, 2, 2);
    p.mul_site(EdgeId{0, 'V', 0, 0}, 1, 0);
    CHECK_EQ(qubit_weight(p), 4);
}

TEST_CASE("code report serializes to json") {
    auto report = nlohmann::json::parse(code_report_json(distance(surface(2, 3, 3), 6)));
    CHECK_EQ(report["gsd"], 2);
    CHECK_EQ(report["k"], 1);
    CHECK_EQ(report["d_Z"], 3);
    CHECK_EQ(report["d_X"], 4);
    CHECK(report["certified"].get<bool>());
    CHECK_EQ(report["logicals"].size(), 2);

    auto trivial = nlohmann::json::parse(
        code_report_json(distance(disk(BoundaryKind::Smooth, 2, 3, 3), 4)));
    CHECK_EQ(trivial["k"], 0);
    CHECK(trivial["d_Z"].is_null());
    CHECK(trivial["logicals"].empty());
    CHECK(trivial["certified"].get<bool>());

    auto partial = nlohmann::json::parse(code_report_json(distance(surface(2, 3, 3), 2)));
    CHECK_FALSE(partial["certified"].get<bool>());
}

TEST_CASE("distance search is stable across worker counts") {
    setenv("QDSTAB_WORKERS", "3", 1);
    auto bound = pure_distance(surface(2, 3, 3), false, 6);
    unsetenv("QDSTAB_WORKERS");
    CHECK(bound.certified);
    CHECK_EQ(bound.value, 3);
}
