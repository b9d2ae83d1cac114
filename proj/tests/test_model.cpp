#include "qdstab/model.h"

#include "oracle.h"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace qds;

namespace {

const PauliOp& find_gen(const StabilizerModel& m, const std::string& tag) {
    for (const auto& g : m.generators) {
        if (g.tag == tag) return g.op;
    }
    REQUIRE_MESSAGE(false, "missing generator ", tag);
    static PauliOp dummy;
    return dummy;
}

int count_noncommuting(const StabilizerModel& m, const PauliOp& op, const std::string& prefix) {
    int n = 0;
    for (const auto& g : m.generators) {
        if (g.tag.rfind(prefix, 0) == 0 && symplectic_product(op, g.op) != 0) n++;
    }
    return n;
}

}  // namespace

TEST_CASE("bulk and boundary models validate") {
    for (int d : {2, 3, 4}) {
        auto torus = build_model(ModelKind::ZdBulk, Lattice{.width = 3, .height = 4}, d);
        auto check = validate_model(torus);
        CHECK_MESSAGE(check.commuting, check.detail);
        CHECK_MESSAGE(check.scalar_free, check.detail);
        CHECK(torus.qudits.size() == 24);
        CHECK(torus.generators.size() == 24);
    }
    for (auto kind : {ModelKind::ZdSmoothBoundary, ModelKind::ZdRoughBoundary,
                      ModelKind::ZdEvenBoundary}) {
        BoundaryKind b = kind == ModelKind::ZdSmoothBoundary ? BoundaryKind::Smooth
                         : kind == ModelKind::ZdRoughBoundary ? BoundaryKind::Rough
                                                              : BoundaryKind::Even;
        BoundarySpec spec{b, b, b, b};
        Lattice l = lattice_for(spec, 3, 3);
        auto m = build_model(kind, l, 4);
        auto check = validate_model(m);
        CHECK_MESSAGE(check.commuting, to_string(kind), ": ", check.detail);
        CHECK_MESSAGE(check.scalar_free, to_string(kind), ": ", check.detail);
    }
}

TEST_CASE("mixed boundaries validate") {
    BoundarySpec spec{BoundaryKind::Rough, BoundaryKind::Rough, BoundaryKind::Smooth,
                      BoundaryKind::Smooth};
    for (int d : {2, 4}) {
        Lattice l = lattice_for(spec, 3, 3);
        auto m = build_zd_model(d, l, spec);
        auto check = validate_model(m);
        CHECK_MESSAGE(check.commuting, check.detail);
        CHECK_MESSAGE(check.scalar_free, check.detail);
    }
    BoundarySpec cyl{BoundaryKind::Even, BoundaryKind::Even, BoundaryKind::Closed,
                     BoundaryKind::Closed};
    auto m = build_zd_model(4, lattice_for(cyl, 4, 3), cyl);
    auto check = validate_model(m);
    CHECK_MESSAGE(check.commuting, check.detail);
    CHECK_MESSAGE(check.scalar_free, check.detail);
    int x2 = 0;
    for (const auto& g : m.generators) {
        if (g.tag.rfind("X2", 0) == 0) x2++;
    }
    CHECK(x2 == 8);
}

TEST_CASE("twisted model validates on torus, cylinder, and disk") {
    for (auto [w, h] : {std::pair{3, 3}, {4, 3}}) {
        auto m = build_model(ModelKind::DsBulk, Lattice{.width = w, .height = h}, 4);
        auto check = validate_model(m);
        CHECK_MESSAGE(check.commuting, check.detail);
        CHECK_MESSAGE(check.scalar_free, check.detail);
        CHECK(m.generators.size() == static_cast<size_t>(4 * w * h));
    }
    BoundarySpec cyl{BoundaryKind::DsVacuum, BoundaryKind::DsVacuum, BoundaryKind::Closed,
                     BoundaryKind::Closed};
    auto m = build_ds_model(lattice_for(cyl, 4, 4), cyl);
    auto check = validate_model(m);
    CHECK_MESSAGE(check.commuting, check.detail);
    CHECK_MESSAGE(check.scalar_free, check.detail);

    BoundarySpec disk{BoundaryKind::DsVacuum, BoundaryKind::DsVacuum, BoundaryKind::DsVacuum,
                      BoundaryKind::DsVacuum};
    auto md = build_ds_model(lattice_for(disk, 4, 4), disk);
    auto cd = validate_model(md);
    CHECK_MESSAGE(cd.commuting, cd.detail);
    CHECK_MESSAGE(cd.scalar_free, cd.detail);
}

TEST_CASE("open charge string anticommutes with exactly its endpoint stars") {
    Lattice l{.width = 4, .height = 4};
    auto m = build_model(ModelKind::ZdBulk, l, 4);
    auto estr = string_operator(4, l, 1, 0, Coord{1, 1}, {Dir::Up, Dir::Up});
    CHECK(count_noncommuting(m, estr, "A(") == 2);
    CHECK(count_noncommuting(m, estr, "B(") == 0);
    CHECK(symplectic_product(estr, find_gen(m, "A(1,1)")) != 0);
    CHECK(symplectic_product(estr, find_gen(m, "A(1,3)")) != 0);

    auto mstr = string_operator(4, l, 0, 1, Coord{1, 1}, {Dir::Up, Dir::Up});
    CHECK(count_noncommuting(m, mstr, "B(") == 2);
    CHECK(count_noncommuting(m, mstr, "A(") == 0);
    CHECK(symplectic_product(mstr, find_gen(m, "B(1,1)")) != 0);
    CHECK(symplectic_product(mstr, find_gen(m, "B(1,3)")) != 0);

    auto dyon = string_operator(4, l, 1, 2, Coord{1, 1}, {Dir::Right, Dir::Up, Dir::Left, Dir::Down});
    for (const auto& g : m.generators) CHECK(symplectic_product(dyon, g.op) == 0);
}

TEST_CASE("closed loops commute with every bulk generator") {
    Lattice l{.width = 4, .height = 3};
    auto m = build_model(ModelKind::ZdBulk, l, 4);
    for (auto [p, q] : {std::pair{1, 0}, {0, 1}, {1, 1}, {2, 3}}) {
        auto loop = string_operator(4, l, p, q, Coord{2, 0}, {Dir::Up, Dir::Up, Dir::Up});
        for (const auto& g : m.generators) CHECK(symplectic_product(loop, g.op) == 0);
    }
}

TEST_CASE("unit dyon ribbon matches the twisted model generators") {
    Lattice l{.width = 3, .height = 3};
    auto m = build_model(ModelKind::DsBulk, l, 4);
    auto up = dyon_segment(4, l, 2, 2, Coord{1, 1}, Dir::Up);
    const auto& c1 = find_gen(m, "C1(1,1)");
    CHECK(up.phase == c1.phase);
    CHECK(up.sites == c1.sites);
    auto right = dyon_segment(4, l, 2, 2, Coord{1, 1}, Dir::Right);
    const auto& c2 = find_gen(m, "C2(1,1)");
    CHECK(right.phase == c2.phase);
    CHECK(right.sites == c2.sites);
    const auto& f = find_gen(m, "F(1,1)");
    auto a_part = PauliOp::identity(4);
    for (auto [e, s] : l.star(Coord{1, 1})) a_part.mul_site(e, s, 0);
    auto b_part = PauliOp::identity(4);
    for (auto [e, s] : l.plaquette(Coord{1, 1})) b_part.mul_site(e, 0, s);
    auto prod = multiply(a_part, b_part);
    CHECK(f.phase == prod.phase);
    CHECK(f.sites == prod.sites);
}

TEST_CASE("segments refuse to leave an open lattice") {
    BoundarySpec spec{BoundaryKind::Rough, BoundaryKind::Rough, BoundaryKind::Smooth,
                      BoundaryKind::Smooth};
    Lattice l = lattice_for(spec, 3, 3);
    CHECK_THROWS(dyon_segment(4, l, 1, 0, Coord{1, 2}, Dir::Up));
    CHECK_NOTHROW(dyon_segment(4, l, 1, 0, Coord{1, 1}, Dir::Up));
}

TEST_CASE("mirror is an anti-symplectic homomorphism and involution") {
    std::mt19937 rng(29);
    std::uniform_int_distribution<int> u(0, 3);
    Lattice l{.width = 4, .height = 3};
    auto random_op = [&] {
        PauliOp p;
        p.d = 4;
        p.phase = u(rng);
        for (int i = 0; i < 3; i++) {
            EdgeId e = (u(rng) % 2) ? l.h_edge(u(rng), u(rng) % 3) : l.v_edge(u(rng), u(rng) % 3);
            int x = u(rng), z = u(rng);
            if (x || z) p.mul_site(e, x, z);
        }
        return p;
    };
    for (int trial = 0; trial < 30; trial++) {
        PauliOp p = random_op(), q = random_op();
        PauliOp mp = mirror_op(p, 4, 1), mq = mirror_op(q, 4, 1);
        CHECK(symplectic_product(mp, mq) ==
              (4 - symplectic_product(p, q) % 4) % 4);
        PauliOp lhs = mirror_op(multiply(p, q), 4, 1);
        PauliOp rhs = multiply(mp, mq);
        CHECK(lhs.phase == rhs.phase);
        CHECK(lhs.sites == rhs.sites);
        PauliOp back = mirror_op(mp, 4, 0);
        CHECK(back.phase == p.phase);
        CHECK(back.sites == p.sites);
    }
}

TEST_CASE("folding doubles the registry and stays valid") {
    Lattice l{.width = 3, .height = 3};
    auto a = build_model(ModelKind::ZdBulk, l, 4);
    auto b = build_model(ModelKind::DsBulk, l, 4);
    auto f = fold(a, b);
    CHECK(f.qudits.size() == 36);
    auto check = validate_model(f);
    CHECK_MESSAGE(check.commuting, check.detail);
    CHECK_MESSAGE(check.scalar_free, check.detail);
    int layer1 = 0;
    for (EdgeId e : f.qudits) layer1 += e.layer == 1;
    CHECK(layer1 == 18);
}

TEST_CASE("translation maps tagged generators onto each other") {
    Lattice l{.width = 3, .height = 3};
    auto m = build_model(ModelKind::ZdBulk, l, 4);
    PauliOp t = translate(find_gen(m, "A(1,1)"), l, 1, 2);
    const auto& target = find_gen(m, "A(2,0)");
    CHECK(t.phase == target.phase);
    CHECK(t.sites == target.sites);
}

TEST_CASE("model json round trips") {
    BoundarySpec spec{BoundaryKind::DsVacuum, BoundaryKind::DsVacuum, BoundaryKind::Closed,
                      BoundaryKind::Closed};
    auto m = build_ds_model(lattice_for(spec, 3, 4), spec);
    auto back = model_from_json(model_to_json(m));
    CHECK(back.d == m.d);
    CHECK(back.lattice == m.lattice);
    CHECK(back.qudits == m.qudits);
    REQUIRE(back.generators.size() == m.generators.size());
    for (size_t i = 0; i < m.generators.size(); i++) {
        CHECK(back.generators[i].tag == m.generators[i].tag);
        CHECK(back.generators[i].op.phase == m.generators[i].op.phase);
        CHECK(back.generators[i].op.sites == m.generators[i].op.sites);
    }
}

TEST_CASE("geometry mismatches are rejected") {
    BoundarySpec rough{BoundaryKind::Rough, BoundaryKind::Rough, BoundaryKind::Closed,
                       BoundaryKind::Closed};
    Lattice untrimmed{.width = 3, .height = 3, .wrap_x = true, .wrap_y = false};
    CHECK_THROWS(build_zd_model(4, untrimmed, rough));
    CHECK_THROWS(build_zd_model(2, lattice_for(BoundarySpec{BoundaryKind::Even,
                                                            BoundaryKind::Even,
                                                            BoundaryKind::Closed,
                                                            BoundaryKind::Closed},
                                               3, 3),
                                BoundarySpec{BoundaryKind::Even, BoundaryKind::Even,
                                             BoundaryKind::Closed, BoundaryKind::Closed}));
    BoundarySpec ds{BoundaryKind::DsVacuum, BoundaryKind::DsVacuum, BoundaryKind::Closed,
                    BoundaryKind::Closed};
    CHECK_THROWS(build_zd_model(4, lattice_for(ds, 3, 3), ds));
}
