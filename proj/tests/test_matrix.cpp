#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "bge/dsl.hpp"
#include "bge/matrix.hpp"
#include "helpers.hpp"

using namespace bge;

TEST_CASE("dc motor bond matrix rows follow the column rules") {
    const BondMatrix bm = build_bond_matrix(parse_dsl(test::dc_motor_dsl()));
    REQUIRE(bm.rows.size() == 7);

    const BondMatrixRow& r1 = bm.rows[0];
    CHECK(r1.se == 1);
    REQUIRE(r1.j1.has_value());
    CHECK(r1.j1->signed_id == 1);  // directed toward the junction
    CHECK(r1.j1->imposed == Imposed::Effort);

    const BondMatrixRow& r2 = bm.rows[1];  // inductance bond, electrical strong bond
    CHECK(r2.i == 0.1);
    REQUIRE(r2.j1.has_value());
    CHECK(r2.j1->signed_id == -1);
    CHECK(r2.j1->imposed == Imposed::Flow);
    CHECK_FALSE(r2.j1->coeff.has_value());

    const BondMatrixRow& r3 = bm.rows[2];  // R = 5 ohm
    CHECK(r3.r == 5.0);
    REQUIRE(r3.j1.has_value());
    CHECK(r3.j1->signed_id == -1);
    CHECK(r3.j1->imposed == Imposed::Effort);

    const BondMatrixRow& r4 = bm.rows[3];  // electrical side of the gyrator
    REQUIRE(r4.gy.has_value());
    CHECK(r4.gy->signed_id == 1);
    CHECK(r4.gy->coeff == 0.1);
    CHECK(r4.gy->imposed == Imposed::Flow);
    REQUIRE(r4.j1.has_value());
    CHECK(r4.j1->signed_id == -1);
    CHECK(r4.j1->imposed == Imposed::Effort);

    const BondMatrixRow& r5 = bm.rows[4];  // mechanical side of the gyrator
    REQUIRE(r5.gy.has_value());
    CHECK(r5.gy->signed_id == -1);
    CHECK(r5.gy->coeff == 0.1);
    REQUIRE(r5.j1.has_value());
    CHECK(r5.j1->signed_id == 2);
    CHECK(r5.j1->imposed == Imposed::Effort);

    CHECK(bm.rows[5].i == 0.01);
    CHECK(bm.rows[5].j1->signed_id == -2);
    CHECK(bm.rows[5].j1->imposed == Imposed::Flow);
    CHECK(bm.rows[6].r == 0.001);
    CHECK(bm.rows[6].j1->signed_id == -2);
    CHECK(bm.rows[6].j1->imposed == Imposed::Effort);

    // element coefficients land in the expected columns
    std::map<int, double> r_cells, i_cells;
    for (const auto& row : bm.rows) {
        if (row.r) r_cells[row.bond] = *row.r;
        if (row.i) i_cells[row.bond] = *row.i;
    }
    CHECK(r_cells == std::map<int, double>{{3, 5.0}, {7, 0.001}});
    CHECK(i_cells == std::map<int, double>{{2, 0.1}, {6, 0.01}});

    // exactly one strong bond (imposed = f) per 1-junction
    std::map<int, int> strong;
    for (const auto& row : bm.rows)
        if (row.j1 && row.j1->imposed == Imposed::Flow) ++strong[std::abs(row.j1->signed_id)];
    CHECK(strong == std::map<int, int>{{1, 1}, {2, 1}});
}

TEST_CASE("row structural invariants hold on the corpus") {
    for (const char* text : test::corpus()) {
        const BondMatrix bm = build_bond_matrix(parse_dsl(text));
        for (const auto& row : bm.rows) {
            CHECK(row.junction_entries() >= 1);
            CHECK(row.junction_entries() <= 2);
            CHECK(row.element_entries() <= 1);
            CHECK(row.element_entries() + row.junction_entries() == 2);
        }
    }
}

TEST_CASE("unvalidated graphs are rejected") {
    BondGraph g;
    g.components.push_back({ComponentKind::SE, 1, 0.0});
    g.components.push_back({ComponentKind::R, 1, 2.0});
    g.bonds.push_back({1, {ComponentKind::SE, 1}, {ComponentKind::R, 1}, true});
    CHECK_THROWS_WITH_AS(build_bond_matrix(g), doctest::Contains("fails validation"), Error);
}

TEST_CASE("same-column junction pairs cannot be encoded") {
    // J1 - J1 bond: both triplets would need the same column
    BondGraph g;
    g.components.push_back({ComponentKind::SE, 1, 0.0});
    g.components.push_back({ComponentKind::J1, 1, 0.0});
    g.components.push_back({ComponentKind::J1, 2, 0.0});
    g.components.push_back({ComponentKind::R, 1, 1.0});
    g.components.push_back({ComponentKind::I, 1, 1.0});
    g.bonds.push_back({1, {ComponentKind::SE, 1}, {ComponentKind::J1, 1}, true});
    g.bonds.push_back({2, {ComponentKind::J1, 1}, {ComponentKind::J1, 2}, false});
    g.bonds.push_back({3, {ComponentKind::J1, 2}, {ComponentKind::R, 1}, false});
    g.bonds.push_back({4, {ComponentKind::J1, 1}, {ComponentKind::I, 1}, true});
    REQUIRE(validate(g).ok());
    CHECK_THROWS_AS(build_bond_matrix(g), Error);
}

TEST_CASE("theorem 1 round trip is a fixed point on the corpus") {
    for (const char* text : test::corpus()) {
        const BondMatrix bm = build_bond_matrix(parse_dsl(text));
        const BondGraph rebuilt = reconstruct_bond_graph(bm);
        CHECK(validate(rebuilt).ok());
        const BondMatrix again = build_bond_matrix(rebuilt);
        CHECK(again == bm);
    }
}

TEST_CASE("matrices are invariant to R/I/C element ids") {
    for (const char* text : test::corpus()) {
        BondGraph g = parse_dsl(text);
        const BondMatrix before = build_bond_matrix(g);
        // renumber every R/I/C id (and the bond references to them)
        std::map<CompRef, CompRef> renumber;
        for (auto& c : g.components) {
            if (c.kind != ComponentKind::R && c.kind != ComponentKind::I &&
                c.kind != ComponentKind::C)
                continue;
            CompRef from = c.ref();
            c.id += 40;
            renumber[from] = c.ref();
        }
        for (auto& b : g.bonds) {
            if (renumber.count(b.tail)) b.tail = renumber[b.tail];
            if (renumber.count(b.head)) b.head = renumber[b.head];
        }
        REQUIRE(validate(g).ok());
        CHECK(build_bond_matrix(g) == before);
    }
}

TEST_CASE("reconstruction synthesizes consecutive element ids in bond order") {
    const BondMatrix bm = build_bond_matrix(parse_dsl(test::dc_motor_dsl()));
    const BondGraph g = reconstruct_bond_graph(bm);
    // bond 3 carries the first R row, bond 7 the second
    bool r1_on_3 = false, r2_on_7 = false;
    for (const auto& b : g.bonds) {
        if (b.id == 3) r1_on_3 = b.has_endpoint({ComponentKind::R, 1});
        if (b.id == 7) r2_on_7 = b.has_endpoint({ComponentKind::R, 2});
    }
    CHECK(r1_on_3);
    CHECK(r2_on_7);
    // source ids are preserved exactly
    CHECK(g.find({ComponentKind::SE, 1}) != nullptr);
}

TEST_CASE("inconsistent matrices are rejected with the offending row") {
    SUBCASE("0-junction rows all imposing flow have no strong bond") {
        BondMatrix bm;
        BondMatrixRow a;
        a.bond = 1;
        a.sf = 1;
        a.j0 = JunctionTriplet{1, std::nullopt, Imposed::Flow};
        BondMatrixRow b;
        b.bond = 2;
        b.c = 2.0;
        b.j0 = JunctionTriplet{-1, std::nullopt, Imposed::Flow};
        BondMatrixRow c;
        c.bond = 3;
        c.r = 0.5;
        c.j0 = JunctionTriplet{-1, std::nullopt, Imposed::Flow};
        bm.rows = {a, b, c};
        CHECK_THROWS_WITH_AS(reconstruct_bond_graph(bm), doctest::Contains("strong-bond-j0"),
                             Error);
    }
    SUBCASE("single row with an element and no junction") {
        BondMatrix bm;
        BondMatrixRow a;
        a.bond = 1;
        a.r = 5.0;
        bm.rows = {a};
        CHECK_THROWS_WITH_AS(reconstruct_bond_graph(bm), doctest::Contains("row 1"), Error);
    }
    SUBCASE("junction pair directed toward both ends") {
        BondMatrix bm = build_bond_matrix(parse_dsl(test::tf_chain_dsl()));
        // bond 4 joins TF1 and J01; force both signs positive
        bm.rows[3].tf->signed_id = std::abs(bm.rows[3].tf->signed_id);
        bm.rows[3].j0->signed_id = std::abs(bm.rows[3].j0->signed_id);
        CHECK_THROWS_WITH_AS(reconstruct_bond_graph(bm), doctest::Contains("row 4"), Error);
    }
    SUBCASE("junction pair with the same imposed variable") {
        BondMatrix bm = build_bond_matrix(parse_dsl(test::tf_chain_dsl()));
        bm.rows[3].tf->imposed = bm.rows[3].j0->imposed;
        CHECK_THROWS_WITH_AS(reconstruct_bond_graph(bm),
                             doctest::Contains("imposed-variable"), Error);
    }
    SUBCASE("two-port with inconsistent coefficients") {
        BondMatrix bm = build_bond_matrix(parse_dsl(test::dc_motor_dsl()));
        bm.rows[4].gy->coeff = 0.2;
        CHECK_THROWS_WITH_AS(reconstruct_bond_graph(bm),
                             doctest::Contains("inconsistent coefficients"), Error);
    }
    SUBCASE("rows must be dense in 1..M") {
        BondMatrix bm = build_bond_matrix(parse_dsl(test::dc_motor_dsl()));
        bm.rows[6].bond = 9;
        CHECK_THROWS_AS(reconstruct_bond_graph(bm), Error);
    }
}

TEST_CASE("json dump lists all nine columns in order") {
    const BondMatrix bm = build_bond_matrix(parse_dsl(test::dc_motor_dsl()));
    const nlohmann::json j = bond_matrix_json(bm);
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 7);
    CHECK(j[0]["bond"] == 1);
    CHECK(j[0]["se"] == 1);
    CHECK(j[0]["sf"].is_null());
    CHECK(j[2]["r"] == 5.0);
    CHECK(j[1]["j1"] == nlohmann::json::array({-1, nullptr, "f"}));
    CHECK(j[3]["gy"] == nlohmann::json::array({1, 0.1, "f"}));
    CHECK(j[4]["j1"] == nlohmann::json::array({2, nullptr, "e"}));
}
