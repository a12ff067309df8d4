#include "bge/matrix.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace bge {

namespace {

Error reconstruction_error(int row, const std::string& message) {
    return Error("reconstruction-error", "row " + std::to_string(row) + ": " + message);
}

std::optional<JunctionTriplet>& junction_cell(BondMatrixRow& row, ComponentKind k) {
    switch (k) {
        case ComponentKind::TF: return row.tf;
        case ComponentKind::GY: return row.gy;
        case ComponentKind::J0: return row.j0;
        default: return row.j1;
    }
}

}  // namespace

BondMatrix build_bond_matrix(const BondGraph& g) {
    const ValidationReport rep = validate(g);
    if (!rep.ok()) {
        std::ostringstream msg;
        msg << "graph fails validation:";
        for (const auto& v : rep.violations) msg << " [" << rule_name(v.rule) << " " << v.subject << "]";
        throw Error("invalid-graph", msg.str());
    }

    BondMatrix bm;
    std::vector<Bond> bonds = g.bonds;
    std::sort(bonds.begin(), bonds.end(), [](const Bond& a, const Bond& b) { return a.id < b.id; });

    for (const Bond& b : bonds) {
        BondMatrixRow row;
        row.bond = b.id;
        for (CompRef ref : {b.tail, b.head}) {
            const Component& comp = *g.find(ref);
            switch (comp.kind) {
                case ComponentKind::SE: row.se = comp.id; break;
                case ComponentKind::SF: row.sf = comp.id; break;
                case ComponentKind::R: row.r = comp.coeff; break;
                case ComponentKind::I: row.i = comp.coeff; break;
                case ComponentKind::C: row.c = comp.coeff; break;
                default: {
                    JunctionTriplet t;
                    t.signed_id = b.directed_toward(ref) ? comp.id : -comp.id;
                    if (is_two_port(comp.kind)) t.coeff = comp.coeff;
                    t.imposed = b.stroke_at(ref) ? Imposed::Effort : Imposed::Flow;
                    auto& cell = junction_cell(row, comp.kind);
                    if (cell)
                        throw Error("same-column-junctions",
                                    "bond " + std::to_string(b.id) + " joins two " +
                                        kind_name(comp.kind) +
                                        " junctions; one triplet slot per column");
                    cell = t;
                    break;
                }
            }
        }
        bm.rows.push_back(row);
    }
    return bm;
}

BondGraph reconstruct_bond_graph(const BondMatrix& bm) {
    if (bm.rows.empty()) throw Error("reconstruction-error", "empty bond matrix");
    for (size_t idx = 0; idx < bm.rows.size(); ++idx)
        if (bm.rows[idx].bond != static_cast<int>(idx) + 1)
            throw reconstruction_error(bm.rows[idx].bond, "rows must be sorted with bond ids 1..M");

    BondGraph g;
    std::map<CompRef, Component> comps;
    int next_r = 1, next_i = 1, next_c = 1;

    auto add_junction = [&](int row_id, ComponentKind kind, const JunctionTriplet& t) -> CompRef {
        const int id = std::abs(t.signed_id);
        if (id == 0) throw reconstruction_error(row_id, "junction triplet with zero id");
        CompRef ref{kind, id};
        auto it = comps.find(ref);
        if (is_two_port(kind)) {
            if (!t.coeff || *t.coeff == 0.0)
                throw reconstruction_error(row_id, std::string(kind_name(kind)) +
                                                       " triplet needs a nonzero coefficient");
            if (it != comps.end() && it->second.coeff != *t.coeff)
                throw reconstruction_error(row_id,
                                           std::string(kind_name(kind)) + std::to_string(id) +
                                               " referenced with inconsistent coefficients");
        } else if (t.coeff) {
            throw reconstruction_error(row_id, "0/1-junction triplet must not carry a coefficient");
        }
        if (it == comps.end())
            comps.emplace(ref, Component{kind, id, is_two_port(kind) ? *t.coeff : 0.0});
        return ref;
    };

    for (const BondMatrixRow& row : bm.rows) {
        const int ne = row.element_entries();
        const int nj = row.junction_entries();
        if (ne > 1) throw reconstruction_error(row.bond, "more than one element entry");
        if (nj == 0) throw reconstruction_error(row.bond, "no junction entry (every bond touches a junction)");
        if (ne + nj != 2)
            throw reconstruction_error(row.bond, "a bond joins exactly two components, found " +
                                                     std::to_string(ne + nj));

        // endpoint 1: the element, when present
        std::optional<CompRef> element_ref;
        if (row.se) {
            CompRef ref{ComponentKind::SE, *row.se};
            comps.emplace(ref, Component{ComponentKind::SE, *row.se, 0.0});
            element_ref = ref;
        } else if (row.sf) {
            CompRef ref{ComponentKind::SF, *row.sf};
            comps.emplace(ref, Component{ComponentKind::SF, *row.sf, 0.0});
            element_ref = ref;
        } else if (row.r) {
            CompRef ref{ComponentKind::R, next_r++};
            comps.emplace(ref, Component{ComponentKind::R, ref.id, *row.r});
            element_ref = ref;
        } else if (row.i) {
            CompRef ref{ComponentKind::I, next_i++};
            comps.emplace(ref, Component{ComponentKind::I, ref.id, *row.i});
            element_ref = ref;
        } else if (row.c) {
            CompRef ref{ComponentKind::C, next_c++};
            comps.emplace(ref, Component{ComponentKind::C, ref.id, *row.c});
            element_ref = ref;
        }

        struct JuncEnd {
            CompRef ref;
            JunctionTriplet t;
        };
        std::vector<JuncEnd> ends;
        if (row.tf) ends.push_back({add_junction(row.bond, ComponentKind::TF, *row.tf), *row.tf});
        if (row.gy) ends.push_back({add_junction(row.bond, ComponentKind::GY, *row.gy), *row.gy});
        if (row.j0) ends.push_back({add_junction(row.bond, ComponentKind::J0, *row.j0), *row.j0});
        if (row.j1) ends.push_back({add_junction(row.bond, ComponentKind::J1, *row.j1), *row.j1});

        Bond b;
        b.id = row.bond;
        if (element_ref) {
            const JuncEnd& j = ends[0];
            if (j.t.signed_id > 0) {  // directed toward the junction
                b.tail = *element_ref;
                b.head = j.ref;
                b.stroke_at_head = j.t.imposed == Imposed::Effort;
            } else {
                b.tail = j.ref;
                b.head = *element_ref;
                b.stroke_at_head = j.t.imposed == Imposed::Flow;
            }
        } else {
            const JuncEnd &a = ends[0], &bb = ends[1];
            if ((a.t.signed_id > 0) == (bb.t.signed_id > 0))
                throw reconstruction_error(row.bond,
                                           "junction pair with incompatible directions (both " +
                                               std::string(a.t.signed_id > 0 ? "toward" : "away") +
                                               ")");
            if (a.t.imposed == bb.t.imposed)
                throw reconstruction_error(
                    row.bond, "junction pair with incompatible imposed-variable pattern");
            const JuncEnd& head = a.t.signed_id > 0 ? a : bb;
            const JuncEnd& tail = a.t.signed_id > 0 ? bb : a;
            b.tail = tail.ref;
            b.head = head.ref;
            b.stroke_at_head = head.t.imposed == Imposed::Effort;
        }
        g.bonds.push_back(b);
    }

    for (const auto& [ref, comp] : comps) g.components.push_back(comp);

    const ValidationReport rep = validate(g);
    if (!rep.ok()) {
        std::ostringstream msg;
        msg << "reconstructed graph fails validation:";
        for (const auto& v : rep.violations)
            msg << " [" << rule_name(v.rule) << " " << v.subject << "]";
        throw Error("reconstruction-error", msg.str());
    }
    return g;
}

nlohmann::json bond_matrix_json(const BondMatrix& bm) {
    auto triplet = [](const std::optional<JunctionTriplet>& t) -> nlohmann::json {
        if (!t) return nullptr;
        return nlohmann::json::array(
            {t->signed_id, t->coeff ? nlohmann::json(*t->coeff) : nlohmann::json(nullptr),
             t->imposed == Imposed::Effort ? "e" : "f"});
    };
    auto opt = [](const auto& v) -> nlohmann::json {
        if (!v) return nullptr;
        return *v;
    };
    nlohmann::json rows = nlohmann::json::array();
    for (const BondMatrixRow& r : bm.rows) {
        rows.push_back({{"bond", r.bond},
                        {"se", opt(r.se)},
                        {"sf", opt(r.sf)},
                        {"r", opt(r.r)},
                        {"i", opt(r.i)},
                        {"c", opt(r.c)},
                        {"tf", triplet(r.tf)},
                        {"gy", triplet(r.gy)},
                        {"j0", triplet(r.j0)},
                        {"j1", triplet(r.j1)}});
    }
    return rows;
}

}  // namespace bge
