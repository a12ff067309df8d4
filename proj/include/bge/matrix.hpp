#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "bge/core.hpp"

namespace bge {

enum class Imposed { Effort, Flow };

// Junction-causality descriptor of one bond at one junction:
// signed_id is +k_j when the bond is directed toward the junction, -k_j
// otherwise; coeff is the TF/GY coefficient; imposed is 'e' when the bond's
// causal stroke sits at the junction's end.
struct JunctionTriplet {
    int signed_id = 0;
    std::optional<double> coeff;
    Imposed imposed = Imposed::Effort;
    bool operator==(const JunctionTriplet&) const = default;
};

// One row per bond; columns SE,SF,R,I,C hold the element id or coefficient,
// columns TF,GY,0,1 hold junction triplets. Stored sparsely.
struct BondMatrixRow {
    int bond = 0;
    std::optional<int> se, sf;
    std::optional<double> r, i, c;
    std::optional<JunctionTriplet> tf, gy, j0, j1;

    int element_entries() const {
        return (se ? 1 : 0) + (sf ? 1 : 0) + (r ? 1 : 0) + (i ? 1 : 0) + (c ? 1 : 0);
    }
    int junction_entries() const {
        return (tf ? 1 : 0) + (gy ? 1 : 0) + (j0 ? 1 : 0) + (j1 ? 1 : 0);
    }
    bool operator==(const BondMatrixRow&) const = default;
};

struct BondMatrix {
    std::vector<BondMatrixRow> rows;  // sorted by bond id, ids 1..M
    bool operator==(const BondMatrix&) const = default;
};

// Requires validate(g) to pass; throws Error("invalid-graph") otherwise.
// Also rejects bonds joining two junctions of the same column type (one
// triplet slot per column).
BondMatrix build_bond_matrix(const BondGraph& g);

// Inverse of build_bond_matrix up to R/I/C element ids, which are synthesized
// fresh and consecutive per kind in bond-id order. The result always passes
// validate(); inconsistent matrices raise Error("reconstruction-error")
// naming the offending row.
BondGraph reconstruct_bond_graph(const BondMatrix& bm);

// Serialized columns in order SE,SF,R,I,C,TF,GY,0,1; triplets as
// [signed_id, coeff|null, "e"|"f"].
nlohmann::json bond_matrix_json(const BondMatrix& bm);

}  // namespace bge
