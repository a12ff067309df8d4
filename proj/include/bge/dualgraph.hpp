#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bge/matrix.hpp"
#include "bge/ops.hpp"

namespace bge {

// One node per physical variable; merged classes carry every (bond, var)
// they stand for. id is var + smallest bond id ("f1" for the class merging
// f1..f4 of the DC motor's electrical junction).
struct VarNode {
    char var = 'e';
    std::vector<int> bonds;  // sorted, non-empty
    bool observed = false;
    int channel = -1;  // input channel index when observed
    std::string id;
};

enum class EdgeOrigin {
    Element,
    TFGY,
    JunctionBalance,
    ReversedElement,
    ReversedTFGY,
    ReversedJunction,
};

const char* origin_name(EdgeOrigin o);

// Directed physics edge; its initial frequency operator is
// sign * alpha * base(kind) on the diagonal.
struct PhysEdge {
    int src = 0, dst = 0;
    EdgeOrigin origin = EdgeOrigin::Element;
    OpKind kind = OpKind::Identity;
    double alpha = 1.0;
    int sign = 1;
};

struct DualGraph {
    std::vector<VarNode> nodes;
    std::vector<PhysEdge> edges;
    int n_bonds = 0;

    // index of the node whose class contains (bond, var); -1 if none
    int node_of(int bond, char var) const;
    int node_by_id(const std::string& id) const;
    int channels() const;
};

// channel index -> (bond id, 'e'|'f')
using ChannelMap = std::vector<std::pair<int, char>>;

// The 7-step translation: (1) node per variable, (2) R/I/C edges directed by
// causality, (3) TF/GY edges, (4) 0/1-junction balance edges into the
// strong-bond variable, (5) merge common-variable classes, (6) add reversed
// edges, (7) mark observed nodes from the channel mapping.
DualGraph compile(const BondMatrix& bm, const ChannelMap& mapping);

struct StencilEntry {
    int neighbor;
    OpKind kind;
    double alpha;
    int sign;
};

// In-neighborhood of a node with the initial edge operators.
std::vector<StencilEntry> message_stencil(const DualGraph& g, int node);

nlohmann::json dual_graph_json(const DualGraph& g);
DualGraph dual_graph_from_json(const nlohmann::json& j);

}  // namespace bge
