#include "bge/dualgraph.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "bge/relations.hpp"

namespace bge {

const char* origin_name(EdgeOrigin o) {
    switch (o) {
        case EdgeOrigin::Element: return "element";
        case EdgeOrigin::TFGY: return "tfgy";
        case EdgeOrigin::JunctionBalance: return "junction";
        case EdgeOrigin::ReversedElement: return "reversed-element";
        case EdgeOrigin::ReversedTFGY: return "reversed-tfgy";
        case EdgeOrigin::ReversedJunction: return "reversed-junction";
    }
    return "?";
}

namespace {

std::optional<EdgeOrigin> origin_from_name(const std::string& s) {
    for (EdgeOrigin o : {EdgeOrigin::Element, EdgeOrigin::TFGY, EdgeOrigin::JunctionBalance,
                         EdgeOrigin::ReversedElement, EdgeOrigin::ReversedTFGY,
                         EdgeOrigin::ReversedJunction})
        if (s == origin_name(o)) return o;
    return std::nullopt;
}

EdgeOrigin reversed_origin(EdgeOrigin o) {
    switch (o) {
        case EdgeOrigin::Element: return EdgeOrigin::ReversedElement;
        case EdgeOrigin::TFGY: return EdgeOrigin::ReversedTFGY;
        case EdgeOrigin::JunctionBalance: return EdgeOrigin::ReversedJunction;
        default: throw Error("bad-origin", "cannot reverse a reversed edge");
    }
}

// variable index in the pre-merge numbering: e_b -> 2(b-1), f_b -> 2(b-1)+1
int raw_var(int bond, char var) { return 2 * (bond - 1) + (var == 'f' ? 1 : 0); }

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct RawEdge {
    int src, dst;  // raw variable indices
    EdgeOrigin origin;
    OpKind kind;
    double alpha;
    int sign;
};

struct JunctionRow {
    int bond;
    int dir;  // +1 toward the junction
    Imposed imposed;
    double coeff;  // TF/GY only
};

}  // namespace

int DualGraph::node_of(int bond, char var) const {
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].var == var &&
            std::binary_search(nodes[i].bonds.begin(), nodes[i].bonds.end(), bond))
            return static_cast<int>(i);
    return -1;
}

int DualGraph::node_by_id(const std::string& id) const {
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].id == id) return static_cast<int>(i);
    return -1;
}

int DualGraph::channels() const {
    int n = 0;
    for (const auto& v : nodes)
        if (v.observed) ++n;
    return n;
}

DualGraph compile(const BondMatrix& bm, const ChannelMap& mapping) {
    const int m = static_cast<int>(bm.rows.size());
    if (m == 0) throw Error("empty-matrix", "cannot compile an empty bond matrix");
    for (int i = 0; i < m; ++i)
        if (bm.rows[i].bond != i + 1)
            throw Error("bad-matrix", "bond matrix rows must be sorted with ids 1..M");

    // steps 2-3: element and 2-port edges; gather 0/1-junction incidence for step 4
    std::vector<RawEdge> raw;
    std::map<std::pair<ComponentKind, int>, std::vector<JunctionRow>> junctions;

    for (const BondMatrixRow& row : bm.rows) {
        const int b = row.bond;
        struct ElemCell {
            ComponentKind kind;
            double alpha;
        };
        std::optional<ElemCell> elem;
        if (row.r) elem = ElemCell{ComponentKind::R, *row.r};
        if (row.i) elem = ElemCell{ComponentKind::I, *row.i};
        if (row.c) elem = ElemCell{ComponentKind::C, *row.c};

        std::optional<Imposed> elem_side_imposed;  // from the (single) junction triplet
        auto visit = [&](ComponentKind kind, const std::optional<JunctionTriplet>& t) {
            if (!t) return;
            junctions[{kind, std::abs(t->signed_id)}].push_back(
                {b, t->signed_id > 0 ? 1 : -1, t->imposed, t->coeff.value_or(0.0)});
            elem_side_imposed = t->imposed;
        };
        visit(ComponentKind::TF, row.tf);
        visit(ComponentKind::GY, row.gy);
        visit(ComponentKind::J0, row.j0);
        visit(ComponentKind::J1, row.j1);

        if (elem) {
            // stroke at the element's end <=> not at the junction's end
            const bool receives_effort = *elem_side_imposed == Imposed::Flow;
            ElementEdgeOp op = element_causal_edge(elem->kind, elem->alpha, receives_effort);
            raw.push_back({raw_var(b, op.from_var), raw_var(b, op.to_var), EdgeOrigin::Element,
                           op.op, op.coeff, 1});
        }
    }

    std::vector<std::pair<ComponentKind, std::vector<JunctionRow>>> balance_junctions;
    for (auto& [key, rows] : junctions) {
        std::sort(rows.begin(), rows.end(),
                  [](const JunctionRow& a, const JunctionRow& b) { return a.bond < b.bond; });
        const auto [kind, id] = key;
        if (is_two_port(kind)) {
            if (rows.size() != 2)
                throw Error("bad-matrix", std::string(kind_name(kind)) + std::to_string(id) +
                                              " must appear in exactly 2 rows");
            const JunctionRow &bi = rows[0], &bj = rows[1];
            const double alpha = bi.coeff;
            const int sigma = -bi.dir * bj.dir;  // +1 for through orientation
            const bool stroke_i = bi.imposed == Imposed::Effort;  // stroke at the 2-port's end
            const bool stroke_j = bj.imposed == Imposed::Effort;
            if (kind == ComponentKind::TF) {
                // e_i = alpha*e_j, f_j = sigma*alpha*f_i
                if (stroke_i == stroke_j)
                    throw Error("bad-matrix",
                                "TF" + std::to_string(id) + " needs exactly one stroke at its ends");
                if (stroke_i) {  // receives e_i and f_j
                    raw.push_back({raw_var(bi.bond, 'e'), raw_var(bj.bond, 'e'), EdgeOrigin::TFGY,
                                   OpKind::Identity, 1.0 / alpha, 1});
                    raw.push_back({raw_var(bj.bond, 'f'), raw_var(bi.bond, 'f'), EdgeOrigin::TFGY,
                                   OpKind::Identity, 1.0 / alpha, sigma});
                } else {  // receives e_j and f_i
                    raw.push_back({raw_var(bj.bond, 'e'), raw_var(bi.bond, 'e'), EdgeOrigin::TFGY,
                                   OpKind::Identity, alpha, 1});
                    raw.push_back({raw_var(bi.bond, 'f'), raw_var(bj.bond, 'f'), EdgeOrigin::TFGY,
                                   OpKind::Identity, alpha, sigma});
                }
            } else {
                // GY: e_i = alpha*f_j, e_j = sigma*alpha*f_i
                if (stroke_i != stroke_j)
                    throw Error("bad-matrix",
                                "GY" + std::to_string(id) + " needs zero or two strokes at its ends");
                if (!stroke_i) {  // flows in, efforts out
                    raw.push_back({raw_var(bj.bond, 'f'), raw_var(bi.bond, 'e'), EdgeOrigin::TFGY,
                                   OpKind::Identity, alpha, 1});
                    raw.push_back({raw_var(bi.bond, 'f'), raw_var(bj.bond, 'e'), EdgeOrigin::TFGY,
                                   OpKind::Identity, alpha, sigma});
                } else {  // efforts in, flows out
                    raw.push_back({raw_var(bi.bond, 'e'), raw_var(bj.bond, 'f'), EdgeOrigin::TFGY,
                                   OpKind::Identity, 1.0 / alpha, 1});
                    raw.push_back({raw_var(bj.bond, 'e'), raw_var(bi.bond, 'f'), EdgeOrigin::TFGY,
                                   OpKind::Identity, 1.0 / alpha, sigma});
                }
            }
        } else {
            balance_junctions.emplace_back(kind, rows);
        }
    }

    // step 4: balance edges solved for the strong-bond variable
    for (const auto& [kind, rows] : balance_junctions) {
        const bool is_j1 = kind == ComponentKind::J1;
        const Imposed strong_mark = is_j1 ? Imposed::Flow : Imposed::Effort;
        const char bal_var = is_j1 ? 'e' : 'f';  // the balancing (non-common) variable
        const JunctionRow* strong = nullptr;
        for (const auto& r : rows)
            if (r.imposed == strong_mark) {
                if (strong)
                    throw Error("bad-matrix", "junction with more than one strong bond");
                strong = &r;
            }
        if (!strong) throw Error("bad-matrix", "junction without a strong bond");
        for (const auto& r : rows) {
            if (r.bond == strong->bond) continue;
            raw.push_back({raw_var(r.bond, bal_var), raw_var(strong->bond, bal_var),
                           EdgeOrigin::JunctionBalance, OpKind::Identity, 1.0,
                           -r.dir * strong->dir});
        }
    }

    // step 5: merge the common variable of each 0/1 junction
    UnionFind uf(2 * m);
    for (const auto& [kind, rows] : balance_junctions) {
        const char common = kind == ComponentKind::J1 ? 'f' : 'e';
        for (size_t i = 1; i < rows.size(); ++i)
            uf.unite(raw_var(rows[0].bond, common), raw_var(rows[i].bond, common));
    }

    DualGraph g;
    g.n_bonds = m;
    std::map<int, int> class_to_node;  // union-find root -> node index
    struct ClassInfo {
        char var;
        std::vector<int> bonds;
    };
    std::map<int, ClassInfo> classes;
    for (int b = 1; b <= m; ++b)
        for (char var : {'e', 'f'}) {
            int root = uf.find(raw_var(b, var));
            classes[root].var = var;
            classes[root].bonds.push_back(b);
        }
    std::vector<std::pair<int, int>> order;  // (min bond, root), e before f at equal min
    for (auto& [root, info] : classes) {
        std::sort(info.bonds.begin(), info.bonds.end());
        order.emplace_back(info.bonds.front() * 2 + (info.var == 'f' ? 1 : 0), root);
    }
    std::sort(order.begin(), order.end());
    for (const auto& [key, root] : order) {
        const ClassInfo& info = classes[root];
        VarNode node;
        node.var = info.var;
        node.bonds = info.bonds;
        node.id = std::string(1, info.var) + std::to_string(info.bonds.front());
        class_to_node[root] = static_cast<int>(g.nodes.size());
        g.nodes.push_back(std::move(node));
    }

    // rewire edges onto merged nodes; step 6 adds the reversed counterparts
    std::set<std::tuple<int, int, EdgeOrigin>> seen;
    auto push_edge = [&](const PhysEdge& e) {
        if (e.src == e.dst) return;  // merged into a self-relation, carries no message
        if (!seen.insert({e.src, e.dst, e.origin}).second)
            throw Error("duplicate-edge",
                        "parallel " + std::string(origin_name(e.origin)) + " edges between " +
                            g.nodes[e.src].id + " and " + g.nodes[e.dst].id);
        g.edges.push_back(e);
    };
    for (const RawEdge& e : raw) {
        PhysEdge fwd{class_to_node.at(uf.find(e.src)), class_to_node.at(uf.find(e.dst)),
                     e.origin, e.kind, e.alpha, e.sign};
        push_edge(fwd);
        PhysEdge rev{fwd.dst, fwd.src, reversed_origin(e.origin), op_inverse(e.kind),
                     1.0 / e.alpha, e.sign};
        push_edge(rev);
    }

    // step 7: mark observed nodes; everything else stays a zero-initialized series
    std::set<int> taken;
    for (size_t ch = 0; ch < mapping.size(); ++ch) {
        const auto [bond, var] = mapping[ch];
        if (var != 'e' && var != 'f')
            throw Error("bad-mapping", "channel " + std::to_string(ch) + ": variable must be e or f");
        if (bond < 1 || bond > m)
            throw Error("bad-mapping", "channel " + std::to_string(ch) + ": no bond " +
                                           std::to_string(bond) + " in the matrix");
        const int node = g.node_of(bond, var);
        if (!taken.insert(node).second)
            throw Error("bad-mapping",
                        "channel " + std::to_string(ch) + " lands on node " + g.nodes[node].id +
                            " already mapped by another channel");
        g.nodes[node].observed = true;
        g.nodes[node].channel = static_cast<int>(ch);
    }

    return g;
}

std::vector<StencilEntry> message_stencil(const DualGraph& g, int node) {
    if (node < 0 || node >= static_cast<int>(g.nodes.size()))
        throw Error("unknown-node", "no node with index " + std::to_string(node));
    std::vector<StencilEntry> out;
    for (const PhysEdge& e : g.edges)
        if (e.dst == node) out.push_back({e.src, e.kind, e.alpha, e.sign});
    return out;
}

nlohmann::json dual_graph_json(const DualGraph& g) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const VarNode& v : g.nodes) {
        nlohmann::json labels = nlohmann::json::array();
        for (int b : v.bonds) labels.push_back(std::string(1, v.var) + std::to_string(b));
        nodes.push_back({{"id", v.id},
                         {"labels", labels},
                         {"observed", v.observed},
                         {"channel", v.observed ? nlohmann::json(v.channel) : nlohmann::json(nullptr)}});
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const PhysEdge& e : g.edges)
        edges.push_back({{"src", g.nodes[e.src].id},
                         {"dst", g.nodes[e.dst].id},
                         {"origin", origin_name(e.origin)},
                         {"kind", op_name(e.kind)},
                         {"alpha", e.alpha},
                         {"sign", e.sign}});
    return {{"bonds", g.n_bonds}, {"nodes", nodes}, {"edges", edges}};
}

DualGraph dual_graph_from_json(const nlohmann::json& j) {
    DualGraph g;
    g.n_bonds = j.at("bonds").get<int>();
    for (const auto& jn : j.at("nodes")) {
        VarNode v;
        v.id = jn.at("id").get<std::string>();
        for (const auto& lbl : jn.at("labels")) {
            const std::string s = lbl.get<std::string>();
            if (s.size() < 2 || (s[0] != 'e' && s[0] != 'f'))
                throw Error("bad-json", "bad variable label '" + s + "'");
            v.var = s[0];
            v.bonds.push_back(std::stoi(s.substr(1)));
        }
        std::sort(v.bonds.begin(), v.bonds.end());
        v.observed = jn.at("observed").get<bool>();
        v.channel = jn.at("channel").is_null() ? -1 : jn.at("channel").get<int>();
        g.nodes.push_back(std::move(v));
    }
    for (const auto& je : j.at("edges")) {
        PhysEdge e;
        e.src = g.node_by_id(je.at("src").get<std::string>());
        e.dst = g.node_by_id(je.at("dst").get<std::string>());
        if (e.src < 0 || e.dst < 0) throw Error("bad-json", "edge references unknown node");
        auto origin = origin_from_name(je.at("origin").get<std::string>());
        auto kind = op_from_name(je.at("kind").get<std::string>());
        if (!origin || !kind) throw Error("bad-json", "edge with unknown origin or kind");
        e.origin = *origin;
        e.kind = *kind;
        e.alpha = je.at("alpha").get<double>();
        e.sign = je.at("sign").get<int>();
        g.edges.push_back(e);
    }
    return g;
}

}  // namespace bge
