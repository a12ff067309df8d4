#include "bge/core.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace bge {

const char* kind_name(ComponentKind k) {
    switch (k) {
        case ComponentKind::SE: return "SE";
        case ComponentKind::SF: return "SF";
        case ComponentKind::R: return "R";
        case ComponentKind::I: return "I";
        case ComponentKind::C: return "C";
        case ComponentKind::TF: return "TF";
        case ComponentKind::GY: return "GY";
        case ComponentKind::J0: return "J0";
        case ComponentKind::J1: return "J1";
    }
    return "?";
}

std::optional<ComponentKind> kind_from_name(const std::string& s) {
    static const std::map<std::string, ComponentKind> table = {
        {"SE", ComponentKind::SE}, {"SF", ComponentKind::SF}, {"R", ComponentKind::R},
        {"I", ComponentKind::I},   {"C", ComponentKind::C},   {"TF", ComponentKind::TF},
        {"GY", ComponentKind::GY}, {"J0", ComponentKind::J0}, {"J1", ComponentKind::J1},
    };
    auto it = table.find(s);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

const char* rule_name(Rule r) {
    switch (r) {
        case Rule::DuplicateId: return "duplicate-id";
        case Rule::BondEndpoints: return "bond-endpoints";
        case Rule::BondIdRange: return "bond-id-range";
        case Rule::CoefficientDomain: return "coefficient-domain";
        case Rule::ComponentCount: return "component-count";
        case Rule::Connectivity: return "connectivity";
        case Rule::ElementArity: return "element-arity";
        case Rule::TwoPortArity: return "two-port-arity";
        case Rule::JunctionArity: return "junction-arity";
        case Rule::BondEndpointJunction: return "bond-junction-endpoint";
        case Rule::StrongBondJ0: return "strong-bond-j0";
        case Rule::StrongBondJ1: return "strong-bond-j1";
        case Rule::TFCausality: return "tf-causality";
        case Rule::GYCausality: return "gy-causality";
    }
    return "?";
}

namespace {

void add(ValidationReport& rep, Rule rule, const std::string& subject,
         const std::string& message) {
    rep.violations.push_back({rule, subject, message});
}

}  // namespace

ValidationReport validate(const BondGraph& g) {
    ValidationReport rep;

    std::set<CompRef> comp_ids;
    for (const auto& c : g.components) {
        if (!comp_ids.insert(c.ref()).second)
            add(rep, Rule::DuplicateId, c.ref().str(), "component declared more than once");
        if (has_coefficient(c.kind)) {
            if (c.coeff == 0.0)
                add(rep, Rule::CoefficientDomain, c.ref().str(),
                    "proportional element requires a nonzero coefficient");
        } else if (c.coeff != 0.0) {
            add(rep, Rule::CoefficientDomain, c.ref().str(),
                "component kind does not take a coefficient");
        }
    }

    std::set<int> bond_ids;
    bool endpoints_ok = true;
    for (const auto& b : g.bonds) {
        const std::string subj = "bond " + std::to_string(b.id);
        if (!bond_ids.insert(b.id).second)
            add(rep, Rule::DuplicateId, subj, "bond id declared more than once");
        if (b.tail == b.head) {
            add(rep, Rule::BondEndpoints, subj, "tail and head must differ");
            endpoints_ok = false;
        }
        for (CompRef r : {b.tail, b.head}) {
            if (!comp_ids.count(r)) {
                add(rep, Rule::BondEndpoints, subj,
                    "endpoint " + r.str() + " is not a declared component");
                endpoints_ok = false;
            }
        }
    }
    // ids must be exactly 1..M (bond matrix rows are indexed by them)
    const int m = static_cast<int>(g.bonds.size());
    for (const auto& b : g.bonds)
        if (b.id < 1 || b.id > m)
            add(rep, Rule::BondIdRange, "bond " + std::to_string(b.id),
                "bond ids must form 1.." + std::to_string(m));

    if (g.components.size() < 3)
        add(rep, Rule::ComponentCount, "graph",
            "a bond graph needs at least 3 components, got " +
                std::to_string(g.components.size()));

    if (!endpoints_ok) return rep;  // incidence-based checks would misfire

    // connectivity (undirected, over declared components)
    if (!g.components.empty()) {
        std::map<CompRef, int> index;
        for (const auto& c : g.components) index.emplace(c.ref(), static_cast<int>(index.size()));
        std::vector<std::vector<int>> adj(g.components.size());
        for (const auto& b : g.bonds) {
            int u = index.at(b.tail), v = index.at(b.head);
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        std::vector<char> seen(g.components.size(), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        size_t reached = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : adj[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    ++reached;
                    stack.push_back(v);
                }
        }
        if (reached != g.components.size())
            add(rep, Rule::Connectivity, "graph",
                "graph is not connected (" + std::to_string(reached) + " of " +
                    std::to_string(g.components.size()) + " components reachable)");
    }

    for (const auto& c : g.components) {
        const auto inc = g.incident(c.ref());
        const int n = static_cast<int>(inc.size());
        if (is_element(c.kind)) {
            if (n != 1)
                add(rep, Rule::ElementArity, c.ref().str(),
                    "1-port element must have exactly 1 bond, has " + std::to_string(n));
            continue;
        }
        if (is_two_port(c.kind)) {
            if (n != 2) {
                add(rep, Rule::TwoPortArity, c.ref().str(),
                    "2-port junction must have exactly 2 bonds, has " + std::to_string(n));
                continue;
            }
            int strokes_here = 0;
            for (const Bond* b : inc)
                if (b->stroke_at(c.ref())) ++strokes_here;
            if (c.kind == ComponentKind::TF && strokes_here != 1)
                add(rep, Rule::TFCausality, c.ref().str(),
                    "TF needs exactly one causal stroke at its ends, has " +
                        std::to_string(strokes_here));
            if (c.kind == ComponentKind::GY && strokes_here == 1)
                add(rep, Rule::GYCausality, c.ref().str(),
                    "GY needs zero or two causal strokes at its ends, has 1");
            continue;
        }
        // 0/1-junction
        if (n < 2) {
            add(rep, Rule::JunctionArity, c.ref().str(),
                "junction must have at least 2 bonds, has " + std::to_string(n));
            continue;
        }
        int strokes_here = 0;
        for (const Bond* b : inc)
            if (b->stroke_at(c.ref())) ++strokes_here;
        if (c.kind == ComponentKind::J0) {
            // the strong bond imposes the effort: exactly one stroke at the junction
            if (strokes_here != 1)
                add(rep, Rule::StrongBondJ0, c.ref().str(),
                    "0-junction has " + std::to_string(strokes_here) +
                        " strong bonds, needs exactly 1");
        } else {
            // the strong bond imposes the flow: exactly one stroke away from the junction
            const int strong = n - strokes_here;
            if (strong != 1)
                add(rep, Rule::StrongBondJ1, c.ref().str(),
                    "1-junction has " + std::to_string(strong) +
                        " strong bonds, needs exactly 1");
        }
    }

    for (const auto& b : g.bonds) {
        const Component* t = g.find(b.tail);
        const Component* h = g.find(b.head);
        if (t && h && is_element(t->kind) && is_element(h->kind))
            add(rep, Rule::BondEndpointJunction, "bond " + std::to_string(b.id),
                "bond connects two elements; every bond needs a junction endpoint");
    }

    return rep;
}

}  // namespace bge
