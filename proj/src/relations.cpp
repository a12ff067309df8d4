#include "bge/relations.hpp"

#include <cstdio>
#include <sstream>

namespace bge {

namespace {

std::string var_str(PortVar v) { return std::string(1, v.var) + "_" + (v.port == 0 ? "a" : "b"); }

}  // namespace

std::string SymbolicRelation::text() const {
    std::ostringstream out;
    for (size_t i = 0; i < equations.size(); ++i) {
        const Equation& q = equations[i];
        if (i) out << "; ";
        char coeff[32];
        std::snprintf(coeff, sizeof coeff, "%g", q.coeff);
        out << var_str(q.lhs) << " = " << coeff << " * ";
        switch (q.op) {
            case OpKind::Identity: out << var_str(q.rhs); break;
            case OpKind::Integrate: out << "int(" << var_str(q.rhs) << ")"; break;
            case OpKind::Derive: out << "d/dt(" << var_str(q.rhs) << ")"; break;
        }
    }
    return out.str();
}

ElementEdgeOp element_causal_edge(ComponentKind kind, double alpha, bool element_receives_effort) {
    switch (kind) {
        case ComponentKind::R:
            // e = alpha * f in effort-out causality
            return element_receives_effort ? ElementEdgeOp{'e', 'f', OpKind::Identity, 1.0 / alpha}
                                           : ElementEdgeOp{'f', 'e', OpKind::Identity, alpha};
        case ComponentKind::I:
            // integral causality: f = alpha^-1 * int(e)
            return element_receives_effort ? ElementEdgeOp{'e', 'f', OpKind::Integrate, 1.0 / alpha}
                                           : ElementEdgeOp{'f', 'e', OpKind::Derive, alpha};
        case ComponentKind::C:
            // integral causality: e = alpha^-1 * int(f)
            return element_receives_effort ? ElementEdgeOp{'e', 'f', OpKind::Derive, alpha}
                                           : ElementEdgeOp{'f', 'e', OpKind::Integrate, 1.0 / alpha};
        default:
            throw Error("bad-kind", "element_causal_edge expects an R/I/C kind");
    }
}

ElementEdgeOp inverse_edge(const ElementEdgeOp& e) {
    return {e.to_var, e.from_var, op_inverse(e.op), 1.0 / e.coeff};
}

SymbolicRelation constitutive_relation(const Component& c, CausalDirection dir) {
    if (is_source(c.kind))
        throw Error("source-relation",
                    std::string(kind_name(c.kind)) +
                        " imposes an independent signal; it has no constitutive relation");

    SymbolicRelation rel;
    const bool pref = dir == CausalDirection::Preferred;
    const double a = c.coeff;
    switch (c.kind) {
        case ComponentKind::R:
        case ComponentKind::I:
        case ComponentKind::C: {
            // Preferred: R outputs effort, I/C integral causality.
            const bool receives_effort = (c.kind == ComponentKind::R)   ? !pref
                                         : (c.kind == ComponentKind::I) ? pref
                                                                        : !pref;
            ElementEdgeOp e = element_causal_edge(c.kind, a, receives_effort);
            rel.equations.push_back({{0, e.to_var}, e.op, e.coeff, {0, e.from_var}});
            break;
        }
        case ComponentKind::TF:
            // e_a = a * e_b and f_b = a * f_a (through orientation)
            if (pref) {  // effort received on port a: solves for e_b and f_a
                rel.equations.push_back({{1, 'e'}, OpKind::Identity, 1.0 / a, {0, 'e'}});
                rel.equations.push_back({{0, 'f'}, OpKind::Identity, 1.0 / a, {1, 'f'}});
            } else {
                rel.equations.push_back({{0, 'e'}, OpKind::Identity, a, {1, 'e'}});
                rel.equations.push_back({{1, 'f'}, OpKind::Identity, a, {0, 'f'}});
            }
            break;
        case ComponentKind::GY:
            // e_a = a * f_b and e_b = a * f_a (through orientation)
            if (pref) {  // flows in, efforts out
                rel.equations.push_back({{0, 'e'}, OpKind::Identity, a, {1, 'f'}});
                rel.equations.push_back({{1, 'e'}, OpKind::Identity, a, {0, 'f'}});
            } else {
                rel.equations.push_back({{1, 'f'}, OpKind::Identity, 1.0 / a, {0, 'e'}});
                rel.equations.push_back({{0, 'f'}, OpKind::Identity, 1.0 / a, {1, 'e'}});
            }
            break;
        case ComponentKind::J0:
            rel.equations.push_back({{1, 'e'}, OpKind::Identity, 1.0, {0, 'e'}});
            break;
        case ComponentKind::J1:
            rel.equations.push_back({{1, 'f'}, OpKind::Identity, 1.0, {0, 'f'}});
            break;
        default: break;
    }
    return rel;
}

}  // namespace bge
