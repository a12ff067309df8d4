#pragma once

#include <string>
#include <vector>

#include "bge/core.hpp"
#include "bge/ops.hpp"

namespace bge {

// Which way the component's constitutive relation is solved.
// Preferred: R effort-out (e = a*f), I/C integral causality, GY flows-in,
// TF effort received on port a. Reversed is the analytic inversion.
enum class CausalDirection { Preferred, Reversed };

// Variable of one of the component's ports: port 0 ('a') is the only bond for
// 1-ports and the lower-id/tail-side bond for 2-ports.
struct PortVar {
    int port;  // 0 or 1
    char var;  // 'e' or 'f'
};

// lhs = coeff * op(rhs)
struct Equation {
    PortVar lhs;
    OpKind op;
    double coeff;
    PortVar rhs;
};

struct SymbolicRelation {
    std::vector<Equation> equations;
    std::string text() const;  // e.g. "e_a = 5 * f_a"
};

// Linear constitutive relation of an R/I/C/TF/GY/J0/J1 component in operator
// form. Sources are rejected: SE/SF impose independent signals. For 0/1
// junctions this returns the pairwise common-variable relation (e_b = e_a
// resp. f_b = f_a); the full signed balance depends on the incident bonds and
// lives in the dual-graph compiler.
SymbolicRelation constitutive_relation(const Component& c, CausalDirection dir);

// Directed edge form of a 1-port relation, as used by the dual-graph
// compiler: from_var -> to_var with coeff*op.
struct ElementEdgeOp {
    char from_var, to_var;
    OpKind op;
    double coeff;
};

// element_receives_effort == (causal stroke at the element's end)
ElementEdgeOp element_causal_edge(ComponentKind kind, double alpha, bool element_receives_effort);
ElementEdgeOp inverse_edge(const ElementEdgeOp& e);

}  // namespace bge
