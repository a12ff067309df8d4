#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bge {

// Error with a short machine-readable code, surfaced by the CLI as JSON.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

enum class ComponentKind { SE, SF, R, I, C, TF, GY, J0, J1 };

constexpr bool is_element(ComponentKind k) {
    return k == ComponentKind::SE || k == ComponentKind::SF || k == ComponentKind::R ||
           k == ComponentKind::I || k == ComponentKind::C;
}
constexpr bool is_junction(ComponentKind k) { return !is_element(k); }
constexpr bool is_source(ComponentKind k) {
    return k == ComponentKind::SE || k == ComponentKind::SF;
}
constexpr bool is_two_port(ComponentKind k) {
    return k == ComponentKind::TF || k == ComponentKind::GY;
}
constexpr bool has_coefficient(ComponentKind k) {
    return k == ComponentKind::R || k == ComponentKind::I || k == ComponentKind::C ||
           is_two_port(k);
}

const char* kind_name(ComponentKind k);
std::optional<ComponentKind> kind_from_name(const std::string& s);

// Reference to a component by (kind, id); ids are unique per kind.
struct CompRef {
    ComponentKind kind;
    int id;
    bool operator==(const CompRef&) const = default;
    bool operator<(const CompRef& o) const {
        return kind != o.kind ? kind < o.kind : id < o.id;
    }
    std::string str() const { return std::string(kind_name(kind)) + std::to_string(id); }
};

struct Component {
    ComponentKind kind;
    int id = 0;
    double coeff = 0.0;  // meaningful iff has_coefficient(kind); nonzero then
    CompRef ref() const { return {kind, id}; }
};

// Bond direction tail->head is the positive-power orientation.
// stroke_at_head: the head component receives the effort (and returns the flow).
struct Bond {
    int id = 0;
    CompRef tail;
    CompRef head;
    bool stroke_at_head = true;

    bool has_endpoint(CompRef r) const { return tail == r || head == r; }
    CompRef other(CompRef r) const { return tail == r ? head : tail; }
    // true if this bond's causal stroke sits at endpoint r (r receives effort)
    bool stroke_at(CompRef r) const { return stroke_at_head ? head == r : tail == r; }
    bool directed_toward(CompRef r) const { return head == r; }
};

struct BondGraph {
    std::vector<Component> components;
    std::vector<Bond> bonds;

    const Component* find(CompRef r) const {
        for (const auto& c : components)
            if (c.ref() == r) return &c;
        return nullptr;
    }
    std::vector<const Bond*> incident(CompRef r) const {
        std::vector<const Bond*> out;
        for (const auto& b : bonds)
            if (b.has_endpoint(r)) out.push_back(&b);
        return out;
    }
};

enum class Rule {
    DuplicateId,          // component (kind,id) or bond id declared twice
    BondEndpoints,        // tail == head, or endpoint not declared
    BondIdRange,          // bond ids are not exactly 1..M
    CoefficientDomain,    // coefficient missing/zero/spurious for the kind
    ComponentCount,       // fewer than 3 components
    Connectivity,         // graph not connected as undirected
    ElementArity,         // SE/SF/R/I/C with != 1 incident bond
    TwoPortArity,         // TF/GY with != 2 incident bonds
    JunctionArity,        // J0/J1 with < 2 incident bonds
    BondEndpointJunction, // bond with no junction endpoint
    StrongBondJ0,         // J0 without exactly one stroke at its end
    StrongBondJ1,         // J1 without exactly one stroke away from its end
    TFCausality,          // TF without exactly one stroke at its ends
    GYCausality,          // GY with exactly one stroke at its ends
};

const char* rule_name(Rule r);

struct Violation {
    Rule rule;
    std::string subject;  // offending component/bond, e.g. "J11" or "bond 3"
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Checks every structural invariant; violations are report entries, never throws.
ValidationReport validate(const BondGraph& g);

}  // namespace bge
