#pragma once

#include <optional>
#include <string>

namespace bge {

// Linear operator vocabulary of the constitutive relations. Scalar multiples
// are Identity with a non-unit coefficient; the coefficient lives next to the
// kind wherever operators appear.
enum class OpKind { Identity, Integrate, Derive };

inline const char* op_name(OpKind k) {
    switch (k) {
        case OpKind::Identity: return "identity";
        case OpKind::Integrate: return "integrate";
        case OpKind::Derive: return "derive";
    }
    return "?";
}

inline std::optional<OpKind> op_from_name(const std::string& s) {
    if (s == "identity") return OpKind::Identity;
    if (s == "integrate") return OpKind::Integrate;
    if (s == "derive") return OpKind::Derive;
    return std::nullopt;
}

// Inverse operator of coeff*op: Identity<->Identity, Integrate<->Derive.
inline OpKind op_inverse(OpKind k) {
    switch (k) {
        case OpKind::Identity: return OpKind::Identity;
        case OpKind::Integrate: return OpKind::Derive;
        case OpKind::Derive: return OpKind::Integrate;
    }
    return OpKind::Identity;
}

}  // namespace bge
