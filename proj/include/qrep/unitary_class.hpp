#pragma once

#include <string>

namespace qrep {

enum class ClassTag { Principal, Complementary, Character, NotUnitarizable };

enum class NonUnitaryReason { None, NoInvariantForm, FormIndefinite, NormBoundViolated };

// classification verdict; (t, s) are the complementary-series normal-form
// parameters, witness records the Weyl element / lattice shift that matched
struct UnitaryClass {
    ClassTag tag = ClassTag::NotUnitarizable;
    double t = 0.0;
    double s = 0.0;
    NonUnitaryReason reason = NonUnitaryReason::None;
    std::string witness;

    bool unitarizable() const { return tag != ClassTag::NotUnitarizable; }
};

inline std::string to_string(ClassTag tag) {
    switch (tag) {
        case ClassTag::Principal: return "Principal";
        case ClassTag::Complementary: return "Complementary";
        case ClassTag::Character: return "Character";
        case ClassTag::NotUnitarizable: return "NotUnitarizable";
    }
    return "?";
}

inline std::string to_string(NonUnitaryReason r) {
    switch (r) {
        case NonUnitaryReason::None: return "";
        case NonUnitaryReason::NoInvariantForm: return "NoInvariantForm";
        case NonUnitaryReason::FormIndefinite: return "FormIndefinite";
        case NonUnitaryReason::NormBoundViolated: return "NormBoundViolated";
    }
    return "?";
}

}  // namespace qrep
