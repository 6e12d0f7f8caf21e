#include "shellrg/regularization.hpp"

#include <cmath>

namespace shellrg {

void validate(const RegularizationSpec& reg) {
    if (const auto* cc = std::get_if<CanonicalCutoff>(&reg)) {
        if (cc->N < 0) throw ContractViolation("CanonicalCutoff: N must be >= 0");
        if (cc->J < 1) throw ContractViolation("CanonicalCutoff: J must be >= 1");
        if (!cc->coeffs.empty() && static_cast<int>(cc->coeffs.size()) != cc->J)
            throw ContractViolation("CanonicalCutoff: coeffs size must equal J");
        for (double c : cc->coeffs)
            if (!(c >= 0.0)) throw ContractViolation("CanonicalCutoff: coefficients must be >= 0");
        if (cc->eps < 0.0) throw ContractViolation("CanonicalCutoff: eps must be >= 0");
    } else if (const auto* aux = std::get_if<Auxiliary>(&reg)) {
        if (aux->N < 0) throw ContractViolation("Auxiliary: N must be >= 0");
        if (!(aux->beta > 0.0)) throw ContractViolation("Auxiliary: beta must be > 0");
    } else if (const auto* v = std::get_if<Viscous>(&reg)) {
        if (!(v->nu > 0.0)) throw ContractViolation("Viscous: nu must be > 0");
    }
}

int defaultShells(const RegularizationSpec& reg) {
    if (const auto* cc = std::get_if<CanonicalCutoff>(&reg)) return cc->N + cc->J;
    int n = 0;
    if (const auto* aux = std::get_if<Auxiliary>(&reg)) {
        n = aux->N;
    } else {
        const auto& v = std::get<Viscous>(reg);
        n = std::max(1, static_cast<int>(std::lround(-0.75 * std::log2(v.nu))));
    }
    return n + static_cast<int>(std::ceil(10.0 + n / 3.0));
}

int impliedShells(const RegularizationSpec& reg, int requestedShells) {
    validate(reg);
    if (const auto* cc = std::get_if<CanonicalCutoff>(&reg)) {
        const int m = cc->N + cc->J;
        if (requestedShells != 0 && requestedShells != m)
            throw ContractViolation("CanonicalCutoff: state length must be N+J = " +
                                    std::to_string(m));
        return m;
    }
    if (requestedShells == 0) return defaultShells(reg);
    if (requestedShells < 1) throw ContractViolation("state length must be >= 1");
    if (const auto* aux = std::get_if<Auxiliary>(&reg)) {
        if (requestedShells < aux->N)
            throw ContractViolation("Auxiliary: truncation must keep shell N in range");
    }
    return requestedShells;
}

std::string describe(const RegularizationSpec& reg) {
    if (const auto* cc = std::get_if<CanonicalCutoff>(&reg)) {
        std::string s = "canonical(N=" + std::to_string(cc->N) + ",J=" + std::to_string(cc->J);
        if (cc->eps != 0.0) s += ",eps=" + std::to_string(cc->eps);
        if (!cc->coeffs.empty()) s += ",coeffs";
        return s + ")";
    }
    if (const auto* aux = std::get_if<Auxiliary>(&reg))
        return "auxiliary(N=" + std::to_string(aux->N) + ",beta=" + std::to_string(aux->beta) + ")";
    const auto& v = std::get<Viscous>(reg);
    return "viscous(nu=" + std::to_string(v.nu) + ")";
}

} // namespace shellrg
