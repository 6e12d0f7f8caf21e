#include "shellrg/initial_conditions.hpp"

#include <cmath>

namespace shellrg {

BuiltinIc icFromName(const std::string& name) {
    if (name == "IC1" || name == "ic1") return BuiltinIc::IC1;
    if (name == "IC2" || name == "ic2") return BuiltinIc::IC2;
    throw ConfigError("unknown initial condition '" + name + "' (expected IC1|IC2)");
}

ShellState builtinIc(BuiltinIc name, const ModelSpec& model, int shells) {
    if (shells < 1) throw ContractViolation("builtinIc: shell count must be >= 1");
    std::vector<Complex> a;
    a.reserve(static_cast<size_t>(shells));
    const bool sabra = model.coupling == Coupling::Sabra;
    for (int n = 1; n <= shells; ++n) {
        double mod;
        if (name == BuiltinIc::IC1) {
            // 2^{-k_n}; underflows to zero for deep shells, as intended.
            mod = std::exp2(-wavenumber(n));
        } else {
            mod = std::exp2(-0.25 * n);
            if (!sabra) mod *= 2.0 - std::sin(static_cast<double>(n));
        }
        if (sabra) {
            const double phi = std::sqrt(static_cast<double>(n));
            a.emplace_back(mod * std::cos(phi), mod * std::sin(phi));
        } else {
            a.emplace_back(mod, 0.0);
        }
    }
    return ShellState(model.kind(), std::move(a));
}

} // namespace shellrg
