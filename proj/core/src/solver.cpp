#include "shellrg/solver.hpp"

#include "shellrg/errors.hpp"

namespace shellrg {

std::string statusName(RunStatus s) {
    switch (s) {
        case RunStatus::Completed: return "completed";
        case RunStatus::AbortedNonFinite: return "aborted-nonfinite";
        case RunStatus::AbortedBudget: return "aborted-budget";
    }
    return "?";
}

Method methodFromName(const std::string& name) {
    if (name == "explicit-adaptive") return Method::ExplicitAdaptive;
    if (name == "stiff-adaptive") return Method::StiffAdaptive;
    throw ConfigError("unknown solver method '" + name +
                      "' (expected explicit-adaptive|stiff-adaptive)");
}

std::string methodName(Method m) {
    return m == Method::ExplicitAdaptive ? "explicit-adaptive" : "stiff-adaptive";
}

void SolverConfig::validate() const {
    if (!(rtol > 0.0) || !(atol > 0.0))
        throw ContractViolation("SolverConfig: rtol and atol must be > 0");
    if (maxStep < 0.0 || initialStep < 0.0)
        throw ContractViolation("SolverConfig: step bounds must be >= 0");
    if (maxSteps < 1) throw ContractViolation("SolverConfig: maxSteps must be >= 1");
    if (!(blowupGuard > 0.0)) throw ContractViolation("SolverConfig: blowupGuard must be > 0");
}

} // namespace shellrg
