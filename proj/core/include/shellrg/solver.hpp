#pragma once

#include <cstdint>
#include <string>

namespace shellrg {

enum class Method { ExplicitAdaptive, StiffAdaptive };

enum class RunStatus { Completed, AbortedNonFinite, AbortedBudget };

std::string statusName(RunStatus s);
Method methodFromName(const std::string& name);
std::string methodName(Method m);

struct SolverConfig {
    Method method = Method::ExplicitAdaptive;
    double rtol = 1e-10;
    double atol = 1e-12;
    double maxStep = 0.0;     // 0 = unlimited
    double initialStep = 0.0; // 0 = automatic
    std::int64_t maxSteps = 1'000'000;
    double blowupGuard = 1e12;

    void validate() const;
};

struct IntegrationStats {
    std::int64_t accepted = 0;
    std::int64_t rejected = 0;
    std::int64_t rhsEvals = 0;
    std::int64_t jacobians = 0;
    std::int64_t factorizations = 0;
};

} // namespace shellrg
