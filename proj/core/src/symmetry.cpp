#include "shellrg/symmetry.hpp"

#include <cmath>

namespace shellrg {

ShellState timeScaledIc(const ShellState& ic, double alpha) {
    if (!(alpha > 0.0)) throw ContractViolation("timeScaledIc: alpha must be > 0");
    std::vector<Complex> v = ic.values;
    for (Complex& u : v) u *= alpha;
    return ShellState(ic.kind, std::move(v));
}

BoundarySpec timeScaledBc(const BoundarySpec& bc, double alpha) {
    if (!(alpha > 0.0)) throw ContractViolation("timeScaledBc: alpha must be > 0");
    return bc.timeScaled(alpha);
}

ShellState spaceShiftedIc(const ShellState& ic) {
    if (ic.shells() < 2) throw ContractViolation("spaceShiftedIc: need at least two shells");
    std::vector<Complex> v(ic.values.begin() + 1, ic.values.end());
    for (Complex& u : v) u *= kLambda;
    return ShellState(ic.kind, std::move(v));
}

std::vector<double> fibonacciPhases(double fm1, double f0, int count) {
    std::vector<double> f(static_cast<size_t>(std::max(count, 0)));
    double a = fm1, b = f0;
    for (int n = 0; n < count; ++n) {
        const double c = a + b; // F_{n+1} = F_n + F_{n-1}
        f[static_cast<size_t>(n)] = c;
        a = b;
        b = c;
    }
    return f;
}

ShellState phaseShiftedIc(const ShellState& ic, double fm1, double f0) {
    if (ic.kind != ScalarKind::Cplx)
        throw ContractViolation("phaseShiftedIc: phase symmetry requires a complex model");
    const std::vector<double> phases = fibonacciPhases(fm1, f0, ic.shells());
    std::vector<Complex> v = ic.values;
    for (int n = 0; n < ic.shells(); ++n)
        v[static_cast<size_t>(n)] *= std::polar(1.0, phases[static_cast<size_t>(n)]);
    return ShellState(ic.kind, std::move(v));
}

BoundarySpec phaseShiftedBc(const BoundarySpec& bc, double fm1, double f0) {
    if (bc.arity() != 2)
        throw ContractViolation("phaseShiftedBc: phase symmetry defined for two-boundary models");
    BoundarySpec out;
    out.channels = {bc.channels[0].scaledBy(std::polar(1.0, fm1)),
                    bc.channels[1].scaledBy(std::polar(1.0, f0))};
    return out;
}

} // namespace shellrg
