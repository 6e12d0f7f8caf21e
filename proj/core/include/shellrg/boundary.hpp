#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "shellrg/shell_state.hpp"

namespace shellrg {

/// Closed-form C^1 boundary curves used by the builtin experiment setups.
enum class BuiltinCurve {
    Zero,        // 0
    One,         // 1
    Half,        // 1/2
    TwoMinusCos, // 2 - cos t
    TwoPlusSin,  // 2 + sin t
    ExpNegIt,    // e^{-it}
};

/// Cubic-Hermite table of a sampled C^1 function (value + derivative at each
/// node). Used when a computed trajectory component becomes a boundary.
struct HermiteTable {
    std::vector<double> times;      // strictly increasing
    std::vector<Complex> values;    // same length
    std::vector<Complex> derivs;    // same length

    Complex eval(double t) const;
    /// Allowed query range, with a small grace margin past the endpoints so
    /// that finite-difference probes of the RHS stay legal.
    double tMin() const;
    double tMax() const;
};

/// One boundary channel b(t) = prefactor * base(timeScale * t + timeShift).
/// The affine wrapper realizes the time-scale, phase and semigroup-shift
/// transforms without changing the underlying curve.
struct BoundaryChannel {
    enum class Kind { Builtin, Constant, Tabulated } kindTag = Kind::Constant;
    BuiltinCurve curve = BuiltinCurve::Zero;
    Complex constant{0.0, 0.0};
    std::shared_ptr<const HermiteTable> table;

    Complex prefactor{1.0, 0.0};
    double timeScale = 1.0;
    double timeShift = 0.0;

    Complex eval(double t) const;

    static BoundaryChannel builtin(BuiltinCurve c);
    static BoundaryChannel constantValue(Complex v);
    static BoundaryChannel tabulated(std::shared_ptr<const HermiteTable> table);

    BoundaryChannel scaledBy(Complex factor) const;
    BoundaryChannel timeScaled(double alpha) const;   // b(t) -> b(alpha t)
    BoundaryChannel timeShifted(double delta) const;  // b(t) -> b(t + delta)
};

/// Boundary condition of a shell-model IBVP: one channel per prescribed shell,
/// ordered from the deepest boundary shell upward. For arity 1 the single
/// channel is u_0; for arity 2 the channels are (u_{-1}, u_0).
struct BoundarySpec {
    std::vector<BoundaryChannel> channels;

    int arity() const { return static_cast<int>(channels.size()); }

    /// Value of boundary shell n <= 0 at time t.
    Complex shellValue(int n, double t) const;

    /// b_0(t); the most common query.
    Complex b0(double t) const { return channels.back().eval(t); }

    BoundarySpec timeScaled(double alpha) const; // channels alpha * b(alpha t)
    BoundarySpec timeShifted(double delta) const;
};

/// Builtin boundary setups. Names: "dyadic-default" (2 - cos t),
/// "gledzer-default" (1, 2 + sin t), "sabra-default" (1/2, e^{-it}), "zero".
BoundarySpec builtinBc(const std::string& name, int arity);
BoundarySpec constBc(const std::vector<Complex>& values);

/// Exact-value helpers for the builtin setups.
BoundarySpec dyadicDefaultBc();
BoundarySpec gledzerDefaultBc();
BoundarySpec sabraDefaultBc();
BoundarySpec zeroBc(int arity);

} // namespace shellrg
