#include "shellrg/boundary.hpp"

#include <algorithm>
#include <cmath>

namespace shellrg {

namespace {

Complex evalBuiltin(BuiltinCurve c, double t) {
    switch (c) {
        case BuiltinCurve::Zero: return {0.0, 0.0};
        case BuiltinCurve::One: return {1.0, 0.0};
        case BuiltinCurve::Half: return {0.5, 0.0};
        case BuiltinCurve::TwoMinusCos: return {2.0 - std::cos(t), 0.0};
        case BuiltinCurve::TwoPlusSin: return {2.0 + std::sin(t), 0.0};
        case BuiltinCurve::ExpNegIt: return {std::cos(t), -std::sin(t)};
    }
    throw ContractViolation("evalBuiltin: bad curve");
}

double graceMargin(const HermiteTable& tab) {
    const double span = tab.times.back() - tab.times.front();
    return 1e-6 * std::max(1.0, span);
}

} // namespace

double HermiteTable::tMin() const { return times.front() - graceMargin(*this); }
double HermiteTable::tMax() const { return times.back() + graceMargin(*this); }

Complex HermiteTable::eval(double t) const {
    if (times.size() < 2)
        throw EvaluationError("HermiteTable: need at least two samples");
    if (t < tMin() || t > tMax())
        throw EvaluationError("HermiteTable: query t=" + std::to_string(t) +
                              " outside tabulated horizon [" + std::to_string(times.front()) +
                              ", " + std::to_string(times.back()) + "]");
    // Clamp grace-margin queries onto the first/last segment.
    const double tc = std::clamp(t, times.front(), times.back());
    auto it = std::upper_bound(times.begin(), times.end(), tc);
    size_t k = static_cast<size_t>(std::distance(times.begin(), it));
    if (k == 0) k = 1;
    if (k >= times.size()) k = times.size() - 1;
    const double t0 = times[k - 1], t1 = times[k];
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * values[k - 1] + h10 * h * derivs[k - 1] + h01 * values[k] + h11 * h * derivs[k];
}

Complex BoundaryChannel::eval(double t) const {
    const double tau = timeScale * t + timeShift;
    Complex base;
    switch (kindTag) {
        case Kind::Builtin: base = evalBuiltin(curve, tau); break;
        case Kind::Constant: base = constant; break;
        case Kind::Tabulated: base = table->eval(tau); break;
    }
    return prefactor * base;
}

BoundaryChannel BoundaryChannel::builtin(BuiltinCurve c) {
    BoundaryChannel ch;
    ch.kindTag = Kind::Builtin;
    ch.curve = c;
    return ch;
}

BoundaryChannel BoundaryChannel::constantValue(Complex v) {
    BoundaryChannel ch;
    ch.kindTag = Kind::Constant;
    ch.constant = v;
    return ch;
}

BoundaryChannel BoundaryChannel::tabulated(std::shared_ptr<const HermiteTable> table) {
    BoundaryChannel ch;
    ch.kindTag = Kind::Tabulated;
    ch.table = std::move(table);
    return ch;
}

BoundaryChannel BoundaryChannel::scaledBy(Complex factor) const {
    BoundaryChannel ch = *this;
    ch.prefactor *= factor;
    return ch;
}

BoundaryChannel BoundaryChannel::timeScaled(double alpha) const {
    BoundaryChannel ch = *this;
    ch.timeScale *= alpha;
    return ch;
}

BoundaryChannel BoundaryChannel::timeShifted(double delta) const {
    BoundaryChannel ch = *this;
    ch.timeShift += timeScale * delta;
    return ch;
}

Complex BoundarySpec::shellValue(int n, double t) const {
    if (n > 0 || n <= -arity())
        throw ContractViolation("BoundarySpec::shellValue: shell " + std::to_string(n) +
                                " is not a boundary shell for arity " + std::to_string(arity()));
    // channels: index arity-1 is shell 0, index arity-2 is shell -1.
    return channels[static_cast<size_t>(n + arity() - 1)].eval(t);
}

BoundarySpec BoundarySpec::timeScaled(double alpha) const {
    BoundarySpec out;
    out.channels.reserve(channels.size());
    for (const auto& ch : channels)
        out.channels.push_back(ch.timeScaled(alpha).scaledBy(Complex(alpha, 0.0)));
    return out;
}

BoundarySpec BoundarySpec::timeShifted(double delta) const {
    BoundarySpec out;
    out.channels.reserve(channels.size());
    for (const auto& ch : channels) out.channels.push_back(ch.timeShifted(delta));
    return out;
}

BoundarySpec dyadicDefaultBc() {
    BoundarySpec bc;
    bc.channels = {BoundaryChannel::builtin(BuiltinCurve::TwoMinusCos)};
    return bc;
}

BoundarySpec gledzerDefaultBc() {
    BoundarySpec bc;
    bc.channels = {BoundaryChannel::builtin(BuiltinCurve::One),
                   BoundaryChannel::builtin(BuiltinCurve::TwoPlusSin)};
    return bc;
}

BoundarySpec sabraDefaultBc() {
    BoundarySpec bc;
    bc.channels = {BoundaryChannel::builtin(BuiltinCurve::Half),
                   BoundaryChannel::builtin(BuiltinCurve::ExpNegIt)};
    return bc;
}

BoundarySpec zeroBc(int arity) {
    BoundarySpec bc;
    for (int i = 0; i < arity; ++i) bc.channels.push_back(BoundaryChannel::builtin(BuiltinCurve::Zero));
    return bc;
}

BoundarySpec constBc(const std::vector<Complex>& values) {
    BoundarySpec bc;
    for (Complex v : values) bc.channels.push_back(BoundaryChannel::constantValue(v));
    return bc;
}

BoundarySpec builtinBc(const std::string& name, int arity) {
    if (name == "dyadic-default") {
        if (arity != 1) throw ConfigError("dyadic-default boundary requires arity 1");
        return dyadicDefaultBc();
    }
    if (name == "gledzer-default") {
        if (arity != 2) throw ConfigError("gledzer-default boundary requires arity 2");
        return gledzerDefaultBc();
    }
    if (name == "sabra-default") {
        if (arity != 2) throw ConfigError("sabra-default boundary requires arity 2");
        return sabraDefaultBc();
    }
    if (name == "zero") return zeroBc(arity);
    throw ConfigError("unknown boundary '" + name + "'");
}

} // namespace shellrg
