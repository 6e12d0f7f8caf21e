#include "shellrg/shell_state.hpp"

namespace shellrg {

ShellState::ShellState(ScalarKind k, std::vector<Complex> v) : kind(k), values(std::move(v)) {
    if (values.empty())
        throw ContractViolation("ShellState: shell count must be >= 1");
    if (kind == ScalarKind::Real) {
        for (const Complex& u : values)
            if (u.imag() != 0.0)
                throw ContractViolation("ShellState: real-kind state with nonzero imaginary part");
    }
}

bool ShellState::finite() const {
    for (const Complex& u : values)
        if (!std::isfinite(u.real()) || !std::isfinite(u.imag()))
            return false;
    return true;
}

std::vector<double> ShellState::packed() const {
    std::vector<double> out;
    if (kind == ScalarKind::Real) {
        out.reserve(values.size());
        for (const Complex& u : values) out.push_back(u.real());
    } else {
        out.reserve(2 * values.size());
        for (const Complex& u : values) {
            out.push_back(u.real());
            out.push_back(u.imag());
        }
    }
    return out;
}

ShellState ShellState::unpacked(ScalarKind kind, const std::vector<double>& packed) {
    std::vector<Complex> v;
    if (kind == ScalarKind::Real) {
        v.reserve(packed.size());
        for (double x : packed) v.emplace_back(x, 0.0);
    } else {
        if (packed.size() % 2 != 0)
            throw ContractViolation("ShellState::unpacked: odd packed size for complex state");
        v.reserve(packed.size() / 2);
        for (size_t i = 0; i + 1 < packed.size(); i += 2) v.emplace_back(packed[i], packed[i + 1]);
    }
    return ShellState(kind, std::move(v));
}

double energy(const ShellState& state) {
    double e = 0.0;
    for (const Complex& u : state.values) e += std::norm(u);
    return e;
}

double energyPacked(const std::vector<double>& packed) {
    double e = 0.0;
    for (double x : packed) e += x * x;
    return e;
}

} // namespace shellrg
