#include "shellrg/rhs.hpp"

#include <cmath>

namespace shellrg {

PackedRhs::PackedRhs(ModelSpec model, RegularizationSpec reg, BoundarySpec bc, int shells)
    : model_(model), reg_(std::move(reg)), bc_(std::move(bc)) {
    shells_ = impliedShells(reg_, shells);
    if (bc_.arity() != model_.boundaryArity())
        throw ContractViolation("PackedRhs: boundary arity " + std::to_string(bc_.arity()) +
                                " does not match model arity " +
                                std::to_string(model_.boundaryArity()));
    packedSize_ = ShellState::packedSize(model_.kind(), shells_);

    const int reach = model_.stencilReach();
    band_ = model_.kind() == ScalarKind::Real ? reach : 2 * reach + 1;

    kn_.resize(static_cast<size_t>(shells_));
    for (int n = 1; n <= shells_; ++n) kn_[static_cast<size_t>(n - 1)] = wavenumber(n);

    if (const auto* cc = std::get_if<CanonicalCutoff>(&reg_)) {
        dissCoeff_.assign(static_cast<size_t>(shells_), 0.0);
        for (int n = cc->N + 1; n <= cc->N + cc->J; ++n)
            dissCoeff_[static_cast<size_t>(n - 1)] = (1.0 + cc->eps) * cc->coeff(n - cc->N - 1);
    } else if (const auto* aux = std::get_if<Auxiliary>(&reg_)) {
        if (aux->N >= 1) {
            if (model_.kind() == ScalarKind::Real) {
                denseCols_ = {aux->N - 1};
            } else {
                denseCols_ = {2 * aux->N - 2, 2 * aux->N - 1};
            }
        }
    }
}

void PackedRhs::eval(double t, const double* y, double* dydt) const {
    if (model_.kind() == ScalarKind::Real)
        evalReal(t, y, dydt);
    else
        evalSabra(t, y, dydt);
}

void PackedRhs::evalReal(double t, const double* y, double* dydt) const {
    const int M = shells_;
    const int arity = model_.boundaryArity();
    // Boundary shells, indexed so that bval[a-1] is u_0, bval[a-2] is u_{-1}.
    double bval[2] = {0.0, 0.0};
    for (int i = 0; i < arity; ++i) bval[i] = bc_.channels[static_cast<size_t>(i)].eval(t).real();

    auto U = [&](int n) -> double {
        if (n >= 1) return n <= M ? y[n - 1] : 0.0;
        return n > -arity ? bval[n + arity - 1] : 0.0;
    };

    if (model_.coupling == Coupling::Dyadic) {
        for (int n = 1; n <= M; ++n) {
            const double fn = U(n - 1) * U(n - 1) - kLambda * y[n - 1] * U(n + 1);
            dydt[n - 1] = kn_[static_cast<size_t>(n - 1)] * fn;
        }
    } else {
        for (int n = 1; n <= M; ++n) {
            const double um2 = U(n - 2), um1 = U(n - 1), u0 = y[n - 1];
            const double up1 = U(n + 1), up2 = U(n + 2);
            const double fn = 0.225 * um1 * um2 + 0.55 * up1 * um1 - 2.0 * up2 * up1 +
                              2.0 * up1 * up1 - u0 * um1;
            dydt[n - 1] = kn_[static_cast<size_t>(n - 1)] * fn;
        }
    }

    if (!dissCoeff_.empty()) {
        for (int n = 1; n <= M; ++n) {
            const double c = dissCoeff_[static_cast<size_t>(n - 1)];
            if (c != 0.0) {
                const double u = y[n - 1];
                dydt[n - 1] -= kn_[static_cast<size_t>(n - 1)] * c * std::abs(u) * u;
            }
        }
    } else if (const auto* aux = std::get_if<Auxiliary>(&reg_)) {
        const double uN = aux->N >= 1 ? std::abs(y[aux->N - 1]) : std::abs(U(aux->N));
        const double rate = aux->beta * uN / wavenumber(aux->N);
        for (int n = 1; n <= M; ++n) {
            const double k = kn_[static_cast<size_t>(n - 1)];
            dydt[n - 1] -= rate * k * k * y[n - 1];
        }
    } else {
        const double nu = std::get<Viscous>(reg_).nu;
        for (int n = 1; n <= M; ++n) {
            const double k = kn_[static_cast<size_t>(n - 1)];
            dydt[n - 1] -= nu * k * k * y[n - 1];
        }
    }
}

void PackedRhs::evalSabra(double t, const double* y, double* dydt) const {
    const int M = shells_;
    const int arity = model_.boundaryArity();
    Complex bval[2] = {Complex(0, 0), Complex(0, 0)};
    for (int i = 0; i < arity; ++i) bval[i] = bc_.channels[static_cast<size_t>(i)].eval(t);

    auto U = [&](int n) -> Complex {
        if (n >= 1) return n <= M ? Complex(y[2 * n - 2], y[2 * n - 1]) : Complex(0.0, 0.0);
        return n > -arity ? bval[n + arity - 1] : Complex(0.0, 0.0);
    };

    for (int n = 1; n <= M; ++n) {
        const Complex um2 = U(n - 2), um1 = U(n - 1);
        const Complex up1 = U(n + 1), up2 = U(n + 2);
        const Complex s =
            0.25 * um1 * um2 - 0.5 * up1 * std::conj(um1) + 2.0 * up2 * std::conj(up1);
        Complex f(-s.imag(), s.real()); // i * s
        Complex du = kn_[static_cast<size_t>(n - 1)] * f;

        if (!dissCoeff_.empty()) {
            const double c = dissCoeff_[static_cast<size_t>(n - 1)];
            if (c != 0.0) {
                const Complex u(y[2 * n - 2], y[2 * n - 1]);
                du -= kn_[static_cast<size_t>(n - 1)] * c * std::abs(u) * u;
            }
        } else if (const auto* aux = std::get_if<Auxiliary>(&reg_)) {
            const double uN =
                aux->N >= 1 ? std::abs(Complex(y[2 * aux->N - 2], y[2 * aux->N - 1]))
                            : std::abs(U(aux->N));
            const double k = kn_[static_cast<size_t>(n - 1)];
            du -= aux->beta * uN / wavenumber(aux->N) * k * k * Complex(y[2 * n - 2], y[2 * n - 1]);
        } else if (const auto* v = std::get_if<Viscous>(&reg_)) {
            const double k = kn_[static_cast<size_t>(n - 1)];
            du -= v->nu * k * k * Complex(y[2 * n - 2], y[2 * n - 1]);
        }

        dydt[2 * n - 2] = du.real();
        dydt[2 * n - 1] = du.imag();
    }
}

std::vector<Complex> rhs(const ModelSpec& model, const RegularizationSpec& reg,
                         const BoundarySpec& bc, double t, const ShellState& state) {
    if (state.kind != model.kind())
        throw ContractViolation("rhs: state kind does not match model kind");
    if (!state.finite()) throw EvaluationError("rhs: non-finite state");
    PackedRhs sys(model, reg, bc, state.shells());
    const std::vector<double> y = state.packed();
    std::vector<double> dy(y.size());
    sys.eval(t, y.data(), dy.data());
    return ShellState::unpacked(model.kind(), dy).values;
}

} // namespace shellrg
