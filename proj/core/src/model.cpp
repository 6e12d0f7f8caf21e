#include "shellrg/model.hpp"

namespace shellrg {

std::string ModelSpec::name() const {
    switch (coupling) {
        case Coupling::Dyadic: return "dyadic";
        case Coupling::Gledzer: return "gledzer";
        case Coupling::Sabra: return "sabra";
    }
    return "?";
}

ModelSpec dyadicModel() { return ModelSpec{Coupling::Dyadic}; }
ModelSpec gledzerModel() { return ModelSpec{Coupling::Gledzer}; }
ModelSpec sabraModel() { return ModelSpec{Coupling::Sabra}; }

ModelSpec modelFromName(const std::string& name) {
    if (name == "dyadic") return dyadicModel();
    if (name == "gledzer") return gledzerModel();
    if (name == "sabra") return sabraModel();
    throw ConfigError("unknown model '" + name + "' (expected dyadic|gledzer|sabra)");
}

Complex coupling(const ModelSpec& model, std::span<const Complex> window) {
    if (static_cast<int>(window.size()) != model.stencilWidth())
        throw ContractViolation("coupling: window length " + std::to_string(window.size()) +
                                " does not match stencil width " +
                                std::to_string(model.stencilWidth()));
    if (model.kind() == ScalarKind::Real) {
        for (const Complex& u : window)
            if (u.imag() != 0.0)
                throw ContractViolation("coupling: complex input to a real model");
    }

    switch (model.coupling) {
        case Coupling::Dyadic: {
            // f_n = u_{n-1}^2 - lambda u_n u_{n+1}
            const double um1 = window[0].real(), u0 = window[1].real(), up1 = window[2].real();
            return Complex(um1 * um1 - kLambda * u0 * up1, 0.0);
        }
        case Coupling::Gledzer: {
            // f_n = 9/40 u_{n-1} u_{n-2} + 11/20 u_{n+1} u_{n-1}
            //       - 2 u_{n+2} u_{n+1} + 2 u_{n+1}^2 - u_n u_{n-1}
            const double um2 = window[0].real(), um1 = window[1].real(), u0 = window[2].real();
            const double up1 = window[3].real(), up2 = window[4].real();
            return Complex(0.225 * um1 * um2 + 0.55 * up1 * um1 - 2.0 * up2 * up1 +
                               2.0 * up1 * up1 - u0 * um1,
                           0.0);
        }
        case Coupling::Sabra: {
            // f_n = i ( u_{n-1} u_{n-2} / 4 - u_{n+1} conj(u_{n-1}) / 2
            //           + 2 u_{n+2} conj(u_{n+1}) )
            const Complex um2 = window[0], um1 = window[1], up1 = window[3], up2 = window[4];
            const Complex s =
                0.25 * um1 * um2 - 0.5 * up1 * std::conj(um1) + 2.0 * up2 * std::conj(up1);
            return Complex(0.0, 1.0) * s;
        }
    }
    throw ContractViolation("coupling: bad model");
}

} // namespace shellrg
