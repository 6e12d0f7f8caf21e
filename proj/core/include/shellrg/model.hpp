#pragma once

#include <span>
#include <string>

#include "shellrg/shell_state.hpp"

namespace shellrg {

enum class Coupling { Dyadic, Gledzer, Sabra };

/// Which ideal shell model is being integrated. The inter-shell ratio is
/// fixed to lambda = 2; the boundary arity and stencil follow the coupling.
struct ModelSpec {
    Coupling coupling = Coupling::Dyadic;

    static constexpr double lambda = kLambda;

    /// Number of prescribed boundary shells: u_0 for the dyadic model,
    /// (u_-1, u_0) for Gledzer and Sabra.
    int boundaryArity() const { return coupling == Coupling::Dyadic ? 1 : 2; }

    /// Neighbours touched on each side of shell n.
    int stencilReach() const { return coupling == Coupling::Dyadic ? 1 : 2; }

    int stencilWidth() const { return 2 * stencilReach() + 1; }

    ScalarKind kind() const {
        return coupling == Coupling::Sabra ? ScalarKind::Cplx : ScalarKind::Real;
    }

    std::string name() const;
};

ModelSpec dyadicModel();
ModelSpec gledzerModel();
ModelSpec sabraModel();
ModelSpec modelFromName(const std::string& name);

/// Ideal coupling term f_n evaluated on a stencil window centred at shell n:
/// window = (u_{n-1}, u_n, u_{n+1}) for the dyadic model and
/// (u_{n-2}, ..., u_{n+2}) for Gledzer/Sabra. Pure; quadratic homogeneous.
Complex coupling(const ModelSpec& model, std::span<const Complex> window);

} // namespace shellrg
