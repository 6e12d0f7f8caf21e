#pragma once

#include <vector>

#include "shellrg/boundary.hpp"
#include "shellrg/model.hpp"
#include "shellrg/regularization.hpp"

namespace shellrg {

/// Right-hand side of a regularized IBVP assembled over the packed real state
/// layout. Shells n <= 0 read the boundary, shells n > M read zero. Pure and
/// immutable after construction; safe to share between threads.
class PackedRhs {
public:
    PackedRhs(ModelSpec model, RegularizationSpec reg, BoundarySpec bc, int shells);

    void eval(double t, const double* y, double* dydt) const;

    int shells() const { return shells_; }
    int packedSize() const { return packedSize_; }
    ScalarKind kind() const { return model_.kind(); }
    const ModelSpec& model() const { return model_; }
    const RegularizationSpec& reg() const { return reg_; }
    const BoundarySpec& bc() const { return bc_; }

    /// Jacobian band structure in packed coordinates.
    int lowerBandwidth() const { return band_; }
    int upperBandwidth() const { return band_; }
    /// Packed columns with dense (out-of-band) coupling; nonempty only for the
    /// auxiliary model, whose |u_N| factor reaches every shell.
    const std::vector<int>& denseColumns() const { return denseCols_; }

private:
    ModelSpec model_;
    RegularizationSpec reg_;
    BoundarySpec bc_;
    int shells_ = 0;
    int packedSize_ = 0;
    int band_ = 0;
    std::vector<int> denseCols_;
    std::vector<double> kn_;        // k_n, n = 1..M
    std::vector<double> dissCoeff_; // canonical: (1+eps) c_n per shell (0 on ideal shells)

    void evalReal(double t, const double* y, double* dydt) const;
    void evalSabra(double t, const double* y, double* dydt) const;
};

/// Public one-shot RHS evaluation on a ShellState; returns du/dt per shell.
std::vector<Complex> rhs(const ModelSpec& model, const RegularizationSpec& reg,
                         const BoundarySpec& bc, double t, const ShellState& state);

} // namespace shellrg
