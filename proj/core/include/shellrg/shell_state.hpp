#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "shellrg/errors.hpp"

namespace shellrg {

using Complex = std::complex<double>;

enum class ScalarKind { Real, Cplx };

/// Wavenumber k_n = 2^n (inter-shell ratio is fixed to 2). Exact for any
/// integer n representable in double, including the boundary shells n <= 0.
inline double wavenumber(int n) { return std::ldexp(1.0, n); }

inline constexpr double kLambda = 2.0;

/// Finite sequence of shell amplitudes u_1..u_M. Real-kind states keep a zero
/// imaginary part in every entry; that invariant is checked on construction.
struct ShellState {
    ScalarKind kind = ScalarKind::Real;
    std::vector<Complex> values;

    ShellState() = default;
    ShellState(ScalarKind k, std::vector<Complex> v);

    int shells() const { return static_cast<int>(values.size()); }

    /// 1-based shell access, mirroring the usual index convention.
    Complex at(int n) const { return values.at(static_cast<size_t>(n - 1)); }

    bool finite() const;

    /// Packed real layout used by the integrator: real models store one double
    /// per shell, complex models interleave (re, im) pairs.
    std::vector<double> packed() const;
    static ShellState unpacked(ScalarKind kind, const std::vector<double>& packed);

    static int packedSize(ScalarKind kind, int shells) {
        return kind == ScalarKind::Real ? shells : 2 * shells;
    }
};

/// Energy E = sum |u_n|^2.
double energy(const ShellState& state);
double energyPacked(const std::vector<double>& packed);

/// Energy norm ||u|| = sqrt(E).
inline double energyNorm(const ShellState& state) { return std::sqrt(energy(state)); }

} // namespace shellrg
