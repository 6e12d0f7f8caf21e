#include "shellrg/energy.hpp"

#include <cmath>

#include "shellrg/trajectory.hpp"

namespace shellrg {

double boundaryEnergyFlux(const ModelSpec& model, Complex bm1, Complex b0, Complex u1,
                          Complex u2) {
    switch (model.coupling) {
        case Coupling::Dyadic: {
            const double b = b0.real();
            return 2.0 * u1.real() * b * b;
        }
        case Coupling::Gledzer: {
            const double b = b0.real(), bm = bm1.real(), v1 = u1.real(), v2 = u2.real();
            return 0.45 * bm * b * v1 + 2.0 * b * v1 * v2 - 2.0 * b * v1 * v1;
        }
        case Coupling::Sabra: {
            return -0.5 * std::imag(std::conj(u1) * b0 * bm1) -
                   2.0 * std::imag(std::conj(u2) * u1 * b0);
        }
    }
    throw ContractViolation("boundaryEnergyFlux: bad model");
}

double dissipationRate(const RegularizationSpec& reg, const ShellState& state) {
    const int M = state.shells();
    if (const auto* cc = std::get_if<CanonicalCutoff>(&reg)) {
        double s = 0.0;
        for (int n = cc->N + 1; n <= std::min(cc->N + cc->J, M); ++n) {
            const double a = std::abs(state.at(n));
            s += (1.0 + cc->eps) * cc->coeff(n - cc->N - 1) * wavenumber(n) * a * a * a;
        }
        return s;
    }
    if (const auto* aux = std::get_if<Auxiliary>(&reg)) {
        const double uN = aux->N >= 1 && aux->N <= M ? std::abs(state.at(aux->N)) : 0.0;
        double s = 0.0;
        for (int n = 1; n <= M; ++n) {
            const double k = wavenumber(n);
            s += k * k * std::norm(state.at(n));
        }
        return aux->beta * uN / wavenumber(aux->N) * s;
    }
    const double nu = std::get<Viscous>(reg).nu;
    double s = 0.0;
    for (int n = 1; n <= M; ++n) {
        const double k = wavenumber(n);
        s += k * k * std::norm(state.at(n));
    }
    return nu * s;
}

EnergyBalance energyBalanceResidual(const Trajectory& traj, const std::vector<double>& times) {
    EnergyBalance out;
    out.times = times;
    out.residual.reserve(times.size());
    const ModelSpec& model = traj.model();
    const BoundarySpec& bc = traj.bc();
    for (double t : times) {
        const ShellState u = traj.sample(t);
        const std::vector<Complex> du = traj.sampleDerivative(t);
        double dEdt = 0.0;
        for (int n = 0; n < u.shells(); ++n)
            dEdt += 2.0 * std::real(std::conj(u.values[static_cast<size_t>(n)]) *
                                    du[static_cast<size_t>(n)]);
        const Complex b0 = bc.shellValue(0, t);
        const Complex bm1 = bc.arity() >= 2 ? bc.shellValue(-1, t) : Complex(0.0, 0.0);
        const Complex u2 = u.shells() >= 2 ? u.at(2) : Complex(0.0, 0.0);
        const double flux = boundaryEnergyFlux(model, bm1, b0, u.at(1), u2);
        const double diss = dissipationRate(traj.reg(), u);
        out.residual.push_back(dEdt - 2.0 * flux + 2.0 * diss);
    }
    return out;
}

double energyBoundExcess(const Trajectory& traj, const std::vector<double>& times) {
    const BoundarySpec& bc = traj.bc();
    const double norm0 = std::sqrt(energy(traj.sample(traj.t0())));
    auto work = [&](double t) {
        const Complex b0 = bc.shellValue(0, t);
        return std::norm(b0);
    };
    double excess = -std::numeric_limits<double>::infinity();
    for (double t : times) {
        const double normT = std::sqrt(energy(traj.sample(t)));
        const double integral = t > traj.t0() ? adaptiveSimpson(work, traj.t0(), t, 1e-11) : 0.0;
        excess = std::max(excess, normT - norm0 - wavenumber(1) * integral);
    }
    return excess;
}

namespace {
double simpsonRec(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                  double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpsonRec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpsonRec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
} // namespace

double adaptiveSimpson(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpsonRec(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

} // namespace shellrg
