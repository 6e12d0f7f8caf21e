#include "shellrg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace shellrg {

double stationaryDyadicLimit(int n) {
    if (n < 1) throw ContractViolation("stationaryDyadicLimit: n must be >= 1");
    return std::exp2(-n / 3.0);
}

double stationaryDyadicExact(int N, int n) {
    if (N < 0 || n < 1) throw ContractViolation("stationaryDyadicExact: need N >= 0, n >= 1");
    if (n > N + 1) return 0.0;
    const double rhoN = std::pow(-0.5, N);
    const double alt = std::pow(-2.0, n); // (-1)^n 2^n
    const double exponent = -n / 3.0 - rhoN * (alt - 1.0) / 9.0;
    return std::exp2(exponent);
}

double stationaryEigvec(int N, int n) {
    if (N < 0 || n < 1) throw ContractViolation("stationaryEigvec: need N >= 0, n >= 1");
    if (n > N + 1) return 0.0;
    const double alt = std::pow(-2.0, n);
    return -(alt - 1.0) / 9.0 * std::exp2(-n / 3.0) * std::numbers::ln2;
}

BlowupEstimate detectBlowup(const Trajectory& traj, int shell, double theta, double scanDt) {
    if (shell < 1 || shell > traj.shells())
        throw ContractViolation("detectBlowup: shell out of range");
    if (!(theta > 0.0 && theta < 1.0)) throw ContractViolation("detectBlowup: theta in (0,1)");

    const double t0 = traj.t0(), t1 = traj.tEnd();
    const size_t count = static_cast<size_t>(std::ceil((t1 - t0) / scanDt)) + 1;
    std::vector<double> ts(count), mag(count);
    for (size_t i = 0; i < count; ++i) {
        ts[i] = std::min(t0 + static_cast<double>(i) * scanDt, t1);
        mag[i] = std::abs(traj.sampleShell(ts[i], shell));
    }
    const double peak = *std::max_element(mag.begin(), mag.end());
    BlowupEstimate est;
    est.shell = shell;
    // Significance floor: deep-shell activity must register against the
    // large-scale amplitude, otherwise the shell never woke up in this horizon.
    double largeScale = 0.0;
    for (size_t i = 0; i < count; ++i)
        largeScale = std::max(largeScale, std::abs(traj.sampleShell(ts[i], 1)));
    if (peak <= 1e-9 * largeScale) return est;
    est.threshold = theta * peak;

    size_t cross = count;
    double preMin = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < count; ++i) {
        if (mag[i] >= est.threshold) {
            cross = i;
            break;
        }
        preMin = std::min(preMin, mag[i]);
    }
    if (cross == count) return est;
    // A blowup is an upcrossing from a quiet state, not activity present from
    // the start (e.g. a decaying run sits at its maximum at t0).
    if (cross == 0 || preMin > 0.1 * est.threshold) return est;
    est.detected = true;
    est.lo = ts[cross - 1];
    est.hi = ts[cross];
    double lo = est.lo, hi = est.hi;
    for (int it = 0; it < 60 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (std::abs(traj.sampleShell(mid, shell)) >= est.threshold)
            hi = mid;
        else
            lo = mid;
    }
    est.tb = 0.5 * (lo + hi);

    // Cross-check: time of the steepest rise of |u_shell|.
    double bestSlope = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < count; ++i) {
        const Complex u = traj.sampleShell(ts[i], shell);
        const double m = std::abs(u);
        if (m == 0.0) continue;
        const Complex du = traj.sampleShellDerivative(ts[i], shell);
        const double slope = std::real(std::conj(u) * du) / m;
        if (slope > bestSlope) {
            bestSlope = slope;
            est.peakDerivTime = ts[i];
        }
    }
    return est;
}

namespace {

struct LinFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0, residualNorm = 0.0;
};

LinFit leastSquares(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double nn = static_cast<double>(n);
    const double det = nn * sxx - sx * sx;
    LinFit f;
    f.slope = (nn * sxy - sx * sy) / det;
    f.intercept = (sy * sxx - sx * sxy) / det;
    const double ymean = sy / nn;
    double ssRes = 0, ssTot = 0;
    for (size_t i = 0; i < n; ++i) {
        const double e = y[i] - (f.slope * x[i] + f.intercept);
        ssRes += e * e;
        ssTot += (y[i] - ymean) * (y[i] - ymean);
    }
    f.residualNorm = std::sqrt(ssRes);
    f.r2 = ssTot > 0.0 ? std::max(0.0, 1.0 - ssRes / ssTot) : 1.0;
    return f;
}

} // namespace

FitResult fitGeometric(const std::vector<int>& levels, const std::vector<double>& values) {
    if (levels.size() != values.size() || levels.size() < 3)
        throw ContractViolation("fitGeometric: need >= 3 (level, value) pairs");
    for (double v : values)
        if (v == 0.0 || !std::isfinite(v))
            throw ContractViolation("fitGeometric: values must be nonzero and finite");

    std::vector<double> x, y;
    for (size_t i = 0; i < levels.size(); ++i) {
        x.push_back(static_cast<double>(levels[i]));
        y.push_back(std::log(std::abs(values[i])));
    }
    const LinFit lf = leastSquares(x, y);

    bool allPos = true, allAlt = true;
    for (size_t i = 0; i + 1 < values.size(); ++i) {
        const double prod = values[i] * values[i + 1];
        if (prod < 0.0)
            allPos = false;
        else
            allAlt = false;
    }
    FitResult fit;
    fit.count = static_cast<int>(values.size());
    const double sign = allPos ? 1.0 : (allAlt ? -1.0 : 1.0);
    fit.lowConfidence = !allPos && !allAlt;
    fit.param0 = sign * std::exp(lf.slope);
    // Signed prefactor so that value_N ~ prefactor * ratio^N.
    const double mag = std::exp(lf.intercept);
    const double refSign = values[0] / std::pow(sign, levels[0]) >= 0.0 ? 1.0 : -1.0;
    fit.param1 = refSign * mag;
    fit.residualNorm = lf.residualNorm;
    fit.r2 = lf.r2;
    return fit;
}

FitResult fitDoubleExponential(const std::vector<int>& levels, const std::vector<double>& norms,
                               double eps) {
    if (levels.size() != norms.size())
        throw ContractViolation("fitDoubleExponential: size mismatch");
    if (!(eps > 0.0)) throw ContractViolation("fitDoubleExponential: eps must be > 0");
    std::vector<double> x, y;
    int discarded = 0;
    for (size_t i = 0; i < norms.size(); ++i) {
        const double q = norms[i] / (3.0 * eps);
        if (!(q > 1.0)) { // log log undefined at or below 3 eps
            ++discarded;
            continue;
        }
        x.push_back(static_cast<double>(levels[i]));
        y.push_back(std::log(std::log(q)));
    }
    if (x.size() < 3)
        throw EvaluationError("fitDoubleExponential: fewer than 3 usable points (" +
                              std::to_string(x.size()) + " kept, " + std::to_string(discarded) +
                              " discarded)");
    const LinFit lf = leastSquares(x, y);
    FitResult fit;
    fit.param0 = lf.slope;
    fit.param1 = lf.intercept;
    fit.residualNorm = lf.residualNorm;
    fit.r2 = lf.r2;
    fit.count = static_cast<int>(x.size());
    fit.discarded = discarded;
    return fit;
}

} // namespace shellrg
