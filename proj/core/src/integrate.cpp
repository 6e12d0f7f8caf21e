#include <algorithm>
#include <cmath>
#include <limits>

#include "shellrg/banded.hpp"
#include "shellrg/trajectory.hpp"

namespace shellrg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool allFinite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

double maxAbs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

/// rms of err_i / (atol + rtol*max(|y0_i|, |y1_i|)).
double errorNorm(const std::vector<double>& err, const std::vector<double>& y0,
                 const std::vector<double>& y1, double atol, double rtol) {
    double s = 0.0;
    const size_t n = err.size();
    for (size_t i = 0; i < n; ++i) {
        const double sk = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double q = err[i] / sk;
        s += q * q;
    }
    return std::sqrt(s / static_cast<double>(n));
}

/// Standard starting-step heuristic: match 0.01 of the tolerance against the
/// first and second derivative scales probed with one explicit Euler step.
double initialStepGuess(const PackedRhs& sys, double t0, double span,
                        const std::vector<double>& y, const std::vector<double>& f0,
                        double direction, int methodOrder, const SolverConfig& cfg,
                        IntegrationStats& stats) {
    const size_t n = y.size();
    double d0 = 0.0, d1 = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double sk = cfg.atol + cfg.rtol * std::abs(y[i]);
        d0 += (y[i] / sk) * (y[i] / sk);
        d1 += (f0[i] / sk) * (f0[i] / sk);
    }
    d0 = std::sqrt(d0 / static_cast<double>(n));
    d1 = std::sqrt(d1 / static_cast<double>(n));
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    // the Euler probe must stay inside the horizon (tabulated boundaries do
    // not extend past it)
    h0 = std::min(h0, 0.5 * span);
    h0 *= direction;

    std::vector<double> y1(n), f1(n);
    for (size_t i = 0; i < n; ++i) y1[i] = y[i] + h0 * f0[i];
    sys.eval(t0 + h0, y1.data(), f1.data());
    ++stats.rhsEvals;
    double d2 = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double sk = cfg.atol + cfg.rtol * std::abs(y[i]);
        const double q = (f1[i] - f0[i]) / sk;
        d2 += q * q;
    }
    d2 = std::sqrt(d2 / static_cast<double>(n)) / std::abs(h0);
    const double dmax = std::max(d1, d2);
    double h1;
    if (dmax <= 1e-15) {
        h1 = std::max(1e-6, std::abs(h0) * 1e-3);
    } else {
        h1 = std::pow(0.01 / dmax, 1.0 / (methodOrder + 1));
    }
    return std::min(100.0 * std::abs(h0), h1);
}

struct AttemptResult {
    bool ok = false;    // finite stages, solvable linear systems
    double err = 0.0;   // scaled error norm
    double hNext = 0.0; // suggested next step
};

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4) with 4th-order dense output (FSAL).
// ---------------------------------------------------------------------------

class Dopri5Stepper {
public:
    static constexpr int kOrder = 5;

    Dopri5Stepper(const PackedRhs& sys, const SolverConfig& cfg) : sys_(sys), cfg_(cfg) {
        const size_t n = static_cast<size_t>(sys.packedSize());
        for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &ytmp_, &err_}) v->resize(n);
    }

    void prepare(double t, const std::vector<double>& y, IntegrationStats& stats) {
        if (!k1Valid_) {
            sys_.eval(t, y.data(), k1_.data());
            ++stats.rhsEvals;
            k1Valid_ = true;
        }
    }

    const std::vector<double>& f0() const { return k1_; }

    AttemptResult attempt(double t, const std::vector<double>& y, double h,
                          std::vector<double>& y1, IntegrationStats& stats) {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                                a75 = -2187.0 / 6784, a76 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        const size_t n = y.size();
        AttemptResult r;

        auto evalAt = [&](std::vector<double>& k, double c) {
            sys_.eval(t + c * h, ytmp_.data(), k.data());
            ++stats.rhsEvals;
        };

        for (size_t i = 0; i < n; ++i) ytmp_[i] = y[i] + h * (a21 * k1_[i]);
        evalAt(k2_, c2);
        for (size_t i = 0; i < n; ++i) ytmp_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
        evalAt(k3_, c3);
        for (size_t i = 0; i < n; ++i)
            ytmp_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
        evalAt(k4_, c4);
        for (size_t i = 0; i < n; ++i)
            ytmp_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
        evalAt(k5_, c5);
        for (size_t i = 0; i < n; ++i)
            ytmp_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] +
                                   a65 * k5_[i]);
        evalAt(k6_, 1.0);
        // y1 and k7 = f(t+h, y1); a7* is also the 5th-order weight row.
        y1.resize(n);
        for (size_t i = 0; i < n; ++i)
            y1[i] = y[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] +
                                a76 * k6_[i]);
        sys_.eval(t + h, y1.data(), k7_.data());
        ++stats.rhsEvals;

        if (!allFinite(y1) || !allFinite(k7_)) return r; // ok = false

        for (size_t i = 0; i < n; ++i)
            err_[i] = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] +
                           e7 * k7_[i]);
        r.err = errorNorm(err_, y, y1, cfg_.atol, cfg_.rtol);
        if (!std::isfinite(r.err)) return r;
        r.ok = true;

        // PI controller as in classic embedded RK practice.
        constexpr double beta = 0.04, safe = 0.9, expo1 = 0.2 - beta * 0.75;
        const double fac11 = std::pow(std::max(r.err, 1e-32), expo1);
        double fac = fac11 / std::pow(facold_, beta);
        fac = std::max(0.1, std::min(5.0, fac / safe));
        if (r.err <= 1.0) {
            r.hNext = h / fac;
            facoldPending_ = std::max(r.err, 1e-4);
        } else {
            r.hNext = h / std::min(5.0, fac11 / safe);
        }
        return r;
    }

    void denseCoefficients(double h, const std::vector<double>& y, const std::vector<double>& y1,
                           std::vector<double>& c3, std::vector<double>& c4,
                           std::vector<double>& c5) const {
        static constexpr double d1 = -12715105075.0 / 11282082432.0,
                                d3 = 87487479700.0 / 32700410799.0,
                                d4 = -10690763975.0 / 1880347072.0,
                                d5 = 701980252875.0 / 199316789632.0,
                                d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
        const size_t n = y.size();
        c3.resize(n);
        c4.resize(n);
        c5.resize(n);
        for (size_t i = 0; i < n; ++i) {
            const double ydiff = y1[i] - y[i];
            const double bspl = h * k1_[i] - ydiff;
            c3[i] = bspl;
            c4[i] = ydiff - h * k7_[i] - bspl;
            c5[i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] + d6 * k6_[i] +
                         d7 * k7_[i]);
        }
    }

    void accepted(double, const std::vector<double>&) {
        k1_.swap(k7_); // FSAL
        k1Valid_ = true;
        facold_ = facoldPending_;
    }

private:
    const PackedRhs& sys_;
    const SolverConfig& cfg_;
    std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, err_;
    bool k1Valid_ = false;
    double facold_ = 1e-4, facoldPending_ = 1e-4;
};

// ---------------------------------------------------------------------------
// 4(3) Rosenbrock (RODAS-type), L-stable, stiffly accurate, with a 3rd-order
// continuous extension. The Jacobian is assembled by grouped finite
// differences over the band; the auxiliary model's |u_N| column is carried as
// a rank-1/2 spike and handled by the Woodbury identity.
// ---------------------------------------------------------------------------

class RodasStepper {
public:
    static constexpr int kOrder = 4;

    RodasStepper(const PackedRhs& sys, const SolverConfig& cfg) : sys_(sys), cfg_(cfg) {
        const size_t n = static_cast<size_t>(sys.packedSize());
        for (auto* v : {&f0_, &dfdt_, &g1_, &g2_, &g3_, &g4_, &g5_, &xerr_, &ytmp_, &ftmp_, &rhs_})
            v->resize(n);
        const int band = sys.lowerBandwidth();
        jband_.assign(static_cast<size_t>((2 * band + 1)) * n, 0.0);
        for (int c : sys.denseColumns()) spikes_.emplace_back(c, std::vector<double>(n, 0.0));
    }

    void prepare(double t, const std::vector<double>& y, IntegrationStats& stats) {
        if (pointValid_) return;
        sys_.eval(t, y.data(), f0_.data());
        ++stats.rhsEvals;
        computeDfdt(t, y, stats);
        computeJacobian(t, y, stats);
        pointValid_ = true;
    }

    const std::vector<double>& f0() const { return f0_; }

    AttemptResult attempt(double t, const std::vector<double>& y, double h,
                          std::vector<double>& y1, IntegrationStats& stats) {
        // Coefficient set of the 6-stage, order 4(3), stiffly accurate scheme.
        // d4 < 0: the order-2 time condition sum(b_i (c_i + d_i)) = 1/2 pins it.
        constexpr double d1 = 0.25, d2 = -0.1043, d3 = 0.1035, d4 = -0.3620000000000023e-01;
        constexpr double c2 = 0.386, c3 = 0.21, c4 = 0.63;
        constexpr double a21 = 0.1544000000000000e+01;
        constexpr double a31 = 0.9466785280815826e+00, a32 = 0.2557011698983284e+00;
        constexpr double a41 = 0.3314825187068521e+01, a42 = 0.2896124015972201e+01,
                         a43 = 0.9986419139977817e+00;
        constexpr double a51 = 0.1221224509226641e+01, a52 = 0.6019134481288629e+01,
                         a53 = 0.1253708332932087e+02, a54 = -0.6878860361058950e+00;
        constexpr double c21 = -0.5668800000000000e+01;
        constexpr double c31 = -0.2430093356833875e+01, c32 = -0.2063599157091915e+00;
        constexpr double c41 = -0.1073529058151375e+00, c42 = -0.9594562251023355e+01,
                         c43 = -0.2047028614809616e+02;
        constexpr double c51 = 0.7496443313967647e+01, c52 = -0.1024680431464352e+02,
                         c53 = -0.3399990352819905e+02, c54 = 0.1170890893206160e+02;
        constexpr double c61 = 0.8083246795921522e+01, c62 = -0.7981132988064893e+01,
                         c63 = -0.3152159432874371e+02, c64 = 0.1631930543123136e+02,
                         c65 = -0.6058818238834054e+01;

        const size_t n = y.size();
        AttemptResult r;

        if (!factorE(h)) return r; // singular iteration matrix: retry smaller h

        auto solveStage = [&](std::vector<double>& g) { lu_.solve(g); };

        // stage 1
        for (size_t i = 0; i < n; ++i) rhs_[i] = f0_[i] + h * d1 * dfdt_[i];
        g1_ = rhs_;
        solveStage(g1_);
        // stage 2
        for (size_t i = 0; i < n; ++i) ytmp_[i] = y[i] + a21 * g1_[i];
        if (!evalStage(t + c2 * h, stats)) return r;
        for (size_t i = 0; i < n; ++i)
            g2_[i] = ftmp_[i] + h * d2 * dfdt_[i] + c21 * g1_[i] / h;
        solveStage(g2_);
        // stage 3
        for (size_t i = 0; i < n; ++i) ytmp_[i] = y[i] + a31 * g1_[i] + a32 * g2_[i];
        if (!evalStage(t + c3 * h, stats)) return r;
        for (size_t i = 0; i < n; ++i)
            g3_[i] = ftmp_[i] + h * d3 * dfdt_[i] + (c31 * g1_[i] + c32 * g2_[i]) / h;
        solveStage(g3_);
        // stage 4
        for (size_t i = 0; i < n; ++i)
            ytmp_[i] = y[i] + a41 * g1_[i] + a42 * g2_[i] + a43 * g3_[i];
        if (!evalStage(t + c4 * h, stats)) return r;
        for (size_t i = 0; i < n; ++i)
            g4_[i] = ftmp_[i] + h * d4 * dfdt_[i] +
                     (c41 * g1_[i] + c42 * g2_[i] + c43 * g3_[i]) / h;
        solveStage(g4_);
        // stage 5
        for (size_t i = 0; i < n; ++i)
            ytmp_[i] = y[i] + a51 * g1_[i] + a52 * g2_[i] + a53 * g3_[i] + a54 * g4_[i];
        if (!evalStage(t + h, stats)) return r;
        for (size_t i = 0; i < n; ++i)
            g5_[i] = ftmp_[i] + (c51 * g1_[i] + c52 * g2_[i] + c53 * g3_[i] + c54 * g4_[i]) / h;
        solveStage(g5_);
        // stage 6: embedded error, stiffly accurate solution
        for (size_t i = 0; i < n; ++i) ytmp_[i] += g5_[i];
        if (!evalStage(t + h, stats)) return r;
        for (size_t i = 0; i < n; ++i)
            xerr_[i] = ftmp_[i] + (c61 * g1_[i] + c62 * g2_[i] + c63 * g3_[i] + c64 * g4_[i] +
                                   c65 * g5_[i]) / h;
        solveStage(xerr_);
        y1.resize(n);
        for (size_t i = 0; i < n; ++i) y1[i] = ytmp_[i] + xerr_[i];

        if (!allFinite(y1)) return r;
        r.err = errorNorm(xerr_, y, y1, cfg_.atol, cfg_.rtol);
        if (!std::isfinite(r.err)) return r;
        r.ok = true;

        constexpr double safe = 0.9;
        double fac = std::max(1.0 / 6.0,
                              std::min(5.0, std::pow(std::max(r.err, 1e-32), 0.25) / safe));
        if (r.err <= 1.0) {
            // Gustafsson predictive controller, as usual for this family.
            if (hAcc_ > 0.0) {
                double facGus = (hAcc_ / h) *
                                std::pow(std::max(r.err * r.err / errAcc_, 1e-32), 0.25) / safe;
                facGus = std::max(1.0 / 6.0, std::min(5.0, facGus));
                fac = std::max(fac, facGus);
            }
            hAccPending_ = h;
            errAccPending_ = std::max(r.err, 1e-2);
        }
        r.hNext = h / fac;
        return r;
    }

    void denseCoefficients(double, const std::vector<double>& y, const std::vector<double>&,
                           std::vector<double>& c3o, std::vector<double>& c4o,
                           std::vector<double>& c5o) const {
        constexpr double d21 = 0.1012623508344586e+02, d22 = -0.7487995877610167e+01,
                         d23 = -0.3480091861555747e+02, d24 = -0.7992771707568823e+01,
                         d25 = 0.1025137723295662e+01;
        constexpr double d31 = -0.6762803392801253e+00, d32 = 0.6087714651680015e+01,
                         d33 = 0.1643084320892478e+02, d34 = 0.2476722511418386e+02,
                         d35 = -0.6594389125716872e+01;
        const size_t n = y.size();
        c3o.resize(n);
        c4o.resize(n);
        c5o.clear(); // cubic continuous extension
        for (size_t i = 0; i < n; ++i) {
            c3o[i] = d21 * g1_[i] + d22 * g2_[i] + d23 * g3_[i] + d24 * g4_[i] + d25 * g5_[i];
            c4o[i] = d31 * g1_[i] + d32 * g2_[i] + d33 * g3_[i] + d34 * g4_[i] + d35 * g5_[i];
        }
    }

    void accepted(double, const std::vector<double>&) {
        pointValid_ = false; // new Jacobian at the new point
        hAcc_ = hAccPending_;
        errAcc_ = errAccPending_;
    }

private:
    const PackedRhs& sys_;
    const SolverConfig& cfg_;
    std::vector<double> f0_, dfdt_, g1_, g2_, g3_, g4_, g5_, xerr_, ytmp_, ftmp_, rhs_;
    std::vector<double> jband_; // (2*band+1) x n, row offset band + (i - j)
    std::vector<std::pair<int, std::vector<double>>> spikes_;
    SpikedBandedLu lu_;
    bool pointValid_ = false;
    double hAcc_ = -1.0, errAcc_ = 1e-2;
    double hAccPending_ = -1.0, errAccPending_ = 1e-2;

    bool evalStage(double t, IntegrationStats& stats) {
        sys_.eval(t, ytmp_.data(), ftmp_.data());
        ++stats.rhsEvals;
        return allFinite(ftmp_);
    }

    double& jb(int i, int j) {
        const int band = sys_.lowerBandwidth();
        return jband_[static_cast<size_t>(j) * static_cast<size_t>(2 * band + 1) +
                      static_cast<size_t>(band + i - j)];
    }

    void computeDfdt(double t, const std::vector<double>& y, IntegrationStats& stats) {
        const double dt = std::sqrt(kEps * std::max(1e-5, std::abs(t)));
        sys_.eval(t + dt, y.data(), ftmp_.data());
        ++stats.rhsEvals;
        for (size_t i = 0; i < y.size(); ++i) dfdt_[i] = (ftmp_[i] - f0_[i]) / dt;
    }

    void computeJacobian(double t, const std::vector<double>& y, IntegrationStats& stats) {
        const int n = static_cast<int>(y.size());
        const int band = sys_.lowerBandwidth();
        const int stride = 2 * band + 1;
        std::fill(jband_.begin(), jband_.end(), 0.0);
        const std::vector<int>& dense = sys_.denseColumns();
        auto isSpike = [&](int j) {
            return std::find(dense.begin(), dense.end(), j) != dense.end();
        };

        std::vector<double>& yp = ytmp_;
        std::vector<double> delta(static_cast<size_t>(n));
        for (int g = 0; g < stride && g < n; ++g) {
            yp = y;
            bool any = false;
            for (int j = g; j < n; j += stride) {
                if (isSpike(j)) continue;
                delta[static_cast<size_t>(j)] =
                    std::sqrt(kEps * std::max(1e-5, std::abs(y[static_cast<size_t>(j)])));
                yp[static_cast<size_t>(j)] += delta[static_cast<size_t>(j)];
                any = true;
            }
            if (!any) continue;
            sys_.eval(t, yp.data(), ftmp_.data());
            ++stats.rhsEvals;
            for (int j = g; j < n; j += stride) {
                if (isSpike(j)) continue;
                const double inv = 1.0 / delta[static_cast<size_t>(j)];
                for (int i = std::max(0, j - band); i <= std::min(n - 1, j + band); ++i)
                    jb(i, j) = (ftmp_[static_cast<size_t>(i)] - f0_[static_cast<size_t>(i)]) * inv;
            }
        }
        for (auto& [col, w] : spikes_) {
            yp = y;
            const double dj = std::sqrt(kEps * std::max(1e-5, std::abs(y[static_cast<size_t>(col)])));
            yp[static_cast<size_t>(col)] += dj;
            sys_.eval(t, yp.data(), ftmp_.data());
            ++stats.rhsEvals;
            const double inv = 1.0 / dj;
            for (int i = 0; i < n; ++i) {
                const double v = (ftmp_[static_cast<size_t>(i)] - f0_[static_cast<size_t>(i)]) * inv;
                if (std::abs(i - col) <= band)
                    jb(i, col) = v;
                else
                    w[static_cast<size_t>(i)] = v;
            }
        }
        ++stats.jacobians;
    }

    bool factorE(double h) {
        constexpr double gamma = 0.25;
        const int n = static_cast<int>(f0_.size());
        const int band = sys_.lowerBandwidth();
        BandedMatrix e(n, band, band);
        const double diag = 1.0 / (gamma * h);
        for (int j = 0; j < n; ++j) {
            for (int i = std::max(0, j - band); i <= std::min(n - 1, j + band); ++i) {
                double v = -jband_[static_cast<size_t>(j) * static_cast<size_t>(2 * band + 1) +
                                   static_cast<size_t>(band + i - j)];
                if (i == j) v += diag;
                e.at(i, j) = v;
            }
        }
        // E = B - sum w_c e_c^T with w_c the out-of-band Jacobian column parts.
        std::vector<std::pair<int, std::vector<double>>> spikes = spikes_;
        return lu_.factor(std::move(e), std::move(spikes));
    }
};

// ---------------------------------------------------------------------------
// Shared driver
// ---------------------------------------------------------------------------

struct DriverOutcome {
    RunStatus status = RunStatus::Completed;
    double t = 0.0;
    std::vector<double> y;
    IntegrationStats stats;
};

template <class Stepper>
DriverOutcome runDriver(const PackedRhs& sys, const SolverConfig& cfg, double t0, double t1,
                        std::vector<double> y, Trajectory* dense) {
    DriverOutcome out;
    IntegrationStats& stats = out.stats;
    Stepper stepper(sys, cfg);

    double t = t0;
    stepper.prepare(t, y, stats);
    double h;
    if (cfg.initialStep > 0.0) {
        h = cfg.initialStep;
    } else {
        h = initialStepGuess(sys, t0, t1 - t0, y, stepper.f0(), 1.0, Stepper::kOrder, cfg,
                             stats);
    }
    const double span = t1 - t0;
    if (cfg.maxStep > 0.0) h = std::min(h, cfg.maxStep);
    h = std::min(h, span);

    std::vector<double> y1, c3, c4, c5;
    while (true) {
        const double remaining = t1 - t;
        if (remaining <= 0.0) break;
        if (stats.accepted + stats.rejected >= cfg.maxSteps) {
            out.status = RunStatus::AbortedBudget;
            break;
        }
        bool last = false;
        if (h >= remaining * (1.0 - 1e-13)) {
            h = remaining;
            last = true;
        }
        // Step floor scales with |t| so the dissipative initial layer at
        // t = 0 can be entered with arbitrarily small first steps.
        const double hMin = 16.0 * kEps * std::abs(t) + 1e-300;
        if (h < hMin) {
            out.status = RunStatus::AbortedNonFinite;
            break;
        }

        stepper.prepare(t, y, stats);
        AttemptResult r = stepper.attempt(t, y, h, y1, stats);
        if (!r.ok) {
            ++stats.rejected;
            h *= 0.25;
            continue;
        }
        if (r.err > 1.0) {
            ++stats.rejected;
            h = r.hNext;
            continue;
        }
        if (!allFinite(y1) || maxAbs(y1) > cfg.blowupGuard) {
            out.status = RunStatus::AbortedNonFinite;
            break;
        }
        ++stats.accepted;
        const double tNew = last ? t1 : t + h;
        if (dense) {
            stepper.denseCoefficients(tNew - t, y, y1, c3, c4, c5);
            dense->appendStep(tNew, y1, std::move(c3), std::move(c4), std::move(c5));
            c3.clear();
            c4.clear();
            c5.clear();
        }
        y = y1;
        t = tNew;
        stepper.accepted(t, y);
        h = r.hNext;
        if (cfg.maxStep > 0.0) h = std::min(h, cfg.maxStep);
    }

    out.t = t;
    out.y = std::move(y);
    return out;
}

DriverOutcome dispatch(const PackedRhs& sys, const SolverConfig& cfg, double t0, double t1,
                       std::vector<double> y, Trajectory* dense) {
    if (cfg.method == Method::ExplicitAdaptive)
        return runDriver<Dopri5Stepper>(sys, cfg, t0, t1, std::move(y), dense);
    return runDriver<RodasStepper>(sys, cfg, t0, t1, std::move(y), dense);
}

void checkSetup(const ModelSpec& model, const RegularizationSpec& reg, const ShellState& ic,
                double t0, double t1, const SolverConfig& cfg) {
    cfg.validate();
    if (ic.kind != model.kind())
        throw ContractViolation("integrate: initial state kind does not match model");
    if (!(t1 > t0)) throw ContractViolation("integrate: need t1 > t0");
    impliedShells(reg, ic.shells()); // throws on inconsistent truncation
    if (!ic.finite()) throw ContractViolation("integrate: non-finite initial state");
}

} // namespace

Trajectory integrate(const ModelSpec& model, const RegularizationSpec& reg,
                     const BoundarySpec& bc, const ShellState& ic, double t0, double t1,
                     const SolverConfig& cfg) {
    checkSetup(model, reg, ic, t0, t1, cfg);
    PackedRhs sys(model, reg, bc, ic.shells());
    Trajectory traj(model, reg, bc, cfg, sys.shells(), t0, ic.packed());
    DriverOutcome out = dispatch(sys, cfg, t0, t1, ic.packed(), &traj);
    traj.finish(out.status, out.stats);
    return traj;
}

EndpointResult integrateEndpoint(const ModelSpec& model, const RegularizationSpec& reg,
                                 const BoundarySpec& bc, const ShellState& ic, double t0,
                                 double t1, const SolverConfig& cfg) {
    checkSetup(model, reg, ic, t0, t1, cfg);
    PackedRhs sys(model, reg, bc, ic.shells());
    DriverOutcome out = dispatch(sys, cfg, t0, t1, ic.packed(), nullptr);
    EndpointResult r;
    r.status = out.status;
    r.t = out.t;
    r.packed = std::move(out.y);
    r.stats = out.stats;
    return r;
}

} // namespace shellrg
