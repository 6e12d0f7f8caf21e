#include "shellrg/rg.hpp"

#include <algorithm>
#include <cmath>

#include "shellrg/parallel.hpp"
#include "shellrg/rng.hpp"
#include "shellrg/symmetry.hpp"

namespace shellrg {

namespace {

double median(std::vector<double> v) {
    if (v.empty()) throw ContractViolation("median of empty set");
    const size_t m = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), v.end());
    double hi = v[m];
    if (v.size() % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m - 1), v.end());
    return 0.5 * (hi + v[m - 1]);
}

} // namespace

std::vector<DeviationSeries> deviations(const std::map<int, Trajectory>& runsByLevel,
                                        const Trajectory& ref, const std::vector<int>& shells,
                                        const std::vector<double>& sampleTimes,
                                        const std::string& label) {
    std::vector<DeviationSeries> out;
    for (const auto& [level, traj] : runsByLevel) {
        if (traj.model().coupling != ref.model().coupling || traj.kind() != ref.kind())
            throw ContractViolation("deviations: run/reference provenance mismatch");
        for (int shell : shells) {
            DeviationSeries s;
            s.label = label;
            s.level = level;
            s.shell = shell;
            s.times = sampleTimes;
            s.values.reserve(sampleTimes.size());
            for (double t : sampleTimes)
                s.values.push_back(traj.sampleShell(t, shell) - ref.sampleShell(t, shell));
            out.push_back(std::move(s));
        }
    }
    return out;
}

EigenvalueEstimate estimateEigenvalue(const std::vector<DeviationSeries>& series,
                                      double discardFloor) {
    // Index series by (level, shell); times are required to agree.
    std::map<std::pair<int, int>, const DeviationSeries*> byKey;
    std::vector<int> levels;
    for (const auto& s : series) {
        byKey[{s.level, s.shell}] = &s;
        if (std::find(levels.begin(), levels.end(), s.level) == levels.end())
            levels.push_back(s.level);
    }
    std::sort(levels.begin(), levels.end());
    if (levels.size() < 3)
        throw ContractViolation("estimateEigenvalue: need >= 3 consecutive levels");

    EigenvalueEstimate est;
    std::vector<double> ratios;
    std::map<int, std::vector<double>> perLevel;
    for (size_t li = 0; li + 1 < levels.size(); ++li) {
        if (levels[li + 1] != levels[li] + 1) continue;
        for (const auto& [key, lo] : byKey) {
            if (key.first != levels[li]) continue;
            auto hiIt = byKey.find({levels[li + 1], key.second});
            if (hiIt == byKey.end()) continue;
            const DeviationSeries& hi = *hiIt->second;
            for (size_t k = 0; k < lo->values.size(); ++k) {
                const Complex dLo = lo->values[k], dHi = hi.values[k];
                if (std::abs(dLo) < discardFloor || std::abs(dHi) < discardFloor) {
                    ++est.probesDiscarded;
                    continue;
                }
                // Projection ratio; reduces to the plain quotient for reals.
                const double r = std::real(dHi * std::conj(dLo)) / std::norm(dLo);
                ratios.push_back(r);
                perLevel[levels[li]].push_back(r);
            }
        }
    }
    if (ratios.empty())
        throw EvaluationError("estimateEigenvalue: all probes below the discard floor");
    est.rho = median(ratios);
    std::vector<double> absdev;
    absdev.reserve(ratios.size());
    for (double r : ratios) absdev.push_back(std::abs(r - est.rho));
    est.dispersion = median(absdev);
    est.probesUsed = static_cast<int>(ratios.size());
    for (auto& [lvl, rs] : perLevel) est.ratioByLevel[lvl] = median(rs);
    return est;
}

PrefactorFit fitPrefactors(const std::vector<DeviationSeries>& all, double rho,
                           const std::string& normLabel, const std::vector<int>& fitLevels) {
    auto inFit = [&](int level) {
        return fitLevels.empty() ||
               std::find(fitLevels.begin(), fitLevels.end(), level) != fitLevels.end();
    };

    PrefactorFit fit;
    fit.normLabel = normLabel;

    // Shared shape: mean over the normalization label's levels of delta/rho^N.
    std::map<int, std::pair<std::vector<Complex>, int>> shapeAcc; // by shell
    std::vector<double> shapeTimes;
    for (const auto& s : all) {
        if (s.label != normLabel || !inFit(s.level)) continue;
        const double scale = std::pow(rho, s.level);
        auto& [acc, count] = shapeAcc[s.shell];
        if (acc.empty()) acc.assign(s.values.size(), Complex(0.0, 0.0));
        for (size_t k = 0; k < s.values.size(); ++k) acc[k] += s.values[k] / scale;
        ++count;
        shapeTimes = s.times;
    }
    if (shapeAcc.empty())
        throw ContractViolation("fitPrefactors: no series for normalization label '" + normLabel +
                                "'");
    double shapeNorm2 = 0.0;
    for (auto& [shell, acc] : shapeAcc) {
        for (Complex& v : acc.first) v /= static_cast<double>(acc.second);
        for (const Complex& v : acc.first) shapeNorm2 += std::norm(v);
        DeviationSeries s;
        s.label = normLabel;
        s.level = -1;
        s.shell = shell;
        s.times = shapeTimes;
        s.values = acc.first;
        fit.shape.push_back(std::move(s));
    }
    if (shapeNorm2 <= 0.0)
        throw EvaluationError("fitPrefactors: degenerate (zero) shared shape");

    // c_label = <delta/rho^N, shape> / <shape, shape>, jointly over levels and probes.
    std::map<std::string, std::pair<double, double>> acc; // label -> (num, den)
    for (const auto& s : all) {
        if (!inFit(s.level)) continue;
        const auto shapeIt =
            std::find_if(fit.shape.begin(), fit.shape.end(),
                         [&](const DeviationSeries& sh) { return sh.shell == s.shell; });
        if (shapeIt == fit.shape.end()) continue;
        const double scale = std::pow(rho, s.level);
        auto& [num, den] = acc[s.label];
        for (size_t k = 0; k < s.values.size(); ++k) {
            num += std::real((s.values[k] / scale) * std::conj(shapeIt->values[k]));
            den += std::norm(shapeIt->values[k]);
        }
    }
    for (auto& [label, nd] : acc) {
        if (nd.second <= 0.0) throw EvaluationError("fitPrefactors: empty label " + label);
        fit.c[label] = nd.first / nd.second;
    }
    return fit;
}

int regularizationLevel(const RegularizationSpec& reg) {
    if (const auto* cc = std::get_if<CanonicalCutoff>(&reg)) return cc->N;
    if (const auto* aux = std::get_if<Auxiliary>(&reg)) return aux->N;
    const auto& v = std::get<Viscous>(reg);
    return static_cast<int>(std::lround(-0.75 * std::log2(v.nu)));
}

Trajectory limitReference(const ModelSpec& model, const RegularizationSpec& refReg,
                          const ShellState& ic, const BoundarySpec& bc, double t0, double t1,
                          const SolverConfig& cfg, int maxConsumerLevel) {
    const int refLevel = regularizationLevel(refReg);
    if (refLevel <= maxConsumerLevel)
        throw ContractViolation("limitReference: reference level " + std::to_string(refLevel) +
                                " must exceed every consumer level (max " +
                                std::to_string(maxConsumerLevel) + ")");
    Trajectory traj = integrate(model, refReg, bc, ic, t0, t1, cfg);
    if (traj.status() != RunStatus::Completed)
        throw EvaluationError("limitReference: reference run aborted (" +
                              statusName(traj.status()) + ") at t=" +
                              std::to_string(traj.tEnd()));
    return traj;
}

double verifyRgRelation(const ModelSpec& model, int N, int J, const ShellState& icTop,
                        const BoundarySpec& bc, double T, const SolverConfig& cfg,
                        const std::vector<double>& sampleTimes) {
    if (N < 0) throw ContractViolation("verifyRgRelation: N must be >= 0");
    const int mTop = N + 1 + J;
    if (icTop.shells() != mTop)
        throw ContractViolation("verifyRgRelation: initial state must have N+1+J shells");

    const RegularizationSpec topReg = CanonicalCutoff{N + 1, J, {}, 0.0};
    Trajectory top = integrate(model, topReg, bc, icTop, 0.0, T, cfg);
    if (top.status() != RunStatus::Completed)
        throw EvaluationError("verifyRgRelation: (N+1,J) run aborted");

    // Shifted problem: a~_n = lambda a_{n+1}; boundary picks up lambda u_1(t).
    const ShellState icShift = spaceShiftedIc(icTop);
    auto u1tab = std::make_shared<HermiteTable>(tabulateShell(top, 1, 4));
    BoundaryChannel fedChannel =
        BoundaryChannel::tabulated(std::move(u1tab)).scaledBy(Complex(kLambda, 0.0));
    BoundarySpec bcShift;
    if (model.boundaryArity() == 1) {
        bcShift.channels = {fedChannel};
    } else {
        bcShift.channels = {bc.channels[1].scaledBy(Complex(kLambda, 0.0)), fedChannel};
    }

    const RegularizationSpec loReg = CanonicalCutoff{N, J, {}, 0.0};
    Trajectory lo = integrate(model, loReg, bcShift, icShift, 0.0, T, cfg);
    if (lo.status() != RunStatus::Completed)
        throw EvaluationError("verifyRgRelation: (N,J) run aborted");

    double maxDisc = 0.0;
    for (double t : sampleTimes) {
        for (int n = 1; n <= N + J; ++n) {
            const Complex uTop = top.sampleShell(t, n + 1);
            const Complex uLo = lo.sampleShell(t, n);
            maxDisc = std::max(maxDisc, std::abs(uTop - uLo / kLambda));
        }
    }
    return maxDisc;
}

BridgePoint bridgeAt(const ShellState& state, double nu) {
    BridgePoint p;
    for (int n = 1; n <= state.shells(); ++n) {
        const double mag = std::abs(state.at(n));
        if (mag == 0.0) continue; // ratio +inf, never satisfies the bound
        if (nu * wavenumber(n) / mag <= 1.0 && n > p.level) {
            p.level = n;
            p.beta = nu * wavenumber(n) / mag;
            p.found = true;
        }
    }
    return p;
}

BridgeSeries viscousBridge(const Trajectory& viscousTraj, double nu,
                           const std::vector<double>& sampleTimes) {
    if (!std::holds_alternative<Viscous>(viscousTraj.reg()))
        throw ContractViolation("viscousBridge: trajectory is not a viscous run");
    BridgeSeries out;
    out.nu = nu;
    out.times = sampleTimes;
    for (double t : sampleTimes) {
        const BridgePoint p = bridgeAt(viscousTraj.sample(t), nu);
        if (p.found && p.level >= viscousTraj.shells())
            throw EvaluationError("viscousBridge: maximal shell hit the truncation; "
                                  "increase the shell count");
        out.levels.push_back(p.level);
        out.betas.push_back(p.beta);
        out.found.push_back(p.found);
    }
    return out;
}

std::vector<RescaledSeries> viscousRescaledDeviations(const std::map<int, Trajectory>& runsByLevel,
                                                      const Trajectory& ref, int shell,
                                                      const std::vector<double>& sampleTimes,
                                                      double rho) {
    std::vector<RescaledSeries> out;
    for (const auto& [level, traj] : runsByLevel) {
        if (traj.model().coupling != ref.model().coupling)
            throw ContractViolation("viscousRescaledDeviations: provenance mismatch");
        RescaledSeries s;
        s.level = level;
        s.times = sampleTimes;
        const double scale = std::pow(rho, level);
        s.values.reserve(sampleTimes.size());
        for (double t : sampleTimes)
            s.values.push_back((traj.sampleShell(t, shell) - ref.sampleShell(t, shell)) / scale);
        out.push_back(std::move(s));
    }
    return out;
}

AttractorCloud attractorProbe(const ModelSpec& model, const std::vector<int>& levels, int samples,
                              double coeffLo, double coeffHi, int J, const BoundarySpec& bc,
                              BuiltinIc ic, double tStar, std::uint64_t seed,
                              const SolverConfig& cfg, int workers) {
    if (samples < 1) throw ContractViolation("attractorProbe: samples must be >= 1");
    if (!(coeffHi >= coeffLo)) throw ContractViolation("attractorProbe: bad coefficient range");

    AttractorCloud cloud;
    cloud.records.resize(levels.size() * static_cast<size_t>(samples));
    parallelFor(cloud.records.size(), workers, [&](size_t idx) {
        const int level = levels[idx / static_cast<size_t>(samples)];
        const int sample = static_cast<int>(idx % static_cast<size_t>(samples));
        CloudRecord rec;
        rec.level = level;
        rec.sample = sample;
        rec.key = rngKey(seed, static_cast<std::uint64_t>(level),
                         static_cast<std::uint64_t>(sample));
        std::vector<double> coeffs(static_cast<size_t>(J));
        for (int j = 0; j < J; ++j)
            coeffs[static_cast<size_t>(j)] = uniformRange(
                rngKey(seed, static_cast<std::uint64_t>(level),
                       static_cast<std::uint64_t>(sample), static_cast<std::uint64_t>(j + 1)),
                coeffLo, coeffHi);
        rec.coeffs = coeffs;

        const RegularizationSpec reg = CanonicalCutoff{level, J, std::move(coeffs), 0.0};
        const ShellState a = builtinIc(ic, model, level + J);
        EndpointResult end = integrateEndpoint(model, reg, bc, a, 0.0, tStar, cfg);
        rec.status = end.status;
        if (end.status == RunStatus::Completed) {
            const ShellState u = ShellState::unpacked(model.kind(), end.packed);
            rec.endpoint = u.values;
            rec.u1 = u.at(1);
            rec.u2 = u.shells() >= 2 ? u.at(2) : Complex(0.0, 0.0);
        }
        cloud.records[idx] = std::move(rec);
    });
    return cloud;
}

std::vector<ChaosPoint> chaosGrowth(const ModelSpec& model, int J, double eps,
                                    const std::vector<int>& levels, const BoundarySpec& bc,
                                    BuiltinIc ic, double tStar, const SolverConfig& cfg,
                                    int workers) {
    std::vector<ChaosPoint> points(levels.size());
    parallelFor(levels.size(), workers, [&](size_t idx) {
        const int N = levels[idx];
        const ShellState a = builtinIc(ic, model, N + J);
        const RegularizationSpec base = CanonicalCutoff{N, J, {}, 0.0};
        const RegularizationSpec pert = CanonicalCutoff{N, J, {}, eps};
        EndpointResult rb = integrateEndpoint(model, base, bc, a, 0.0, tStar, cfg);
        EndpointResult rp = integrateEndpoint(model, pert, bc, a, 0.0, tStar, cfg);
        ChaosPoint p;
        p.level = N;
        p.statusBase = rb.status;
        p.statusPerturbed = rp.status;
        if (rb.status == RunStatus::Completed && rp.status == RunStatus::Completed) {
            double s2 = 0.0;
            for (size_t i = 0; i < rb.packed.size(); ++i) {
                const double d = rp.packed[i] - rb.packed[i];
                s2 += d * d;
            }
            p.separation = std::sqrt(s2);
            p.toleranceLimited = p.separation < 10.0 * cfg.atol;
        }
        points[idx] = p;
    });
    return points;
}

} // namespace shellrg
