#include "shellrg/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

namespace shellrg {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& expected) {
    throw ConfigError("config key '" + key + "': expected " + expected);
}

void rejectUnknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.count(it.key()))
            throw ConfigError("unknown config key '" + where + it.key() + "'");
    }
}

double asNumber(const json& j, const std::string& key) {
    if (!j.is_number()) fail(key, "a number");
    return j.get<double>();
}

int asInt(const json& j, const std::string& key) {
    if (!j.is_number_integer()) fail(key, "an integer");
    return j.get<int>();
}

std::string asString(const json& j, const std::string& key) {
    if (!j.is_string()) fail(key, "a string");
    return j.get<std::string>();
}

std::vector<Complex> asComplexList(const json& j, const std::string& key) {
    if (!j.is_array()) fail(key, "a list of [re, im] pairs or numbers");
    std::vector<Complex> out;
    for (const auto& e : j) {
        if (e.is_number()) {
            out.emplace_back(e.get<double>(), 0.0);
        } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
            out.emplace_back(e[0].get<double>(), e[1].get<double>());
        } else {
            fail(key, "entries that are numbers or [re, im] pairs");
        }
    }
    return out;
}

std::vector<int> parseLevels(const json& j, const std::string& key) {
    std::vector<int> levels;
    if (j.is_array()) {
        for (const auto& e : j) levels.push_back(asInt(e, key));
    } else if (j.is_object()) {
        rejectUnknown(j, {"from", "to"}, key + ".");
        if (!j.contains("from") || !j.contains("to")) fail(key, "{from, to} or a list");
        const int lo = asInt(j.at("from"), key + ".from");
        const int hi = asInt(j.at("to"), key + ".to");
        if (hi < lo) fail(key, "from <= to");
        for (int n = lo; n <= hi; ++n) levels.push_back(n);
    } else {
        fail(key, "a list of integers or {from, to}");
    }
    if (levels.empty()) fail(key, "a nonempty level set");
    return levels;
}

RegTemplate parseRegTemplate(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "an object with a 'type' field");
    RegTemplate reg;
    const std::string type = j.contains("type") ? asString(j.at("type"), where + ".type") : "";
    if (type == "canonical") {
        rejectUnknown(j, {"type", "J", "eps", "coeffs"}, where + ".");
        reg.family = RegTemplate::Family::Canonical;
        if (j.contains("J")) reg.J = asInt(j.at("J"), where + ".J");
        if (j.contains("eps")) reg.eps = asNumber(j.at("eps"), where + ".eps");
        if (j.contains("coeffs")) {
            for (const auto& c : j.at("coeffs"))
                reg.coeffs.push_back(asNumber(c, where + ".coeffs[]"));
        }
    } else if (type == "auxiliary") {
        rejectUnknown(j, {"type", "beta"}, where + ".");
        reg.family = RegTemplate::Family::Auxiliary;
        if (j.contains("beta")) reg.beta = asNumber(j.at("beta"), where + ".beta");
    } else if (type == "viscous") {
        rejectUnknown(j, {"type"}, where + ".");
        reg.family = RegTemplate::Family::Viscous;
    } else {
        fail(where + ".type", "canonical|auxiliary|viscous");
    }
    return reg;
}

json regTemplateJson(const RegTemplate& reg) {
    json j;
    switch (reg.family) {
        case RegTemplate::Family::Canonical:
            j["type"] = "canonical";
            j["J"] = reg.J;
            if (reg.eps != 0.0) j["eps"] = reg.eps;
            if (!reg.coeffs.empty()) j["coeffs"] = reg.coeffs;
            break;
        case RegTemplate::Family::Auxiliary:
            j["type"] = "auxiliary";
            j["beta"] = reg.beta;
            break;
        case RegTemplate::Family::Viscous: j["type"] = "viscous"; break;
    }
    return j;
}

json complexListJson(const std::vector<Complex>& values) {
    json arr = json::array();
    for (const Complex& v : values) arr.push_back(json::array({v.real(), v.imag()}));
    return arr;
}

} // namespace

ExperimentKind kindFromName(const std::string& name) {
    if (name == "single-run") return ExperimentKind::SingleRun;
    if (name == "rg-convergence") return ExperimentKind::RgConvergence;
    if (name == "eigenmode") return ExperimentKind::Eigenmode;
    if (name == "rg-verify") return ExperimentKind::RgVerify;
    if (name == "viscous-bridge") return ExperimentKind::ViscousBridge;
    if (name == "viscous-rescaled") return ExperimentKind::ViscousRescaled;
    if (name == "attractor-probe") return ExperimentKind::AttractorProbe;
    if (name == "chaos-growth") return ExperimentKind::ChaosGrowth;
    if (name == "stationary-check") return ExperimentKind::StationaryCheck;
    throw ConfigError("unknown experiment kind '" + name + "'");
}

std::string kindName(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::SingleRun: return "single-run";
        case ExperimentKind::RgConvergence: return "rg-convergence";
        case ExperimentKind::Eigenmode: return "eigenmode";
        case ExperimentKind::RgVerify: return "rg-verify";
        case ExperimentKind::ViscousBridge: return "viscous-bridge";
        case ExperimentKind::ViscousRescaled: return "viscous-rescaled";
        case ExperimentKind::AttractorProbe: return "attractor-probe";
        case ExperimentKind::ChaosGrowth: return "chaos-growth";
        case ExperimentKind::StationaryCheck: return "stationary-check";
    }
    return "?";
}

RegularizationSpec RegTemplate::at(int level) const {
    switch (family) {
        case Family::Canonical: return CanonicalCutoff{level, J, coeffs, eps};
        case Family::Auxiliary: return Auxiliary{level, beta};
        case Family::Viscous: return Viscous{viscosityForLevel(level)};
    }
    throw ContractViolation("RegTemplate::at: bad family");
}

std::string RegTemplate::label() const {
    switch (family) {
        case Family::Canonical: {
            std::string s = "J=" + std::to_string(J);
            if (eps != 0.0) s += "+eps";
            return s;
        }
        case Family::Auxiliary: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "beta=%g", beta);
            return buf;
        }
        case Family::Viscous: return "nu-seq";
    }
    return "?";
}

ShellState IcSpec::resolve(const ModelSpec& model, int shells) const {
    switch (kind) {
        case Kind::Builtin: return builtinIc(builtin, model, shells);
        case Kind::Literal: {
            if (static_cast<int>(literal.size()) != shells)
                throw ConfigError("literal initial condition has " +
                                  std::to_string(literal.size()) + " shells, run needs " +
                                  std::to_string(shells));
            std::vector<Complex> v = literal;
            if (model.kind() == ScalarKind::Real)
                for (const Complex& u : v)
                    if (u.imag() != 0.0)
                        throw ConfigError("literal initial condition has complex entries "
                                          "for a real model");
            return ShellState(model.kind(), std::move(v));
        }
        case Kind::Fill: {
            std::vector<Complex> v(static_cast<size_t>(shells), Complex(fill, 0.0));
            return ShellState(model.kind(), std::move(v));
        }
    }
    throw ContractViolation("IcSpec::resolve: bad kind");
}

BoundarySpec BcSpec::resolve(const ModelSpec& model) const {
    if (kind == Kind::Builtin) return builtinBc(builtin, model.boundaryArity());
    if (static_cast<int>(constants.size()) != model.boundaryArity())
        throw ConfigError("const boundary needs " + std::to_string(model.boundaryArity()) +
                          " channel value(s)");
    return constBc(constants);
}

void ExperimentConfig::validate() const {
    modelFromName(model);
    solver.validate();
    if (!(tEnd > tStart)) throw ConfigError("tSpan must satisfy tEnd > tStart");
    if (sampleTimes.empty()) throw ConfigError("sampleTimes resolved to an empty grid");
    for (double t : sampleTimes)
        if (t < tStart - 1e-12 || t > tEnd + 1e-12)
            throw ConfigError("sampleTimes outside tSpan");
    if (grids.empty() && kind != ExperimentKind::ViscousBridge)
        throw ConfigError("at least one grid is required");
    for (const auto& g : grids) {
        for (int level : g.levels) {
            shellrg::validate(g.reg.at(level));
            if (g.shells != 0) impliedShells(g.reg.at(level), g.shells);
        }
    }
    const ModelSpec m = modelFromName(model);
    switch (kind) {
        case ExperimentKind::ChaosGrowth:
            if (m.coupling != Coupling::Sabra)
                throw ConfigError("chaos-growth requires model \"sabra\"");
            if (!(eps > 0.0)) throw ConfigError("chaos-growth requires eps > 0");
            break;
        case ExperimentKind::Eigenmode:
        case ExperimentKind::ViscousRescaled:
            if (reference == 0) throw ConfigError(kindName(kind) + " requires a reference level");
            for (const auto& g : grids)
                for (int level : g.levels)
                    if (level >= reference)
                        throw ConfigError("reference level must exceed every grid level");
            break;
        case ExperimentKind::ViscousBridge:
            if (nuList.empty()) throw ConfigError("viscous-bridge requires nuList");
            for (double nu : nuList)
                if (!(nu > 0.0)) throw ConfigError("nuList entries must be > 0");
            break;
        case ExperimentKind::StationaryCheck:
            if (m.coupling != Coupling::Dyadic)
                throw ConfigError("stationary-check requires model \"dyadic\"");
            break;
        case ExperimentKind::AttractorProbe:
            if (samples < 1) throw ConfigError("attractor-probe requires samples >= 1");
            if (!(coeffHi >= coeffLo)) throw ConfigError("coeffRange must be ordered");
            break;
        default: break;
    }
}

ExperimentConfig parseConfig(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root: expected an object");

    static const std::set<std::string> known = {
        "kind",       "model",    "grids",       "reference", "ic",          "bc",
        "tSpan",      "sampleTimes", "probeShells", "rho",    "solver",      "seed",
        "workers",    "samples",  "coeffRange",  "tStar",     "eps",         "nuList",
        "blowupTheta", "blowupShell"};
    rejectUnknown(j, known, "");

    ExperimentConfig cfg;
    if (!j.contains("kind")) throw ConfigError("config key 'kind' is required");
    cfg.kind = kindFromName(asString(j.at("kind"), "kind"));
    if (j.contains("model")) cfg.model = asString(j.at("model"), "model");

    if (j.contains("grids")) {
        if (!j.at("grids").is_array()) fail("grids", "a list");
        size_t gi = 0;
        for (const auto& gj : j.at("grids")) {
            const std::string where = "grids[" + std::to_string(gi++) + "]";
            if (!gj.is_object()) fail(where, "an object");
            rejectUnknown(gj, {"reg", "levels", "shells"}, where + ".");
            GridSpec g;
            if (gj.contains("reg")) g.reg = parseRegTemplate(gj.at("reg"), where + ".reg");
            if (!gj.contains("levels")) fail(where + ".levels", "a level set");
            g.levels = parseLevels(gj.at("levels"), where + ".levels");
            if (gj.contains("shells")) g.shells = asInt(gj.at("shells"), where + ".shells");
            cfg.grids.push_back(std::move(g));
        }
    }
    if (j.contains("reference")) cfg.reference = asInt(j.at("reference"), "reference");

    if (j.contains("ic")) {
        const json& i = j.at("ic");
        if (i.is_string()) {
            cfg.ic.kind = IcSpec::Kind::Builtin;
            cfg.ic.builtin = icFromName(asString(i, "ic"));
        } else if (i.is_object() && i.contains("values")) {
            rejectUnknown(i, {"values"}, "ic.");
            cfg.ic.kind = IcSpec::Kind::Literal;
            cfg.ic.literal = asComplexList(i.at("values"), "ic.values");
        } else if (i.is_object() && i.contains("fill")) {
            rejectUnknown(i, {"fill"}, "ic.");
            cfg.ic.kind = IcSpec::Kind::Fill;
            cfg.ic.fill = asNumber(i.at("fill"), "ic.fill");
        } else {
            fail("ic", "\"IC1\"|\"IC2\" or {values: [...]} or {fill: x}");
        }
    }
    if (j.contains("bc")) {
        const json& b = j.at("bc");
        if (b.is_string()) {
            cfg.bc.kind = BcSpec::Kind::Builtin;
            cfg.bc.builtin = asString(b, "bc");
        } else if (b.is_object() && b.contains("const")) {
            rejectUnknown(b, {"const"}, "bc.");
            cfg.bc.kind = BcSpec::Kind::Const;
            cfg.bc.constants = asComplexList(b.at("const"), "bc.const");
        } else {
            fail("bc", "a builtin name or {const: [...]}");
        }
    } else {
        cfg.bc.builtin = modelFromName(cfg.model).name() + "-default";
    }

    if (j.contains("tSpan")) {
        const json& ts = j.at("tSpan");
        if (!ts.is_array() || ts.size() != 2) fail("tSpan", "[t0, t1]");
        cfg.tStart = asNumber(ts[0], "tSpan[0]");
        cfg.tEnd = asNumber(ts[1], "tSpan[1]");
    }

    if (j.contains("sampleTimes")) {
        const json& st = j.at("sampleTimes");
        if (st.is_array()) {
            for (const auto& e : st) cfg.sampleTimes.push_back(asNumber(e, "sampleTimes[]"));
        } else if (st.is_object() && st.contains("dt")) {
            rejectUnknown(st, {"dt"}, "sampleTimes.");
            const double dt = asNumber(st.at("dt"), "sampleTimes.dt");
            if (!(dt > 0.0)) fail("sampleTimes.dt", "a positive number");
            for (double t = cfg.tStart; t < cfg.tEnd + 0.5 * dt; t += dt)
                cfg.sampleTimes.push_back(std::min(t, cfg.tEnd));
        } else if (st.is_object()) {
            rejectUnknown(st, {"from", "to", "count"}, "sampleTimes.");
            if (!st.contains("from") || !st.contains("to") || !st.contains("count"))
                fail("sampleTimes", "{from, to, count} or {dt} or a list");
            const double a = asNumber(st.at("from"), "sampleTimes.from");
            const double b = asNumber(st.at("to"), "sampleTimes.to");
            const int c = asInt(st.at("count"), "sampleTimes.count");
            if (c < 1) fail("sampleTimes.count", "a positive integer");
            for (int i = 0; i < c; ++i)
                cfg.sampleTimes.push_back(c == 1 ? a : a + (b - a) * i / (c - 1));
        } else {
            fail("sampleTimes", "{from,to,count} or {dt} or a list");
        }
    } else {
        for (int i = 0; i <= 200; ++i)
            cfg.sampleTimes.push_back(cfg.tStart + (cfg.tEnd - cfg.tStart) * i / 200.0);
    }

    if (j.contains("probeShells")) {
        cfg.probeShells.clear();
        for (const auto& e : j.at("probeShells"))
            cfg.probeShells.push_back(asInt(e, "probeShells[]"));
    }
    if (j.contains("rho")) cfg.rho = asNumber(j.at("rho"), "rho");

    if (j.contains("solver")) {
        const json& s = j.at("solver");
        if (!s.is_object()) fail("solver", "an object");
        rejectUnknown(s,
                      {"method", "rtol", "atol", "maxStep", "initialStep", "maxSteps",
                       "blowupGuard"},
                      "solver.");
        if (s.contains("method"))
            cfg.solver.method = methodFromName(asString(s.at("method"), "solver.method"));
        if (s.contains("rtol")) cfg.solver.rtol = asNumber(s.at("rtol"), "solver.rtol");
        if (s.contains("atol")) cfg.solver.atol = asNumber(s.at("atol"), "solver.atol");
        if (s.contains("maxStep")) cfg.solver.maxStep = asNumber(s.at("maxStep"), "solver.maxStep");
        if (s.contains("initialStep"))
            cfg.solver.initialStep = asNumber(s.at("initialStep"), "solver.initialStep");
        if (s.contains("maxSteps"))
            cfg.solver.maxSteps = static_cast<std::int64_t>(asNumber(s.at("maxSteps"),
                                                                     "solver.maxSteps"));
        if (s.contains("blowupGuard"))
            cfg.solver.blowupGuard = asNumber(s.at("blowupGuard"), "solver.blowupGuard");
    }

    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
            fail("seed", "a 64-bit unsigned integer");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("workers")) cfg.workers = asInt(j.at("workers"), "workers");
    if (j.contains("samples")) cfg.samples = asInt(j.at("samples"), "samples");
    if (j.contains("coeffRange")) {
        const json& cr = j.at("coeffRange");
        if (!cr.is_array() || cr.size() != 2) fail("coeffRange", "[lo, hi]");
        cfg.coeffLo = asNumber(cr[0], "coeffRange[0]");
        cfg.coeffHi = asNumber(cr[1], "coeffRange[1]");
    }
    if (j.contains("tStar")) cfg.tStar = asNumber(j.at("tStar"), "tStar");
    if (j.contains("eps")) cfg.eps = asNumber(j.at("eps"), "eps");
    if (j.contains("nuList")) {
        for (const auto& e : j.at("nuList")) cfg.nuList.push_back(asNumber(e, "nuList[]"));
    }
    if (j.contains("blowupTheta")) cfg.blowupTheta = asNumber(j.at("blowupTheta"), "blowupTheta");
    if (j.contains("blowupShell")) cfg.blowupShell = asInt(j.at("blowupShell"), "blowupShell");

    cfg.validate();
    return cfg;
}

std::string serializeConfig(const ExperimentConfig& cfg) {
    json j;
    j["kind"] = kindName(cfg.kind);
    j["model"] = cfg.model;
    json grids = json::array();
    for (const auto& g : cfg.grids) {
        json gj;
        gj["reg"] = regTemplateJson(g.reg);
        gj["levels"] = g.levels;
        if (g.shells != 0) gj["shells"] = g.shells;
        grids.push_back(gj);
    }
    j["grids"] = grids;
    if (cfg.reference != 0) j["reference"] = cfg.reference;
    switch (cfg.ic.kind) {
        case IcSpec::Kind::Builtin:
            j["ic"] = cfg.ic.builtin == BuiltinIc::IC1 ? "IC1" : "IC2";
            break;
        case IcSpec::Kind::Literal: j["ic"] = json{{"values", complexListJson(cfg.ic.literal)}}; break;
        case IcSpec::Kind::Fill: j["ic"] = json{{"fill", cfg.ic.fill}}; break;
    }
    if (cfg.bc.kind == BcSpec::Kind::Builtin)
        j["bc"] = cfg.bc.builtin;
    else
        j["bc"] = json{{"const", complexListJson(cfg.bc.constants)}};
    j["tSpan"] = json::array({cfg.tStart, cfg.tEnd});
    j["sampleTimes"] = cfg.sampleTimes;
    j["probeShells"] = cfg.probeShells;
    j["rho"] = cfg.rho;
    j["solver"] = json{{"method", methodName(cfg.solver.method)},
                       {"rtol", cfg.solver.rtol},
                       {"atol", cfg.solver.atol},
                       {"maxStep", cfg.solver.maxStep},
                       {"initialStep", cfg.solver.initialStep},
                       {"maxSteps", cfg.solver.maxSteps},
                       {"blowupGuard", cfg.solver.blowupGuard}};
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    switch (cfg.kind) {
        case ExperimentKind::AttractorProbe:
            j["samples"] = cfg.samples;
            j["coeffRange"] = json::array({cfg.coeffLo, cfg.coeffHi});
            j["tStar"] = cfg.tStar;
            break;
        case ExperimentKind::ChaosGrowth:
            j["eps"] = cfg.eps;
            j["tStar"] = cfg.tStar;
            break;
        case ExperimentKind::ViscousBridge: j["nuList"] = cfg.nuList; break;
        default: break;
    }
    if (cfg.blowupShell != 0) j["blowupShell"] = cfg.blowupShell;
    return j.dump(2) + "\n";
}

} // namespace shellrg
