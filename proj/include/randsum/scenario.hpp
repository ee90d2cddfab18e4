#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "randsum/distributions.hpp"
#include "randsum/nvm.hpp"
#include "randsum/scheme.hpp"

namespace randsum {

/// Configuration error with the offending field in the message.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// One named experiment: scheme, limit mixture, sweep parameters.
struct Scenario {
    std::string name;
    DoubleArrayScheme scheme;
    MixingLaw limit_mixing = DiracMix(1.0);
    double limit_alpha = 0.0;
    double limit_beta = 0.0;
    std::vector<std::int64_t> n_grid{10, 100, 1000};
    std::int64_t replicates = 100000;
    std::uint64_t seed = 42;
    double t_report = 5.0;
    std::vector<double> t_sweep{1.0, 5.0, 10.0};
    std::vector<double> eps_sweep{0.01, 0.05, 0.1, 0.5};

    NVMixture limit_mixture(int nodes = 256) const {
        return NVMixture(limit_mixing, limit_alpha, limit_beta, nodes);
    }
};

namespace detail {

using nlohmann::json;

inline double require_num(const json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw ConfigError(ctx + ": missing or non-numeric field \"" + key + "\"");
    return j.at(key).get<double>();
}

/// Parameter that is either a number or the string "n" / "1/n".
inline void parse_linked(const json& v, const std::string& ctx, bool& tracks_n, double& value) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "n" || s == "1/n") {
            tracks_n = true;
            return;
        }
        throw ConfigError(ctx + ": expected a number, \"n\" or \"1/n\", got \"" + s + "\"");
    }
    if (!v.is_number()) throw ConfigError(ctx + ": expected a number or \"n\"/\"1/n\"");
    tracks_n = false;
    value = v.get<double>();
}

}  // namespace detail

inline ShapeTemplate shape_from_json(const nlohmann::json& j) {
    std::string kind;
    double p = 0.5;
    if (j.is_string()) {
        kind = j.get<std::string>();
    } else if (j.is_object()) {
        if (!j.contains("shape")) throw ConfigError("shape: missing \"shape\" field");
        kind = j.at("shape").get<std::string>();
        if (j.contains("p")) p = j.at("p").get<double>();
    } else {
        throw ConfigError("shape: expected a string or object");
    }
    if (kind == "normal") return NormalShape{};
    if (kind == "uniform") return UniformShape{};
    if (kind == "two_point") return TwoPointShape(p);
    if (kind == "shifted_exponential") return ShiftedExpShape{};
    throw ConfigError("shape: unknown kind \"" + kind + "\"");
}

inline nlohmann::json shape_to_json(const ShapeTemplate& s) {
    if (std::holds_alternative<NormalShape>(s)) return "normal";
    if (std::holds_alternative<UniformShape>(s)) return "uniform";
    if (std::holds_alternative<ShiftedExpShape>(s)) return "shifted_exponential";
    return nlohmann::json{{"shape", "two_point"}, {"p", std::get<TwoPointShape>(s).p}};
}

/// Standalone family descriptor, e.g. {"family":"normal","mu":0,"sigma":1}.
inline SummandFamily family_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("family"))
        throw ConfigError("family: expected an object with a \"family\" field");
    const std::string kind = j.at("family").get<std::string>();
    if (kind == "normal")
        return Normal(detail::require_num(j, "mu", "family"),
                      detail::require_num(j, "sigma", "family"));
    if (kind == "uniform")
        return Uniform(detail::require_num(j, "lo", "family"),
                       detail::require_num(j, "hi", "family"));
    if (kind == "two_point")
        return TwoPoint(detail::require_num(j, "x1", "family"),
                        detail::require_num(j, "x2", "family"),
                        detail::require_num(j, "p", "family"));
    if (kind == "shifted_exponential")
        return ShiftedExponential(detail::require_num(j, "rate", "family"),
                                  detail::require_num(j, "shift", "family"));
    throw ConfigError("family: unknown kind \"" + kind + "\"");
}

inline nlohmann::json family_to_json(const SummandFamily& f) {
    using nlohmann::json;
    if (const auto* n = std::get_if<Normal>(&f))
        return json{{"family", "normal"}, {"mu", n->mu}, {"sigma", n->sigma}};
    if (const auto* u = std::get_if<Uniform>(&f))
        return json{{"family", "uniform"}, {"lo", u->lo}, {"hi", u->hi}};
    if (const auto* t = std::get_if<TwoPoint>(&f))
        return json{{"family", "two_point"}, {"x1", t->x1}, {"x2", t->x2}, {"p", t->p}};
    const auto& s = std::get<ShiftedExponential>(f);
    return json{{"family", "shifted_exponential"}, {"rate", s.rate}, {"shift", s.shift}};
}

inline VariancePattern pattern_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("pattern"))
        throw ConfigError("variances: expected an object with a \"pattern\" field");
    const std::string kind = j.at("pattern").get<std::string>();
    if (kind == "constant") return ConstantVar(detail::require_num(j, "sigma", "variances"));
    if (kind == "alternating")
        return AlternatingVar(detail::require_num(j, "a", "variances"),
                              detail::require_num(j, "b", "variances"));
    if (kind == "power_law")
        return PowerLawVar(detail::require_num(j, "sigma", "variances"),
                           detail::require_num(j, "gamma", "variances"));
    throw ConfigError("variances: unknown pattern \"" + kind + "\"");
}

inline nlohmann::json pattern_to_json(const VariancePattern& p) {
    using nlohmann::json;
    if (const auto* c = std::get_if<ConstantVar>(&p))
        return json{{"pattern", "constant"}, {"sigma", c->sigma}};
    if (const auto* a = std::get_if<AlternatingVar>(&p))
        return json{{"pattern", "alternating"}, {"a", a->a}, {"b", a->b}};
    const auto& pl = std::get<PowerLawVar>(p);
    return json{{"pattern", "power_law"}, {"sigma", pl.sigma}, {"gamma", pl.gamma}};
}

inline IndexRule index_rule_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("index"))
        throw ConfigError("index: expected an object with an \"index\" field");
    const std::string kind = j.at("index").get<std::string>();
    IndexRule rule;
    if (kind == "deterministic") {
        rule.kind = IndexRule::Kind::deterministic;
        if (!j.contains("k")) throw ConfigError("index: deterministic needs \"k\"");
        detail::parse_linked(j.at("k"), "index.k", rule.tracks_n, rule.value);
    } else if (kind == "geometric") {
        rule.kind = IndexRule::Kind::geometric;
        if (!j.contains("p")) throw ConfigError("index: geometric needs \"p\"");
        detail::parse_linked(j.at("p"), "index.p", rule.tracks_n, rule.value);
    } else if (kind == "mixed_poisson_gamma") {
        rule.kind = IndexRule::Kind::mixed_poisson_gamma;
        rule.shape = detail::require_num(j, "r", "index");
        if (!j.contains("mean")) throw ConfigError("index: mixed_poisson_gamma needs \"mean\"");
        detail::parse_linked(j.at("mean"), "index.mean", rule.tracks_n, rule.value);
    } else {
        throw ConfigError("index: unknown kind \"" + kind + "\"");
    }
    return rule;
}

inline nlohmann::json index_rule_to_json(const IndexRule& r) {
    using nlohmann::json;
    json out;
    switch (r.kind) {
        case IndexRule::Kind::deterministic:
            out["index"] = "deterministic";
            out["k"] = r.tracks_n ? json("n") : json(r.value);
            break;
        case IndexRule::Kind::geometric:
            out["index"] = "geometric";
            out["p"] = r.tracks_n ? json("1/n") : json(r.value);
            break;
        case IndexRule::Kind::mixed_poisson_gamma:
            out["index"] = "mixed_poisson_gamma";
            out["r"] = r.shape;
            out["mean"] = r.tracks_n ? json("n") : json(r.value);
            break;
    }
    return out;
}

inline MixingLaw mixing_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("law"))
        throw ConfigError("mixing: expected an object with a \"law\" field");
    const std::string kind = j.at("law").get<std::string>();
    if (kind == "dirac") return DiracMix(detail::require_num(j, "w", "mixing"));
    if (kind == "exponential") return ExponentialMix(detail::require_num(j, "rate", "mixing"));
    if (kind == "gamma")
        return GammaMix(detail::require_num(j, "shape", "mixing"),
                        detail::require_num(j, "rate", "mixing"));
    if (kind == "inverse_gamma")
        return InverseGammaMix(detail::require_num(j, "shape", "mixing"),
                               detail::require_num(j, "scale", "mixing"));
    if (kind == "inverse_gaussian")
        return InverseGaussianMix(detail::require_num(j, "mean", "mixing"),
                                  detail::require_num(j, "shape", "mixing"));
    throw ConfigError("mixing: unknown law \"" + kind + "\"");
}

inline nlohmann::json mixing_to_json(const MixingLaw& m) {
    using nlohmann::json;
    if (const auto* d = std::get_if<DiracMix>(&m)) return json{{"law", "dirac"}, {"w", d->w}};
    if (const auto* e = std::get_if<ExponentialMix>(&m))
        return json{{"law", "exponential"}, {"rate", e->rate}};
    if (const auto* g = std::get_if<GammaMix>(&m))
        return json{{"law", "gamma"}, {"shape", g->shape}, {"rate", g->rate}};
    if (const auto* ig = std::get_if<InverseGammaMix>(&m))
        return json{{"law", "inverse_gamma"}, {"shape", ig->shape}, {"scale", ig->scale}};
    const auto& igs = std::get<InverseGaussianMix>(m);
    return json{{"law", "inverse_gaussian"}, {"mean", igs.mean}, {"shape", igs.shape}};
}

inline AlphaRule alpha_rule_from_json(const nlohmann::json& j, const std::string& ctx) {
    AlphaRule rule;
    if (j.is_number()) {
        rule.base = j.get<double>();
        return rule;
    }
    if (!j.is_object()) throw ConfigError(ctx + ": expected a number or object");
    if (j.contains("const")) {
        rule.base = j.at("const").get<double>();
        return rule;
    }
    if (j.contains("base")) rule.base = j.at("base").get<double>();
    if (j.contains("drift")) rule.drift = j.at("drift").get<double>();
    if (!j.contains("base") && !j.contains("drift"))
        throw ConfigError(ctx + ": expected \"const\" or \"base\"/\"drift\"");
    return rule;
}

inline nlohmann::json alpha_rule_to_json(const AlphaRule& r) {
    using nlohmann::json;
    if (r.drift == 0.0) return json{{"const", r.base}};
    return json{{"base", r.base}, {"drift", r.drift}};
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("scenario: expected a JSON object");
    Scenario s;
    s.name = j.value("name", "unnamed");
    const std::string mode = j.value("mode", "theorem4");
    if (mode == "theorem4") {
        s.scheme.mode = Theorem4Mode{};
    } else if (mode == "general") {
        GeneralMode g;
        g.rho = j.value("rho", 1.0);
        if (j.contains("beta")) g.beta = alpha_rule_from_json(j.at("beta"), "beta");
        s.scheme.mode = g;
    } else {
        throw ConfigError("mode: must be \"theorem4\" or \"general\"");
    }
    if (!j.contains("alpha")) throw ConfigError("scenario: missing \"alpha\"");
    s.scheme.alpha_rule = alpha_rule_from_json(j.at("alpha"), "alpha");
    if (!j.contains("variances")) throw ConfigError("scenario: missing \"variances\"");
    s.scheme.pattern = pattern_from_json(j.at("variances"));
    if (!j.contains("shape")) throw ConfigError("scenario: missing \"shape\"");
    s.scheme.shape = shape_from_json(j.at("shape"));
    if (!j.contains("index")) throw ConfigError("scenario: missing \"index\"");
    s.scheme.index_rule = index_rule_from_json(j.at("index"));
    if (j.contains("trunc_eps")) s.scheme.trunc_eps = j.at("trunc_eps").get<double>();
    if (j.contains("trunc_cap")) s.scheme.trunc_cap = j.at("trunc_cap").get<std::int64_t>();
    if (!j.contains("limit")) throw ConfigError("scenario: missing \"limit\"");
    const auto& lim = j.at("limit");
    if (!lim.contains("mixing")) throw ConfigError("limit: missing \"mixing\"");
    s.limit_mixing = mixing_from_json(lim.at("mixing"));
    s.limit_alpha = lim.value("alpha", 0.0);
    s.limit_beta = lim.value("beta", 0.0);
    if (j.contains("n_grid")) {
        s.n_grid.clear();
        for (const auto& v : j.at("n_grid")) s.n_grid.push_back(v.get<std::int64_t>());
    }
    if (j.contains("replicates")) s.replicates = j.at("replicates").get<std::int64_t>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("t_report")) s.t_report = j.at("t_report").get<double>();
    if (j.contains("t_sweep")) {
        s.t_sweep.clear();
        for (const auto& v : j.at("t_sweep")) s.t_sweep.push_back(v.get<double>());
    }
    if (j.contains("eps_sweep")) {
        s.eps_sweep.clear();
        for (const auto& v : j.at("eps_sweep")) s.eps_sweep.push_back(v.get<double>());
    }
    // validation
    if (s.n_grid.empty()) throw ConfigError("n_grid: must be nonempty");
    for (std::size_t i = 0; i < s.n_grid.size(); ++i) {
        if (s.n_grid[i] < 1) throw ConfigError("n_grid: entries must be >= 1");
        if (i > 0 && s.n_grid[i] <= s.n_grid[i - 1])
            throw ConfigError("n_grid: must be strictly increasing");
    }
    if (s.replicates < 1000) throw ConfigError("replicates: must be >= 1000 for metric rows");
    if (!(s.t_report > 0.0)) throw ConfigError("t_report: must be > 0");
    for (double t : s.t_sweep)
        if (!(t > 0.0)) throw ConfigError("t_sweep: entries must be > 0");
    for (double e : s.eps_sweep)
        if (!(e > 0.0)) throw ConfigError("eps_sweep: entries must be > 0");
    return s;
}

inline nlohmann::json scenario_to_json(const Scenario& s) {
    using nlohmann::json;
    json j;
    j["name"] = s.name;
    if (const auto* g = std::get_if<GeneralMode>(&s.scheme.mode)) {
        j["mode"] = "general";
        j["rho"] = g->rho;
        j["beta"] = alpha_rule_to_json(g->beta);
    } else {
        j["mode"] = "theorem4";
    }
    j["alpha"] = alpha_rule_to_json(s.scheme.alpha_rule);
    j["variances"] = pattern_to_json(s.scheme.pattern);
    j["shape"] = shape_to_json(s.scheme.shape);
    j["index"] = index_rule_to_json(s.scheme.index_rule);
    j["limit"] = json{{"mixing", mixing_to_json(s.limit_mixing)},
                      {"alpha", s.limit_alpha},
                      {"beta", s.limit_beta}};
    j["n_grid"] = s.n_grid;
    j["replicates"] = s.replicates;
    j["seed"] = s.seed;
    j["t_report"] = s.t_report;
    j["t_sweep"] = s.t_sweep;
    j["eps_sweep"] = s.eps_sweep;
    return j;
}

/// Built-in scenarios covering the catalog of limit regimes.
inline Scenario preset(const std::string& name) {
    Scenario s;
    s.name = name;
    if (name == "classical") {
        // deterministic index, centered normal summands; the plain CLT
        s.scheme.shape = NormalShape{};
        s.scheme.pattern = ConstantVar(1.0);
        s.scheme.index_rule = {IndexRule::Kind::deterministic, true, 0.0, 1.0};
        s.scheme.alpha_rule = {0.0, 0.0};
        s.limit_mixing = DiracMix(1.0);
        s.limit_alpha = 0.0;
    } else if (name == "geometric-laplace") {
        s.scheme.shape = NormalShape{};
        s.scheme.pattern = ConstantVar(1.0);
        s.scheme.index_rule = {IndexRule::Kind::geometric, true, 0.0, 1.0};
        s.scheme.alpha_rule = {1.0, 0.0};
        s.limit_mixing = ExponentialMix(1.0);
        s.limit_alpha = 1.0;
    } else if (name == "mixed-poisson-vg") {
        s.scheme.shape = NormalShape{};
        s.scheme.pattern = ConstantVar(1.0);
        s.scheme.index_rule = {IndexRule::Kind::mixed_poisson_gamma, true, 0.0, 2.0};
        s.scheme.alpha_rule = {1.0, 0.0};
        s.limit_mixing = GammaMix(2.0, 2.0);
        s.limit_alpha = 1.0;
    } else if (name == "heterogeneous-laplace") {
        // skewed two-point summands with alternating variances
        s.scheme.shape = TwoPointShape(0.7);
        s.scheme.pattern = AlternatingVar(1.0, 2.0);
        s.scheme.index_rule = {IndexRule::Kind::geometric, true, 0.0, 1.0};
        s.scheme.alpha_rule = {1.0, 0.0};
        s.limit_mixing = ExponentialMix(1.0);
        s.limit_alpha = 1.0;
    } else {
        throw ConfigError("preset: unknown name \"" + name + "\" (expected classical, "
                          "geometric-laplace, mixed-poisson-vg, heterogeneous-laplace)");
    }
    return s;
}

}  // namespace randsum
