// painleve: command-line front end.
//
//   painleve integrate  --config run.json [--out nodes.csv] [--tol 1e-10]
//   painleve transform  --config run.json [--out image.json]
//   painleve verify     --config run.json [--out report.json] [--tol 1e-8]
//   painleve classify   V1 V2
//   painleve rational   K [--shift T1|T2]
//   painleve bessel-tau --n N --nu NU --c C --kind IK|JY --t T [--t T ...]
//
// Exit codes: 0 success, 2 error (JSON on stderr), 3 identity failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "painleve/classical.hpp"
#include "painleve/corners.hpp"
#include "painleve/identities.hpp"
#include "painleve/integrator.hpp"
#include "painleve/pii.hpp"
#include "painleve/weyl.hpp"

using json = nlohmann::ordered_json;
using namespace painleve;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_error = 2;
constexpr int exit_failed = 3;

// ---------------------------------------------------------------- formatting

std::string fmt(double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, r.ptr};
}

json cjson(Complex z) { return json::array({z.real(), z.imag()}); }

json state_json(const CanonicalState& s) { return {{"t", cjson(s.t)}, {"q", cjson(s.q)}, {"p", cjson(s.p)}}; }

json params_json(const ParameterPoint& v) { return {{"v1", cjson(v.v1)}, {"v2", cjson(v.v2)}}; }

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw Error(ErrorKind::ConfigError, "cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

// ---------------------------------------------------------------- config

Complex read_complex(const json& j, const char* what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw Error(ErrorKind::ConfigError, std::string("'") + what + "' must be a number or [re, im]");
}

Complex read_complex(const json& j, const char* key, Complex fallback) {
    return j.contains(key) ? read_complex(j.at(key), key) : fallback;
}

enum class SystemKind { PiiiPrime, Pii };

struct RunConfig {
    SystemKind system = SystemKind::PiiiPrime;
    ParameterPoint params{};
    PiiParameter pii_params{};
    CanonicalState initial{1.0, 0.5, {0.3, 0.4}};
    Complex t_end = 2.0;
    IntegrationConfig integrator{};
    std::vector<CornerLabel> corners{all_corners.begin(), all_corners.end()};
    std::optional<GeneratorWord> word;
    std::vector<std::string> identities;
    std::map<std::string, double> tolerances{{"hsum", 1e-8},      {"psum", 1e-10}, {"tau", 1e-8},
                                             {"roundtrip", 1e-12}, {"weyl", 1e-8},  {"chain", 1e-6},
                                             {"pii", 1e-7},       {"transport", 1e-8}};
    FormulaTamper corrupt{};
    // PII window used by the "pii" identity
    CanonicalState pii_initial{0.0, {0.3, 0.1}, {0.8, -0.2}};
    Complex pii_t_end = 1.5;
};

const std::vector<std::string> known_identities{"transport", "hsum", "psum", "tau", "roundtrip", "weyl", "chain", "pii"};

CanonicalState read_state(const json& j, CanonicalState fallback) {
    if (!j.is_object()) throw Error(ErrorKind::ConfigError, "initial state must be an object {t, q, p}");
    return {read_complex(j, "t", fallback.t), read_complex(j, "q", fallback.q), read_complex(j, "p", fallback.p)};
}

enum class TolTarget { Integrator, Identities };

RunConfig load_config(const std::string& path, std::optional<double> tol_override,
                      TolTarget target = TolTarget::Identities) {
    RunConfig cfg;
    if (path.empty()) throw Error(ErrorKind::ConfigError, "--config is required");
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ConfigError, "cannot read config '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ConfigError, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorKind::ConfigError, "config must be a JSON object");
    try {
        const std::string sys = j.value("system", std::string("PIII'"));
        if (sys == "PIII'" || sys == "PIII_prime" || sys == "piii") cfg.system = SystemKind::PiiiPrime;
        else if (sys == "PII" || sys == "pii") cfg.system = SystemKind::Pii;
        else throw Error(ErrorKind::ConfigError, "unknown system '" + sys + "'");

        if (cfg.system == SystemKind::Pii) cfg.initial = {0.0, 0.0, 0.0};
        if (j.contains("params")) {
            const auto& p = j.at("params");
            if (cfg.system == SystemKind::Pii) cfg.pii_params = {read_complex(p, "v1", 0.0)};
            else cfg.params = {read_complex(p, "v1", 0.0), read_complex(p, "v2", 0.0)};
        }
        if (j.contains("initial")) cfg.initial = read_state(j.at("initial"), cfg.initial);
        cfg.t_end = read_complex(j, "t_end", cfg.system == SystemKind::Pii ? Complex(1.0) : cfg.t_end);
        if (j.contains("integrator")) {
            const auto& ij = j.at("integrator");
            cfg.integrator.rel_tol = ij.value("rel_tol", cfg.integrator.rel_tol);
            cfg.integrator.abs_tol = ij.value("abs_tol", cfg.integrator.abs_tol);
            cfg.integrator.max_step = ij.value("max_step", cfg.integrator.max_step);
            cfg.integrator.pole_guard = ij.value("pole_guard", cfg.integrator.pole_guard);
            cfg.integrator.max_steps = ij.value("max_steps", cfg.integrator.max_steps);
        }
        if (j.contains("corners")) {
            cfg.corners.clear();
            for (const auto& c : j.at("corners")) cfg.corners.push_back(parse_corner(c.get<std::string>()));
        }
        if (j.contains("word")) cfg.word = GeneratorWord::parse(j.at("word").get<std::string>());
        if (j.contains("identities")) {
            for (const auto& id : j.at("identities")) {
                const auto name = id.get<std::string>();
                if (std::find(known_identities.begin(), known_identities.end(), name) == known_identities.end())
                    throw Error(ErrorKind::ConfigError, "unknown identity '" + name + "'");
                cfg.identities.push_back(name);
            }
        }
        if (j.contains("tolerances"))
            for (const auto& [k, v] : j.at("tolerances").items()) cfg.tolerances[k] = v.get<double>();
        if (j.contains("tolerance"))
            for (auto& [k, v] : cfg.tolerances) v = j.at("tolerance").get<double>();
        if (j.contains("corrupt")) {
            const auto& c = j.at("corrupt");
            cfg.corrupt.corner = parse_corner(c.at("corner").get<std::string>());
            cfg.corrupt.term = c.at("term").get<int>();
            if (cfg.corrupt.term < 0 || cfg.corrupt.term >= corner_term_count(*cfg.corrupt.corner))
                throw Error(ErrorKind::ConfigError, "corrupt.term out of range for corner " +
                                                        std::string(to_string(*cfg.corrupt.corner)));
        }
        if (j.contains("pii")) {
            const auto& pj = j.at("pii");
            if (pj.contains("initial")) cfg.pii_initial = read_state(pj.at("initial"), cfg.pii_initial);
            cfg.pii_t_end = read_complex(pj, "t_end", cfg.pii_t_end);
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ConfigError, std::string("config: ") + e.what());
    }
    if (tol_override) {
        if (target == TolTarget::Integrator) cfg.integrator.rel_tol = *tol_override;
        else
            for (auto& [k, v] : cfg.tolerances) v = *tol_override;
    }
    return cfg;
}

// ---------------------------------------------------------------- integrate

int cmd_integrate(const RunConfig& cfg, Output& out) {
    // integrate first so a failed run leaves no partial CSV
    auto write = [&](const auto& tr) {
        auto& os = out.stream();
        os << "t_re,t_im,q_re,q_im,p_re,p_im,H_re,H_im\n";
        using System = typename std::decay_t<decltype(tr)>::system_type;
        for (const auto& n : tr.nodes()) {
            const Complex h = System::hamiltonian(tr.params(), n);
            os << fmt(n.t.real()) << ',' << fmt(n.t.imag()) << ',' << fmt(n.q.real()) << ',' << fmt(n.q.imag())
               << ',' << fmt(n.p.real()) << ',' << fmt(n.p.imag()) << ',' << fmt(h.real()) << ',' << fmt(h.imag())
               << '\n';
        }
    };
    if (cfg.system == SystemKind::Pii) write(integrate(cfg.pii_params, cfg.initial, cfg.t_end, cfg.integrator));
    else write(integrate(cfg.params, cfg.initial, cfg.t_end, cfg.integrator));
    return exit_ok;
}

// ---------------------------------------------------------------- transform

int cmd_transform(const RunConfig& cfg, Output& out) {
    json j;
    j["source"] = {{"state", state_json(cfg.initial)}};
    if (cfg.system == SystemKind::Pii) {
        if (!(cfg.pii_params == PiiParameter{0.0}))
            throw Error(ErrorKind::InvalidParams, "the Gambier map starts from v1 = 0");
        j["source"]["v1"] = cjson(cfg.pii_params.v1);
        j["images"] = json::array({{{"map", "gambier"}, {"v1", cjson(0.5)}, {"state", state_json(gambier_forward(cfg.initial))}}});
    } else if (cfg.word) {
        j["source"]["params"] = params_json(cfg.params);
        const auto r = apply_word(*cfg.word, cfg.params, cfg.initial);
        j["images"] = json::array({{{"map", cfg.word->str()},
                                    {"params", params_json(r.params_out)},
                                    {"t_sign", r.t_sign},
                                    {"state", state_json(r.state_out)}}});
    } else {
        j["source"]["params"] = params_json(cfg.params);
        const auto bs = branch_init(cfg.initial);
        j["source"]["branches"] = {{"sqrt_t", cjson(bs.sqrt_t)}, {"sqrt_p", cjson(bs.sqrt_p)}, {"sqrt_pm1", cjson(bs.sqrt_pm1)}};
        j["images"] = json::array();
        for (auto c : cfg.corners) {
            const auto img = to_corner(c, bs, cfg.params, cfg.corrupt);
            j["images"].push_back({{"map", std::string(to_string(c))},
                                   {"params", params_json(corner_params(c))},
                                   {"state", state_json(img)},
                                   {"H", cjson(hamiltonian(img, corner_params(c)))}});
        }
    }
    out.stream() << j.dump(2) << '\n';
    return exit_ok;
}

// ---------------------------------------------------------------- verify

struct Check {
    std::string name;
    double residual = 0.0;
    double drift = 0.0;
    json extra = json::object();
};

double state_gap(const CanonicalState& a, const CanonicalState& b) {
    return std::max({std::abs(a.t - b.t), std::abs(a.q - b.q), std::abs(a.p - b.p)});
}

Check run_identity(const std::string& name, const RunConfig& cfg, const Trajectory<PiiiPrimeSystem>* tr) {
    Check c{name};
    const auto& tamper = cfg.corrupt;
    if (name == "pii") {
        auto ptr = integrate(PiiParameter{0.0}, cfg.pii_initial, cfg.pii_t_end, cfg.integrator);
        auto rep = pii_identities_check(ptr);
        double roundtrip = 0.0;
        for (const auto& n : ptr.nodes())
            if (std::abs(n.p) > 1e-8) roundtrip = std::max(roundtrip, state_gap(gambier_inverse(gambier_forward(n)), n));
        c.residual = std::max(rep.max_residual, roundtrip);
        c.extra = {{"relations", rep.max_residual}, {"gambier_roundtrip", roundtrip}, {"nodes", rep.nodes}};
        return c;
    }
    if (name == "weyl") {
        double involution = 0.0, pushforward = 0.0;
        for (const auto& n : tr->nodes()) {
            for (auto g : {Generator::s0, Generator::s1, Generator::s2}) {
                auto once = apply_generator(g, tr->params(), n);
                auto twice = apply_generator(g, once.params_out, once.state_out);
                involution = std::max(involution, state_gap(twice.state_out, n) / (1.0 + std::abs(n.q) + std::abs(n.p)));
            }
            pushforward = std::max(pushforward, pushforward_check(word_T1(), tr->params(), n));
        }
        const auto v = tr->params();
        const bool commute = act_on_params(word_T1() * word_T2(), v) == act_on_params(word_T2() * word_T1(), v);
        const auto t1 = act_on_params(word_T1(), v), t2 = act_on_params(word_T2(), v);
        const bool shifts = t1 == ParameterPoint{v.v1 + 1.0, v.v2 + 1.0} && t2 == ParameterPoint{v.v1 + 1.0, v.v2 - 1.0};
        c.residual = std::max(involution, pushforward);
        if (!commute || !shifts) c.residual = std::numeric_limits<double>::infinity();
        c.extra = {{"involution", involution}, {"pushforward_T1", pushforward}, {"T1_T2_commute", commute},
                   {"shift_actions", shifts}};
        return c;
    }
    require_origin(tr->params());
    if (name == "transport") {
        const auto branches = branch_continue(*tr);
        json per = json::object();
        for (auto k : all_corners) {
            double worst = 0.0;
            for (const auto& bs : branches) worst = std::max(worst, corner_transport_residual(k, bs, tamper));
            per[std::string(to_string(k))] = worst;
            c.residual = std::max(c.residual, worst);
        }
        c.extra = per;
    } else if (name == "hsum") {
        const auto rep = hamiltonian_sum_check(*tr, false, tamper);
        c.residual = rep.max_residual;
        json realized = json::object();
        for (std::size_t k = 0; k < 4; ++k) {
            const auto& m = rep.branches->realized[k];
            realized[std::string(to_string(all_corners[k]))] = m ? json(std::string(to_string(*m))) : json(nullptr);
        }
        c.extra = {{"closed_form", hamiltonian_sum_closed_form_check(*tr).max_residual}, {"branch_realizes", realized}};
    } else if (name == "psum") {
        c.residual = momentum_sum_check(*tr, false, tamper).max_residual;
    } else if (name == "tau") {
        const auto rep = tau_product_check(*tr, false, tamper);
        c.residual = rep.max_residual;
        c.drift = rep.drift;
    } else if (name == "roundtrip") {
        for (const auto& bs : branch_continue(*tr))
            c.residual = std::max(c.residual, state_gap(from_w(to_corner(CornerLabel::W, bs, {}, tamper)), bs.base));
    } else if (name == "chain") {
        const auto rep = verify_proof_chain(*tr);
        c.residual = rep.max_stage_residual();
        c.extra = {{"pv_dual", rep.pv_dual},
                   {"pv", rep.pv},
                   {"piii_u", rep.piii_u},
                   {"piii_v", rep.piii_v},
                   {"piii_prime_w", rep.piii_prime_w},
                   {"piii_prime_final", rep.piii_prime_final},
                   {"final_params", params_json(rep.final_params)}};
    }
    return c;
}

int cmd_verify(const RunConfig& cfg, Output& out) {
    if (cfg.system != SystemKind::PiiiPrime)
        throw Error(ErrorKind::ConfigError, "verify runs on a PIII' window; PII settings go under \"pii\"");
    std::vector<std::string> selected = cfg.identities;
    if (selected.empty()) selected = known_identities;

    std::optional<Trajectory<PiiiPrimeSystem>> tr;
    const bool needs_window = std::any_of(selected.begin(), selected.end(), [](const auto& s) { return s != "pii"; });
    if (needs_window) tr.emplace(integrate(cfg.params, cfg.initial, cfg.t_end, cfg.integrator));

    json report;
    report["params"] = params_json(cfg.params);
    report["window"] = {{"t_start", cjson(cfg.initial.t)}, {"t_end", cjson(cfg.t_end)}, {"nodes", tr ? tr->size() : 0}};
    if (cfg.corrupt.corner)
        report["corrupt"] = {{"corner", std::string(to_string(*cfg.corrupt.corner))}, {"term", cfg.corrupt.term}};
    report["identities"] = json::array();
    bool all = true;
    for (const auto& name : selected) {
        const Check c = run_identity(name, cfg, tr ? &*tr : nullptr);
        const double tol = cfg.tolerances.at(name);
        const bool ok = c.residual < tol && c.drift < tol;
        all = all && ok;
        json e = {{"name", name}, {"max_residual", c.residual}, {"tolerance", tol}, {"passed", ok}};
        if (name == "tau") e["drift"] = c.drift;
        if (!c.extra.empty()) e["details"] = c.extra;
        report["identities"].push_back(e);
    }
    report["passed"] = all;
    out.stream() << report.dump(2) << '\n';
    return all ? exit_ok : exit_failed;
}

// ---------------------------------------------------------------- classical

json coefficients_json(const Polynomial& p) {
    json a = json::array();
    for (const auto& c : p.coefficients()) a.push_back(json::array({c.real().str(), c.imag().str()}));
    return a;
}

json rational_function_json(const RationalFunction& f) {
    return {{"numerator", coefficients_json(f.numerator())}, {"denominator", coefficients_json(f.denominator())}};
}

int cmd_classify(double v1, double v2, Output& out) {
    const auto c = classify(ParameterPoint{v1, v2});
    json j = {{"class", std::string(to_string(c.cls))}, {"mixed_parity", c.mixed_parity},
              {"params", {{"v1", v1}, {"v2", v2}}}};
    out.stream() << j.dump() << '\n';
    return exit_ok;
}

int cmd_rational(int k, const std::string& shift, Output& out) {
    Shift fwd, bwd;
    if (shift == "T1") fwd = Shift::T1, bwd = Shift::T1_inverse;
    else if (shift == "T2") fwd = Shift::T2, bwd = Shift::T2_inverse;
    else throw Error(ErrorKind::ConfigError, "--shift must be T1 or T2");
    auto r = rational_seed();
    for (int n = 0; n < std::abs(k); ++n) r = rational_step(r, k > 0 ? fwd : bwd);
    const bool exact = is_exact_solution(r);
    json j = {{"variable", "s = sqrt(t)"},
              {"shift", shift},
              {"k", k},
              {"params", params_json(r.params)},
              {"q", rational_function_json(r.q)},
              {"p", rational_function_json(r.p)},
              {"residual_exactly_zero", exact}};
    out.stream() << j.dump(2) << '\n';
    return exact ? exit_ok : exit_failed;
}

int cmd_bessel_tau(const BesselTauSpec& spec, const std::vector<double>& ts, Output& out) {
    auto& os = out.stream();
    os << "t_re,t_im,tau_re,tau_im\n";
    for (double t : ts) {
        const Complex v = bessel_tau(spec, t);
        os << fmt(t) << ',' << fmt(0.0) << ',' << fmt(v.real()) << ',' << fmt(v.imag()) << '\n';
    }
    return exit_ok;
}

int report_error(const std::string& kind, const std::string& message, int index = -1) {
    json e = {{"error", {{"kind", kind}, {"message", message}}}};
    if (index >= 0) e["error"]["index"] = index;
    std::cerr << e.dump() << '\n';
    return exit_error;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Painleve III' corner transformations, identities and classical solutions"};
    app.require_subcommand(1);

    std::string config, out_path;
    std::optional<double> tol;
    auto add_common = [&](CLI::App* sub, bool with_tol) {
        sub->add_option("--config", config, "JSON run configuration")->required();
        sub->add_option("--out", out_path, "output file (default stdout)");
        if (with_tol) sub->add_option("--tol", tol, "relative step tolerance (integrate) or identity tolerance (verify)");
    };
    auto* integrate_cmd = app.add_subcommand("integrate", "integrate and write nodes as CSV");
    add_common(integrate_cmd, true);
    auto* transform_cmd = app.add_subcommand("transform", "map the initial state to corners, by a Weyl word, or by Gambier");
    add_common(transform_cmd, false);
    auto* verify_cmd = app.add_subcommand("verify", "check identities along a window");
    add_common(verify_cmd, true);

    double v1 = 0.0, v2 = 0.0;
    auto* classify_cmd = app.add_subcommand("classify", "classify a parameter point");
    classify_cmd->add_option("v1", v1)->required();
    classify_cmd->add_option("v2", v2)->required();
    classify_cmd->add_option("--out", out_path);

    int k = 0;
    std::string shift = "T1";
    auto* rational_cmd = app.add_subcommand("rational", "exact rational solution T^k(seed)");
    rational_cmd->add_option("k", k)->required();
    rational_cmd->add_option("--shift", shift, "T1 or T2");
    rational_cmd->add_option("--out", out_path);

    BesselTauSpec spec;
    double nu = 0.0, c = 0.0;
    std::string kind = "IK";
    std::vector<double> ts;
    auto* tau_cmd = app.add_subcommand("bessel-tau", "Bessel Toeplitz determinant on a t-grid");
    tau_cmd->add_option("--n", spec.n)->required();
    tau_cmd->add_option("--nu", nu);
    tau_cmd->add_option("--c", c);
    tau_cmd->add_option("--kind", kind)->check(CLI::IsMember({"IK", "JY"}));
    tau_cmd->add_option("--t", ts)->required();
    tau_cmd->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return report_error("ConfigError", e.what());
    }

    try {
        Output out(out_path);
        if (*integrate_cmd) return cmd_integrate(load_config(config, tol, TolTarget::Integrator), out);
        if (*transform_cmd) return cmd_transform(load_config(config, std::nullopt), out);
        if (*verify_cmd) return cmd_verify(load_config(config, tol), out);
        if (*classify_cmd) return cmd_classify(v1, v2, out);
        if (*rational_cmd) return cmd_rational(k, shift, out);
        if (*tau_cmd) {
            spec.nu = nu;
            spec.c = c;
            spec.kind = kind == "JY" ? BesselKind::JY : BesselKind::IK;
            return cmd_bessel_tau(spec, ts, out);
        }
    } catch (const Error& e) {
        return report_error(std::string(to_string(e.kind())), e.what(), e.index());
    } catch (const std::exception& e) {
        return report_error("InternalError", e.what());
    }
    return exit_error;
}
