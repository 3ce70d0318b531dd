#include "ctrlsyn/design_doc.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "ctrlsyn/errors.hpp"

namespace ctrlsyn::doc {

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

const json& require(const json& j, const std::string& path, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError(path + "." + key + ": required field is missing");
    }
    return j.at(key);
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) {
        throw ParseError(path + ": expected a number");
    }
    return j.get<double>();
}

std::vector<double> as_coeffs(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) {
        throw ParseError(path + ": expected a non-empty array of ascending coefficients");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(as_number(j.at(i), path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

TransferFunction parse_plant(const json& j, const std::string& path) {
    const auto num = as_coeffs(require(j, path, "num"), path + ".num");
    const auto den = as_coeffs(require(j, path, "den"), path + ".den");
    double delay = 0.0;
    if (j.contains("delay")) {
        delay = as_number(j.at("delay"), path + ".delay");
        if (delay < 0.0) throw ParseError(path + ".delay: must be >= 0");
    }
    try {
        return TransferFunction(Polynomial(num), Polynomial(den), delay);
    } catch (const Error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

json plant_to_json(const TransferFunction& tf) {
    json j;
    j["num"] = tf.num.coeffs();
    j["den"] = tf.den.coeffs();
    if (tf.delay != 0.0) j["delay"] = tf.delay;
    return j;
}

SteadyStateSpec parse_steady_state(const json& j, const std::string& path) {
    SteadyStateSpec s;
    const std::string kind = require(j, path, "kind").get<std::string>();
    if (kind == "error-constant") {
        s.kind = SteadyStateKind::ErrorConstant;
    } else if (kind == "error-value") {
        s.kind = SteadyStateKind::ErrorValue;
    } else {
        throw ParseError(path + ".kind: expected \"error-constant\" or \"error-value\"");
    }
    s.order = require(j, path, "order").get<int>();
    if (s.order < 0 || s.order > 2) {
        throw ParseError(path + ".order: expected 0, 1 or 2");
    }
    s.value = as_number(require(j, path, "value"), path + ".value");
    if (s.value <= 0.0) throw ParseError(path + ".value: must be positive");
    return s;
}

SpecVariant parse_spec(const json& j, const std::string& path) {
    if (!j.is_object()) throw ParseError(path + ": expected an object");
    int have = 0;
    for (const char* k : {"pm_wg", "gm_wp", "pm_wg_gm"}) have += j.contains(k) ? 1 : 0;
    if (have != 1) {
        throw ParseError(path + ": exactly one of pm_wg, gm_wp, pm_wg_gm is required");
    }
    if (j.contains("pm_wg")) {
        const json& s = j.at("pm_wg");
        PmWgSpec v;
        v.pm_deg = as_number(require(s, path + ".pm_wg", "pm_deg"), path + ".pm_wg.pm_deg");
        v.omega_g = as_number(require(s, path + ".pm_wg", "omega_g"), path + ".pm_wg.omega_g");
        if (v.omega_g <= 0.0) throw ParseError(path + ".pm_wg.omega_g: must be positive");
        return v;
    }
    if (j.contains("gm_wp")) {
        const json& s = j.at("gm_wp");
        GmWpSpec v;
        v.gm = as_number(require(s, path + ".gm_wp", "gm"), path + ".gm_wp.gm");
        v.omega_p = as_number(require(s, path + ".gm_wp", "omega_p"), path + ".gm_wp.omega_p");
        if (v.gm <= 1.0) throw ParseError(path + ".gm_wp.gm: must exceed 1");
        if (v.omega_p <= 0.0) throw ParseError(path + ".gm_wp.omega_p: must be positive");
        return v;
    }
    const json& s = j.at("pm_wg_gm");
    PmWgGmSpec v;
    v.pm_deg = as_number(require(s, path + ".pm_wg_gm", "pm_deg"), path + ".pm_wg_gm.pm_deg");
    v.omega_g = as_number(require(s, path + ".pm_wg_gm", "omega_g"), path + ".pm_wg_gm.omega_g");
    v.gm = as_number(require(s, path + ".pm_wg_gm", "gm"), path + ".pm_wg_gm.gm");
    if (v.omega_g <= 0.0) throw ParseError(path + ".pm_wg_gm.omega_g: must be positive");
    if (v.gm <= 1.0) throw ParseError(path + ".pm_wg_gm.gm: must exceed 1");
    return v;
}

CompensatorChoice parse_compensator(const json& j, const std::string& path) {
    CompensatorChoice c;
    if (!j.is_object()) throw ParseError(path + ": expected an object");
    const std::string type = require(j, path, "type").get<std::string>();
    auto opt = [&](const char* key) -> std::optional<double> {
        if (!j.contains(key)) return std::nullopt;
        return as_number(j.at(key), path + "." + key);
    };
    if (type == "auto") {
        c.type = CompensatorType::Auto;
    } else if (type == "lead") {
        c.type = CompensatorType::Lead;
    } else if (type == "lag") {
        c.type = CompensatorType::Lag;
    } else if (type == "leadlag") {
        c.type = CompensatorType::LeadLag;
    } else if (type == "pid_sigma") {
        c.type = CompensatorType::PidSigma;
        c.sigma = opt("sigma");
        if (!c.sigma) throw ParseError(path + ".sigma: required for pid_sigma");
    } else if (type == "pid_gm") {
        c.type = CompensatorType::PidGm;
    } else if (type == "pid_ki") {
        c.type = CompensatorType::PidKi;
        c.ki = opt("ki");
    } else if (type == "pd") {
        c.type = CompensatorType::Pd;
    } else if (type == "pi") {
        c.type = CompensatorType::Pi;
    } else if (type == "pid_fix_ti") {
        c.type = CompensatorType::PidFixTi;
        c.ti = opt("ti");
        if (!c.ti) throw ParseError(path + ".ti: required for pid_fix_ti");
    } else if (type == "pid_fix_td") {
        c.type = CompensatorType::PidFixTd;
        c.td = opt("td");
        if (!c.td) throw ParseError(path + ".td: required for pid_fix_td");
    } else {
        throw ParseError(path + ".type: unknown compensator type \"" + type + "\"");
    }
    return c;
}

const char* compensator_type_name(CompensatorType t) {
    switch (t) {
        case CompensatorType::Auto: return "auto";
        case CompensatorType::Lead: return "lead";
        case CompensatorType::Lag: return "lag";
        case CompensatorType::LeadLag: return "leadlag";
        case CompensatorType::PidSigma: return "pid_sigma";
        case CompensatorType::PidGm: return "pid_gm";
        case CompensatorType::PidKi: return "pid_ki";
        case CompensatorType::Pd: return "pd";
        case CompensatorType::Pi: return "pi";
        case CompensatorType::PidFixTi: return "pid_fix_ti";
        case CompensatorType::PidFixTd: return "pid_fix_td";
    }
    return "?";
}

std::string fmt_g(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

}  // namespace

DesignRequest parse_request(const json& j) {
    if (!j.is_object()) throw ParseError("request: expected a JSON object");
    DesignRequest r;
    r.plant = parse_plant(require(j, "request", "plant"), "plant");
    if (j.contains("steady_state")) {
        r.steady_state = parse_steady_state(j.at("steady_state"), "steady_state");
    }
    r.spec = parse_spec(require(j, "request", "spec"), "spec");
    if (j.contains("compensator")) {
        r.compensator = parse_compensator(j.at("compensator"), "compensator");
    }
    return r;
}

json serialize_request(const DesignRequest& r) {
    json j;
    j["plant"] = plant_to_json(r.plant);
    if (r.steady_state) {
        j["steady_state"] = {
            {"kind", r.steady_state->kind == SteadyStateKind::ErrorConstant ? "error-constant"
                                                                            : "error-value"},
            {"order", r.steady_state->order},
            {"value", r.steady_state->value},
        };
    }
    json spec;
    if (const auto* s = std::get_if<PmWgSpec>(&r.spec)) {
        spec["pm_wg"] = {{"pm_deg", s->pm_deg}, {"omega_g", s->omega_g}};
    } else if (const auto* s = std::get_if<GmWpSpec>(&r.spec)) {
        spec["gm_wp"] = {{"gm", s->gm}, {"omega_p", s->omega_p}};
    } else if (const auto* s = std::get_if<PmWgGmSpec>(&r.spec)) {
        spec["pm_wg_gm"] = {{"pm_deg", s->pm_deg}, {"omega_g", s->omega_g}, {"gm", s->gm}};
    }
    j["spec"] = spec;
    json comp;
    comp["type"] = compensator_type_name(r.compensator.type);
    if (r.compensator.sigma) comp["sigma"] = *r.compensator.sigma;
    if (r.compensator.ki) comp["ki"] = *r.compensator.ki;
    if (r.compensator.ti) comp["ti"] = *r.compensator.ti;
    if (r.compensator.td) comp["td"] = *r.compensator.td;
    j["compensator"] = comp;
    return j;
}

namespace {

json params_to_json(const CompensatorParams& p) {
    json j;
    if (const auto* v = std::get_if<LeadParams>(&p)) {
        j = {{"type", "lead"}, {"gain", v->gain}, {"alpha", v->alpha}, {"tau", v->tau}};
    } else if (const auto* v = std::get_if<LagParams>(&p)) {
        j = {{"type", "lag"}, {"gain", v->gain}, {"alpha", v->alpha}, {"tau", v->tau}};
    } else if (const auto* v = std::get_if<LeadLagRealParams>(&p)) {
        j = {{"type", "leadlag"},
             {"gain", v->gain},
             {"alpha", v->alpha},
             {"tau1", v->tau1},
             {"tau2", v->tau2}};
    } else if (const auto* v = std::get_if<LeadLagComplexParams>(&p)) {
        j = {{"type", "leadlag_complex"},
             {"gain", v->gain},
             {"zeta1", v->zeta1},
             {"zeta2", v->zeta2},
             {"omega_n", v->omega_n}};
    } else if (const auto* v = std::get_if<PidParams>(&p)) {
        j = {{"type", "pid"}, {"kp", v->kp}, {"ti", v->ti}, {"td", v->td}, {"ki", v->ki()}};
    } else if (const auto* v = std::get_if<PiParams>(&p)) {
        j = {{"type", "pi"}, {"kp", v->kp}, {"ti", v->ti}};
    } else if (const auto* v = std::get_if<PdParams>(&p)) {
        j = {{"type", "pd"}, {"kp", v->kp}, {"td", v->td}};
    }
    return j;
}

json targets_to_json(const DesignTargets& t) {
    return {{"M", t.M}, {"phi_deg", t.phi * kDegPerRad}, {"omega", t.omega}};
}

json feasibility_flags_to_json(const FeasibilityReport& f) {
    return {{"lead", f.lead},
            {"lag", f.lag},
            {"leadlag_z1_gt_z2", f.leadlag_z1_gt_z2},
            {"leadlag_z2_gt_z1", f.leadlag_z2_gt_z1},
            {"pid", f.pid},
            {"pd", f.pd},
            {"pi", f.pi},
            {"notes", f.notes}};
}

// Classifier-matching machine-readable reasons for the exit-2 path.
std::string family_reason(CompensatorType t) {
    switch (t) {
        case CompensatorType::Lead: return "no solutions with a Lead network";
        case CompensatorType::Lag: return "no solutions with a Lag network";
        case CompensatorType::LeadLag: return "no solutions with a Lead-Lag network";
        case CompensatorType::Pd: return "no solutions with a PD controller";
        case CompensatorType::Pi: return "no solutions with a PI controller";
        default: return "no solutions with a PID controller";
    }
}

struct DesignContext {
    const DesignRequest& req;
    TransferFunction gbar;  // K * G
    double dc_gain = 1.0;
    double pm = 0.0;       // radians (pm_wg / pm_wg_gm)
    double omega_g = 0.0;  // pm specs
    double gm = 0.0;       // gm specs
    double omega_p = 0.0;  // gm_wp
};

DesignTargets direct_targets(const DesignContext& ctx) {
    if (std::holds_alternative<GmWpSpec>(ctx.req.spec)) {
        return targets_at_phase_crossover(ctx.gbar, ctx.omega_p, ctx.gm);
    }
    return targets_at_gain_crossover(ctx.gbar, ctx.omega_g, ctx.pm);
}

// Default K_i when the steady-state block constrains K_p/T_i: the PID pole
// at the origin raises the plant type by one.
double ki_from_steady_state(const TransferFunction& plant, const SteadyStateSpec& spec) {
    TransferFunction raised(plant.num, plant.den * Polynomial{0.0, 1.0}, plant.delay);
    return dc_gain_from_spec(raised, spec);
}

// Attach the achievable phase-margin interval (lead/lag, pm_wg only).
void attach_pm_range(DesignReport& rep, const DesignContext& ctx, CompensatorType t) {
    if (!std::holds_alternative<PmWgSpec>(ctx.req.spec) &&
        !std::holds_alternative<PmWgGmSpec>(ctx.req.spec)) {
        return;
    }
    try {
        if (t == CompensatorType::Lead) {
            rep.achievable_pm_range = pm_range_lead(ctx.gbar, ctx.omega_g);
        } else if (t == CompensatorType::Lag) {
            rep.achievable_pm_range = pm_range_lag(ctx.gbar, ctx.omega_g);
        }
    } catch (const Error&) {
        // interval undefined on this side of the unit circle
    }
}

std::string pm_range_text(const PmRange& r) {
    std::ostringstream os;
    os << "achievable phase margins: (" << fmt_g(r.pm_min * kDegPerRad, 7) << " deg, "
       << fmt_g(r.pm_max * kDegPerRad, 7) << " deg)";
    return os.str();
}

// Design one concrete family; fills chosen/parameters/candidates.
void design_one(DesignReport& rep, DesignContext& ctx, CompensatorType type,
                const CompensatorChoice& choice) {
    switch (type) {
        case CompensatorType::Lead: {
            LeadParams p = design_lead(rep.targets);
            p.gain = ctx.dc_gain;
            rep.parameters = p;
            rep.chosen = "lead";
            return;
        }
        case CompensatorType::Lag: {
            LagParams p = design_lag(rep.targets);
            p.gain = ctx.dc_gain;
            rep.parameters = p;
            rep.chosen = "lag";
            return;
        }
        case CompensatorType::LeadLag: {
            LeadLagDesign d = design_leadlag(ctx.gbar, ctx.omega_g, ctx.pm, ctx.gm);
            rep.search = d.search;
            rep.has_search = true;
            for (const LeadLagCandidate& c : d.candidates) {
                DesignCandidate dc;
                LeadLagComplexParams cp = c.complex_form;
                cp.gain = ctx.dc_gain;
                dc.params = cp;
                dc.omega_p = c.omega_p;
                dc.is_complex_form = true;
                dc.real_forms = c.real_forms;
                for (RealFormResult& rf : dc.real_forms) rf.params.gain = ctx.dc_gain;
                rep.candidates.push_back(std::move(dc));
            }
            rep.parameters = std::get<LeadLagComplexParams>(rep.candidates.front().params);
            rep.chosen = "leadlag";
            return;
        }
        case CompensatorType::PidSigma: {
            rep.parameters = design_pid_sigma(rep.targets, *choice.sigma);
            rep.chosen = "pid_sigma";
            return;
        }
        case CompensatorType::PidFixTi: {
            rep.parameters = design_pid_fix_ti(rep.targets, *choice.ti);
            rep.chosen = "pid_fix_ti";
            return;
        }
        case CompensatorType::PidFixTd: {
            rep.parameters = design_pid_fix_td(rep.targets, *choice.td);
            rep.chosen = "pid_fix_td";
            return;
        }
        case CompensatorType::PidGm: {
            const auto cands = design_pid_gm(ctx.gbar, ctx.omega_g, ctx.pm, ctx.gm);
            for (const PidGmCandidate& c : cands) {
                DesignCandidate dc;
                dc.params = c.params;
                dc.omega_p = c.omega_p;
                rep.candidates.push_back(std::move(dc));
            }
            rep.parameters = cands.front().params;
            rep.chosen = "pid_gm";
            return;
        }
        case CompensatorType::PidKi: {
            double ki;
            if (choice.ki) {
                ki = *choice.ki;
            } else if (ctx.req.steady_state) {
                ki = ki_from_steady_state(ctx.req.plant, *ctx.req.steady_state);
            } else {
                throw ParseError("compensator.ki: required (directly or via steady_state)");
            }
            rep.targets = pid_targets_constrained_ki(ctx.req.plant, ctx.omega_g, ctx.pm, ki);
            rep.feasibility = classify(rep.targets);
            rep.parameters = design_pid_ki(rep.targets, ki);
            rep.chosen = "pid_ki";
            return;
        }
        case CompensatorType::Pd: {
            rep.parameters = design_pd(rep.targets);
            rep.chosen = "pd";
            return;
        }
        case CompensatorType::Pi: {
            rep.parameters = design_pi(rep.targets);
            rep.chosen = "pi";
            return;
        }
        case CompensatorType::Auto:
            break;
    }
    throw Error("design_one: unreachable");
}

// Verify the requested margins with the measurement oracle; 1e-6 reporting
// tolerance (relative in frequency and gain, radians in phase).
void verify_report(DesignReport& rep, const DesignContext& ctx) {
    const TransferFunction loop = series(controller_tf(rep.parameters), ctx.req.plant);
    rep.verified = measure_margins(loop);

    auto has_near = [](const std::vector<double>& xs, double x) {
        for (double v : xs) {
            if (std::abs(v - x) <= 1e-6 * x) return true;
        }
        return false;
    };
    auto fail = [](const std::string& what) {
        throw Error("verification: designed loop does not reproduce the request (" + what + ")");
    };

    if (const auto* s = std::get_if<PmWgSpec>(&ctx.req.spec)) {
        if (!has_near(rep.verified.omega_g_list, s->omega_g)) fail("omega_g not a crossover");
        const Complex l = tf_eval(loop, s->omega_g);
        if (std::abs(wrap_angle(std::numbers::pi + std::arg(l)) - ctx.pm) > 1e-6) {
            fail("phase margin at omega_g");
        }
        if (std::abs(std::abs(l) - 1.0) > 1e-6) fail("|L(j omega_g)| != 1");
    } else if (const auto* s = std::get_if<GmWpSpec>(&ctx.req.spec)) {
        if (!has_near(rep.verified.omega_p_list, s->omega_p)) fail("omega_p not a crossover");
        const Complex l = tf_eval(loop, s->omega_p);
        if (std::abs(std::abs(l) - 1.0 / s->gm) > 1e-6 / s->gm) fail("|L(j omega_p)| != 1/GM");
        if (std::abs(wrap_angle(std::numbers::pi + std::arg(l))) > 1e-6) {
            fail("arg L(j omega_p) != -pi");
        }
    } else if (const auto* s = std::get_if<PmWgGmSpec>(&ctx.req.spec)) {
        if (!has_near(rep.verified.omega_g_list, s->omega_g)) fail("omega_g not a crossover");
        const Complex lg = tf_eval(loop, s->omega_g);
        if (std::abs(std::abs(lg) - 1.0) > 1e-6) fail("|L(j omega_g)| != 1");
        if (std::abs(wrap_angle(std::numbers::pi + std::arg(lg)) - ctx.pm) > 1e-6) {
            fail("phase margin at omega_g");
        }
        const double wp =
            rep.candidates.empty() ? 0.0 : rep.candidates.front().omega_p.value_or(0.0);
        if (wp <= 0.0) fail("no phase-crossover candidate recorded");
        const Complex lp = tf_eval(loop, wp);
        if (std::abs(std::abs(lp) - 1.0 / s->gm) > 1e-6 / s->gm) fail("|L(j omega_p)| != 1/GM");
        if (std::abs(wrap_angle(std::numbers::pi + std::arg(lp))) > 1e-6) {
            fail("arg L(j omega_p) != -pi");
        }
    }
}

}  // namespace

DesignReport run_design(const DesignRequest& req) {
    DesignContext ctx{.req = req, .gbar = req.plant};

    const CompensatorType type = req.compensator.type;
    const bool pid_family =
        type == CompensatorType::PidSigma || type == CompensatorType::PidGm ||
        type == CompensatorType::PidKi || type == CompensatorType::Pd ||
        type == CompensatorType::Pi || type == CompensatorType::PidFixTi ||
        type == CompensatorType::PidFixTd;

    if (req.steady_state) {
        if (type == CompensatorType::PidKi) {
            // steady state fixes K_i, not a DC gain
        } else if (pid_family) {
            throw ParseError(
                "steady_state: a controller with a pole at the origin drives this error constant "
                "to infinity; use pid_ki for constrained-K_i designs or drop the block");
        } else {
            ctx.dc_gain = dc_gain_from_spec(req.plant, *req.steady_state);
            ctx.gbar = scale(req.plant, ctx.dc_gain);
        }
    }

    if (const auto* s = std::get_if<PmWgSpec>(&req.spec)) {
        ctx.pm = s->pm_deg / kDegPerRad;
        ctx.omega_g = s->omega_g;
    } else if (const auto* s = std::get_if<GmWpSpec>(&req.spec)) {
        ctx.gm = s->gm;
        ctx.omega_p = s->omega_p;
    } else if (const auto* s = std::get_if<PmWgGmSpec>(&req.spec)) {
        ctx.pm = s->pm_deg / kDegPerRad;
        ctx.omega_g = s->omega_g;
        ctx.gm = s->gm;
    }

    // Spec-variant compatibility.
    const bool three_spec = std::holds_alternative<PmWgGmSpec>(req.spec);
    auto needs = [&](CompensatorType t, bool ok, const char* what) {
        if (type == t && !ok) {
            throw ParseError(std::string("spec: ") + compensator_type_name(t) + " needs " + what);
        }
    };
    needs(CompensatorType::LeadLag, three_spec, "pm_wg_gm");
    needs(CompensatorType::PidGm, three_spec, "pm_wg_gm");
    needs(CompensatorType::PidKi, std::holds_alternative<PmWgSpec>(req.spec), "pm_wg");
    for (CompensatorType t : {CompensatorType::Lead, CompensatorType::Lag, CompensatorType::Pd,
                              CompensatorType::Pi, CompensatorType::PidSigma,
                              CompensatorType::PidFixTi, CompensatorType::PidFixTd}) {
        needs(t, !three_spec, "pm_wg or gm_wp");
    }

    DesignReport rep;
    rep.dc_gain = ctx.dc_gain;
    if (type != CompensatorType::PidKi) {
        rep.targets = direct_targets(ctx);
        rep.feasibility = classify(rep.targets);
    }

    if (type != CompensatorType::Auto) {
        try {
            design_one(rep, ctx, type, req.compensator);
        } catch (const Infeasible& e) {
            std::string msg = family_reason(type) + std::string(": ") + e.what();
            DesignReport probe = rep;
            attach_pm_range(probe, ctx, type);
            if (probe.achievable_pm_range) {
                msg += "; " + pm_range_text(*probe.achievable_pm_range);
            }
            throw Infeasible(e.kind, msg);
        } catch (const NoFeasibleCrossover& e) {
            throw NoFeasibleCrossover(family_reason(type) + std::string(": ") + e.what());
        }
        attach_pm_range(rep, ctx, type);
        verify_report(rep, ctx);
        return rep;
    }

    // auto: simplest feasible structure first.
    std::vector<CompensatorType> order;
    if (std::holds_alternative<PmWgGmSpec>(req.spec)) {
        order = {CompensatorType::LeadLag};
        if (!req.steady_state) order.push_back(CompensatorType::PidGm);
    } else {
        order = {CompensatorType::Lead, CompensatorType::Lag};
        if (!req.steady_state && std::holds_alternative<PmWgSpec>(req.spec)) {
            order.push_back(CompensatorType::Pd);
            order.push_back(CompensatorType::Pi);
            order.push_back(CompensatorType::PidSigma);
        }
    }

    std::string reasons;
    for (CompensatorType t : order) {
        try {
            CompensatorChoice choice = req.compensator;
            if (t == CompensatorType::PidSigma && !choice.sigma) {
                choice.sigma = 0.25;  // boundary of real controller zeros
            }
            design_one(rep, ctx, t, choice);
            attach_pm_range(rep, ctx, t);
            verify_report(rep, ctx);
            return rep;
        } catch (const Infeasible& e) {
            if (!reasons.empty()) reasons += "; ";
            reasons += family_reason(t) + std::string(" (") + e.what() + ")";
        } catch (const NoFeasibleCrossover& e) {
            if (!reasons.empty()) reasons += "; ";
            reasons += family_reason(t) + std::string(" (") + e.what() + ")";
        }
    }
    throw Infeasible(InfeasibleKind::PhaseOutOfRange, "auto selection exhausted: " + reasons);
}

json margins_to_json(const MarginReport& m) {
    json j;
    j["omega_g"] = m.omega_g_list;
    j["omega_p"] = m.omega_p_list;
    if (m.pm) j["pm_deg"] = *m.pm * kDegPerRad;
    if (m.gm) j["gm"] = *m.gm;
    j["well_defined"] = m.well_defined;
    if (!m.notes.empty()) j["notes"] = m.notes;
    return j;
}

json report_to_json(const DesignReport& rep) {
    json j;
    j["status"] = "success";
    j["dc_gain"] = rep.dc_gain;
    j["targets"] = targets_to_json(rep.targets);
    j["feasibility"] = feasibility_flags_to_json(rep.feasibility);
    j["chosen"] = rep.chosen;
    j["parameters"] = params_to_json(rep.parameters);
    j["verified"] = margins_to_json(rep.verified);
    if (rep.achievable_pm_range) {
        j["achievable_pm_range_deg"] = {rep.achievable_pm_range->pm_min * kDegPerRad,
                                        rep.achievable_pm_range->pm_max * kDegPerRad};
    }
    if (!rep.candidates.empty()) {
        json arr = json::array();
        for (const DesignCandidate& c : rep.candidates) {
            json cj;
            cj["parameters"] = params_to_json(c.params);
            if (c.omega_p) cj["omega_p"] = *c.omega_p;
            if (!c.real_forms.empty()) {
                json rf = json::array();
                for (const RealFormResult& r : c.real_forms) {
                    json e = params_to_json(CompensatorParams(r.params));
                    e["alpha_degenerate"] = r.alpha_degenerate;
                    rf.push_back(e);
                }
                cj["real_forms"] = rf;
            }
            arr.push_back(cj);
        }
        j["candidates"] = arr;
    }
    if (rep.has_search) {
        j["search"] = {{"gamma", rep.search.gamma},
                       {"H", rep.search.H},
                       {"omega_p_candidates", rep.search.omega_p_candidates}};
    }
    return j;
}

namespace {

std::string params_to_text(const CompensatorParams& p, int precision) {
    const json j = params_to_json(p);
    std::ostringstream os;
    os << j.at("type").get<std::string>() << ':';
    for (const auto& [key, value] : j.items()) {
        if (key == "type") continue;
        os << ' ' << key << " = "
           << (value.is_number() ? fmt_g(value.get<double>(), precision) : value.dump());
    }
    return os.str();
}

}  // namespace

std::string report_to_text(const DesignReport& rep, int precision) {
    std::ostringstream os;
    auto g = [&](double v) { return fmt_g(v, precision); };
    os << "design: " << rep.chosen << "\n";
    os << "dc gain K: " << g(rep.dc_gain) << "\n";
    os << "targets: M = " << g(rep.targets.M) << ", phi = " << g(rep.targets.phi * kDegPerRad)
       << " deg at omega = " << g(rep.targets.omega) << " rad/s\n";
    os << "parameters: " << params_to_text(rep.parameters, precision) << "\n";
    if (rep.achievable_pm_range) {
        os << pm_range_text(*rep.achievable_pm_range) << "\n";
    }
    if (!rep.candidates.empty()) {
        os << "candidates: " << rep.candidates.size() << "\n";
    }
    os << margins_to_text(rep.verified, precision);
    return os.str();
}

std::string margins_to_text(const MarginReport& m, int precision) {
    std::ostringstream os;
    auto g = [&](double v) { return fmt_g(v, precision); };
    os << "gain crossovers (rad/s):";
    for (double w : m.omega_g_list) os << ' ' << g(w);
    os << "\nphase crossovers (rad/s):";
    for (double w : m.omega_p_list) os << ' ' << g(w);
    os << "\n";
    if (m.pm) os << "PM = " << g(*m.pm * kDegPerRad) << " deg\n";
    if (m.gm) os << "GM = " << g(*m.gm) << "\n";
    os << "well defined: " << (m.well_defined ? "yes" : "no") << "\n";
    if (!m.notes.empty()) os << "notes: " << m.notes << "\n";
    return os.str();
}

LoopRequest parse_loop(const json& j) {
    if (!j.is_object()) throw ParseError("request: expected a JSON object");
    LoopRequest r;
    r.plant = parse_plant(require(j, "request", "plant"), "plant");
    if (j.contains("gain")) r.gain = as_number(j.at("gain"), "gain");
    if (j.contains("controller")) r.controller = parse_plant(j.at("controller"), "controller");
    if (j.contains("steady_state")) {
        if (j.contains("gain")) {
            throw ParseError("steady_state: give either gain or steady_state, not both");
        }
        r.gain = dc_gain_from_spec(r.plant, parse_steady_state(j.at("steady_state"),
                                                               "steady_state"));
    }
    return r;
}

TransferFunction loop_tf(const LoopRequest& r) {
    TransferFunction l = scale(r.plant, r.gain);
    if (r.controller) l = series(*r.controller, l);
    return l;
}

std::string nyquist_csv(const TransferFunction& loop, const FrequencyGrid& grid, int precision) {
    std::ostringstream os;
    os << "omega,re,im,mag,phase_deg\n";
    const double step =
        grid.samples > 1 ? std::log(grid.hi / grid.lo) / (grid.samples - 1) : 0.0;
    for (int i = 0; i < grid.samples; ++i) {
        const double w = grid.lo * std::exp(step * i);
        Complex v;
        try {
            v = tf_eval(loop, w);
        } catch (const EvalOnPole&) {
            continue;
        }
        os << fmt_g(w, precision) << ',' << fmt_g(v.real(), precision) << ','
           << fmt_g(v.imag(), precision) << ',' << fmt_g(std::abs(v), precision) << ','
           << fmt_g(wrap_angle(std::arg(v)) * kDegPerRad, precision) << "\n";
    }
    return os.str();
}

FeasibilityRequest parse_feasibility(const json& j) {
    if (!j.is_object()) throw ParseError("request: expected a JSON object");
    FeasibilityRequest r;
    r.plant = parse_plant(require(j, "request", "plant"), "plant");
    if (j.contains("steady_state")) {
        r.steady_state = parse_steady_state(j.at("steady_state"), "steady_state");
    }
    r.spec = parse_spec(require(j, "request", "spec"), "spec");
    if (j.contains("ki")) r.ki = as_number(j.at("ki"), "ki");
    return r;
}

FeasibilityOutput run_feasibility(const FeasibilityRequest& req) {
    FeasibilityOutput out;
    TransferFunction gbar = req.plant;
    if (req.steady_state) {
        out.dc_gain = dc_gain_from_spec(req.plant, *req.steady_state);
        gbar = scale(req.plant, out.dc_gain);
    }
    if (const auto* s = std::get_if<PmWgSpec>(&req.spec)) {
        out.targets = targets_at_gain_crossover(gbar, s->omega_g, s->pm_deg / kDegPerRad);
        if (req.ki) {
            out.ki_targets = pid_targets_constrained_ki(req.plant, s->omega_g,
                                                        s->pm_deg / kDegPerRad, *req.ki);
            out.ki_feasible = out.ki_targets->phi > 0.0 &&
                              out.ki_targets->phi < std::numbers::pi &&
                              out.ki_targets->M * std::cos(out.ki_targets->phi) < 1.0;
        }
    } else if (const auto* s = std::get_if<GmWpSpec>(&req.spec)) {
        out.targets = targets_at_phase_crossover(gbar, s->omega_p, s->gm);
    } else if (const auto* s = std::get_if<PmWgGmSpec>(&req.spec)) {
        out.targets = targets_at_gain_crossover(gbar, s->omega_g, s->pm_deg / kDegPerRad);
    }
    out.report = classify(out.targets);
    return out;
}

json feasibility_to_json(const FeasibilityOutput& out) {
    json j;
    j["dc_gain"] = out.dc_gain;
    j["targets"] = targets_to_json(out.targets);
    j["feasibility"] = feasibility_flags_to_json(out.report);
    if (out.ki_targets) {
        j["ki_form"] = {{"targets", targets_to_json(*out.ki_targets)},
                        {"feasible", *out.ki_feasible}};
    }
    return j;
}

std::string feasibility_to_text(const FeasibilityOutput& out, int precision) {
    std::ostringstream os;
    auto g = [&](double v) { return fmt_g(v, precision); };
    auto flag = [](bool b) { return b ? "yes" : "no"; };
    os << "dc gain K: " << g(out.dc_gain) << "\n";
    os << "targets: M = " << g(out.targets.M) << ", phi = "
       << g(out.targets.phi * kDegPerRad) << " deg at omega = " << g(out.targets.omega)
       << " rad/s\n";
    os << "lead: " << flag(out.report.lead) << "\n";
    os << "lag: " << flag(out.report.lag) << "\n";
    os << "leadlag (zeta1 > zeta2): " << flag(out.report.leadlag_z1_gt_z2) << "\n";
    os << "leadlag (zeta2 > zeta1): " << flag(out.report.leadlag_z2_gt_z1) << "\n";
    os << "pid: " << flag(out.report.pid) << "\n";
    os << "pd: " << flag(out.report.pd) << "\n";
    os << "pi: " << flag(out.report.pi) << "\n";
    os << "notes: " << out.report.notes << "\n";
    if (out.ki_targets) {
        os << "ki-form targets: M = " << g(out.ki_targets->M) << ", phi = "
           << g(out.ki_targets->phi * kDegPerRad) << " deg; feasible: "
           << flag(*out.ki_feasible) << "\n";
    }
    return os.str();
}

std::string boundary_csv(int samples_per_curve) {
    std::ostringstream os;
    os << "region,curve,re,im\n";
    auto row = [&](const char* region, const char* curve, double re, double im) {
        os << region << ',' << curve << ',' << fmt_g(re, 10) << ',' << fmt_g(im, 10) << "\n";
    };
    const int n = samples_per_curve;
    for (int i = 0; i < n; ++i) {
        // M = cos phi locus: the circle through 0 and 1 centered at 1/2
        const double th = 2.0 * std::numbers::pi * i / n;
        row("lag_leadlag", "circle_m_eq_cos_phi", 0.5 + 0.5 * std::cos(th), 0.5 * std::sin(th));
    }
    for (int i = 0; i < n; ++i) {
        // M cos phi = 1 locus: the vertical line Re = 1
        const double im = -3.0 + 6.0 * i / (n - 1);
        row("lead_leadlag", "line_m_cos_phi_eq_1", 1.0, im);
    }
    for (int i = 0; i < n; ++i) {
        // phi = +/- pi/2 locus bounding every PID family: Re = 0
        const double im = -3.0 + 6.0 * i / (n - 1);
        row("pid", "line_phi_eq_half_pi", 0.0, im);
    }
    for (int i = 0; i < n; ++i) {
        // phi = 0 locus splitting PD (Im > 0) from PI (Im < 0)
        const double re = 3.0 * i / (n - 1);
        row("pd_pi", "line_phi_eq_0", re, 0.0);
    }
    return os.str();
}

FrequencyGrid parse_grid(const std::string& text) {
    FrequencyGrid g;
    double lo = 0.0, hi = 0.0;
    int n = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || lo <= 0.0 || hi <= lo ||
        n < 2) {
        throw ParseError("grid: expected lo:hi:n with 0 < lo < hi and n >= 2");
    }
    g.lo = lo;
    g.hi = hi;
    g.samples = n;
    return g;
}

}  // namespace ctrlsyn::doc
