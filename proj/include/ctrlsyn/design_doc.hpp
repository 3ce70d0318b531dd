#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ctrlsyn/compensator.hpp"
#include "ctrlsyn/networks.hpp"
#include "ctrlsyn/pid.hpp"
#include "ctrlsyn/stability.hpp"
#include "ctrlsyn/targets.hpp"

/// Document model behind the CLI: JSON requests in, JSON/text reports and
/// CSV sample streams out.  Angles are degrees at this boundary and radians
/// inside the library; polynomial coefficients are ascending everywhere.
namespace ctrlsyn::doc {

using json = nlohmann::json;

// ----- request ------------------------------------------------------------

struct PmWgSpec {
    double pm_deg = 0.0;
    double omega_g = 0.0;
};
struct GmWpSpec {
    double gm = 0.0;
    double omega_p = 0.0;
};
struct PmWgGmSpec {
    double pm_deg = 0.0;
    double omega_g = 0.0;
    double gm = 0.0;
};
using SpecVariant = std::variant<PmWgSpec, GmWpSpec, PmWgGmSpec>;

enum class CompensatorType {
    Auto,
    Lead,
    Lag,
    LeadLag,
    PidSigma,
    PidGm,
    PidKi,
    Pd,
    Pi,
    PidFixTi,
    PidFixTd,
};

struct CompensatorChoice {
    CompensatorType type = CompensatorType::Auto;
    std::optional<double> sigma;  // pid_sigma
    std::optional<double> ki;     // pid_ki (defaultable from steady_state)
    std::optional<double> ti;     // pid_fix_ti
    std::optional<double> td;     // pid_fix_td
};

struct DesignRequest {
    TransferFunction plant;
    std::optional<SteadyStateSpec> steady_state;
    SpecVariant spec;
    CompensatorChoice compensator;
};

/// Parse/serialize with field-path diagnostics (ParseError).  Serialization
/// is canonical: parse(serialize(parse(doc))) == parse(doc).
DesignRequest parse_request(const json& j);
json serialize_request(const DesignRequest& r);

// ----- report ---------------------------------------------------------------

struct DesignCandidate {
    CompensatorParams params;
    std::optional<double> omega_p;
    std::vector<RealFormResult> real_forms;  // lead-lag complex candidates only
    bool is_complex_form = false;
};

struct DesignReport {
    FeasibilityReport feasibility;
    DesignTargets targets;
    double dc_gain = 1.0;  // K folded into the plant (1 when not applicable)
    std::string chosen;    // compensator kind actually designed
    CompensatorParams parameters;
    MarginReport verified;
    std::optional<PmRange> achievable_pm_range;
    std::vector<DesignCandidate> candidates;  // full solution set when multiple
    LeadLagSearch search;                     // lead-lag diagnostics (gamma, H, roots)
    bool has_search = false;
};

/// Run the full pipeline: steady-state gain, targets, classification,
/// design, margin verification.  Throws Infeasible/NoFeasibleCrossover with
/// classifier-matching reasons, ParseError for bad documents.
DesignReport run_design(const DesignRequest& request);

json report_to_json(const DesignReport& report);
std::string report_to_text(const DesignReport& report, int precision);

// ----- analyze / nyquist / feasibility --------------------------------------

/// Loop document: plant, optional gain, optional controller in series.
struct LoopRequest {
    TransferFunction plant;
    double gain = 1.0;
    std::optional<TransferFunction> controller;
};

LoopRequest parse_loop(const json& j);
TransferFunction loop_tf(const LoopRequest& r);

json margins_to_json(const MarginReport& report);
std::string margins_to_text(const MarginReport& report, int precision);

/// CSV rows `omega,re,im,mag,phase_deg` over a log grid, omega ascending.
std::string nyquist_csv(const TransferFunction& loop, const FrequencyGrid& grid,
                        int precision = 10);

struct FeasibilityRequest {
    TransferFunction plant;
    std::optional<SteadyStateSpec> steady_state;
    SpecVariant spec;
    std::optional<double> ki;  // evaluate the constrained-K_i targets too
};

FeasibilityRequest parse_feasibility(const json& j);

struct FeasibilityOutput {
    DesignTargets targets;
    double dc_gain = 1.0;
    FeasibilityReport report;
    // constrained-K_i targets and their feasibility predicate when ki was given
    std::optional<DesignTargets> ki_targets;
    std::optional<bool> ki_feasible;
};

FeasibilityOutput run_feasibility(const FeasibilityRequest& request);
json feasibility_to_json(const FeasibilityOutput& out);
std::string feasibility_to_text(const FeasibilityOutput& out, int precision);

/// Region-boundary samples for plotting: the |z - 1/2| = 1/2 circle, the
/// Re = 1 and Re = 0 lines, and the Im = 0 axis, as CSV
/// `region,curve,re,im` rows.
std::string boundary_csv(int samples_per_curve);

/// "lo:hi:n" log-spaced grid spec.
FrequencyGrid parse_grid(const std::string& text);

}  // namespace ctrlsyn::doc
