#include "premia/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace premia {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ScenarioError(path + ": " + message);
}

const json& require_key(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        fail(path, std::string("missing required key '") + key + "'");
    }
    return *it;
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            fail(path, "unknown key '" + it.key() + "'");
        }
    }
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) {
        fail(path, "expected a number");
    }
    return j.get<double>();
}

long long as_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer() && !j.is_number_unsigned()) {
        fail(path, "expected an integer");
    }
    return j.get<long long>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) {
        fail(path, "expected a string");
    }
    return j.get<std::string>();
}

DiscreteDist parse_dist_spec(const json& spec, const std::string& path) {
    if (!spec.is_object()) {
        fail(path, "expected an object with a 'type' key");
    }
    const std::string type = as_string(require_key(spec, "type", path), path + ".type");
    try {
        if (type == "pmf") {
            reject_unknown_keys(spec, {"type", "points"}, path);
            const json& points = require_key(spec, "points", path);
            if (!points.is_array() || points.empty()) {
                fail(path + ".points", "expected a non-empty array of [loss, probability] pairs");
            }
            std::vector<std::pair<double, double>> pairs;
            pairs.reserve(points.size());
            for (std::size_t i = 0; i < points.size(); ++i) {
                const std::string ppath = path + ".points[" + std::to_string(i) + "]";
                const json& entry = points[i];
                if (!entry.is_array() || entry.size() != 2) {
                    fail(ppath, "expected a [loss, probability] pair");
                }
                pairs.emplace_back(as_number(entry[0], ppath + "[0]"),
                                   as_number(entry[1], ppath + "[1]"));
            }
            return DiscreteDist::from_points(std::move(pairs));
        }
        if (type == "bernoulli") {
            reject_unknown_keys(spec, {"type", "q", "loss"}, path);
            return DiscreteDist::bernoulli(as_number(require_key(spec, "q", path), path + ".q"),
                                           as_number(require_key(spec, "loss", path),
                                                     path + ".loss"));
        }
        if (type == "binomial") {
            reject_unknown_keys(spec, {"type", "n", "q", "loss"}, path);
            const long long n = as_integer(require_key(spec, "n", path), path + ".n");
            if (n < 0 || n > 10'000'000) {
                fail(path + ".n", "expected an integer in [0, 1e7]");
            }
            return DiscreteDist::binomial(static_cast<int>(n),
                                          as_number(require_key(spec, "q", path), path + ".q"),
                                          as_number(require_key(spec, "loss", path),
                                                    path + ".loss"));
        }
        if (type == "truncated_poisson") {
            reject_unknown_keys(spec, {"type", "lambda", "loss", "cutoff_quantile"}, path);
            double cutoff = 1.0 - 1e-12;
            if (spec.contains("cutoff_quantile")) {
                cutoff = as_number(spec["cutoff_quantile"], path + ".cutoff_quantile");
            }
            return DiscreteDist::truncated_poisson(
                as_number(require_key(spec, "lambda", path), path + ".lambda"),
                as_number(require_key(spec, "loss", path), path + ".loss"), cutoff);
        }
    } catch (const ScenarioError&) {
        throw;
    } catch (const Error& e) {
        fail(path, e.what());
    }
    fail(path + ".type", "unknown distribution type '" + type + "'");
}

MarketParticipant parse_insurer(const json& spec, const std::string& path) {
    if (!spec.is_object()) {
        fail(path, "expected an insurer object");
    }
    reject_unknown_keys(spec, {"id", "rho", "loading", "admin_cost", "quotes"}, path);
    const std::string id = as_string(require_key(spec, "id", path), path + ".id");
    if (id.empty()) {
        fail(path + ".id", "insurer id must not be empty");
    }
    const double rho = as_number(require_key(spec, "rho", path), path + ".rho");
    if (!std::isfinite(rho) || rho <= 0.0) {
        fail(path + ".rho", "expected a finite number > 0");
    }
    double loading = 0.0;
    if (spec.contains("loading")) {
        loading = as_number(spec["loading"], path + ".loading");
        if (!std::isfinite(loading) || loading < 0.0) {
            fail(path + ".loading", "expected a finite number >= 0");
        }
    }
    double admin_cost = 0.0;
    if (spec.contains("admin_cost")) {
        admin_cost = as_number(spec["admin_cost"], path + ".admin_cost");
        if (!std::isfinite(admin_cost) || admin_cost < 0.0) {
            fail(path + ".admin_cost", "expected a finite number >= 0");
        }
    }
    MarketParticipant participant{InsurerProfile{id, RiskTolerance(rho), loading, admin_cost}};
    if (spec.contains("quotes")) {
        const json& quotes = spec["quotes"];
        if (!quotes.is_array()) {
            fail(path + ".quotes", "expected an array of risk ids");
        }
        participant.quotes_k1 = participant.quotes_k2 = participant.quotes_k = false;
        for (std::size_t i = 0; i < quotes.size(); ++i) {
            const std::string qpath = path + ".quotes[" + std::to_string(i) + "]";
            const std::string risk = as_string(quotes[i], qpath);
            if (risk == "K1") {
                participant.quotes_k1 = true;
            } else if (risk == "K2") {
                participant.quotes_k2 = true;
            } else if (risk == "K") {
                participant.quotes_k = true;
            } else {
                fail(qpath, "expected one of \"K1\", \"K2\", \"K\"");
            }
        }
    }
    return participant;
}

std::vector<BookOverride> parse_override_book(const json& entries,
                                              const std::vector<MarketParticipant>& insurers,
                                              const std::string& path) {
    if (!entries.is_array() || entries.empty()) {
        fail(path, "expected a non-empty array of override entries");
    }
    std::vector<BookOverride> book;
    book.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string epath = path + "[" + std::to_string(i) + "]";
        const json& entry = entries[i];
        if (!entry.is_object()) {
            fail(epath, "expected an object with 'insurer' and 'premium'");
        }
        reject_unknown_keys(entry, {"insurer", "premium"}, epath);
        const std::string id = as_string(require_key(entry, "insurer", epath), epath + ".insurer");
        const bool known = std::any_of(insurers.begin(), insurers.end(), [&](const auto& p) {
            return p.profile.id == id;
        });
        if (!known) {
            fail(epath + ".insurer", "unknown insurer id '" + id + "'");
        }
        const double premium = as_number(require_key(entry, "premium", epath), epath + ".premium");
        if (!std::isfinite(premium) || premium <= 0.0) {
            fail(epath + ".premium", "expected a finite number > 0");
        }
        book.push_back(BookOverride{id, premium});
    }
    return book;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string json_string(const std::string& s) {
    return json(s).dump();
}

} // namespace

Scenario parse_scenario_text(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        fail("$", "expected a JSON object");
    }
    reject_unknown_keys(doc,
                        {"schema_version", "risks", "insurers", "initial_overrides", "tolerance",
                         "max_rounds", "seed", "insured_rho"},
                        "$");
    if (as_integer(require_key(doc, "schema_version", "$"), "schema_version") != 1) {
        fail("schema_version", "unsupported schema version (expected 1)");
    }

    const json& risks = require_key(doc, "risks", "$");
    if (!risks.is_array() || risks.size() != 2) {
        fail("risks", "expected an array of exactly 2 distribution specs");
    }
    DiscreteDist risk1 = parse_dist_spec(risks[0], "risks[0]");
    DiscreteDist risk2 = parse_dist_spec(risks[1], "risks[1]");

    const json& insurers_spec = require_key(doc, "insurers", "$");
    if (!insurers_spec.is_array() || insurers_spec.empty()) {
        fail("insurers", "expected a non-empty array of insurers");
    }
    std::vector<MarketParticipant> insurers;
    insurers.reserve(insurers_spec.size());
    for (std::size_t i = 0; i < insurers_spec.size(); ++i) {
        insurers.push_back(parse_insurer(insurers_spec[i], "insurers[" + std::to_string(i) + "]"));
    }
    for (std::size_t i = 0; i < insurers.size(); ++i) {
        for (std::size_t j = i + 1; j < insurers.size(); ++j) {
            if (insurers[i].profile.id == insurers[j].profile.id) {
                fail("insurers[" + std::to_string(j) + "].id",
                     "duplicate insurer id '" + insurers[j].profile.id + "'");
            }
        }
    }

    BookOverrides overrides;
    if (doc.contains("initial_overrides")) {
        const json& ov = doc["initial_overrides"];
        if (!ov.is_object()) {
            fail("initial_overrides", "expected an object keyed by risk id");
        }
        reject_unknown_keys(ov, {"K1", "K2", "K"}, "initial_overrides");
        if (ov.contains("K1")) {
            overrides.k1 = parse_override_book(ov["K1"], insurers, "initial_overrides.K1");
        }
        if (ov.contains("K2")) {
            overrides.k2 = parse_override_book(ov["K2"], insurers, "initial_overrides.K2");
        }
        if (ov.contains("K")) {
            overrides.k = parse_override_book(ov["K"], insurers, "initial_overrides.K");
        }
    }

    double tolerance = 1e-9;
    if (doc.contains("tolerance")) {
        tolerance = as_number(doc["tolerance"], "tolerance");
        if (!std::isfinite(tolerance) || tolerance <= 0.0) {
            fail("tolerance", "expected a finite number > 0");
        }
    }
    int max_rounds = 200;
    if (doc.contains("max_rounds")) {
        const long long rounds = as_integer(doc["max_rounds"], "max_rounds");
        if (rounds < 1 || rounds > 1'000'000'000) {
            fail("max_rounds", "expected an integer in [1, 1e9]");
        }
        max_rounds = static_cast<int>(rounds);
    }
    std::uint64_t seed = 0;
    if (doc.contains("seed")) {
        const json& s = doc["seed"];
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
            fail("seed", "expected a nonnegative integer");
        }
        seed = s.get<std::uint64_t>();
    }
    std::optional<double> insured_rho;
    if (doc.contains("insured_rho")) {
        const double rho = as_number(doc["insured_rho"], "insured_rho");
        if (!std::isfinite(rho) || rho <= 0.0) {
            fail("insured_rho", "expected a finite number > 0");
        }
        insured_rho = rho;
    }

    return Scenario{std::move(risk1), std::move(risk2), std::move(insurers),
                    std::move(overrides), tolerance,    max_rounds,
                    seed,             insured_rho};
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ScenarioError("cannot open scenario file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str());
}

MarketState resolve_market(const Scenario& scenario) {
    return build_market(scenario.insurers, scenario.risk1_dist, scenario.risk2_dist,
                        scenario.overrides);
}

EquilibriumReport run_scenario(const Scenario& scenario) {
    MarketState state = resolve_market(scenario);
    std::optional<RiskTolerance> insured;
    if (scenario.insured_rho) {
        insured = RiskTolerance(*scenario.insured_rho);
    }
    return run_equilibrium(std::move(state), scenario.tolerance, scenario.max_rounds, insured);
}

std::string emit_trace_csv(const EquilibriumReport& report) {
    std::string out = "round,P,P1,P2,delta,action,pi1_or_Pi1,pi2_or_Pi2,Pi\n";
    for (const TraceRecord& rec : report.trace) {
        out += std::to_string(rec.round);
        out += ',' + fmt17(rec.p) + ',' + fmt17(rec.p1) + ',' + fmt17(rec.p2) + ',' +
               fmt17(rec.delta);
        out += ',';
        out += to_string(rec.action.kind);
        switch (rec.action.kind) {
        case ActionKind::SplitOffer:
            out += ',' + fmt17(rec.action.premium1) + ',' + fmt17(rec.action.premium2) + ',';
            break;
        case ActionKind::CoalitionOffer:
            out += ',' + fmt17(rec.action.premium1) + ',' + fmt17(rec.action.premium2) + ',' +
                   fmt17(rec.action.global_premium);
            break;
        case ActionKind::NoAction:
            out += ",,,";
            break;
        }
        out += '\n';
    }
    return out;
}

std::string emit_report_json(const EquilibriumReport& report) {
    std::string out = "{\n";
    out += std::string("  \"converged\": ") + (report.converged ? "true" : "false") + ",\n";
    out += "  \"rounds_used\": " + std::to_string(report.rounds_used) + ",\n";
    out += "  \"final\": {\n";
    out += "    \"P\": " + fmt17(report.final_p) + ",\n";
    out += "    \"P1\": " + fmt17(report.final_p1) + ",\n";
    out += "    \"P2\": " + fmt17(report.final_p2) + ",\n";
    out += "    \"delta\": " + fmt17(report.final_delta) + "\n";
    out += "  },\n";
    if (report.purchase_feasible) {
        out += std::string("  \"purchase_feasible\": ") +
               (*report.purchase_feasible ? "true" : "false") + ",\n";
    }
    out += "  \"trace\": [\n";
    for (std::size_t i = 0; i < report.trace.size(); ++i) {
        const TraceRecord& rec = report.trace[i];
        out += "    {\n";
        out += "      \"round\": " + std::to_string(rec.round) + ",\n";
        out += "      \"P\": " + fmt17(rec.p) + ",\n";
        out += "      \"P1\": " + fmt17(rec.p1) + ",\n";
        out += "      \"P2\": " + fmt17(rec.p2) + ",\n";
        out += "      \"delta\": " + fmt17(rec.delta) + ",\n";
        out += std::string("      \"action\": \"") + to_string(rec.action.kind) + "\"";
        switch (rec.action.kind) {
        case ActionKind::SplitOffer:
            out += ",\n      \"actor\": " + json_string(rec.action.actor_id);
            out += ",\n      \"pi1_or_Pi1\": " + fmt17(rec.action.premium1);
            out += ",\n      \"pi2_or_Pi2\": " + fmt17(rec.action.premium2);
            break;
        case ActionKind::CoalitionOffer:
            out += ",\n      \"actor\": " + json_string(rec.action.actor_id);
            out += ",\n      \"reinsurer\": " + json_string(rec.action.reinsurer_id);
            out += ",\n      \"pi1_or_Pi1\": " + fmt17(rec.action.premium1);
            out += ",\n      \"pi2_or_Pi2\": " + fmt17(rec.action.premium2);
            out += ",\n      \"Pi\": " + fmt17(rec.action.global_premium);
            break;
        case ActionKind::NoAction:
            break;
        }
        out += "\n    }";
        out += (i + 1 < report.trace.size()) ? ",\n" : "\n";
    }
    out += "  ]\n";
    out += "}\n";
    return out;
}

} // namespace premia
