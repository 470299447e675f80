#pragma once

// JSON/CSV persistence for plans, schedules, construction states and Sierpinski runs.
// Rationals and big integers are written as decimal strings so every value round-trips exactly.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "normal/constants.hpp"
#include "normal/errors.hpp"
#include "normal/exact.hpp"
#include "normal/plan.hpp"
#include "normal/schedule.hpp"
#include "normal/schmidt.hpp"
#include "normal/sierpinski.hpp"

namespace normal {

using Json = nlohmann::json;

inline constexpr const char *kSchmidtFormat = "normal-schmidt-state";
inline constexpr const char *kSierpinskiFormat = "normal-sierpinski-state";

namespace detail {

inline Integer integer_field(const Json &j) {
    if (j.is_string()) {
        return parse_integer(j.get<std::string>());
    }
    if (j.is_number_unsigned()) {
        return Integer(static_cast<unsigned long>(j.get<std::uint64_t>()));
    }
    if (j.is_number_integer()) {
        return Integer(static_cast<long>(j.get<std::int64_t>()));
    }
    throw ValidationError("expected an integer or integer string, got " + j.dump());
}

inline Json require(const Json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) {
        throw ValidationError(std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace detail

inline Json parse_json_text(const std::string &text, const std::string &origin) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error &e) {
        throw ValidationError(origin + ": invalid JSON (" + e.what() + ")");
    }
}

inline Json read_json_file(const std::string &path) { return parse_json_text(detail::read_file(path), path); }

/// Writes `j` with two-space indentation and a trailing newline.
inline void write_json_file(const std::string &path, const Json &j) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ValidationError("cannot write " + path);
    }
    out << j.dump(2) << '\n';
}

// ---- plans ----

inline Json to_json(const SequencePlan &plan) {
    Json m0 = Json::object();
    for (const auto &[base, index] : plan.m0) {
        m0[std::to_string(base)] = index;
    }
    return Json{{"horizon", plan.horizon},   {"certified", plan.certified}, {"beta_floored", plan.beta_floored},
                {"raw_r", plan.raw_r},       {"raw_s", plan.raw_s},         {"log_beta", plan.log_beta},
                {"gamma", plan.gamma},       {"phi", plan.phi},             {"r", plan.r},
                {"s", plan.s},               {"m0", m0}};
}

/// Rebuilds a plan from its raw tables; the stored derived fields must match.
inline SequencePlan plan_from_json(const Json &j) {
    try {
        const auto raw_r = detail::require(j, "raw_r").get<std::vector<std::uint64_t>>();
        const auto raw_s = detail::require(j, "raw_s").get<std::vector<std::uint64_t>>();
        const auto log_beta = detail::require(j, "log_beta").get<std::vector<double>>();
        const auto gamma = detail::require(j, "gamma").get<std::vector<std::uint64_t>>();
        const auto horizon = detail::require(j, "horizon").get<std::size_t>();
        SequencePlan plan = apply_phi(raw_r, raw_s, log_beta, gamma, horizon);
        plan.certified = j.value("certified", false);
        plan.beta_floored = j.value("beta_floored", false);
        if (j.contains("phi") && j.at("phi").get<std::vector<std::size_t>>() != plan.phi) {
            throw ValidationError("stored phi does not match the beta/gamma tables");
        }
        return plan;
    } catch (const Json::exception &e) {
        throw ValidationError(std::string("malformed plan: ") + e.what());
    }
}

/// Toy plan CSV: rows "k,r,s,beta[,gamma]" (header optional, '#' comments). gamma defaults to
/// max(r_1..r_k, s_1..s_k).
inline SequencePlan parse_toy_plan_csv(const std::string &text, std::size_t horizon) {
    std::vector<std::uint64_t> raw_r;
    std::vector<std::uint64_t> raw_s;
    std::vector<double> log_beta;
    std::vector<std::uint64_t> gamma;
    bool all_gamma = true;
    std::istringstream in(text);
    std::string line;
    std::size_t expected = 1;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) {
            cells.push_back(cell);
        }
        if (cells.empty() || cells[0] == "k") {
            continue;
        }
        if (cells.size() < 4 || cells.size() > 5) {
            throw ValidationError("toy plan row '" + line + "' must have 4 or 5 columns");
        }
        try {
            if (std::stoull(cells[0]) != expected) {
                throw ValidationError("toy plan rows must be numbered 1, 2, 3, ...");
            }
            raw_r.push_back(std::stoull(cells[1]));
            raw_s.push_back(std::stoull(cells[2]));
            const double beta = std::stod(cells[3]);
            if (!(beta > 0)) {
                throw ValidationError("toy beta values must be positive");
            }
            log_beta.push_back(std::log(beta));
            if (cells.size() == 5) {
                gamma.push_back(std::stoull(cells[4]));
            } else {
                all_gamma = false;
            }
        } catch (const std::logic_error &) {
            throw ValidationError("toy plan row '" + line + "' is not numeric");
        }
        ++expected;
    }
    if (raw_r.empty()) {
        throw ValidationError("toy plan has no rows");
    }
    if (!gamma.empty() && !all_gamma) {
        throw ValidationError("toy plan gamma column must be given on every row or none");
    }
    for (std::size_t k = 0; k < raw_r.size(); ++k) {
        if (raw_r[k] < 2 || raw_s[k] < 2) {
            throw ValidationError("toy plan bases must be at least 2");
        }
    }
    if (gamma.empty()) {
        gamma = gamma_table(raw_r, raw_s, raw_r.size());
    }
    SequencePlan plan = apply_phi(raw_r, raw_s, log_beta, gamma, horizon);
    plan.certified = false;
    return plan;
}

// ---- schedules ----

inline Json to_json(const Schedule &schedule) {
    switch (schedule.kind()) {
    case ScheduleKind::Paper:
        return Json{{"kind", "paper"}, {"s1", schedule.s1()}};
    case ScheduleKind::Power:
        return Json{{"kind", "power"}, {"c", to_string(schedule.exponent())}};
    case ScheduleKind::Toy: {
        Json values = Json::array();
        for (const Integer &v : schedule.table()) {
            values.push_back(v.get_str());
        }
        return Json{{"kind", "toy"}, {"values", values}};
    }
    }
    throw ValidationError("unknown schedule kind");
}

/// Accepts {"kind": ...} objects and bare toy tables {"values": [...]}.
inline Schedule schedule_from_json(const Json &j) {
    try {
        const std::string kind = j.value("kind", std::string("toy"));
        if (kind == "paper") {
            return Schedule::paper(detail::require(j, "s1").get<std::uint64_t>());
        }
        if (kind == "power") {
            const Json c = detail::require(j, "c");
            return Schedule::power(c.is_string() ? parse_rational(c.get<std::string>())
                                                 : Rational(c.get<double>()));
        }
        if (kind == "toy") {
            std::vector<Integer> values;
            for (const Json &v : detail::require(j, "values")) {
                values.push_back(detail::integer_field(v));
            }
            for (std::size_t i = 1; i < values.size(); ++i) {
                if (values[i] <= values[i - 1]) {
                    throw ScheduleInvalid("toy schedule values must be strictly increasing");
                }
            }
            if (values.front() < 1) {
                throw ScheduleInvalid("toy schedule values must be positive");
            }
            return Schedule::toy(std::move(values));
        }
        throw ScheduleInvalid("unknown schedule kind '" + kind + "'");
    } catch (const Json::exception &e) {
        throw ValidationError(std::string("malformed schedule: ") + e.what());
    }
}

// ---- Schmidt construction state ----

inline Json to_json(const StepRecord &r) {
    return Json{{"m", r.m},
                {"s", r.s},
                {"a", r.a.get_str()},
                {"b", r.b.get_str()},
                {"bracket", r.bracket.get_str()},
                {"bracket_next", r.bracket_next.get_str()},
                {"eta", to_string(r.eta)},
                {"width", r.width},
                {"candidates", r.candidates},
                {"chosen_digits", r.chosen_digits},
                {"objective", r.objective},
                {"objective_second", r.objective_second ? Json(*r.objective_second) : Json(nullptr)},
                {"near_ties", r.near_ties},
                {"tie_reevaluated", r.tie_reevaluated},
                {"phase_evaluations", r.phase_evaluations},
                {"formula_phase_evaluations", r.formula_phase_evaluations},
                {"log_beta", r.log_beta},
                {"lemma_ratio", r.lemma_ratio},
                {"lemma_within_bound", r.lemma_within_bound},
                {"nested_ok", r.nested_ok},
                {"order_ok", r.order_ok}};
}

inline StepRecord step_from_json(const Json &j) {
    StepRecord r;
    r.m = j.at("m").get<std::uint64_t>();
    r.s = j.at("s").get<std::uint64_t>();
    r.a = detail::integer_field(j.at("a"));
    r.b = detail::integer_field(j.at("b"));
    r.bracket = detail::integer_field(j.at("bracket"));
    r.bracket_next = detail::integer_field(j.at("bracket_next"));
    r.eta = parse_rational(j.at("eta").get<std::string>());
    r.width = j.at("width").get<long long>();
    r.candidates = j.at("candidates").get<std::uint64_t>();
    r.chosen_digits = j.at("chosen_digits").get<std::string>();
    r.objective = j.at("objective").get<double>();
    if (!j.at("objective_second").is_null()) {
        r.objective_second = j.at("objective_second").get<double>();
    }
    r.near_ties = j.at("near_ties").get<std::uint64_t>();
    r.tie_reevaluated = j.at("tie_reevaluated").get<bool>();
    r.phase_evaluations = j.at("phase_evaluations").get<std::uint64_t>();
    r.formula_phase_evaluations = j.at("formula_phase_evaluations").get<std::uint64_t>();
    r.log_beta = j.at("log_beta").get<double>();
    r.lemma_ratio = j.at("lemma_ratio").get<double>();
    r.lemma_within_bound = j.at("lemma_within_bound").get<bool>();
    r.nested_ok = j.at("nested_ok").get<bool>();
    r.order_ok = j.at("order_ok").get<bool>();
    return r;
}

inline Json to_json(const ConstructionState &state) {
    Json steps = Json::array();
    for (const auto &rec : state.steps) {
        steps.push_back(to_json(rec));
    }
    return Json{{"format", kSchmidtFormat},
                {"version", kStateVersion},
                {"plan", to_json(state.plan)},
                {"schedule", to_json(state.schedule)},
                {"config", Json{{"width_cap", state.width_cap}}},
                {"m", state.m},
                {"xi", to_string(state.xi)},
                {"steps", steps}};
}

inline ConstructionState state_from_json(const Json &j) {
    if (j.value("format", std::string()) != kSchmidtFormat) {
        throw ValidationError("not a Schmidt construction state file");
    }
    if (j.value("version", 0) != kStateVersion) {
        throw ValidationError("unsupported state version " + j.value("version", Json(nullptr)).dump());
    }
    try {
        ConstructionState state;
        state.plan = plan_from_json(j.at("plan"));
        state.schedule = schedule_from_json(j.at("schedule"));
        state.width_cap = j.at("config").at("width_cap").get<unsigned>();
        state.m = j.at("m").get<std::uint64_t>();
        state.xi = parse_rational(j.at("xi").get<std::string>());
        for (const Json &s : j.at("steps")) {
            state.steps.push_back(step_from_json(s));
        }
        if (state.steps.size() != state.m) {
            throw ValidationError("state step log does not match m");
        }
        if (state.xi < 0 || state.xi >= 1) {
            throw ValidationError("state xi outside [0, 1)");
        }
        return state;
    } catch (const Json::exception &e) {
        throw ValidationError(std::string("malformed state: ") + e.what());
    }
}

// ---- Sierpinski ----

inline Json to_json(const ToyCaps &caps) {
    Json j = Json::object();
    const auto put = [&j](const char *key, const std::optional<std::uint64_t> &v) {
        if (v) {
            j[key] = *v;
        }
    };
    put("k_cap", caps.k_cap);
    put("q_cap", caps.q_cap);
    put("m_cap", caps.m_cap);
    put("n_cap", caps.n_cap);
    put("n_base", caps.n_base);
    return j;
}

inline ToyCaps toy_caps_from_json(const Json &j) {
    if (!j.is_object()) {
        throw ValidationError("toy caps must be a JSON object");
    }
    ToyCaps caps;
    for (const auto &[key, value] : j.items()) {
        if (!value.is_number_unsigned() && !value.is_number_integer()) {
            throw ValidationError("toy cap '" + key + "' must be a positive integer");
        }
        const auto v = value.get<std::int64_t>();
        if (v < 1) {
            throw ValidationError("toy cap '" + key + "' must be a positive integer");
        }
        const auto u = static_cast<std::uint64_t>(v);
        if (key == "k_cap") {
            caps.k_cap = u;
        } else if (key == "q_cap") {
            caps.q_cap = u;
        } else if (key == "m_cap") {
            caps.m_cap = u;
        } else if (key == "n_cap") {
            caps.n_cap = u;
        } else if (key == "n_base") {
            caps.n_base = u;
        } else {
            throw ValidationError("unknown toy cap '" + key + "'");
        }
    }
    return caps;
}

inline Json to_json(const SierpinskiState &state) {
    Json steps = Json::array();
    for (const auto &s : state.steps) {
        Json measures = Json::array();
        for (const Rational &m : s.measures) {
            measures.push_back(to_string(m));
        }
        steps.push_back(Json{{"n", s.n},
                             {"digit", s.digit},
                             {"p_n", s.k.get_str()},
                             {"measures", measures},
                             {"cell_length", to_string(s.cell_length)},
                             {"survives", s.survives}});
    }
    return Json{{"format", kSierpinskiFormat},
                {"version", kStateVersion},
                {"params", Json{{"base", state.params.base},
                                {"epsilon", to_string(state.params.epsilon)},
                                {"toy_caps", to_json(state.params.caps)}}},
                {"certified", state.params.certified()},
                {"mode", to_string(state.mode)},
                {"digits", state.digits.str()},
                {"steps", steps}};
}

inline SierpinskiState sierpinski_from_json(const Json &j) {
    if (j.value("format", std::string()) != kSierpinskiFormat) {
        throw ValidationError("not a Sierpinski state file");
    }
    try {
        SierpinskiParams params;
        const Json &p = j.at("params");
        params.base = p.at("base").get<unsigned>();
        params.epsilon = parse_rational(p.at("epsilon").get<std::string>());
        params.caps = toy_caps_from_json(p.at("toy_caps"));
        const std::string mode = j.at("mode").get<std::string>();
        if (mode != "exact" && mode != "bound") {
            throw ValidationError("unknown measure mode '" + mode + "'");
        }
        SierpinskiState state = initial_sierpinski(params, mode == "exact" ? MeasureMode::Exact : MeasureMode::Bound);
        for (const Json &s : j.at("steps")) {
            SierpinskiStep rec;
            rec.n = s.at("n").get<std::uint64_t>();
            rec.digit = s.at("digit").get<unsigned>();
            rec.k = parse_integer(s.at("p_n").get<std::string>());
            for (const Json &m : s.at("measures")) {
                rec.measures.push_back(parse_rational(m.get<std::string>()));
            }
            rec.cell_length = parse_rational(s.at("cell_length").get<std::string>());
            rec.survives = s.at("survives").get<bool>();
            if (rec.digit >= params.base) {
                throw ValidationError("stored digit out of range");
            }
            state.digits.digits.push_back(rec.digit);
            state.steps.push_back(std::move(rec));
        }
        return state;
    } catch (const Json::exception &e) {
        throw ValidationError(std::string("malformed Sierpinski state: ") + e.what());
    }
}

} // namespace normal
