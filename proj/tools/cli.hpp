#pragma once

// Command-line front end. run() returns the process exit code:
// 0 success, 1 verification failure, 2 invalid input, 3 cap or precision limit.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "normal/normal.hpp"

namespace normal::cli {

inline constexpr const char *kToolVersion = "0.1.0";

class VerificationFailed : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string format_double(double v, int digits = 17) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

/// "p/q", an integer, or a finite decimal such as 0.125 (converted exactly).
inline Rational parse_number(const std::string &raw) {
    std::string text = raw;
    text.erase(std::remove_if(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); }), text.end());
    if (text.empty()) {
        throw ValidationError("empty number");
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) {
        return parse_rational(text);
    }
    if (text.find('/') != std::string::npos || text.find_first_of("eE") != std::string::npos) {
        throw ValidationError("malformed number '" + raw + "'");
    }
    const std::string whole = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    const bool negative = !whole.empty() && whole[0] == '-';
    const std::string digits = (whole.empty() || whole == "-" ? std::string("0") : whole.substr(negative ? 1 : 0)) + frac;
    Integer num = parse_integer(digits.empty() ? "0" : digits);
    if (negative) {
        num = -num;
    }
    return make_rational(num, pow_integer(10, frac.size()));
}

inline std::string read_text(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// One point per line (first CSV column); blank lines, '#' comments and a non-numeric header skipped.
inline PointSet read_points(const std::string &path) {
    std::istringstream in(read_text(path));
    std::string line;
    std::vector<Rational> pts;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const std::string cell = line.substr(0, line.find(','));
        try {
            pts.push_back(parse_number(cell));
        } catch (const ValidationError &) {
            if (!first) {
                throw;
            }
        }
        first = false;
    }
    return PointSet(std::move(pts));
}

inline Schedule parse_schedule(const std::string &spec, std::uint64_t s1) {
    if (spec == "paper") {
        return Schedule::paper(s1);
    }
    if (spec.rfind("power:", 0) == 0) {
        return Schedule::power(parse_number(spec.substr(6)));
    }
    if (spec.rfind("toy:", 0) == 0) {
        return schedule_from_json(read_json_file(spec.substr(4)));
    }
    throw ValidationError("schedule must be paper, power:C or toy:FILE (got '" + spec + "')");
}

inline bool ends_with(const std::string &s, const std::string &suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline SequencePlan load_plan(const std::string &path, std::size_t horizon) {
    if (path.empty()) {
        return build_default_plan(horizon);
    }
    if (ends_with(path, ".csv")) {
        return parse_toy_plan_csv(read_text(path), horizon);
    }
    return plan_from_json(read_json_file(path));
}

struct FormulaRow {
    const char *name;
    std::string value;
    const char *formula;
};

inline std::vector<FormulaRow> constant_rows(const ConstantSet &c) {
    const auto f = [](double v) { return format_double(v, 12); };
    std::vector<FormulaRow> rows = {
        {"a1", std::to_string(c.a1), "max(g_1, ..., g_h)"},
        {"a2", c.a2.get_str(), "max over e_i > 0 of p_i^(2b + g_i)"},
        {"a3", f(c.a3), "120 sqrt(log s)"},
        {"a4", f(c.a4), "0.028 / log(s^2 - 2)"},
        {"alpha5", f(c.alpha5), "e / (4 pi sqrt(a4 (1 - 2 a4)))"},
        {"a5", f(c.a5), "log 2 / (16 log s)"},
        {"a6", f(c.a6), "(0.014 / log s)(1/log s - 1/s)"},
        {"a7", c.a7.get_str(), "a2 s"},
        {"a8", f(c.a8), "a5 - (log 7 + 3 log log m) / (288 m)"},
        {"a9", f(c.a9), "a6 / 2"},
    };
    if (c.variant == ConstantsVariant::LargeN) {
        rows.push_back({"a14", f(c.a14), "a8 / 6"});
        rows.push_back({"a15", f(c.a15), "a9 / 6"});
    } else {
        rows.push_back({"log_a14", f(c.log_a14), "-(log N0 + log log N0), a14 = 1/(N0 log N0)"});
        rows.push_back({"a15", f(c.a15), "1 / (2 log N0)"});
    }
    rows.push_back({"a21", f(c.a21), "cos(pi / s^2)"});
    rows.push_back({"a22", f(c.a22), "a15 (-log a21)"});
    rows.push_back({"a20", f(c.a20), "min(a14, a22)"});
    rows.push_back({"log_a20", f(c.log_a20), "log min(a14, a22)"});
    rows.push_back({"logN0_HS2", f(c.logN0_HS2), "288 m L^4 + 192 L^3 + 24 L^2, L = log m"});
    rows.push_back({"logN0_HS3", f(c.logN0_HS3), "2 logN0_HS2"});
    rows.push_back({"logN0_HS4", f(c.logN0_HS4), "288 (12 m L^4 + 8 L^3 + L^2), L = log m"});
    return rows;
}

inline Json constants_json(const BasePairAnalysis &a, const ConstantSet &c) {
    Json primes = Json::array();
    for (const auto &p : a.primes) {
        primes.push_back(Json{{"p", p.prime},
                              {"d", p.d},
                              {"e", p.e},
                              {"t", to_string(p.t)},
                              {"u", p.u.get_str()},
                              {"v", p.v.get_str()},
                              {"f", p.f},
                              {"g", p.g},
                              {"q", p.q}});
    }
    Json formulas = Json::object();
    Json j{{"r", c.r},
           {"s", c.s},
           {"variant", to_string(c.variant)},
           {"b", a.b},
           {"h", a.h()},
           {"primes", primes},
           {"a1", c.a1},
           {"a1_upper_bound", c.a1_upper_bound()},
           {"a2", c.a2.fits_ulong_p() ? Json(c.a2.get_ui()) : Json(c.a2.get_str())},
           {"a3", c.a3},
           {"a4", c.a4},
           {"alpha5", c.alpha5},
           {"a5", c.a5},
           {"a6", c.a6},
           {"a7", c.a7.fits_ulong_p() ? Json(c.a7.get_ui()) : Json(c.a7.get_str())},
           {"a8", c.a8},
           {"a9", c.a9},
           {"a14", c.a14},
           {"log_a14", c.log_a14},
           {"a15", c.a15},
           {"a21", c.a21},
           {"a22", c.a22},
           {"a20", c.a20},
           {"log_a20", c.log_a20},
           {"logN0_HS2", c.logN0_HS2},
           {"logN0_HS3", c.logN0_HS3},
           {"logN0_HS4", c.logN0_HS4}};
    for (const auto &row : constant_rows(c)) {
        formulas[row.name] = row.formula;
    }
    j["formulas"] = formulas;
    return j;
}

// Exact cell: rational or integer text. Float cell: decimal with its precision note.
inline Json exact_cell(const std::string &v) { return Json{{"value", v}, {"kind", "exact"}}; }
inline Json float_cell(double v, const char *note) {
    return Json{{"value", v}, {"kind", "float"}, {"precision", note}};
}

inline Rational xi_after(const StepRecord &rec) {
    Rational xi = rec.eta;
    for (std::size_t k = 0; k < rec.chosen_digits.size(); ++k) {
        if (rec.chosen_digits[k] == '1') {
            xi += make_rational(1, pow_integer(rec.s, rec.a.get_ui() + 1 + k));
        }
    }
    return xi;
}

struct DiscRow {
    std::uint64_t N = 0;
    Rational extreme;
    Rational star;
    std::uint64_t H = 0;
    double et = 0;
    double weyl1 = 0;
};

inline std::vector<std::uint64_t> checkpoints(std::uint64_t N) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 1; n < N; n *= 2) {
        out.push_back(n);
    }
    out.push_back(N);
    return out;
}

inline std::vector<DiscRow> orbit_table(const Rational &x, std::uint64_t base, std::uint64_t N,
                                        const ErdosTuranConstants &k) {
    const PointSet all = orbit_points(x, base, N);
    std::vector<DiscRow> rows;
    for (std::uint64_t n : checkpoints(N)) {
        PointSet prefix(std::vector<Rational>(all.points.begin(), all.points.begin() + static_cast<long>(n)));
        DiscRow row;
        row.N = n;
        row.extreme = discrepancy_extreme(prefix);
        row.star = discrepancy_star(prefix);
        row.H = log_cutoff(n);
        row.et = erdos_turan_bound(x, base, n, row.H, k);
        row.weyl1 = std::abs(weyl_sum(OrbitSpec{x, base, n, 1})) / static_cast<double>(n);
        rows.push_back(row);
    }
    return rows;
}

inline Json disc_rows_json(const std::vector<DiscRow> &rows) {
    Json out = Json::array();
    for (const auto &r : rows) {
        out.push_back(Json{{"N", exact_cell(std::to_string(r.N))},
                           {"D_N", exact_cell(to_string(r.extreme))},
                           {"D_star_N", exact_cell(to_string(r.star))},
                           {"D_N_decimal", float_cell(to_double(r.extreme), "double rounding of the exact value")},
                           {"H", exact_cell(std::to_string(r.H))},
                           {"et_bound", float_cell(r.et, "double, compensated Weyl sums")},
                           {"weyl_t1_over_N", float_cell(r.weyl1, "double, compensated Weyl sums")}});
    }
    return out;
}

inline void disc_rows_csv(std::ostream &out, const std::vector<DiscRow> &rows) {
    out << "N[exact],D_N[exact],D_star_N[exact],D_N[float64],H[exact],et_bound[float64],weyl_t1_over_N[float64]\n";
    for (const auto &r : rows) {
        out << r.N << ',' << to_string(r.extreme) << ',' << to_string(r.star) << ','
            << format_double(to_double(r.extreme)) << ',' << r.H << ',' << format_double(r.et) << ','
            << format_double(r.weyl1) << '\n';
    }
}

inline void print_step(std::ostream &out, const StepRecord &r) {
    out << "step " << r.m << ": s=" << r.s << " a=" << r.a << " b=" << r.b << " width=" << r.width
        << " candidates=" << r.candidates << " A'=" << format_double(r.objective, 10)
        << " lemma_ratio=" << format_double(r.lemma_ratio, 6) << (r.nested_ok && r.order_ok ? "" : " INVARIANT-FLAG")
        << '\n';
}

} // namespace detail

inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Absolutely normal numbers: Schmidt and Sierpinski constructions, discrepancy tools"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    // constants
    auto *constants = app.add_subcommand("constants", "Base-pair analysis and every explicit constant");
    std::uint64_t c_r = 2;
    std::uint64_t c_s = 3;
    std::string c_variant = "large-n";
    bool c_json = false;
    constants->add_option("--r", c_r, "base r")->required();
    constants->add_option("--s", c_s, "base s")->required();
    constants->add_option("--variant", c_variant, "large-n or all-n")->check(CLI::IsMember({"large-n", "all-n"}));
    constants->add_flag("--json", c_json, "emit JSON");

    // plan
    auto *plan_cmd = app.add_subcommand("plan", "Build the base sequences R, S and phi");
    std::size_t p_horizon = 16;
    std::string p_toy;
    plan_cmd->add_option("--horizon", p_horizon, "number of steps covered")->required();
    plan_cmd->add_option("--toy", p_toy, "toy CSV with rows k,r,s,beta[,gamma]");

    // schmidt
    auto *schmidt = app.add_subcommand("schmidt", "Schmidt construction");
    schmidt->require_subcommand(1);
    auto *s_run = schmidt->add_subcommand("run", "Run or resume the construction");
    std::string s_schedule = "paper";
    std::uint64_t s_steps = 0;
    std::string s_plan;
    std::string s_state;
    bool s_resume = false;
    bool s_verify = false;
    unsigned s_threads = std::max(1U, std::thread::hardware_concurrency());
    unsigned s_width_cap = 24;
    std::size_t s_horizon = 32;
    s_run->add_option("--schedule", s_schedule, "paper | power:C | toy:FILE");
    s_run->add_option("--steps", s_steps, "steps to execute (additional steps with --resume)")->required();
    s_run->add_option("--plan", s_plan, "plan JSON, or toy CSV (default: built-in plan)");
    s_run->add_option("--horizon", s_horizon, "plan horizon for built-in and toy CSV plans");
    s_run->add_option("--state", s_state, "state file to write (and read with --resume)")->required();
    s_run->add_flag("--resume", s_resume, "continue from the state file");
    s_run->add_flag("--verify", s_verify, "re-check every argmin with an independent evaluator");
    s_run->add_option("--threads", s_threads, "worker threads for candidate evaluation")->check(CLI::Range(1U, 1024U));
    s_run->add_option("--width-cap", s_width_cap, "maximum candidate width w (2^w candidates)")
        ->check(CLI::Range(0U, 30U));
    auto *s_digits = schmidt->add_subcommand("digits", "Digits of the limit certain at the current step");
    std::string d_state;
    unsigned d_base = 10;
    std::size_t d_max = 0;
    s_digits->add_option("--state", d_state, "state file")->required();
    s_digits->add_option("--base", d_base, "output base")->check(CLI::Range(2U, 1U << 20));
    s_digits->add_option("--max", d_max, "print at most this many digits (0 = all)");

    // sierpinski
    auto *sierp = app.add_subcommand("sierpinski", "Sierpinski construction");
    sierp->require_subcommand(1);
    auto *z_run = sierp->add_subcommand("run", "Compute digits greedily");
    unsigned z_base = 2;
    std::string z_eps = "1/2";
    std::uint64_t z_digits = 1;
    std::string z_toy;
    std::string z_state;
    std::string z_mode = "exact";
    bool z_verify = false;
    bool z_resume = false;
    z_run->add_option("--base", z_base, "output base")->check(CLI::Range(2U, 64U));
    z_run->add_option("--eps", z_eps, "epsilon in (0, 1/2]");
    z_run->add_option("--digits", z_digits, "digits to compute (additional digits with --resume)")->required();
    z_run->add_option("--toy", z_toy, "toy caps JSON {k_cap, q_cap, m_cap, n_cap, n_base}");
    z_run->add_option("--state", z_state, "state file")->required();
    z_run->add_option("--mode", z_mode, "exact or bound")->check(CLI::IsMember({"exact", "bound"}));
    z_run->add_flag("--verify", z_verify, "compare exact and bound modes at every digit");
    z_run->add_flag("--resume", z_resume, "continue from the state file");

    // disc
    auto *disc = app.add_subcommand("disc", "Exact discrepancy");
    disc->require_subcommand(1);
    auto *disc_exact = disc->add_subcommand("exact", "Discrepancy of a point file");
    std::string de_points;
    bool de_json = false;
    disc_exact->add_option("--points", de_points, "one rational point per line")->required();
    disc_exact->add_flag("--json", de_json, "emit extreme and star discrepancy as JSON");
    auto *disc_orbit = disc->add_subcommand("orbit", "Discrepancy table of {b^n x}");
    std::string do_x;
    std::uint64_t do_base = 2;
    std::uint64_t do_N = 1;
    std::string do_report = "csv";
    disc_orbit->add_option("--x", do_x, "x as p/q")->required();
    disc_orbit->add_option("--base", do_base, "base b")->required();
    disc_orbit->add_option("--N", do_N, "orbit length")->required();
    disc_orbit->add_option("--report", do_report, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    // weyl
    auto *weyl = app.add_subcommand("weyl", "Weyl sum sum_{n=1}^N e(b^n t x)");
    std::string w_x;
    std::uint64_t w_base = 2;
    long w_t = 1;
    std::uint64_t w_N = 1;
    weyl->add_option("--x", w_x, "x as p/q")->required();
    weyl->add_option("--base", w_base, "base b")->required();
    weyl->add_option("--t", w_t, "frequency t != 0");
    weyl->add_option("--N", w_N, "number of terms")->required();

    // et
    auto *et = app.add_subcommand("et", "Erdos-Turan bound for {b^n x}");
    std::string e_x;
    std::uint64_t e_base = 2;
    std::uint64_t e_N = 1;
    std::uint64_t e_H = 0;
    double e_c1 = 1.0;
    double e_c2 = 3.0;
    et->add_option("--x", e_x, "x as p/q")->required();
    et->add_option("--base", e_base, "base b")->required();
    et->add_option("--N", e_N, "orbit length")->required();
    et->add_option("--H", e_H, "frequency cutoff (default floor(log N))");
    et->add_option("--c1", e_c1, "constant C1");
    et->add_option("--c2", e_c2, "constant C2");

    // hs5
    auto *hs5 = app.add_subcommand("hs5", "sum_{n<N} prod_{k>K} |cos(pi r^n l / s^k)| with certified error");
    std::uint64_t h_r = 3;
    std::uint64_t h_s = 2;
    std::string h_l = "1";
    std::uint64_t h_K = 0;
    std::uint64_t h_N = 1;
    double h_tol = 1e-12;
    hs5->add_option("--r", h_r, "base r")->required();
    hs5->add_option("--s", h_s, "base s")->required();
    hs5->add_option("--l", h_l, "integer l")->required();
    hs5->add_option("--K", h_K, "first index K")->required();
    hs5->add_option("--N", h_N, "number of terms")->required();
    hs5->add_option("--tol", h_tol, "tail threshold");

    // report
    auto *report = app.add_subcommand("report", "Experiment report from a Schmidt state file");
    std::string r_state;
    std::string r_format = "json";
    unsigned r_base = 2;
    std::uint64_t r_max_N = 4096;
    report->add_option("--state", r_state, "state file")->required();
    report->add_option("--format", r_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    report->add_option("--base", r_base, "base for the orbit discrepancy table")->check(CLI::Range(2U, 1U << 16));
    report->add_option("--max-N", r_max_N, "largest orbit length in the table");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion &) {
        out << kToolVersion << '\n';
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\nRun with --help for usage.\n";
        return 2;
    }

    try {
        if (constants->parsed()) {
            const BasePairAnalysis analysis = analyze_pair(c_r, c_s);
            const ConstantSet c = compute_constants(
                analysis, c_variant == "all-n" ? ConstantsVariant::AllN : ConstantsVariant::LargeN);
            if (c_json) {
                out << detail::constants_json(analysis, c).dump(2) << '\n';
            } else {
                out << "r=" << c.r << " s=" << c.s << " variant=" << to_string(c.variant) << " b=" << analysis.b
                    << " h=" << analysis.h() << '\n';
                for (const auto &p : analysis.primes) {
                    out << "  p=" << p.prime << " d=" << p.d << " e=" << p.e << " t=" << to_string(p.t)
                        << " f=" << p.f << " g=" << p.g << " q=" << p.q << '\n';
                }
                for (const auto &row : detail::constant_rows(c)) {
                    out << std::left << std::setw(10) << row.name << " = " << std::setw(22) << row.value << "  "
                        << row.formula << '\n';
                }
            }
            return 0;
        }

        if (plan_cmd->parsed()) {
            const SequencePlan plan =
                p_toy.empty() ? build_default_plan(p_horizon) : parse_toy_plan_csv(detail::read_text(p_toy), p_horizon);
            out << to_json(plan).dump(2) << '\n';
            return 0;
        }

        if (s_run->parsed()) {
            ConstructionState state;
            if (s_resume) {
                state = state_from_json(read_json_file(s_state));
            } else {
                SequencePlan plan = detail::load_plan(s_plan, std::max<std::size_t>(s_horizon, 1));
                Schedule schedule = detail::parse_schedule(s_schedule, plan.s_at(1));
                schedule.set_precision(PrecisionPolicy::from_environment());
                state = initial_state(std::move(plan), std::move(schedule), s_width_cap);
            }
            state.schedule.set_precision(PrecisionPolicy::from_environment());
            BuilderConfig config;
            config.threads = s_threads;
            config.width_cap = state.width_cap;
            bool failed = false;
            for (std::uint64_t i = 0; i < s_steps; ++i) {
                const ConstructionState before = state;
                state = step(state, config);
                const StepRecord &rec = state.steps.back();
                detail::print_step(out, rec);
                if (!rec.nested_ok || !rec.order_ok) {
                    err << "invariant flag at step " << rec.m << '\n';
                    failed = true;
                }
                if (s_verify) {
                    const ArgminCheck check = verify_argmin(before, rec);
                    out << "  verify: " << (check.ok ? "ok" : "MISMATCH") << " (" << check.candidates
                        << " candidates re-evaluated)\n";
                    if (!check.ok) {
                        failed = true;
                    }
                }
                write_json_file(s_state, to_json(state));
            }
            write_json_file(s_state, to_json(state));
            out << "m=" << state.m << " xi=" << to_string(state.xi) << '\n';
            if (failed) {
                throw VerificationFailed("verification failed; see the step log");
            }
            return 0;
        }

        if (s_digits->parsed()) {
            const ConstructionState state = state_from_json(read_json_file(d_state));
            DigitString digits = emit_digits(state, d_base);
            if (d_max > 0 && digits.size() > d_max) {
                digits.digits.resize(d_max);
            }
            out << digits.str() << '\n';
            return 0;
        }

        if (z_run->parsed()) {
            SierpinskiState state;
            if (z_resume) {
                state = sierpinski_from_json(read_json_file(z_state));
            } else {
                SierpinskiParams params;
                params.base = z_base;
                params.epsilon = detail::parse_number(z_eps);
                if (!z_toy.empty()) {
                    params.caps = toy_caps_from_json(read_json_file(z_toy));
                }
                state = initial_sierpinski(params, z_mode == "exact" ? MeasureMode::Exact : MeasureMode::Bound);
            }
            bool failed = false;
            for (std::uint64_t i = 0; i < z_digits; ++i) {
                if (z_verify) {
                    const ModeCheck check = cross_check_modes(state.digits, state.params);
                    if (!check.bounds_dominate || !check.guarded_agree) {
                        err << "mode cross-check failed at digit " << state.digits.size() + 1 << '\n';
                        failed = true;
                    }
                }
                state = sierpinski_step(state);
                const SierpinskiStep &rec = state.steps.back();
                out << "digit " << rec.n << ": " << rec.digit << " (p_n=" << rec.k
                    << ", measure=" << to_string(rec.measures[rec.digit]) << " of cell " << to_string(rec.cell_length)
                    << ")" << (rec.survives ? "" : " CELL-COVERED") << '\n';
                if (state.mode == MeasureMode::Exact && !rec.survives) {
                    failed = true;
                }
                write_json_file(z_state, to_json(state));
            }
            write_json_file(z_state, to_json(state));
            out << "digits=" << state.digits.str() << (state.params.certified() ? "" : " (toy caps, not certified)")
                << '\n';
            if (failed) {
                throw VerificationFailed("Sierpinski verification failed");
            }
            return 0;
        }

        if (disc_exact->parsed()) {
            const PointSet ps = detail::read_points(de_points);
            const Rational d = discrepancy_extreme(ps);
            if (de_json) {
                out << Json{{"N", ps.size()},
                            {"extreme", to_string(d)},
                            {"star", to_string(discrepancy_star(ps))}}
                           .dump(2)
                    << '\n';
            } else {
                out << to_string(d) << '\n';
            }
            return 0;
        }

        if (disc_orbit->parsed()) {
            const Rational x = detail::parse_number(do_x);
            const auto rows = detail::orbit_table(x, do_base, do_N, {});
            if (do_report == "json") {
                out << Json{{"x", to_string(x)}, {"base", do_base}, {"rows", detail::disc_rows_json(rows)}}.dump(2)
                    << '\n';
            } else {
                detail::disc_rows_csv(out, rows);
            }
            return 0;
        }

        if (weyl->parsed()) {
            const std::complex<double> s = weyl_sum(OrbitSpec{detail::parse_number(w_x), w_base, w_N, w_t});
            out << detail::format_double(s.real()) << ' ' << detail::format_double(s.imag()) << ' '
                << detail::format_double(std::abs(s)) << '\n';
            return 0;
        }

        if (et->parsed()) {
            const Rational x = detail::parse_number(e_x);
            const std::uint64_t H = e_H == 0 ? log_cutoff(e_N) : e_H;
            const double bound = erdos_turan_bound(x, e_base, e_N, H, {e_c1, e_c2});
            const Rational d = discrepancy_extreme(orbit_points(x, e_base, e_N));
            out << "H=" << H << " et_bound=" << detail::format_double(bound) << " D_N=" << to_string(d) << " ("
                << detail::format_double(to_double(d)) << ")\n";
            return 0;
        }

        if (hs5->parsed()) {
            const Integer l = parse_integer(h_l);
            const Hs5Result res = hs5_sum(h_r, h_s, l, h_K, h_N, h_tol);
            const ConstantSet c = compute_constants(h_r, h_s, ConstantsVariant::AllN);
            const double log_rhs =
                std::numbers::ln2 + (1.0 - c.a20) * std::log(static_cast<double>(h_N)); // log 2 N^(1 - a20)
            const bool inequality = res.value <= 0 || std::log(res.value) <= log_rhs;
            out << "value=" << detail::format_double(res.value) << " certified_error="
                << detail::format_double(res.certified_error, 6) << " factors=" << res.factors_evaluated << '\n';
            out << "bound 2N^(1-a20) [all-n]: " << (inequality ? "holds" : "VIOLATED") << '\n';
            if (!res.hypothesis_ok) {
                err << "warning: hypothesis l >= s^K violated; the sum is still well defined\n";
            }
            return 0;
        }

        if (report->parsed()) {
            const ConstructionState state = state_from_json(read_json_file(r_state));
            std::ostringstream echo;
            for (std::size_t i = 0; i < args.size(); ++i) {
                echo << (i ? " " : "") << args[i];
            }
            // The orbit of xi_M only reflects the limit up to the certain digits.
            const DigitString certain = emit_digits(state, r_base);
            const std::uint64_t N = std::min<std::uint64_t>(certain.size(), r_max_N);
            std::vector<detail::DiscRow> disc_rows;
            if (N >= 1 && state.xi > 0) {
                disc_rows = detail::orbit_table(state.xi, r_base, N, {});
            }
            std::uint64_t evaluations = 0;
            for (const auto &rec : state.steps) {
                evaluations += rec.phase_evaluations;
            }
            const bool toy = !state.plan.certified || state.schedule.kind() != ScheduleKind::Paper;
            if (r_format == "csv") {
                out << "m[exact],s[exact],a[exact],b[exact],width[exact],candidates[exact],eta[exact],xi[exact],"
                       "objective[float64],objective_second[float64],lemma_ratio[float64],phase_evaluations[exact],"
                       "nested_ok,order_ok\n";
                for (const auto &rec : state.steps) {
                    out << rec.m << ',' << rec.s << ',' << rec.a << ',' << rec.b << ',' << rec.width << ','
                        << rec.candidates << ',' << to_string(rec.eta) << ',' << to_string(detail::xi_after(rec)) << ','
                        << detail::format_double(rec.objective) << ','
                        << (rec.objective_second ? detail::format_double(*rec.objective_second) : "") << ','
                        << detail::format_double(rec.lemma_ratio) << ',' << rec.phase_evaluations << ','
                        << (rec.nested_ok ? "true" : "false") << ',' << (rec.order_ok ? "true" : "false") << '\n';
                }
                out << '\n';
                detail::disc_rows_csv(out, disc_rows);
                return 0;
            }
            Json steps = Json::array();
            for (const auto &rec : state.steps) {
                steps.push_back(Json{
                    {"m", detail::exact_cell(std::to_string(rec.m))},
                    {"s", detail::exact_cell(std::to_string(rec.s))},
                    {"a", detail::exact_cell(rec.a.get_str())},
                    {"b", detail::exact_cell(rec.b.get_str())},
                    {"width", detail::exact_cell(std::to_string(rec.width))},
                    {"candidates", detail::exact_cell(std::to_string(rec.candidates))},
                    {"eta", detail::exact_cell(to_string(rec.eta))},
                    {"xi", detail::exact_cell(to_string(detail::xi_after(rec)))},
                    {"objective", detail::float_cell(rec.objective, "double, compensated sums; near-ties at 113 bits")},
                    {"objective_second", rec.objective_second
                                             ? detail::float_cell(*rec.objective_second, "double, compensated sums")
                                             : Json(nullptr)},
                    {"lemma_ratio", detail::float_cell(rec.lemma_ratio, "double, log-space")},
                    {"phase_evaluations", detail::exact_cell(std::to_string(rec.phase_evaluations))},
                    {"nested_ok", rec.nested_ok},
                    {"order_ok", rec.order_ok}});
            }
            const Json rep{{"tool_version", kToolVersion},
                           {"command", echo.str()},
                           {"plan", Json{{"horizon", state.plan.horizon},
                                         {"r", state.plan.r},
                                         {"s", state.plan.s},
                                         {"certified", state.plan.certified},
                                         {"beta_floored", state.plan.beta_floored}}},
                           {"schedule", state.schedule.describe()},
                           {"certification", toy ? "toy (not the certified parameters)" : "paper parameters"},
                           {"m", state.m},
                           {"xi", detail::exact_cell(to_string(state.xi))},
                           {"certain_digits", Json{{"base", r_base}, {"digits", certain.str()}}},
                           {"operation_counts", Json{{"phase_evaluations", detail::exact_cell(std::to_string(evaluations))}}},
                           {"steps", steps},
                           {"discrepancy", detail::disc_rows_json(disc_rows)}};
            out << rep.dump(2) << '\n';
            return 0;
        }
    } catch (const VerificationFailed &e) {
        err << "verification failure: " << e.what() << '\n';
        return 1;
    } catch (const ValidationError &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const LimitError &e) {
        err << "limit reached: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

inline int run(int argc, char **argv, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, out, err);
}

} // namespace normal::cli
