// Acceptance harness: one PASS/FAIL line per criterion AC1..AC12.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace normal;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const std::function<Outcome()> &check) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = check();
    } catch (const std::exception &e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!out.pass) {
        ++failures;
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << "AC" << id << ' ' << (out.pass ? "PASS" : "FAIL") << ' ' << out.detail << " [" << timing << "]"
              << std::endl;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string data(const std::string &name) { return std::string(NORMAL_DATA_DIR) + "/" + name; }

std::string temp_path(const std::string &name) {
    const fs::path dir = fs::temp_directory_path() / "normal_acceptance";
    fs::create_directories(dir);
    return (dir / name).string();
}

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::vector<std::string> &args) {
    std::ostringstream out;
    std::ostringstream err;
    return normal::cli::run(args, out, err);
}

// v_p of a non-zero integer by repeated division.
unsigned valuation(Integer n, std::uint64_t p) {
    unsigned v = 0;
    while (n % static_cast<unsigned long>(p) == 0) {
        n /= static_cast<unsigned long>(p);
        ++v;
    }
    return v;
}

// a1 and a2 straight from v_p(t^f - 1) = g - 1.
std::pair<unsigned, Integer> a1_a2_oracle(std::uint64_t r, std::uint64_t s) {
    std::vector<std::uint64_t> primes;
    for (std::uint64_t p = 2; p <= std::max(r, s); ++p) {
        bool prime = true;
        for (std::uint64_t d = 2; d * d <= p; ++d) {
            prime = prime && p % d != 0;
        }
        if (prime && (r % p == 0 || s % p == 0)) {
            primes.push_back(p);
        }
    }
    unsigned max_d = 0;
    unsigned max_e = 0;
    for (std::uint64_t p : primes) {
        max_d = std::max(max_d, valuation(Integer(static_cast<unsigned long>(r)), p));
        max_e = std::max(max_e, valuation(Integer(static_cast<unsigned long>(s)), p));
    }
    const unsigned b = max_d * max_e;
    unsigned a1 = 0;
    Integer a2 = 0;
    for (std::uint64_t p : primes) {
        const unsigned d = valuation(Integer(static_cast<unsigned long>(r)), p);
        const unsigned e = valuation(Integer(static_cast<unsigned long>(s)), p);
        const Rational t = Rational(pow_integer(r, e)) / Rational(pow_integer(s, d));
        const unsigned f = p == 2 ? 2 : static_cast<unsigned>(p - 1);
        Rational tf = 1;
        for (unsigned i = 0; i < f; ++i) {
            tf *= t;
        }
        const Rational diff = tf - 1;
        const unsigned g = valuation(diff.get_num(), p) + 1;
        a1 = std::max(a1, g);
        if (e > 0) {
            a2 = std::max(a2, pow_integer(p, 2UL * b + g));
        }
    }
    return {a1, a2};
}

Outcome ac1() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + rng() % 12;
        std::vector<Rational> pts;
        for (std::size_t i = 0; i < n; ++i) {
            pts.push_back(oracle::random_unit(rng, trial % 3 == 0 ? 16 : 100000));
        }
        const PointSet ps(pts);
        if (discrepancy_extreme(ps) != oracle::brute_extreme(pts) || discrepancy_star(ps) != oracle::brute_star(pts)) {
            return {false, "mismatch on trial " + std::to_string(trial)};
        }
    }
    const double secs = seconds_since(t0);
    return {secs < 10.0, "500 point sets agree exactly with brute force"};
}

Outcome ac2() {
    const auto t0 = std::chrono::steady_clock::now();
    const ConstantSet c = compute_constants(2, 3);
    const auto [a1_ref, a2_ref] = a1_a2_oracle(2, 3);
    const double L = std::log(3.0);
    const double hs4 = 288.0 * (12.0 * 3.0 * std::pow(L, 4) + 8.0 * std::pow(L, 3) + L * L);
    const double a20_approx = 0.0057 / (81.0 * L) * (1.0 / L - 1.0 / 3.0);
    const double a20_rel = std::abs(c.a20 / a20_approx - 1.0);
    const double hs4_rel = std::abs(c.logN0_HS4 / hs4 - 1.0);
    const double secs = seconds_since(t0);
    const bool ok = c.a1 == 4 && c.a2 == 81 && a1_ref == c.a1 && a2_ref == c.a2 && c.a1 >= 2 &&
                    c.a1 <= c.a1_upper_bound() && a20_rel <= 0.05 && hs4_rel <= 1e-6 && secs < 1.0;
    std::ostringstream d;
    d << "a1=" << c.a1 << " (oracle " << a1_ref << ", bound " << c.a1_upper_bound() << ") a2=" << c.a2 << " (oracle "
      << a2_ref << ") a20=" << c.a20 << " vs approx " << a20_approx << " rel " << a20_rel
      << " logN0_HS4 rel err " << hs4_rel;
    return {ok, d.str()};
}

Outcome ac3() {
    const double a = solve_exact_a4(2);
    return {a >= 0.053 && a <= 0.057, "solve_exact_a4(2)=" + std::to_string(a)};
}

Outcome ac4() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::string> common{"--plan", data("toy_plan.csv"), "--horizon", "6",
                                          "--schedule", "toy:" + data("toy_schedule.json")};
    auto cmd = [&](std::vector<std::string> head) {
        head.insert(head.end(), common.begin(), common.end());
        return run_cli(head);
    };
    const std::string a = temp_path("ac4_a.json");
    const std::string b = temp_path("ac4_b.json");
    const std::string c = temp_path("ac4_c.json");
    if (cmd({"schmidt", "run", "--steps", "6", "--state", a, "--threads", "4"}) != 0 ||
        cmd({"schmidt", "run", "--steps", "6", "--state", b, "--threads", "1"}) != 0 ||
        cmd({"schmidt", "run", "--steps", "3", "--state", c, "--threads", "2"}) != 0 ||
        cmd({"schmidt", "run", "--steps", "3", "--state", c, "--resume", "--threads", "3"}) != 0) {
        return {false, "CLI run failed"};
    }
    const bool identical = slurp(a) == slurp(b);
    const bool resumed = slurp(a) == slurp(c);

    const ConstructionState final_state = state_from_json(read_json_file(a));
    ConstructionState replay = initial_state(final_state.plan, final_state.schedule, final_state.width_cap);
    bool argmin = true;
    bool nested = true;
    long long max_width = 0;
    Rational lo_prev = 0;
    Rational hi_prev = 1;
    for (const StepRecord &rec : final_state.steps) {
        max_width = std::max(max_width, rec.width);
        argmin = argmin && verify_argmin(replay, rec).ok;
        replay = step(replay);
        const auto [lo, hi] = enclosing_interval(replay);
        nested = nested && rec.nested_ok && rec.order_ok && lo_prev <= lo && hi <= hi_prev && lo < hi;
        lo_prev = lo;
        hi_prev = hi;
    }
    const double secs = seconds_since(t0);
    std::ostringstream d;
    d << "steps=" << final_state.steps.size() << " max width=" << max_width << " byte-identical=" << identical
      << " argmin re-check=" << argmin << " nested=" << nested << " resume=" << resumed;
    return {identical && argmin && nested && resumed && final_state.steps.size() == 6 && max_width <= 12 &&
                secs < 60.0,
            d.str()};
}

Outcome ac5() {
    const std::size_t steps = 30;
    const SequencePlan plan = build_default_plan(32);
    const Schedule sch = Schedule::power(Rational(1, 2));
    ConstructionState state = initial_state(plan, sch);
    state = run_steps(state, steps);
    bool invariants = state.diagnostics_ok() && state.steps.size() == steps;
    for (std::size_t i = 0; i + 1 < state.steps.size(); ++i) {
        invariants = invariants && state.steps[i].bracket < state.steps[i + 1].bracket;
    }
    bool brackets = sch.bracket(4) == 7;
    for (std::uint64_t m = 1; m <= steps + 1; ++m) {
        brackets = brackets && sch.bracket(m) == oracle::floor_power_bracket(m, 1, 2);
    }
    std::ostringstream d;
    d << steps << " steps, invariants=" << invariants << ", <m> for m<=" << steps + 1
      << " match 700-bit evaluation=" << brackets << ", <4>=" << sch.bracket(4) << ", final width "
      << state.steps.back().width;
    return {invariants && brackets, d.str()};
}

Outcome ac6() {
    std::mt19937_64 rng(606);
    double worst = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const Rational x = oracle::random_unit(rng, 1000000);
        const std::uint64_t b = 2 + rng() % 15;
        long t = static_cast<long>(rng() % 41) - 20;
        if (t == 0) {
            t = 1;
        }
        const std::uint64_t N = 1 + rng() % 1000;
        const auto got = weyl_sum({x, b, N, t});
        const auto ref = oracle::naive_weyl(x, b, t, N);
        worst = std::max(worst, std::abs(got - ref));
    }
    std::ostringstream d;
    d << "200 cases, max |error| = " << worst;
    return {worst <= 1e-9, d.str()};
}

Outcome ac7() {
    std::mt19937_64 rng(707);
    double min_margin = 1e300;
    for (int trial = 0; trial < 50; ++trial) {
        const Rational x = oracle::random_unit(rng, 1000000);
        const std::uint64_t b = 2 + rng() % 9;
        const std::uint64_t N = trial == 0 ? 2000 : 1 + rng() % 2000;
        const double et = erdos_turan_bound(x, b, N, log_cutoff(N));
        const double exact = to_double(discrepancy_extreme(orbit_points(x, b, N)));
        min_margin = std::min(min_margin, et - exact);
    }
    return {min_margin >= 0, "50 orbits, min (ET - D_N) = " + std::to_string(min_margin)};
}

Outcome ac8() {
    std::mt19937_64 rng(808);
    int cases = 0;
    double worst_ratio = 0;
    bool inequality = true;
    while (cases < 50) {
        const std::uint64_t r = 2 + rng() % 9;
        const std::uint64_t s = 2 + rng() % 9;
        if (r == s || mult_dependent(r, s)) {
            continue;
        }
        const std::uint64_t K = rng() % 4;
        const Integer l = pow_integer(s, K) + Integer(static_cast<unsigned long>(rng() % 1000));
        const std::uint64_t N = 1 + rng() % 120;
        const Hs5Result res = hs5_sum(r, s, l, K, N);
        const double ref = oracle::hs5_reference(r, s, l, K, N);
        const double dev = std::abs(res.value - ref);
        if (dev > res.certified_error) {
            return {false, "certified error exceeded at r=" + std::to_string(r) + " s=" + std::to_string(s)};
        }
        if (res.certified_error > 0) {
            worst_ratio = std::max(worst_ratio, dev / res.certified_error);
        }
        const ConstantSet c = compute_constants(r, s, ConstantsVariant::AllN);
        const double log_rhs = std::numbers::ln2 + (1.0 - std::exp(c.log_a20)) * std::log(static_cast<double>(N));
        inequality = inequality && res.hypothesis_ok && std::log(res.value) <= log_rhs;
        ++cases;
    }
    std::ostringstream d;
    d << "50 cases, max |dev|/certified_error = " << worst_ratio << ", value <= 2N^(1-a20) on all: " << inequality;
    return {inequality, d.str()};
}

Outcome ac9() {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t families = 0;
    for (std::uint64_t q = 2; q <= 3; ++q) {
        for (std::uint64_t m = 1; m <= 3; ++m) {
            for (std::uint64_t n = 1; n <= 12; ++n) {
                for (std::uint64_t p = 0; p < q; ++p) {
                    if (delta_family(q, m, n, p).measure() > delta_measure_bound(q, m, n, p)) {
                        return {false, "measure exceeds bound"};
                    }
                    ++families;
                }
            }
        }
    }
    const SierpinskiParams params = fixture::toy_params();
    const SierpinskiState a = sierpinski_run(initial_sierpinski(params, MeasureMode::Exact), 6);
    const SierpinskiState b = sierpinski_run(initial_sierpinski(params, MeasureMode::Exact), 6);
    bool deterministic = to_json(a).dump() == to_json(b).dump();
    bool tie_break = true;
    for (const SierpinskiStep &st : a.steps) {
        const Rational best = *std::min_element(st.measures.begin(), st.measures.end());
        unsigned first = 0;
        while (st.measures[first] != best) {
            ++first;
        }
        tie_break = tie_break && st.digit == first;
    }
    const bool survive = a.diagnostics_ok();
    const double secs = seconds_since(t0);
    std::ostringstream d;
    d << families << " families measure<=bound, digits " << a.digits.str() << ", deterministic=" << deterministic
      << " smallest-d=" << tie_break << " surviving=" << survive;
    return {deterministic && tie_break && survive && secs < 30.0, d.str()};
}

Outcome ac10() {
    std::mt19937_64 rng(1010);
    for (int trial = 0; trial < 500; ++trial) {
        Rational a = oracle::random_unit(rng, 10000);
        Rational b = oracle::random_unit(rng, 10000);
        if (a == b) {
            b = a + make_rational(1, 10000);
        }
        if (b < a) {
            std::swap(a, b);
        }
        const unsigned base = 2 + static_cast<unsigned>(rng() % 35);
        if (certain_digits(a, b, base) != oracle::brute_certain_digits(a, b, base)) {
            return {false, "mismatch on [" + to_string(a) + ", " + to_string(b) + ") base " + std::to_string(base)};
        }
    }
    return {true, "500 intervals match brute-force digit comparison"};
}

Outcome ac11() {
    std::vector<double> ratios;
    for (int e = 10; e <= 30; ++e) {
        const double N = std::exp2(e);
        ratios.push_back(turing_bridge_bound(2, N) / std::pow(N, -1.0 / 16.0));
    }
    const double C = *std::max_element(ratios.begin(), ratios.end());
    const double spread = C / *std::min_element(ratios.begin(), ratios.end());
    bool below = true;
    for (int e = 10; e <= 30; ++e) {
        const double N = std::exp2(e);
        below = below && turing_bridge_bound(2, N) <= C * std::pow(N, -1.0 / 16.0);
    }
    bool exact_zero = true;
    for (unsigned long q = 2; q <= 10; ++q) {
        for (unsigned long k = 1; k <= 12; ++k) {
            exact_zero = exact_zero && cell_deviation_discrepancy_bound(Integer(q), k, Rational(0)) ==
                                           make_rational(2, pow_integer(q, k));
        }
    }
    std::ostringstream d;
    d << "fitted C=" << C << " (ratio spread " << spread << " over N=2^10..2^30, ratio at 2^30 " << ratios.back()
      << "), dev=0 gives 2q^-k exactly: " << exact_zero;
    return {below && exact_zero, d.str()};
}

Outcome ac12() {
    int pairs = 0;
    for (std::uint64_t r = 2; r <= 64; ++r) {
        for (std::uint64_t s = 2; s <= 64; ++s) {
            if (mult_dependent(r, s) != oracle::brute_dependent(r, s)) {
                return {false, "mismatch at " + std::to_string(r) + "," + std::to_string(s)};
            }
            ++pairs;
        }
    }
    return {true, std::to_string(pairs) + " pairs match brute force"};
}

} // namespace

int main() {
    report(1, ac1);
    report(2, ac2);
    report(3, ac3);
    report(4, ac4);
    report(5, ac5);
    report(6, ac6);
    report(7, ac7);
    report(8, ac8);
    report(9, ac9);
    report(10, ac10);
    report(11, ac11);
    report(12, ac12);
    return failures == 0 ? 0 : 1;
}
