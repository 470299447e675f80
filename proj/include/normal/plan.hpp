#pragma once

// Base sequences R and S for the step-m construction, with the repetition map phi
// that enforces the decay conditions on beta_k and gamma_k.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "normal/constants.hpp"
#include "normal/errors.hpp"

namespace normal {

inline bool is_perfect_power(std::uint64_t n) {
    if (n < 4) {
        return false;
    }
    const Factorization f = factorize(n);
    unsigned g = 0;
    for (const auto &pp : f) {
        g = std::gcd(g, pp.exponent);
    }
    return g > 1;
}

/// First `count` integers greater than 2 that are not perfect powers.
inline std::vector<std::uint64_t> default_s_sequence(std::size_t count) {
    if (count < 1) {
        throw ValidationError("default_s_sequence expects count >= 1");
    }
    std::vector<std::uint64_t> out;
    out.reserve(count);
    for (std::uint64_t n = 3; out.size() < count; ++n) {
        if (!is_perfect_power(n)) {
            out.push_back(n);
        }
    }
    return out;
}

/// 2, 3, 4, ... : every integer base, in increasing order.
inline std::vector<std::uint64_t> default_r_sequence(std::size_t count) {
    std::vector<std::uint64_t> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = i + 2;
    }
    return out;
}

/// phi(1) = 1 and phi(k) is the largest phi <= phi(k-1) + 1 with
/// beta_phi >= beta_1 / k^(1/4) and gamma_phi <= gamma_1 k. Values are 1-based and never
/// exceed the table length. `log_beta` holds natural logs of beta_k.
inline std::vector<std::size_t> compute_phi(const std::vector<double> &log_beta,
                                            const std::vector<std::uint64_t> &gamma,
                                            std::size_t horizon) {
    if (log_beta.empty() || log_beta.size() != gamma.size()) {
        throw ValidationError("beta and gamma tables must be non-empty and of equal length");
    }
    std::vector<std::size_t> phi;
    phi.reserve(horizon);
    for (std::size_t k = 1; k <= horizon; ++k) {
        if (k == 1) {
            phi.push_back(1);
            continue;
        }
        const double kd = static_cast<double>(k);
        const double beta_floor = log_beta[0] - 0.25 * std::log(kd);
        const double gamma_cap = static_cast<double>(gamma[0]) * kd;
        std::size_t chosen = 0;
        for (std::size_t cand = std::min(phi.back() + 1, log_beta.size()); cand >= 1; --cand) {
            if (log_beta[cand - 1] >= beta_floor && static_cast<double>(gamma[cand - 1]) <= gamma_cap) {
                chosen = cand;
                break;
            }
        }
        if (chosen == 0) {
            throw PlanInfeasible("no admissible phi at k = " + std::to_string(k));
        }
        phi.push_back(chosen);
    }
    return phi;
}

struct SequencePlan {
    std::vector<std::uint64_t> raw_r;
    std::vector<std::uint64_t> raw_s;
    std::vector<double> log_beta;       // log beta_k over raw indices
    std::vector<std::uint64_t> gamma;   // gamma_k over raw indices
    std::vector<std::size_t> phi;       // 1-based, length = horizon
    std::vector<std::uint64_t> r;       // r'_i = r_phi(i)
    std::vector<std::uint64_t> s;       // s'_i = s_phi(i)
    std::map<std::uint64_t, std::size_t> m0;
    std::size_t horizon = 0;
    bool certified = false;    // built from the explicit all-N constants
    bool beta_floored = false; // some beta hit the configured floor

    [[nodiscard]] std::uint64_t r_at(std::size_t i) const { return r.at(i - 1); }
    [[nodiscard]] std::uint64_t s_at(std::size_t m) const { return s.at(m - 1); }
    /// log of beta'_m = beta_phi(m).
    [[nodiscard]] double log_beta_at(std::size_t m) const { return log_beta.at(phi.at(m - 1) - 1); }
    [[nodiscard]] std::size_t m0_of(std::uint64_t base) const { return m0.at(base); }
};

/// Smallest m0 with r independent of s_m for every m0 <= m <= horizon.
inline std::size_t compute_m0(std::uint64_t r, const std::vector<std::uint64_t> &s) {
    if (s.empty()) {
        throw HorizonTooShort("empty S sequence");
    }
    if (mult_dependent(r, s.back())) {
        throw HorizonTooShort(std::to_string(r) + " is still dependent on s at the plan horizon");
    }
    std::size_t m0 = 1;
    for (std::size_t m = 1; m <= s.size(); ++m) {
        if (mult_dependent(r, s[m - 1])) {
            m0 = m + 1;
        }
    }
    return m0;
}

inline std::size_t compute_m0(std::uint64_t r, const SequencePlan &plan) { return compute_m0(r, plan.s); }

/// Applies phi to the raw sequences and checks every plan invariant over the horizon.
inline SequencePlan apply_phi(const std::vector<std::uint64_t> &raw_r, const std::vector<std::uint64_t> &raw_s,
                              const std::vector<double> &log_beta, const std::vector<std::uint64_t> &gamma,
                              std::size_t horizon) {
    if (horizon < 1) {
        throw ValidationError("plan horizon must be at least 1");
    }
    if (raw_r.size() < log_beta.size() || raw_s.size() < log_beta.size()) {
        throw ValidationError("raw R/S sequences shorter than the beta table");
    }
    for (std::size_t k = 1; k < log_beta.size(); ++k) {
        if (log_beta[k] > log_beta[k - 1]) {
            throw PlanInfeasible("beta_k must be non-increasing");
        }
        if (gamma[k] < gamma[k - 1]) {
            throw PlanInfeasible("gamma_k must be non-decreasing");
        }
    }
    if (!log_beta.empty() && log_beta[0] >= std::log(0.5)) {
        throw PlanInfeasible("beta_1 must be below 1/2");
    }
    SequencePlan plan;
    plan.raw_r = raw_r;
    plan.raw_s = raw_s;
    plan.log_beta = log_beta;
    plan.gamma = gamma;
    plan.horizon = horizon;
    plan.phi = compute_phi(log_beta, gamma, horizon);
    for (std::size_t i = 0; i < horizon; ++i) {
        plan.r.push_back(raw_r[plan.phi[i] - 1]);
        plan.s.push_back(raw_s[plan.phi[i] - 1]);
    }
    for (std::size_t m = 1; m <= horizon; ++m) {
        if (plan.s[m - 1] <= 2) {
            throw PlanInfeasible("every s must exceed 2");
        }
        if (plan.s[m - 1] > m * plan.s[0]) {
            throw PlanInfeasible("s_m <= m s_1 fails at m = " + std::to_string(m));
        }
    }
    for (std::uint64_t base : plan.r) {
        if (!plan.m0.contains(base)) {
            plan.m0[base] = compute_m0(base, plan.s);
        }
    }
    return plan;
}

/// gamma_k = max(r_1..r_k, s_1..s_k).
inline std::vector<std::uint64_t> gamma_table(const std::vector<std::uint64_t> &raw_r,
                                              const std::vector<std::uint64_t> &raw_s, std::size_t count) {
    std::vector<std::uint64_t> out(count);
    std::uint64_t running = 0;
    for (std::size_t k = 0; k < count; ++k) {
        running = std::max({running, raw_r.at(k), raw_s.at(k)});
        out[k] = running;
    }
    return out;
}

struct DefaultPlanOptions {
    // Natural-log floor applied to beta_k for plan construction only (default: log 1e-300).
    double log_beta_floor = std::log(1e-300);
};

/// R = 2, 3, 4, ...; S = non-perfect-powers > 2; beta_k from the all-N a20 of every independent
/// pair (r_i, s_j), i, j <= k, in log space and floored.
inline SequencePlan build_default_plan(std::size_t horizon, const DefaultPlanOptions &options = {}) {
    if (horizon < 1) {
        throw ValidationError("plan horizon must be at least 1");
    }
    const auto raw_r = default_r_sequence(horizon);
    const auto raw_s = default_s_sequence(horizon);
    std::vector<double> log_beta(horizon);
    bool floored = false;
    double running = std::numeric_limits<double>::infinity();
    std::map<std::pair<std::uint64_t, std::uint64_t>, double> cache;
    const auto pair_log_a20 = [&cache](std::uint64_t r, std::uint64_t s) {
        auto key = std::make_pair(r, s);
        if (auto it = cache.find(key); it != cache.end()) {
            return it->second;
        }
        const double value = compute_constants(r, s, ConstantsVariant::AllN).log_a20;
        cache.emplace(key, value);
        return value;
    };
    for (std::size_t k = 0; k < horizon; ++k) {
        // New pairs at index k: (r_k, s_j) for j <= k and (r_i, s_k) for i < k.
        for (std::size_t j = 0; j <= k; ++j) {
            if (!mult_dependent(raw_r[k], raw_s[j])) {
                running = std::min(running, pair_log_a20(raw_r[k], raw_s[j]));
            }
            if (j < k && !mult_dependent(raw_r[j], raw_s[k])) {
                running = std::min(running, pair_log_a20(raw_r[j], raw_s[k]));
            }
        }
        if (running < options.log_beta_floor) {
            floored = true;
        }
        log_beta[k] = std::max(running, options.log_beta_floor);
    }
    SequencePlan plan = apply_phi(raw_r, raw_s, log_beta, gamma_table(raw_r, raw_s, horizon), horizon);
    plan.certified = !floored;
    plan.beta_floored = floored;
    return plan;
}

} // namespace normal
