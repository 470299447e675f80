#pragma once

// Growth schedules <m> and the derived symbols <m; x> = floor(<m> / log x).

#include <cstdint>
#include <string>
#include <vector>

#include "normal/certified.hpp"
#include "normal/errors.hpp"
#include "normal/exact.hpp"

namespace normal {

enum class ScheduleKind { Paper, Power, Toy };

class Schedule {
  public:
    /// <m> = floor(e^sqrt(m) + 2 s1 m^3).
    static Schedule paper(std::uint64_t s1) {
        Schedule out;
        out.kind_ = ScheduleKind::Paper;
        out.s1_ = s1;
        return out;
    }

    /// <m> = floor(e^(m^c)) with 0 < c < 1.
    static Schedule power(const Rational &c) {
        if (!(c > 0 && c < 1)) {
            throw ScheduleInvalid("power schedule exponent must lie in (0, 1)");
        }
        Schedule out;
        out.kind_ = ScheduleKind::Power;
        out.c_ = c;
        return out;
    }

    /// Explicit table: values[m - 1] = <m>.
    static Schedule toy(std::vector<Integer> values) {
        if (values.empty()) {
            throw ScheduleInvalid("toy schedule table is empty");
        }
        Schedule out;
        out.kind_ = ScheduleKind::Toy;
        out.table_ = std::move(values);
        return out;
    }

    [[nodiscard]] ScheduleKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::uint64_t s1() const noexcept { return s1_; }
    [[nodiscard]] const Rational &exponent() const noexcept { return c_; }
    [[nodiscard]] const std::vector<Integer> &table() const noexcept { return table_; }
    [[nodiscard]] const PrecisionPolicy &precision() const noexcept { return precision_; }
    void set_precision(const PrecisionPolicy &policy) { precision_ = policy; }

    /// A = (1 - c)/c for power schedules, the exponent in the improved discrepancy rate.
    [[nodiscard]] Rational rate_exponent() const {
        if (kind_ != ScheduleKind::Power) {
            throw ScheduleInvalid("rate exponent is defined for power schedules only");
        }
        return (1 - c_) / c_;
    }

    [[nodiscard]] std::string describe() const {
        switch (kind_) {
        case ScheduleKind::Paper:
            return "paper(s1=" + std::to_string(s1_) + ")";
        case ScheduleKind::Power:
            return "power(c=" + to_string(c_) + ")";
        case ScheduleKind::Toy:
            return "toy(" + std::to_string(table_.size()) + " entries)";
        }
        return "unknown";
    }

    /// The real expression whose floor is <m> (paper and power kinds).
    [[nodiscard]] CertifiedReal bracket_expression(std::uint64_t m) const {
        const CertifiedReal mm = CertifiedReal::integer(Integer(static_cast<unsigned long>(m)));
        if (kind_ == ScheduleKind::Paper) {
            const Integer cubic = Integer(2 * s1_) * pow_integer(m, 3);
            return exp(sqrt(mm)) + CertifiedReal::integer(cubic);
        }
        if (kind_ == ScheduleKind::Power) {
            return exp(pow(mm, c_));
        }
        throw ScheduleInvalid("toy schedules are tabulated");
    }

    /// <m>
    [[nodiscard]] Integer bracket(std::uint64_t m) const {
        if (m < 1) {
            throw ValidationError("schedule index must be at least 1");
        }
        if (kind_ == ScheduleKind::Toy) {
            if (m > table_.size()) {
                throw HorizonTooShort("toy schedule has no entry for m = " + std::to_string(m));
            }
            return table_[m - 1];
        }
        return certified_floor(bracket_expression(m), precision_);
    }

    /// <m; x> = floor(<m> / log x), x >= 2.
    [[nodiscard]] Integer bracket_over_log(std::uint64_t m, std::uint64_t x) const {
        return floor_over_log(bracket(m), x);
    }

    [[nodiscard]] Integer floor_over_log(const Integer &value, std::uint64_t x) const {
        if (x < 2) {
            throw ValidationError("log base argument must be at least 2");
        }
        const CertifiedReal quotient =
            CertifiedReal::integer(value) / log(CertifiedReal::integer(Integer(static_cast<unsigned long>(x))));
        return certified_floor(quotient, precision_);
    }

  private:
    Schedule() = default;

    ScheduleKind kind_ = ScheduleKind::Paper;
    std::uint64_t s1_ = 3;
    Rational c_ = Rational(1, 2);
    std::vector<Integer> table_;
    PrecisionPolicy precision_{};
};

} // namespace normal
