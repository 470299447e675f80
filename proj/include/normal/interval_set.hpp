#pragma once

// Finite unions of disjoint half-open rational intervals inside [0, 1).

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "normal/errors.hpp"
#include "normal/exact.hpp"

namespace normal {

class IntervalSet {
  public:
    using Interval = std::pair<Rational, Rational>;

    IntervalSet() = default;

    /// Normalizes arbitrary intervals: drops empty ones, clips to [0, 1), merges overlaps and
    /// touching neighbours.
    static IntervalSet from_intervals(std::vector<Interval> raw) {
        IntervalSet out;
        for (auto &[lo, hi] : raw) {
            if (lo < 0) {
                lo = 0;
            }
            if (hi > 1) {
                hi = 1;
            }
        }
        std::erase_if(raw, [](const Interval &iv) { return !(iv.first < iv.second); });
        std::sort(raw.begin(), raw.end(), [](const Interval &a, const Interval &b) { return a.first < b.first; });
        for (auto &iv : raw) {
            if (!out.parts_.empty() && iv.first <= out.parts_.back().second) {
                if (iv.second > out.parts_.back().second) {
                    out.parts_.back().second = iv.second;
                }
            } else {
                out.parts_.push_back(std::move(iv));
            }
        }
        return out;
    }

    static IntervalSet single(const Rational &lo, const Rational &hi) { return from_intervals({{lo, hi}}); }

    [[nodiscard]] const std::vector<Interval> &parts() const noexcept { return parts_; }
    [[nodiscard]] bool empty() const noexcept { return parts_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return parts_.size(); }

    [[nodiscard]] Rational measure() const {
        Rational total = 0;
        for (const auto &[lo, hi] : parts_) {
            total += hi - lo;
        }
        return total;
    }

    [[nodiscard]] bool contains(const Rational &x) const {
        auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                                   [](const Rational &v, const Interval &iv) { return v < iv.first; });
        if (it == parts_.begin()) {
            return false;
        }
        --it;
        return x < it->second;
    }

    [[nodiscard]] IntervalSet unite(const IntervalSet &other) const {
        std::vector<Interval> all = parts_;
        all.insert(all.end(), other.parts_.begin(), other.parts_.end());
        return from_intervals(std::move(all));
    }

    [[nodiscard]] IntervalSet intersect(const IntervalSet &other) const {
        IntervalSet out;
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < parts_.size() && j < other.parts_.size()) {
            const Rational &lo = std::max(parts_[i].first, other.parts_[j].first);
            const Rational &hi = std::min(parts_[i].second, other.parts_[j].second);
            if (lo < hi) {
                out.parts_.emplace_back(lo, hi);
            }
            if (parts_[i].second < other.parts_[j].second) {
                ++i;
            } else {
                ++j;
            }
        }
        return out;
    }

    /// Measure of the intersection with [lo, hi) without building it.
    [[nodiscard]] Rational measure_within(const Rational &lo, const Rational &hi) const {
        Rational total = 0;
        for (const auto &[a, b] : parts_) {
            if (b <= lo) {
                continue;
            }
            if (a >= hi) {
                break;
            }
            total += std::min(b, hi) - std::max(a, lo);
        }
        return total;
    }

    [[nodiscard]] std::string str() const {
        if (parts_.empty()) {
            return "{}";
        }
        std::string out;
        for (const auto &[lo, hi] : parts_) {
            if (!out.empty()) {
                out += " u ";
            }
            out += "[" + to_string(lo) + ", " + to_string(hi) + ")";
        }
        return out;
    }

    friend bool operator==(const IntervalSet &a, const IntervalSet &b) { return a.parts_ == b.parts_; }

  private:
    std::vector<Interval> parts_;
};

} // namespace normal
