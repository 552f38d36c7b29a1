#include "pwlneuro/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <utility>

namespace pwlneuro {

namespace {

std::atomic<std::uint64_t> g_multiply_count{0};

std::int32_t saturate64(std::int64_t v, bool* saturated) {
    if (v > FixedPoint::kRawMax) {
        if (saturated) *saturated = true;
        return FixedPoint::kRawMax;
    }
    if (v < FixedPoint::kRawMin) {
        if (saturated) *saturated = true;
        return FixedPoint::kRawMin;
    }
    return static_cast<std::int32_t>(v);
}

} // namespace

FixedPoint encode(double x, bool* saturated) {
    if (std::isnan(x)) {
        if (saturated) *saturated = true;
        return FixedPoint::from_raw(0);
    }
    const double scaled = x * FixedPoint::kScale;
    if (scaled >= static_cast<double>(FixedPoint::kRawMax)) {
        if (saturated) *saturated = true;
        return FixedPoint::from_raw(FixedPoint::kRawMax);
    }
    if (scaled <= static_cast<double>(FixedPoint::kRawMin)) {
        if (saturated) *saturated = true;
        return FixedPoint::from_raw(FixedPoint::kRawMin);
    }
    // nearbyint under the default rounding mode is round-to-nearest-even
    return FixedPoint::from_raw(static_cast<std::int32_t>(std::nearbyint(scaled)));
}

FixedPoint fx_add(FixedPoint a, FixedPoint b, bool* saturated) {
    return FixedPoint::from_raw(
        saturate64(std::int64_t{a.raw()} + std::int64_t{b.raw()}, saturated));
}

FixedPoint fx_sub(FixedPoint a, FixedPoint b, bool* saturated) {
    return FixedPoint::from_raw(
        saturate64(std::int64_t{a.raw()} - std::int64_t{b.raw()}, saturated));
}

FixedPoint fx_neg(FixedPoint a, bool* saturated) {
    return FixedPoint::from_raw(saturate64(-std::int64_t{a.raw()}, saturated));
}

FixedPoint fx_abs(FixedPoint a, bool* saturated) {
    std::int64_t v = std::int64_t{a.raw()};
    if (v < 0) v = -v;
    return FixedPoint::from_raw(saturate64(v, saturated));
}

double ShiftAddPlan::value() const {
    double v = 0.0;
    for (const auto& t : terms) v += t.sign * std::ldexp(1.0, t.shift);
    return v;
}

std::string ShiftAddPlan::to_string() const {
    std::string s;
    for (const auto& t : terms) {
        if (!s.empty()) s += ' ';
        s += (t.sign > 0 ? "+2^" : "-2^");
        s += std::to_string(t.shift);
    }
    return s;
}

namespace {

// Nonzero digits of the plain binary representation of m (m > 0).
std::vector<int> binary_positions(std::int64_t m) {
    std::vector<int> pos;
    for (int b = 0; b < 63; ++b)
        if ((m >> b) & 1) pos.push_back(b);
    return pos;
}

// Non-adjacent form: minimal number of signed digits.
std::vector<std::pair<int, int>> naf_digits(std::int64_t m) {
    std::vector<std::pair<int, int>> digits; // (position, +-1)
    int pos = 0;
    while (m != 0) {
        if (m & 1) {
            const int z = 2 - static_cast<int>(m & 3); // +1 or -1
            digits.emplace_back(pos, z);
            m -= z;
        }
        m >>= 1;
        ++pos;
    }
    return digits;
}

} // namespace

ShiftAddPlan decompose_constant(double c, int max_terms) {
    if (max_terms < 1)
        throw NotRepresentableError("decompose_constant: max_terms must be >= 1");
    if (c == 0.0 || !std::isfinite(c))
        throw NotRepresentableError("decompose_constant: constant has no shift-add form");

    const double mag = std::abs(c);
    int frac = 0;
    double scaled = mag;
    while (frac <= 52 && scaled != std::floor(scaled)) {
        scaled *= 2.0;
        ++frac;
    }
    if (scaled != std::floor(scaled) || scaled > 9.0e15)
        throw NotRepresentableError("decompose_constant: " + std::to_string(c) + " is not dyadic");
    const auto m = static_cast<std::int64_t>(scaled);
    const int sign = c > 0 ? 1 : -1;

    const auto plain = binary_positions(m);
    const auto naf = naf_digits(m);

    ShiftAddPlan plan;
    if (naf.size() < plain.size()) {
        for (const auto& [pos, digit] : naf)
            plan.terms.push_back(ShiftAddTerm{digit * sign, pos - frac});
    } else {
        for (int pos : plain)
            plan.terms.push_back(ShiftAddTerm{sign, pos - frac});
    }
    if (static_cast<int>(plan.terms.size()) > max_terms)
        throw NotRepresentableError("decompose_constant: " + std::to_string(c) + " needs "
                                    + std::to_string(plan.terms.size()) + " terms, limit "
                                    + std::to_string(max_terms));
    std::sort(plan.terms.begin(), plan.terms.end(),
              [](const ShiftAddTerm& a, const ShiftAddTerm& b) { return a.shift > b.shift; });
    return plan;
}

bool is_shift_add_representable(double c, int max_terms) {
    try {
        (void)decompose_constant(c, max_terms);
        return true;
    } catch (const NotRepresentableError&) {
        return false;
    }
}

FixedPoint mul_by_plan(FixedPoint x, const ShiftAddPlan& plan, bool* saturated) {
    // Guard bits keep every shifted term exact; the one truncation happens
    // at the final narrowing, matching floor(raw * c).
    constexpr int kGuard = 24;
    std::int64_t acc = 0;
    for (const auto& t : plan.terms) {
        const int sh = kGuard + t.shift;
        // plan shifts stay within [-24, 24] for any representable constant here
        const std::int64_t term = sh >= 0 ? (std::int64_t{x.raw()} << sh)
                                          : (std::int64_t{x.raw()} >> -sh);
        acc += t.sign > 0 ? term : -term;
    }
    return FixedPoint::from_raw(saturate64(acc >> kGuard, saturated));
}

FixedPoint scale_by_dt(FixedPoint x) {
    return FixedPoint::from_raw(x.raw() >> 14);
}

FixedPoint fx_square(FixedPoint x, bool* saturated) {
    g_multiply_count.fetch_add(1, std::memory_order_relaxed);
    const std::int64_t wide = std::int64_t{x.raw()} * std::int64_t{x.raw()};
    return FixedPoint::from_raw(saturate64(wide >> FixedPoint::kFracBits, saturated));
}

std::uint64_t multiply_count() {
    return g_multiply_count.load(std::memory_order_relaxed);
}

void reset_multiply_count() {
    g_multiply_count.store(0, std::memory_order_relaxed);
}

} // namespace pwlneuro
