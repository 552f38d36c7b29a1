#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include "pwlneuro/errors.hpp"

namespace pwlneuro {

/**
 * 20-bit signed Q8.12 value: 1 sign + 7 integer + 12 fraction bits.
 * Resolution 2^-12, range [-128, 128). All arithmetic saturates instead
 * of wrapping; wrapped overflow would inject spurious spikes into the
 * neuron datapath.
 */
class FixedPoint {
public:
    static constexpr int kFracBits = 12;
    static constexpr int kTotalBits = 20;
    static constexpr std::int32_t kRawMin = -(std::int32_t{1} << (kTotalBits - 1)); // -524288
    static constexpr std::int32_t kRawMax = (std::int32_t{1} << (kTotalBits - 1)) - 1;
    static constexpr double kScale = 4096.0; // 2^12

    constexpr FixedPoint() = default;
    static constexpr FixedPoint from_raw(std::int32_t raw) {
        FixedPoint f;
        f.raw_ = raw;
        return f;
    }

    constexpr std::int32_t raw() const { return raw_; }
    constexpr double value() const { return static_cast<double>(raw_) / kScale; }

    friend constexpr bool operator==(FixedPoint a, FixedPoint b) { return a.raw_ == b.raw_; }
    friend constexpr bool operator<(FixedPoint a, FixedPoint b) { return a.raw_ < b.raw_; }
    friend constexpr bool operator<=(FixedPoint a, FixedPoint b) { return a.raw_ <= b.raw_; }
    friend constexpr bool operator>=(FixedPoint a, FixedPoint b) { return a.raw_ >= b.raw_; }

private:
    std::int32_t raw_ = 0;
};

/// Round-to-nearest-even of x * 2^12, saturated to the 20-bit range.
/// The flag reports saturation; it never throws.
FixedPoint encode(double x, bool* saturated = nullptr);

inline double decode(FixedPoint f) { return f.value(); }

FixedPoint fx_add(FixedPoint a, FixedPoint b, bool* saturated = nullptr);
FixedPoint fx_sub(FixedPoint a, FixedPoint b, bool* saturated = nullptr);
FixedPoint fx_neg(FixedPoint a, bool* saturated = nullptr);
/// abs of the most negative raw saturates to kRawMax.
FixedPoint fx_abs(FixedPoint a, bool* saturated = nullptr);

/// One signed power-of-two term: sign * 2^shift.
struct ShiftAddTerm {
    int sign;  ///< +1 or -1
    int shift; ///< exponent e, value contribution sign * 2^e
};

/**
 * A constant written as a sum of signed powers of two, so that multiplying
 * by it needs only shifts and adds. Terms are kept with strictly decreasing
 * shifts (canonical order).
 */
struct ShiftAddPlan {
    std::vector<ShiftAddTerm> terms;

    double value() const;
    std::string to_string() const; ///< e.g. "+2^-3 +2^-4 +2^-6"
};

/**
 * Minimal-term signed power-of-two decomposition of c.
 *
 * Prefers the plain binary form when it ties the canonical-signed-digit
 * form in term count (the hardware tables list e.g. 0.75 = 1/2 + 1/4, not
 * 1 - 1/4). Throws NotRepresentableError when c is not dyadic or needs
 * more than max_terms nonzero terms.
 */
ShiftAddPlan decompose_constant(double c, int max_terms);

/// True when decompose_constant would succeed.
bool is_shift_add_representable(double c, int max_terms);

/**
 * x * plan evaluated the way the datapath does: every term is x shifted by
 * its exponent, the terms are accumulated left to right in a widened (guard
 * bit) intermediate so no fraction is lost mid-tree, and the single result
 * is truncated toward -inf and saturated back to Q8.12. Matches the
 * wide-integer product oracle floor(raw * c) exactly for dyadic c.
 */
FixedPoint mul_by_plan(FixedPoint x, const ShiftAddPlan& plan, bool* saturated = nullptr);

/// Multiply by dt = 2^-14: arithmetic right shift by 14 (rounds toward -inf).
FixedPoint scale_by_dt(FixedPoint x);

/// x^2 in Q8.12 via a true multiplier; permitted only for the quadratic
/// model's v^2 term. Counted by multiply_count() so tests can verify the
/// PWL paths never use it.
FixedPoint fx_square(FixedPoint x, bool* saturated = nullptr);

std::uint64_t multiply_count();
void reset_multiply_count();

} // namespace pwlneuro
