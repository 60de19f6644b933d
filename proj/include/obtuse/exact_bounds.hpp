#pragma once

#include "obtuse/big.hpp"
#include "obtuse/errors.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace obtuse {

/// ceil(t * (n + 1) / (n - 2)), exact.
inline BigCount recursion_step(const BigCount& t, std::uint64_t n) {
    if (n <= 2) throw UsageError("recursion_step needs n > 2, got " + std::to_string(n));
    if (t < 0) throw UsageError("recursion_step needs t >= 0");
    const BigCount num = t * (n + 1);
    const BigCount den = n - 2;
    return (num + den - 1) / den;
}

/// Offsets k[n mod 11] that make C(n,3) - 2n + k divisible by 11.
struct KTable {
    static constexpr std::array<int, 11> k{0, 2, 4, 5, 4, 0, 3, 1, 4, 0, -1};
    static constexpr int at(std::uint64_t n) { return k[n % 11]; }
};

/// Smallest point count with a guaranteed non-acute triple, used as the recursion start.
struct BaseCase {
    int d;
    std::uint64_t n;
    BigCount t_start = 1;
};

inline BaseCase base_case(int d) {
    if (d < 2) throw UsageError("dimension must be at least 2, got " + std::to_string(d));
    if (d > 62) throw UsageError("dimension too large for a 64-bit base case");
    if (d == 2) return {2, 4, 1};
    if (d == 3) return {3, 6, 1};
    return {d, std::uint64_t{1} << d, 1};
}

/// (C(n,3) - floor(n/3)) / 3.
inline BigCount closed_form_2d(std::uint64_t n) {
    if (n < 4) throw UsageError("closed_form_2d needs n >= 4");
    const BigCount num = binomial3(n) - n / 3;
    if (num % 3 != 0) throw InvariantViolation("C(n,3) - floor(n/3) not divisible by 3");
    return num / 3;
}

/// (C(n,3) - 2n + k[n mod 11]) / 11.
inline BigCount closed_form_3d(std::uint64_t n) {
    if (n < 6) throw UsageError("closed_form_3d needs n >= 6");
    const BigCount num = binomial3(n) - 2 * BigCount(n) + KTable::at(n);
    if (num % 11 != 0) throw InvariantViolation("C(n,3) - 2n + k not divisible by 11");
    return num / 11;
}

struct BoundRecord {
    int d = 0;
    std::uint64_t n = 0;
    BigCount t;
    Rational ratio;

    [[nodiscard]] double ratio_float() const { return to_double(ratio); }
};

struct LimitResult {
    int d = 0;
    std::uint64_t base_n = 0;
    std::uint64_t n_max = 0;
    BigCount t_final;
    Rational lower_bound;     // t_{n_max} / C(n_max, 3)
    Rational upper_envelope;  // lower_bound + 3 / ((n_max - 1)(n_max - 2))
    bool monotone = true;
    std::vector<BoundRecord> records;
};

/// Iterates recursion_step from the base case up to n_max.
///
/// Every `stride`-th record (and the first and last) is kept in
/// `records`; stride 0 keeps only the endpoints. `on_record`, when set, sees
/// each kept record instead of storing it.
inline LimitResult limit_bound(int d, std::uint64_t n_max, std::uint64_t stride = 0,
                               const std::function<void(const BoundRecord&)>& on_record = {}) {
    const BaseCase base = base_case(d);
    if (n_max < base.n)
        throw UsageError("n_max " + std::to_string(n_max) + " is below the base case " +
                         std::to_string(base.n) + " for d=" + std::to_string(d));

    LimitResult out;
    out.d = d;
    out.base_n = base.n;
    out.n_max = n_max;

    auto emit = [&](std::uint64_t n, const BigCount& t) {
        BoundRecord rec{d, n, t, Rational(t, binomial3(n))};
        if (on_record) {
            on_record(rec);
        } else {
            out.records.push_back(std::move(rec));
        }
    };

    BigCount t = base.t_start;
    emit(base.n, t);
    for (std::uint64_t n = base.n; n < n_max; ++n) {
        BigCount next = recursion_step(t, n);
        // ratio(n+1) >= ratio(n)  <=>  t_{n+1} (n - 2) >= t_n (n + 1)
        if (next * (n - 2) < t * (n + 1)) out.monotone = false;
        t = std::move(next);
        const std::uint64_t m = n + 1;
        if (m == n_max || (stride != 0 && (m - base.n) % stride == 0)) emit(m, t);
    }

    out.t_final = t;
    out.lower_bound = Rational(t, binomial3(n_max));
    out.upper_envelope = out.lower_bound;
    if (n_max > 2) out.upper_envelope += Rational(3, BigCount(n_max - 1) * (n_max - 2));
    if (out.lower_bound > 1) throw InvariantViolation("ratio exceeded 1");
    return out;
}

/// 3 / ((2^d - 1)(2^d - 2)).
inline Rational asymptotic_bound(int d) {
    if (d < 2) throw UsageError("dimension must be at least 2");
    const BigCount m = BigCount(1) << d;
    return Rational(3, (m - 1) * (m - 2));
}

/// 1 / C(2^d, 3).
inline Rational naive_bound(int d) {
    if (d < 2) throw UsageError("dimension must be at least 2");
    return Rational(1, binomial3(BigCount(1) << d));
}

/// Sum_{k=m}^{M} 6 / (k(k-1)(k-2)), exact.
inline Rational telescoping_partial_sum(std::uint64_t m, std::uint64_t M) {
    if (m < 3) throw UsageError("telescoping sum starts at m >= 3");
    // Telescopes to 3/((m-1)(m-2)) - 3/(M(M-1)); summing term by term in
    // rationals would be quadratic in the denominator size.
    if (M < m) return Rational(0);
    return Rational(3, BigCount(m - 1) * (m - 2)) - Rational(3, BigCount(M) * (M - 1));
}

inline void write_bound_csv_header(std::ostream& os) {
    os << "d,n,t_n,ratio_exact_num,ratio_exact_den,ratio_float\n";
}

inline void write_bound_csv_row(std::ostream& os, const BoundRecord& r) {
    const auto old = os.precision(17);
    os << r.d << ',' << r.n << ',' << r.t << ',' << numerator(r.ratio) << ','
       << denominator(r.ratio) << ',' << r.ratio_float() << '\n';
    os.precision(old);
}

}  // namespace obtuse
