#pragma once

#include <cmath>
#include <cstddef>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <boost/integer/common_factor_rt.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace aptstar {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact even-index Bernoulli numbers from the double sum
///   B_m = sum_{j=0}^{m} 1/(j+1) sum_{k=0}^{j} (-1)^k C(j,k) k^m.
/// The inner alternating sum equals (-1)^j j! S(m, j) with S the Stirling
/// numbers of the second kind, so the table keeps one Stirling row and walks
/// it forward in m: all of B_0..B_M cost O(M^2) big-integer operations.
/// Process-wide, grow-only, thread-safe.
class BernoulliTable {
public:
    static BernoulliTable& instance() {
        static BernoulliTable table;
        return table;
    }

    [[nodiscard]] Rational get(unsigned m) {
        if (m % 2 != 0) throw std::invalid_argument("bernoulliNumber expects an even index");
        std::lock_guard lock(mutex_);
        while (even_.size() <= m / 2) advance();
        return even_[m / 2];
    }

private:
    BernoulliTable() : stirling_{1}, factorial_{1}, even_{Rational(1)} {}

    // Moves the Stirling row from m to m + 1; records B_{m+1} if even.
    void advance() {
        ++m_;
        stirling_.push_back(0);
        for (unsigned j = m_; j >= 1; --j) stirling_[j] = BigInt(j) * stirling_[j] + stirling_[j - 1];
        stirling_[0] = 0;
        factorial_.push_back(factorial_.back() * m_);
        lcm_ = boost::integer::lcm(lcm_, BigInt(m_ + 1));
        if (m_ % 2 != 0) return;

        // sum_j (-1)^j j! S(m,j) / (j+1) over the common denominator lcm(1..m+1).
        BigInt numerator = 0;
        for (unsigned j = 1; j <= m_; ++j) {
            const BigInt term = factorial_[j] * stirling_[j] * (lcm_ / (j + 1));
            numerator += (j % 2 == 0) ? term : BigInt(-term);
        }
        even_.emplace_back(numerator, lcm_);
    }

    std::mutex mutex_;
    unsigned m_ = 0;
    std::vector<BigInt> stirling_;   // S(m_, j), j = 0..m_
    std::vector<BigInt> factorial_;  // j!, j = 0..m_
    BigInt lcm_ = 1;                 // lcm(1..m_+1)
    std::vector<Rational> even_;     // B_0, B_2, ..., B_{2 floor(m_/2)}
};

[[nodiscard]] inline Rational bernoulliExact(unsigned m) { return BernoulliTable::instance().get(m); }

/// B_{two_i} rounded to double (overflows to ±inf beyond index ~260).
[[nodiscard]] inline double bernoulliNumber(unsigned two_i) { return bernoulliExact(two_i).convert_to<double>(); }

/// Maclaurin coefficients of tanh: tanh(x) = sum_{i>=1} a_i x^(2i-1) with
///   a_i = 2^(2i) (2^(2i) - 1) B_{2i} / (2i)!.
/// Computed exactly and rounded once; cached process-wide (grow-only). |a_i|
/// decays like 2 (2/pi)^(2i); once a coefficient rounds below 1e-300 every
/// later one would underflow to zero in double precision as well, so those
/// are stored as zeros without the exact evaluation.
class TanhSeries {
public:
    static const TanhSeries& instance() {
        static TanhSeries series;
        return series;
    }

    /// Coefficients a_1..a_order.
    [[nodiscard]] std::vector<double> coefficients(std::size_t order) const {
        std::lock_guard lock(mutex_);
        while (coeffs_.size() < order) {
            if (underflowed_) {
                coeffs_.push_back(0.0);
                continue;
            }
            const unsigned i = static_cast<unsigned>(coeffs_.size()) + 1;
            const unsigned two_i = 2 * i;
            BigInt factorial = 1;
            for (unsigned f = 2; f <= two_i; ++f) factorial *= f;
            const BigInt pow2 = BigInt(1) << two_i;
            const Rational a = Rational(pow2 * (pow2 - 1)) * bernoulliExact(two_i) / Rational(factorial);
            const double value = a.convert_to<double>();
            coeffs_.push_back(value);
            underflowed_ = std::abs(value) < 1e-300;
        }
        return {coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(order)};
    }

private:
    TanhSeries() = default;
    mutable std::mutex mutex_;
    mutable std::vector<double> coeffs_;
    mutable bool underflowed_ = false;
};

}  // namespace aptstar
