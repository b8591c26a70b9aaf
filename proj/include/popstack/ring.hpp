#pragma once

#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace popstack {

/// What the counting DP needs from its coefficient ring. `accumulator` lets
/// a ring defer reductions across a long sum of products.
template <class R>
concept Ring = requires(const R& r, typename R::value_type a, typename R::accumulator acc) {
    { r.zero() } -> std::convertible_to<typename R::value_type>;
    { r.one() } -> std::convertible_to<typename R::value_type>;
    { r.add(a, a) } -> std::convertible_to<typename R::value_type>;
    { r.sub(a, a) } -> std::convertible_to<typename R::value_type>;
    { r.mul(a, a) } -> std::convertible_to<typename R::value_type>;
    { r.equal(a, a) } -> std::convertible_to<bool>;
    { r.zero_accumulator() } -> std::convertible_to<typename R::accumulator>;
    r.accumulate_scaled_difference(acc, a, a, a);
    { r.reduce(acc) } -> std::convertible_to<typename R::value_type>;
};

/// Exact integers.
struct BigIntRing {
    using value_type = mpz_class;
    using accumulator = mpz_class;

    [[nodiscard]] value_type zero() const { return 0; }
    [[nodiscard]] value_type one() const { return 1; }
    [[nodiscard]] value_type add(const value_type& a, const value_type& b) const { return a + b; }
    [[nodiscard]] value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    [[nodiscard]] value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    [[nodiscard]] bool equal(const value_type& a, const value_type& b) const { return a == b; }

    [[nodiscard]] accumulator zero_accumulator() const { return 0; }
    /// acc += scale * (a - b)
    void accumulate_scaled_difference(accumulator& acc, const value_type& scale,
                                      const value_type& a, const value_type& b) const {
        mpz_class diff = a - b;
        mpz_addmul(acc.get_mpz_t(), scale.get_mpz_t(), diff.get_mpz_t());
    }
    [[nodiscard]] value_type reduce(const accumulator& acc) const { return acc; }

    [[nodiscard]] std::string name() const { return "Z"; }
};

/// The prime field F_p for p < 2^31. Products of two residues fit in 64
/// bits; sums of products are gathered in a 128-bit accumulator and reduced
/// once.
class PrimeField {
public:
    using value_type = std::uint32_t;
    using accumulator = unsigned __int128;

    static constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 31;

    explicit PrimeField(std::uint32_t p) : p_(p) {
        if (p < 2 || p >= kMaxModulus) {
            throw std::invalid_argument("PrimeField modulus must lie in [2, 2^31): " + std::to_string(p));
        }
    }

    [[nodiscard]] std::uint32_t modulus() const { return p_; }

    [[nodiscard]] value_type zero() const { return 0; }
    [[nodiscard]] value_type one() const { return 1 % p_; }
    [[nodiscard]] value_type add(value_type a, value_type b) const {
        const std::uint32_t s = a + b;  // < 2^32
        return s >= p_ ? s - p_ : s;
    }
    [[nodiscard]] value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p_ - b; }
    [[nodiscard]] value_type mul(value_type a, value_type b) const {
        return static_cast<value_type>(std::uint64_t{a} * b % p_);
    }
    [[nodiscard]] bool equal(value_type a, value_type b) const { return a == b; }

    [[nodiscard]] accumulator zero_accumulator() const { return 0; }
    void accumulate_scaled_difference(accumulator& acc, value_type scale, value_type a,
                                      value_type b) const {
        // scale < 2^31 and a + p - b < 2^32, so the product is below 2^63.
        acc += std::uint64_t{scale} * (std::uint64_t{a} + p_ - b);
    }
    [[nodiscard]] value_type reduce(const accumulator& acc) const {
        return static_cast<value_type>(acc % p_);
    }

    /// Reduces an arbitrary integer into the field.
    [[nodiscard]] value_type from_integer(const mpz_class& x) const {
        mpz_class r;
        mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), p_);
        return static_cast<value_type>(r.get_ui());
    }

    [[nodiscard]] std::string name() const { return "F_" + std::to_string(p_); }

private:
    std::uint32_t p_;
};

static_assert(Ring<BigIntRing>);
static_assert(Ring<PrimeField>);

}  // namespace popstack
