#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <ostream>
#include <string>

#include "toric_holim/errors.hpp"

namespace toric {

using Int = std::int64_t;
using Rational = boost::multiprecision::mpq_rational;

/// Integers modulo a prime P; an optional coefficient field for fast runs.
template <std::uint32_t P>
class PrimeField {
    static_assert(P > 2, "use an odd prime");

public:
    PrimeField() = default;
    PrimeField(long long v) : value_(reduce(v)) {}

    std::uint32_t value() const { return value_; }

    friend PrimeField operator+(PrimeField a, PrimeField b) { return from_raw((a.value_ + b.value_) % P); }
    friend PrimeField operator-(PrimeField a, PrimeField b) { return from_raw((a.value_ + P - b.value_) % P); }
    friend PrimeField operator*(PrimeField a, PrimeField b) {
        return from_raw(static_cast<std::uint32_t>(std::uint64_t(a.value_) * b.value_ % P));
    }
    friend PrimeField operator/(PrimeField a, PrimeField b) {
        if (b.value_ == 0) throw std::domain_error("division by zero in PrimeField");
        return a * b.inverse();
    }
    PrimeField operator-() const { return from_raw((P - value_) % P); }
    PrimeField& operator+=(PrimeField o) { return *this = *this + o; }
    PrimeField& operator-=(PrimeField o) { return *this = *this - o; }
    PrimeField& operator*=(PrimeField o) { return *this = *this * o; }
    PrimeField& operator/=(PrimeField o) { return *this = *this / o; }
    friend bool operator==(PrimeField a, PrimeField b) { return a.value_ == b.value_; }
    friend bool operator!=(PrimeField a, PrimeField b) { return a.value_ != b.value_; }
    friend std::ostream& operator<<(std::ostream& os, PrimeField a) { return os << a.value_; }

    PrimeField inverse() const {
        // Fermat: a^(P-2)
        std::uint64_t result = 1, base = value_, e = P - 2;
        while (e) {
            if (e & 1) result = result * base % P;
            base = base * base % P;
            e >>= 1;
        }
        return from_raw(static_cast<std::uint32_t>(result));
    }

private:
    static std::uint32_t reduce(long long v) {
        long long r = v % static_cast<long long>(P);
        return static_cast<std::uint32_t>(r < 0 ? r + P : r);
    }
    static PrimeField from_raw(std::uint32_t v) {
        PrimeField f;
        f.value_ = v;
        return f;
    }
    std::uint32_t value_ = 0;
};

template <class F>
inline bool is_zero(const F& x) {
    return x == F(0);
}

template <class F>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static Rational parse(const std::string& text) {
        auto slash = text.find('/');
        if (slash != std::string::npos && text.find_first_not_of("0+-", slash + 1) == std::string::npos)
            fail(ErrorCode::ParseError, "bad rational '" + text + "'");
        try {
            return Rational(text);
        } catch (const std::exception&) {
            fail(ErrorCode::ParseError, "bad rational '" + text + "'");
        }
    }
    static std::string format(const Rational& x) { return x.str(); }
};

template <std::uint32_t P>
struct ScalarTraits<PrimeField<P>> {
    static PrimeField<P> parse(const std::string& text) {
        auto slash = text.find('/');
        try {
            if (slash == std::string::npos) return PrimeField<P>(std::stoll(text));
            return PrimeField<P>(std::stoll(text.substr(0, slash))) /
                   PrimeField<P>(std::stoll(text.substr(slash + 1)));
        } catch (const std::exception&) {
            fail(ErrorCode::ParseError, "bad field element '" + text + "'");
        }
    }
    static std::string format(const PrimeField<P>& x) { return std::to_string(x.value()); }
};

} // namespace toric
