#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <memory>
#include <type_traits>
#include <stdexcept>
#include <string>

namespace sds {

using Int = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Exact rational with an inline int64 fast path and a transparent
/// arbitrary-precision fallback. Always normalized: denominator positive,
/// fraction in lowest terms. No floating point in any decision path.
class Rational {
public:
    Rational() = default;
    template <typename T, typename = std::enable_if_t<std::is_integral_v<T>>>
    Rational(T v) {  // NOLINT(google-explicit-constructor)
        if constexpr (std::is_unsigned_v<T>) {
            if (static_cast<uint64_t>(v) > static_cast<uint64_t>(INT64_MAX)) {
                *this = Rational(Int(v));
                return;
            }
        }
        n_ = static_cast<int64_t>(v);
    }
    Rational(long long num, long long den) { *this = make(num, den); }
    explicit Rational(const Int& v) { assign_big(BigRat(v)); }
    Rational(const Int& num, const Int& den) {
        if (den == 0) throw std::invalid_argument("rational: zero denominator");
        assign_big(BigRat(num, den));
    }

    bool is_small() const { return !big_; }

    Int numerator() const {
        if (big_) return boost::multiprecision::numerator(*big_);
        return Int(n_);
    }

    Int denominator() const {
        if (big_) return boost::multiprecision::denominator(*big_);
        return Int(d_);
    }

    BigRat to_big() const {
        if (big_) return *big_;
        return BigRat(Int(n_), Int(d_));
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        if (a.big_ || b.big_) return from_big(a.to_big() + b.to_big());
        return make128(i128(a.n_) * b.d_ + i128(b.n_) * a.d_, i128(a.d_) * b.d_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        if (a.big_ || b.big_) return from_big(a.to_big() - b.to_big());
        return make128(i128(a.n_) * b.d_ - i128(b.n_) * a.d_, i128(a.d_) * b.d_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        if (a.big_ || b.big_) return from_big(a.to_big() * b.to_big());
        return make128(i128(a.n_) * b.n_, i128(a.d_) * b.d_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw std::invalid_argument("rational: division by zero");
        if (a.big_ || b.big_) return from_big(a.to_big() / b.to_big());
        return make128(i128(a.n_) * b.d_, i128(a.d_) * b.n_);
    }
    Rational operator-() const {
        if (big_) return from_big(-*big_);
        Rational r;
        r.n_ = -n_;
        r.d_ = d_;
        return r;
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_) return a.n_ == b.n_ && a.d_ == b.d_;
        return a.to_big() == b.to_big();
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_) return i128(a.n_) * b.d_ < i128(b.n_) * a.d_;
        return a.to_big() < b.to_big();
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    bool is_zero() const { return big_ ? *big_ == 0 : n_ == 0; }

private:
    using i128 = __int128;

    static Rational make(int64_t num, int64_t den) {
        if (den == 0) throw std::invalid_argument("rational: zero denominator");
        return make128(num, den);
    }

    static Rational make128(i128 num, i128 den) {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        i128 g = gcd128(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        Rational r;
        if (num >= INT64_MIN && num <= INT64_MAX && den <= INT64_MAX) {
            r.n_ = static_cast<int64_t>(num);
            r.d_ = static_cast<int64_t>(den);
        } else {
            r.assign_big(BigRat(to_int(num), to_int(den)));
        }
        return r;
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    static Int to_int(i128 v) {
        bool neg = v < 0;
        unsigned __int128 mag = neg ? -static_cast<unsigned __int128>(v) : v;
        Int out = static_cast<uint64_t>(mag >> 64);
        out <<= 64;
        out += static_cast<uint64_t>(mag);
        return neg ? Int(-out) : out;
    }

    static Rational from_big(const BigRat& v) {
        Rational r;
        r.assign_big(v);
        return r;
    }

    /// Stores big values, demoting back to the inline form when they fit.
    void assign_big(const BigRat& v) {
        const Int& num = boost::multiprecision::numerator(v);
        const Int& den = boost::multiprecision::denominator(v);
        if (num >= INT64_MIN && num <= INT64_MAX && den <= INT64_MAX) {
            n_ = static_cast<int64_t>(num);
            d_ = static_cast<int64_t>(den);
            big_.reset();
        } else {
            n_ = 0;
            d_ = 1;
            big_ = std::make_shared<const BigRat>(v);
        }
    }

    int64_t n_ = 0;
    int64_t d_ = 1;
    std::shared_ptr<const BigRat> big_;
};

inline Int rat_num(const Rational& r) { return r.numerator(); }
inline Int rat_den(const Rational& r) { return r.denominator(); }

/// Formats as "n" or "n/d", always in lowest terms.
inline std::string rat_str(const Rational& r) {
    std::string s = rat_num(r).str();
    if (rat_den(r) != 1) s += "/" + rat_den(r).str();
    return s;
}

/// Parses "n", "n/d" or "-n/d". Throws std::invalid_argument on junk.
inline Rational rat_parse(const std::string& text) {
    auto bad = [&] { throw std::invalid_argument("bad rational: '" + text + "'"); };
    std::string s = text;
    if (s.empty()) bad();
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Int(s));
        Int n(s.substr(0, slash));
        Int d(s.substr(slash + 1));
        if (d == 0) bad();
        return Rational(n, d);
    } catch (const std::runtime_error&) {
        bad();
    }
    return Rational();  // unreachable
}

}  // namespace sds
