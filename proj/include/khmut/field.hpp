#pragma once

// Exact coefficient fields: the rationals (int64 fast path, GMP fallback) and F2.

#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>

namespace khmut {

enum class Ring { Q, F2 };

inline std::string ring_name(Ring r) { return r == Ring::Q ? "Q" : "F2"; }

inline Ring parse_ring(const std::string& s) {
  if (s == "Q" || s == "q") return Ring::Q;
  if (s == "F2" || s == "f2" || s == "Z2") return Ring::F2;
  throw std::invalid_argument("unknown ring '" + s + "' (expected Q or F2)");
}

/// Rational number with arbitrary precision. Values whose numerator and
/// denominator fit in 64 bits stay on the machine-word path; any overflow
/// promotes the value to an mpq_class.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : v_(Small{n, 1}) {}  // NOLINT: implicit by design of field API
  Rational(std::int64_t n, std::int64_t d) : v_(normalize(n, d)) {}
  explicit Rational(const mpq_class& q) { assign_big(q); }

  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }

  bool is_zero() const {
    if (auto s = std::get_if<Small>(&v_)) return s->n == 0;
    return sgn(std::get<mpq_class>(v_)) == 0;
  }
  bool is_one() const {
    if (auto s = std::get_if<Small>(&v_)) return s->n == 1 && s->d == 1;
    return std::get<mpq_class>(v_) == 1;
  }
  bool is_small() const { return std::holds_alternative<Small>(v_); }

  mpq_class to_mpq() const {
    if (auto s = std::get_if<Small>(&v_)) {
      mpq_class q(mpz_from(s->n), mpz_from(s->d));
      q.canonicalize();
      return q;
    }
    return std::get<mpq_class>(v_);
  }

  Rational operator-() const {
    if (auto s = std::get_if<Small>(&v_); s && s->n != INT64_MIN) return raw(-s->n, s->d);
    return Rational(mpq_class(-to_mpq()));
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    auto sa = std::get_if<Small>(&a.v_);
    auto sb = std::get_if<Small>(&b.v_);
    if (sa && sb) {
      if (sa->d == 1 && sb->d == 1) {
        std::int64_t r;
        if (!__builtin_add_overflow(sa->n, sb->n, &r)) return raw(r, 1);
      } else {
        std::int64_t x, y, num, den;
        if (!__builtin_mul_overflow(sa->n, sb->d, &x) && !__builtin_mul_overflow(sb->n, sa->d, &y) &&
            !__builtin_add_overflow(x, y, &num) && !__builtin_mul_overflow(sa->d, sb->d, &den))
          return Rational(num, den);
      }
    }
    return Rational(mpq_class(a.to_mpq() + b.to_mpq()));
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    auto sa = std::get_if<Small>(&a.v_);
    auto sb = std::get_if<Small>(&b.v_);
    if (sa && sb) {
      if (sa->d == 1 && sb->d == 1) {
        std::int64_t r;
        if (!__builtin_mul_overflow(sa->n, sb->n, &r)) return raw(r, 1);
      } else {
        std::int64_t num, den;
        if (!__builtin_mul_overflow(sa->n, sb->n, &num) && !__builtin_mul_overflow(sa->d, sb->d, &den))
          return Rational(num, den);
      }
    }
    return Rational(mpq_class(a.to_mpq() * b.to_mpq()));
  }
  Rational inverse() const {
    if (is_zero()) throw std::domain_error("Rational: inverse of zero");
    if (auto s = std::get_if<Small>(&v_)) {
      if (s->n != INT64_MIN) return s->n < 0 ? raw(-s->d, -s->n) : raw(s->d, s->n);
    }
    return Rational(mpq_class(1 / to_mpq()));
  }
  friend Rational operator/(const Rational& a, const Rational& b) { return a * b.inverse(); }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    auto sa = std::get_if<Small>(&a.v_);
    auto sb = std::get_if<Small>(&b.v_);
    if (sa && sb) return sa->n == sb->n && sa->d == sb->d;
    return a.to_mpq() == b.to_mpq();
  }

  std::string str() const {
    if (auto s = std::get_if<Small>(&v_))
      return s->d == 1 ? std::to_string(s->n) : std::to_string(s->n) + "/" + std::to_string(s->d);
    return std::get<mpq_class>(v_).get_str();
  }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  struct Small {
    std::int64_t n;
    std::int64_t d;
  };
  std::variant<Small, mpq_class> v_{Small{0, 1}};

  static_assert(sizeof(long) == sizeof(std::int64_t), "LP64 platform expected");
  static mpz_class mpz_from(std::int64_t x) { return mpz_class(static_cast<long>(x)); }

  static Rational raw(std::int64_t n, std::int64_t d) {
    Rational r;
    r.v_ = Small{n, d};
    return r;
  }

  static Small normalize(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    if (n == 0) return {0, 1};
    std::int64_t g = std::gcd(n, d);
    n /= g;
    d /= g;
    if (d < 0) {
      n = -n;
      d = -d;
    }
    return {n, d};
  }

  void assign_big(const mpq_class& q) {
    if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p()) {
      v_ = Small{q.get_num().get_si(), q.get_den().get_si()};
    } else {
      v_ = q;
    }
  }
};

/// The field with two elements.
struct F2 {
  bool v = false;

  F2() = default;
  F2(std::int64_t n) : v((n & 1) != 0) {}  // NOLINT

  static F2 zero() { return F2(0); }
  static F2 one() { return F2(1); }
  bool is_zero() const { return !v; }
  bool is_one() const { return v; }
  F2 operator-() const { return *this; }
  friend F2 operator+(F2 a, F2 b) { return F2(a.v != b.v); }
  friend F2 operator-(F2 a, F2 b) { return F2(a.v != b.v); }
  friend F2 operator*(F2 a, F2 b) { return F2(a.v && b.v); }
  F2 inverse() const {
    if (!v) throw std::domain_error("F2: inverse of zero");
    return *this;
  }
  friend F2 operator/(F2 a, F2 b) { return a * b.inverse(); }
  F2& operator+=(F2 o) { return *this = *this + o; }
  F2& operator-=(F2 o) { return *this = *this - o; }
  F2& operator*=(F2 o) { return *this = *this * o; }
  friend bool operator==(F2 a, F2 b) { return a.v == b.v; }
  std::string str() const { return v ? "1" : "0"; }
  friend std::ostream& operator<<(std::ostream& os, F2 f) { return os << f.str(); }
};

template <typename F>
concept ExactField = requires(F a, F b) {
  { F::zero() } -> std::same_as<F>;
  { F::one() } -> std::same_as<F>;
  { a + b } -> std::same_as<F>;
  { a - b } -> std::same_as<F>;
  { a * b } -> std::same_as<F>;
  { -a } -> std::same_as<F>;
  { a.inverse() } -> std::same_as<F>;
  { a.is_zero() } -> std::same_as<bool>;
};

template <ExactField F>
constexpr Ring ring_of() {
  if constexpr (std::is_same_v<F, F2>) return Ring::F2;
  else return Ring::Q;
}

}  // namespace khmut
