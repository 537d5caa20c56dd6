#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace adviser {

// Exact rational with a positive denominator, always kept in lowest terms.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t num) : num_(num) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw std::domain_error("rational with zero denominator");
    normalize();
  }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }
  Rational operator-() const { return Rational(-num_, den_); }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // "num/den", the wire and document form.
  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  static Rational parse(const std::string& text) {
    const auto slash = text.find('/');
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const auto n = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument("bad rational '" + text + "'");
      return Rational(n);
    }
    const auto num_text = text.substr(0, slash);
    const auto den_text = text.substr(slash + 1);
    const auto n = std::stoll(num_text, &used);
    if (used != num_text.size()) throw std::invalid_argument("bad rational '" + text + "'");
    const auto d = std::stoll(den_text, &used);
    if (used != den_text.size()) throw std::invalid_argument("bad rational '" + text + "'");
    return Rational(n, d);
  }

 private:
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const auto g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace adviser
