#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "qnlat/error.hpp"

namespace qnlat {

/// Exact dyadic rational mantissa * 2^exponent, normalized so the mantissa is
/// odd (or the value is 0 and the exponent 0). Holds values of the form
/// sub_count * 2^(subtrahend - n) exactly; all comparisons are exact.
class SigmaValue {
 public:
  SigmaValue() : mantissa_(0), exponent_(0) {}

  static SigmaValue of_count(uint64_t sub_count, int n, int subtrahend) {
    return make(sub_count, subtrahend - n);
  }

  static SigmaValue make(uint64_t mantissa, int exponent) {
    SigmaValue v;
    v.mantissa_ = mantissa;
    v.exponent_ = exponent;
    v.normalize();
    return v;
  }

  static SigmaValue from_int(uint64_t value) { return make(value, 0); }

  uint64_t mantissa() const { return mantissa_; }
  int exponent() const { return exponent_; }
  bool is_zero() const { return mantissa_ == 0; }

  friend bool operator==(const SigmaValue& a, const SigmaValue& b) {
    return a.mantissa_ == b.mantissa_ && a.exponent_ == b.exponent_;
  }
  friend bool operator!=(const SigmaValue& a, const SigmaValue& b) {
    return !(a == b);
  }
  friend bool operator<(const SigmaValue& a, const SigmaValue& b) {
    if (a.mantissa_ == 0) return b.mantissa_ != 0;
    if (b.mantissa_ == 0) return false;
    int diff = a.exponent_ - b.exponent_;
    if (diff >= 0) {
      if (diff >= 64) return false;  // a has at least b's weight and more
      unsigned __int128 lhs = static_cast<unsigned __int128>(a.mantissa_)
                              << diff;
      return lhs < b.mantissa_;
    }
    if (-diff >= 64) return true;
    unsigned __int128 rhs = static_cast<unsigned __int128>(b.mantissa_)
                            << -diff;
    return a.mantissa_ < rhs;
  }
  friend bool operator>(const SigmaValue& a, const SigmaValue& b) {
    return b < a;
  }
  friend bool operator<=(const SigmaValue& a, const SigmaValue& b) {
    return !(b < a);
  }
  friend bool operator>=(const SigmaValue& a, const SigmaValue& b) {
    return !(a < b);
  }

  /// Fixed-point decimal with exactly `digits` fractional digits, truncated.
  /// Exact whenever the value has at most `digits` fractional bits, which
  /// holds for every count the engine can produce with the default
  /// subtrahend (n <= 24 gives at most 16 fractional bits).
  std::string to_decimal(int digits = 16) const {
    std::string out = integer_part_string();
    if (digits <= 0) return out;
    out += '.';
    append_fraction_digits(out, digits);
    return out;
  }

  /// Minimal exact decimal: no trailing zeros, no dot for integers.
  std::string to_decimal_trimmed() const {
    int frac_bits = exponent_ < 0 ? -exponent_ : 0;
    std::string out = integer_part_string();
    if (frac_bits == 0) return out;
    std::string frac;
    append_fraction_digits(frac, frac_bits);
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    if (frac.empty()) return out;
    out += '.';
    out += frac;
    return out;
  }

  /// Parses a nonnegative decimal such as "83", "71.75", "64.875". Returns
  /// nullopt for anything that is not an exact dyadic rational.
  static std::optional<SigmaValue> parse(std::string_view text) {
    size_t i = 0;
    if (i < text.size() && text[i] == '+') ++i;
    size_t int_start = i;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
    if (i == int_start) return std::nullopt;
    std::string_view int_part = text.substr(int_start, i - int_start);
    std::string_view frac_part;
    if (i < text.size() && text[i] == '.') {
      ++i;
      size_t frac_start = i;
      while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
      frac_part = text.substr(frac_start, i - frac_start);
      if (frac_part.empty()) return std::nullopt;
    }
    if (i != text.size()) return std::nullopt;
    if (int_part.size() + frac_part.size() > 30) return std::nullopt;
    unsigned __int128 num = 0;
    for (char c : int_part) num = num * 10 + (c - '0');
    for (char c : frac_part) num = num * 10 + (c - '0');
    int d = static_cast<int>(frac_part.size());
    // num / 10^d is dyadic iff 5^d divides num
    for (int k = 0; k < d; ++k) {
      if (num % 5 != 0) return std::nullopt;
      num /= 5;
    }
    if (num >> 64) return std::nullopt;
    return make(static_cast<uint64_t>(num), -d);
  }

 private:
  void normalize() {
    if (mantissa_ == 0) {
      exponent_ = 0;
      return;
    }
    while ((mantissa_ & 1u) == 0) {
      mantissa_ >>= 1;
      ++exponent_;
    }
  }

  std::string integer_part_string() const {
    unsigned __int128 ip;
    if (exponent_ >= 0) {
      ip = static_cast<unsigned __int128>(mantissa_);
      ip <<= exponent_;  // domain keeps this far below 128 bits
    } else {
      int k = -exponent_;
      ip = k >= 64 ? 0 : (mantissa_ >> k);
    }
    if (ip == 0) return "0";
    std::string out;
    while (ip > 0) {
      out.insert(out.begin(), static_cast<char>('0' + static_cast<int>(ip % 10)));
      ip /= 10;
    }
    return out;
  }

  void append_fraction_digits(std::string& out, int digits) const {
    int k = exponent_ < 0 ? -exponent_ : 0;
    unsigned __int128 rem = 0;
    if (k > 0) {
      unsigned __int128 mask = (static_cast<unsigned __int128>(1) << k) - 1;
      rem = static_cast<unsigned __int128>(mantissa_) & mask;
    }
    for (int i = 0; i < digits; ++i) {
      rem *= 10;
      unsigned digit = k > 0 ? static_cast<unsigned>(rem >> k) : 0;
      out += static_cast<char>('0' + digit);
      if (k > 0) rem &= (static_cast<unsigned __int128>(1) << k) - 1;
    }
  }

  uint64_t mantissa_;
  int exponent_;
};

}  // namespace qnlat
