#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace branchkh {

// Integer Laurent polynomial in one variable. Zero coefficients are never
// stored.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(int64_t c) {  // NOLINT: constants convert implicitly
    if (c != 0) terms_[0] = c;
  }
  static LaurentPoly monomial(int exponent, int64_t c = 1) {
    LaurentPoly p;
    if (c != 0) p.terms_[exponent] = c;
    return p;
  }

  const std::map<int, int64_t>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int64_t coeff(int exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? 0 : it->second;
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.terms_) add(e, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.terms_) add(e, -c);
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly out;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) out.add(ea + eb, ca * cb);
    return out;
  }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

  // Multiplies by x^k.
  LaurentPoly shifted(int k) const {
    LaurentPoly out;
    for (const auto& [e, c] : terms_) out.terms_[e + k] = c;
    return out;
  }

  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

  // Human-readable form such as "q^-2 + 3 - q^4".
  std::string str(const std::string& var = "q") const;
  // [[exponent, coefficient], ...] in increasing exponent order.
  std::vector<std::pair<int, int64_t>> coefficient_list() const {
    return {terms_.begin(), terms_.end()};
  }

 private:
  void add(int e, int64_t c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  std::map<int, int64_t> terms_;
};

}  // namespace branchkh
