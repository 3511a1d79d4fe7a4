#pragma once

#include <cmath>
#include <complex>

namespace friable {

// Neumaier's variant of Kahan summation. Unlike plain Kahan it stays accurate
// when an addend is larger in magnitude than the running sum.
template <typename T>
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(T initial) : sum_(initial) {}

  void add(T value) {
    const T t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      comp_ += (sum_ - t) + value;
    } else {
      comp_ += (value - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(T value) {
    add(value);
    return *this;
  }

  // Merge a partial sum; the result depends on merge order, callers that
  // need reproducibility merge in a fixed order.
  void merge(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }

  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

class ComplexSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  ComplexSum& operator+=(std::complex<double> z) {
    add(z);
    return *this;
  }
  void merge(const ComplexSum& other) {
    re_.merge(other.re_);
    im_.merge(other.im_);
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<double> re_;
  CompensatedSum<double> im_;
};

}  // namespace friable
