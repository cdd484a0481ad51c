/*--------------------------------------------------------------------------
| Part of the ncvopt project, distributed under the MIT License.
| See the accompanying LICENSE file for details.
*--------------------------------------------------------------------------*/

/*!
  \file dyadic.hpp
  \brief Exact arithmetic over dyadic Gaussian numbers (a + b*i) / 2^m
*/

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace ncv {

using bigint = boost::multiprecision::cpp_int;

/*! \brief A complex number of the form (a + b*i) / 2^m with integer a, b.
 *
 * Every matrix entry of a NOT/CNOT/controlled-V circuit lives in this ring,
 * so identity and equivalence checks are exact. Values are kept in canonical
 * form: when m > 0, a and b are not both even.
 */
class dyadic_gaussian {
public:
  dyadic_gaussian() = default;

  dyadic_gaussian(bigint re, bigint im, uint32_t exp = 0)
      : re_(std::move(re)), im_(std::move(im)), exp_(exp) {
    normalize();
  }

  static dyadic_gaussian zero() { return {}; }
  static dyadic_gaussian one() { return {1, 0, 0}; }
  /*! \brief (1 + i) / 2, the diagonal entry of V. */
  static dyadic_gaussian half_one_plus_i() { return {1, 1, 1}; }
  /*! \brief (1 - i) / 2, the off-diagonal entry of V (equal to -i*(1+i)/2). */
  static dyadic_gaussian half_one_minus_i() { return {1, -1, 1}; }

  const bigint& re() const { return re_; }
  const bigint& im() const { return im_; }
  uint32_t exp() const { return exp_; }

  bool is_zero() const { return re_ == 0 && im_ == 0; }
  bool is_one() const { return exp_ == 0 && re_ == 1 && im_ == 0; }

  dyadic_gaussian conj() const { return {re_, -im_, exp_}; }

  friend dyadic_gaussian operator+(const dyadic_gaussian& x, const dyadic_gaussian& y) {
    uint32_t m = std::max(x.exp_, y.exp_);
    return {(x.re_ << (m - x.exp_)) + (y.re_ << (m - y.exp_)),
            (x.im_ << (m - x.exp_)) + (y.im_ << (m - y.exp_)), m};
  }

  friend dyadic_gaussian operator-(const dyadic_gaussian& x, const dyadic_gaussian& y) {
    uint32_t m = std::max(x.exp_, y.exp_);
    return {(x.re_ << (m - x.exp_)) - (y.re_ << (m - y.exp_)),
            (x.im_ << (m - x.exp_)) - (y.im_ << (m - y.exp_)), m};
  }

  friend dyadic_gaussian operator*(const dyadic_gaussian& x, const dyadic_gaussian& y) {
    return {x.re_ * y.re_ - x.im_ * y.im_, x.re_ * y.im_ + x.im_ * y.re_,
            x.exp_ + y.exp_};
  }

  dyadic_gaussian& operator+=(const dyadic_gaussian& y) { return *this = *this + y; }
  dyadic_gaussian& operator*=(const dyadic_gaussian& y) { return *this = *this * y; }

  friend bool operator==(const dyadic_gaussian& x, const dyadic_gaussian& y) {
    return x.exp_ == y.exp_ && x.re_ == y.re_ && x.im_ == y.im_;
  }
  friend bool operator!=(const dyadic_gaussian& x, const dyadic_gaussian& y) {
    return !(x == y);
  }

  std::string str() const {
    std::string s = "(" + re_.str() + (im_ < 0 ? "" : "+") + im_.str() + "i)";
    if (exp_ > 0) {
      s += "/2^" + std::to_string(exp_);
    }
    return s;
  }

private:
  void normalize() {
    if (re_ == 0 && im_ == 0) {
      exp_ = 0;
      return;
    }
    while (exp_ > 0 && (re_ & 1) == 0 && (im_ & 1) == 0) {
      re_ >>= 1;
      im_ >>= 1;
      --exp_;
    }
  }

  bigint re_{0};
  bigint im_{0};
  uint32_t exp_{0};
};

} // namespace ncv
