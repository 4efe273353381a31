#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "ro2alg/errors.hpp"

namespace ro2 {

using Int = boost::multiprecision::cpp_int;

/// An element of Z localized at 2: num/den in lowest terms with den odd and
/// positive. Units are exactly the fractions with odd numerator.
class TwoLocal {
  public:
    TwoLocal() : num_(0), den_(1) {}
    TwoLocal(long long n) : num_(n), den_(1) {}
    TwoLocal(Int n) : num_(std::move(n)), den_(1) {}
    TwoLocal(Int n, Int d);

    const Int& num() const { return num_; }
    const Int& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_one() const { return num_ == 1 && den_ == 1; }
    bool is_unit() const { return num_ % 2 != 0; }

    /// Multiplicative inverse; requires an odd numerator.
    TwoLocal inverse() const;

    /// Image in Z/2 (0 or 1); den is odd so only num matters.
    int mod2() const { return static_cast<int>(num_ % 2 != 0); }

    TwoLocal operator-() const;
    TwoLocal operator+(const TwoLocal& o) const;
    TwoLocal operator-(const TwoLocal& o) const;
    TwoLocal operator*(const TwoLocal& o) const;

    bool operator==(const TwoLocal& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const TwoLocal& o) const { return !(*this == o); }

    std::string str() const;

  private:
    void reduce();

    Int num_;
    Int den_;
};

}  // namespace ro2
