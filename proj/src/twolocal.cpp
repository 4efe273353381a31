#include "ro2alg/twolocal.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace ro2 {

using boost::multiprecision::gcd;

TwoLocal::TwoLocal(Int n, Int d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_ == 0)
        throw InputError("TwoLocal: zero denominator");
    if (den_ % 2 == 0)
        throw InputError("TwoLocal: denominator must be odd, got " + den_.str());
    reduce();
}

void TwoLocal::reduce() {
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_ == 0) {
        den_ = 1;
        return;
    }
    Int g = gcd(num_ < 0 ? Int(-num_) : num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

TwoLocal TwoLocal::inverse() const {
    if (!is_unit())
        throw InputError("TwoLocal: " + str() + " is not a unit in Z_(2)");
    return TwoLocal(den_, num_);
}

TwoLocal TwoLocal::operator-() const { return TwoLocal(-num_, den_); }

TwoLocal TwoLocal::operator+(const TwoLocal& o) const {
    return TwoLocal(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

TwoLocal TwoLocal::operator-(const TwoLocal& o) const {
    return TwoLocal(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

TwoLocal TwoLocal::operator*(const TwoLocal& o) const {
    return TwoLocal(num_ * o.num_, den_ * o.den_);
}

std::string TwoLocal::str() const {
    if (den_ == 1)
        return num_.str();
    return num_.str() + "/" + den_.str();
}

}  // namespace ro2
