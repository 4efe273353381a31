#pragma once

#include <string>
#include <tuple>

namespace ro2 {

/// An element c1 + ca*alpha of RO(Z/2) = Z + Z*alpha, alpha the sign
/// representation.
struct ROdeg {
    long long one = 0;
    long long alpha = 0;

    ROdeg operator+(const ROdeg& o) const { return {one + o.one, alpha + o.alpha}; }
    ROdeg operator-(const ROdeg& o) const { return {one - o.one, alpha - o.alpha}; }
    ROdeg operator*(long long k) const { return {one * k, alpha * k}; }
    bool operator==(const ROdeg& o) const = default;
    auto operator<=>(const ROdeg& o) const = default;

    std::string str() const {
        return "(" + std::to_string(one) + "," + std::to_string(alpha) + ")";
    }
};

}  // namespace ro2
