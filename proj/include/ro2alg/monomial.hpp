#pragma once

#include <map>
#include <string>
#include <vector>

#include "ro2alg/rodeg.hpp"
#include "ro2alg/twolocal.hpp"

namespace ro2 {

/// One monomial coeff * u_k1^e1 ... * u_n^{-uinv} * sigma^J * a^e over the
/// bigraded presentations. All sigma content is pooled into the single total
/// exponent J; the product relation makes products depend only on the sum.
struct Monomial {
    TwoLocal coeff{1};
    std::map<int, long long> uexp;  // generator index k >= 0 -> exponent > 0
    long long uinv = 0;             // exponent of u_n^{-1} (En-style only)
    long long sigma = 0;            // total sigma exponent J
    long long aexp = 0;             // exponent of the Euler class a

    /// Exponent data without the coefficient, used as the collation key.
    using Key = std::tuple<std::vector<std::pair<int, long long>>, long long, long long, long long>;
    Key key() const;

    bool same_exponents(const Monomial& o) const { return key() == o.key(); }
    bool operator==(const Monomial& o) const { return coeff == o.coeff && key() == o.key(); }

    /// Least u-index present, or -1 if none.
    int kmin() const { return uexp.empty() ? -1 : uexp.begin()->first; }

    std::string str() const;
};

/// A formal sum of monomials. Canonical elements are sorted by key with like
/// terms collected and zero coefficients dropped.
using Element = std::vector<Monomial>;

std::string element_str(const Element& e);

bool operator<(const Monomial& a, const Monomial& b);

}  // namespace ro2
