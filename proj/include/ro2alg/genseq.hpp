#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ro2alg/monomial.hpp"

namespace ro2 {

/// A monomial in the polynomial generators v_1, v_2, ... (index >= 1).
struct VTerm {
    TwoLocal coeff{1};
    std::map<int, long long> v;
};

using VPoly = std::vector<VTerm>;

VPoly vpoly_add(const VPoly& a, const VPoly& b);
VPoly vpoly_mul(const VPoly& a, const VPoly& b);
VPoly vpoly_scale(const VPoly& a, const TwoLocal& c);
VPoly vpoly_collect(VPoly p);
/// Graded weight under |v_i| = 2(2^i - 1), halved: sum of (2^i - 1) * e_i.
long long vterm_weight(const VTerm& t);

/// A generator sequence u_0 = 2, u_k = alpha_k v_k + (corrections), one
/// expansion per index 1 <= k <= n_max, each homogeneous of the weight of v_k.
class GenSequence {
  public:
    GenSequence() = default;
    static GenSequence identity(int n_max);

    int n_max() const { return static_cast<int>(exp_.size()) - 1; }
    const VPoly& expansion(int k) const;
    void set_expansion(int k, VPoly p);
    bool is_identity() const;

    struct Validation {
        bool ok = true;
        std::vector<std::string> diagnostics;
    };
    /// Homogeneity, unit leading coefficient, corrections in (2, v_1..v_{k-1}).
    Validation validate() const;

    /// Leading coefficient alpha_k of the pure v_k term.
    TwoLocal leading_unit(int k) const;

    /// Expressions of v_k in the letters u_1..u_n_max (triangular inversion).
    GenSequence inverse() const;

    nlohmann::json to_json() const;
    static GenSequence from_json(const nlohmann::json& j, int n_max);

  private:
    std::vector<VPoly> exp_;  // [0] unused; [k] = expansion of u_k
};

/// Replace every u_k (k >= 1) of e by subst.expansion(k); u_0, u_n^{-1}, sigma
/// and a pass through. The result is a raw (unreduced) sum in the target
/// letters. Monomials with uinv != 0 are rejected.
Element substitute(const Element& e, const GenSequence& subst);

}  // namespace ro2
