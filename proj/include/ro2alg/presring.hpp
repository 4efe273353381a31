#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ro2alg/genseq.hpp"
#include "ro2alg/monomial.hpp"
#include "ro2alg/rodeg.hpp"

namespace ro2 {

enum class RingKind { bp, en };

struct RingOptions {
    /// Keep the annihilation relation family (u_k sigma^{l 2^{k+1}}) a^{c_k} = 0.
    bool nilpotency = true;
    /// Override the annihilation exponents c_k (default c_k = 2^{k+1} - 1).
    std::vector<long long> a_powers;
};

/// Truncated presentation of the bigraded coefficient rings: either the
/// polynomial style on generators u_k sigma^{l 2^{k+1}} and a ("bp"), or the
/// periodic style with u_n and sigma^{2^{n+1}} inverted ("en"). Elements are
/// kept in canonical form; sigma exponents and a exponents outside the window
/// raise hard errors.
class PresRing {
  public:
    static PresRing bp(int n_max, long long sigma_lo, long long sigma_hi, long long a_max,
                       GenSequence gens = {}, RingOptions opts = {});
    static PresRing en(int n, long long sigma_lo, long long sigma_hi, long long a_max,
                       GenSequence gens = {}, RingOptions opts = {});
    static PresRing trivial_ring();

    RingKind kind() const { return kind_; }
    int n() const { return n_; }
    int n_max() const { return n_max_; }
    long long sigma_lo() const { return sigma_lo_; }
    long long sigma_hi() const { return sigma_hi_; }
    long long a_max() const { return a_max_; }
    bool is_trivial() const { return trivial_; }
    bool a_inverted() const { return a_inverted_; }
    bool nilpotency() const { return nilpotency_; }
    long long a_power(int k) const;
    const GenSequence& gens() const { return gens_; }

    /// True when a is nilpotent: the periodic style forces a^{c_n} = 0.
    bool a_is_nilpotent() const;

    Element normal_form(const Element& raw) const;
    Element normal_form(const Monomial& raw) const;
    Element add(const Element& x, const Element& y) const;
    Element sub(const Element& x, const Element& y) const;
    Element mul(const Element& x, const Element& y) const;
    Element neg(const Element& x) const;
    Element pow(const Element& x, long long e) const;
    bool equals(const Element& x, const Element& y) const;
    bool is_zero(const Element& x) const;

    Element zero() const { return {}; }
    Element one() const;
    Element scalar(const TwoLocal& c) const;
    Element monomial(Monomial m) const { return normal_form(std::move(m)); }

    ROdeg degree_of(const Monomial& m) const;
    /// Degree of a homogeneous element; nullopt for 0; throws if mixed.
    std::optional<ROdeg> degree_of(const Element& e) const;

    struct LocalizeResult;
    /// Invert the Euler class a.
    LocalizeResult localize_a() const;
    /// Invert u_k (bp: yields the periodic style at k; en: only k = n).
    LocalizeResult localize_u(int k) const;

    /// Canonical basis monomials (coefficient 1) with v-weight at most
    /// w_max, sigma and a inside the window.
    std::vector<Monomial> basis(long long v_weight_max) const;

    Element parse(const std::string& s) const;
    std::string format(const Element& e) const;
    std::string format(const Monomial& m) const;

    nlohmann::json to_json() const;
    static PresRing from_json(const nlohmann::json& j);
    nlohmann::json element_to_json(const Element& e) const;
    Element element_from_json(const nlohmann::json& j) const;

  private:
    PresRing() = default;

    long long sigma_divisor_for(const Monomial& m) const;
    /// Full rule pipeline for one raw monomial; nullopt when it maps to 0.
    std::optional<Monomial> reduce_monomial(Monomial m) const;
    Element collect(std::vector<Monomial> ms) const;

    RingKind kind_ = RingKind::bp;
    int n_ = -1;      // inverted index (en style)
    int n_max_ = 0;   // largest generator index
    long long sigma_lo_ = 0, sigma_hi_ = 0;
    long long a_max_ = 0;
    bool nilpotency_ = true;
    bool a_inverted_ = false;
    bool trivial_ = false;
    std::vector<long long> a_powers_;
    GenSequence gens_;
};

struct PresRing::LocalizeResult {
    PresRing ring;
    bool collapsed = false;  // localization produced the zero ring (1 = 0)
    std::string note;
};

/// An ideal of the I(u) family: a generator sequence (substitution into the
/// ambient v-letters) together with the annihilation exponents c_k.
struct IdealSpec {
    GenSequence gens;
    std::vector<long long> a_powers;  // empty = defaults 2^{k+1} - 1

    static IdealSpec standard(int n_max) { return {GenSequence::identity(n_max), {}}; }
};

struct IdealCompareReport {
    bool equal = true;
    std::string first_failure;
    int generators_checked = 0;
};

/// Mutual reduction of the two relation families inside the common window:
/// every generator of each ideal must reduce to zero under the rewrite system
/// of the other.
IdealCompareReport ideal_equal(const IdealSpec& a, const IdealSpec& b, int n_max,
                               long long sigma_lo, long long sigma_hi, long long a_max);

}  // namespace ro2
