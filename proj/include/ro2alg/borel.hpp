#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ro2alg/genseq.hpp"
#include "ro2alg/presring.hpp"
#include "ro2alg/smith.hpp"

namespace ro2 {

/// Truncation window for the spectral sequence: generator indices up to
/// n_max, a pooled sigma exponent range, a filtration cap, and a cap on the
/// total v-weight of class names (the window triple of the page needs a
/// finite basis, so the v-content is bounded by weight).
struct SSWindow {
    int n_max = 0;
    long long sigma_lo = 0;
    long long sigma_hi = 0;
    long long a_max = 0;
    long long v_weight_max = 0;

    void validate() const;
    nlohmann::json to_json() const;
    static SSWindow from_json(const nlohmann::json& j);
};

/// Name of a page class: 2^{v0} * v-monomial * sigma^J * a^e. The generator of
/// the class is 2^{v0} times the free monomial; v0 > 0 records that only that
/// multiple survives (v_0 = 2).
struct SSName {
    long long v0 = 0;
    std::map<int, long long> v;
    long long sigma = 0;
    long long a = 0;

    using Key = std::tuple<std::vector<std::pair<int, long long>>, long long, long long>;
    Key key() const;  // identity on the page: (v, sigma, a); v0 is bookkeeping
    long long weight() const;
    std::string str() const;
    bool operator==(const SSName& o) const = default;
};

struct SSClass {
    SSName name;
    Int order;             // 0 = free Z_(2); otherwise 2^j
    bool flagged = false;  // edge-indeterminate: excluded from homology/comparison
};

struct DiffRule {
    int k = 0;
    long long r = 0;
    std::string v_form;
    std::string u_form;
};

class SSPage {
  public:
    long long r = 1;  // E_r; the active differential is the next 2^{k+1}-1 >= r
    SSWindow win;
    GenSequence gens;
    std::vector<SSClass> classes;
    std::vector<DiffRule> rules;
    bool final_page = false;

    std::optional<int> active_k() const;
    const SSClass* find(const SSName& name) const;
    ROdeg degree_of(const SSName& n) const;
    nlohmann::json to_json() const;
    void sort_classes();

  private:
    mutable std::map<SSName::Key, size_t> index_;
    friend SSPage turn_page(const SSPage&);
    void rebuild_index() const;
};

/// Free start page: basis {v-monomial * sigma^J * a^e} over the window with
/// integral coefficients and the differential family seeded by
/// d_{2^{k+1}-1}(sigma^{-2^k}) = v_k a^{2^{k+1}-1}.
SSPage build_e1(const SSWindow& win, GenSequence u = {});

/// Homology with respect to the active differential (Smith normal form per
/// bidegree), with edge-indeterminate flags for classes whose differential
/// enters or leaves the window.
SSPage turn_page(const SSPage& p);

/// Compose build_e1 and turn_page through r = 1, 3, ..., 2^{n_max+1}-1 and
/// classify the remaining sigma-power classes.
SSPage run_to_einfty(const SSWindow& win, GenSequence u = {});

/// Check deg(target) = deg(source) - (1,0) and filt(target) = filt + r for the
/// active differential of the page.
bool differential_degree_check(const SSPage& p);

/// Free Z_(2)-module with an involution, the input of the 2-periodic complex.
struct C2Module {
    std::vector<ROdeg> degrees;  // one entry per basis element
    Mat involution;
};

/// H^s(Z/2; M) for s = 0..s_max through the 2-periodic resolution with the
/// alternating differentials 1-g, 1+g. Keys are (internal degree of the
/// coefficient line, s); values list cyclic orders (0 = free), 2-localized.
using C2Cohomology = std::map<std::pair<ROdeg, long long>, std::vector<Int>>;

C2Cohomology group_cohomology_c2(const C2Module& m, long long s_max);

struct OracleCompareReport {
    bool match = true;
    std::string first_mismatch;
    int spots_compared = 0;
};

/// Compare the page after d_1 with the group cohomology of the truncated
/// coefficients under the sign action on sigma. A class in H^s of the line of
/// degree D sits at bidegree D - (s, 0) and filtration s.
OracleCompareReport compare_page_with_c2_oracle(const SSPage& page_after_d1);

struct CompareReport {
    bool match = true;
    std::string first_mismatch;
    int spots_compared = 0;
    int classes_compared = 0;
    int excluded_spots = 0;
    int products_checked = 0;
    int product_mismatches = 0;
};

/// Compare a final page with the polynomial-style presentation on the same
/// window: per bidegree and filtration the groups must agree (flagged spots
/// excluded), and a sample of products must multiply the same way on both
/// sides.
CompareReport compare_einfty(const SSPage& final_page, const PresRing& ring,
                             int product_samples = 128, unsigned seed = 20260811);

}  // namespace ro2
