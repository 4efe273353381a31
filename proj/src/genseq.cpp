#include "ro2alg/genseq.hpp"

#include <algorithm>

#include "ro2alg/errors.hpp"

namespace ro2 {

long long vterm_weight(const VTerm& t) {
    long long w = 0;
    for (const auto& [i, e] : t.v)
        w += ((1LL << i) - 1) * e;
    return w;
}

VPoly vpoly_collect(VPoly p) {
    std::sort(p.begin(), p.end(),
              [](const VTerm& a, const VTerm& b) { return a.v < b.v; });
    VPoly out;
    for (auto& t : p) {
        if (!out.empty() && out.back().v == t.v)
            out.back().coeff = out.back().coeff + t.coeff;
        else
            out.push_back(std::move(t));
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const VTerm& t) { return t.coeff.is_zero(); }),
              out.end());
    return out;
}

VPoly vpoly_add(const VPoly& a, const VPoly& b) {
    VPoly p = a;
    p.insert(p.end(), b.begin(), b.end());
    return vpoly_collect(std::move(p));
}

VPoly vpoly_mul(const VPoly& a, const VPoly& b) {
    VPoly p;
    for (const auto& s : a)
        for (const auto& t : b) {
            VTerm r;
            r.coeff = s.coeff * t.coeff;
            r.v = s.v;
            for (const auto& [i, e] : t.v)
                r.v[i] += e;
            p.push_back(std::move(r));
        }
    return vpoly_collect(std::move(p));
}

VPoly vpoly_scale(const VPoly& a, const TwoLocal& c) {
    VPoly p = a;
    for (auto& t : p)
        t.coeff = t.coeff * c;
    return vpoly_collect(std::move(p));
}

GenSequence GenSequence::identity(int n_max) {
    GenSequence g;
    g.exp_.resize(n_max + 1);
    for (int k = 1; k <= n_max; ++k) {
        VTerm t;
        t.v[k] = 1;
        g.exp_[k] = {t};
    }
    return g;
}

const VPoly& GenSequence::expansion(int k) const {
    if (k < 1 || k > n_max())
        throw InputError("GenSequence: no expansion for index " + std::to_string(k));
    return exp_[k];
}

void GenSequence::set_expansion(int k, VPoly p) {
    if (k < 1)
        throw InputError("GenSequence: index must be >= 1");
    if (k > n_max())
        exp_.resize(k + 1);
    exp_[k] = vpoly_collect(std::move(p));
}

bool GenSequence::is_identity() const {
    for (int k = 1; k <= n_max(); ++k) {
        const VPoly& p = exp_[k];
        if (p.size() != 1 || !p[0].coeff.is_one() || p[0].v.size() != 1 ||
            p[0].v.begin()->first != k || p[0].v.begin()->second != 1)
            return false;
    }
    return true;
}

TwoLocal GenSequence::leading_unit(int k) const {
    for (const auto& t : expansion(k))
        if (t.v.size() == 1 && t.v.begin()->first == k && t.v.begin()->second == 1)
            return t.coeff;
    return TwoLocal(0);
}

GenSequence::Validation GenSequence::validate() const {
    Validation res;
    auto fail = [&](const std::string& msg) {
        res.ok = false;
        res.diagnostics.push_back(msg);
    };
    for (int k = 1; k <= n_max(); ++k) {
        const VPoly& p = exp_[k];
        const long long want = (1LL << k) - 1;
        if (p.empty()) {
            fail("u_" + std::to_string(k) + ": empty expansion");
            continue;
        }
        for (const auto& t : p)
            if (vterm_weight(t) != want)
                fail("u_" + std::to_string(k) + ": term of weight " +
                     std::to_string(vterm_weight(t)) + ", expected " + std::to_string(want));
        TwoLocal alpha = leading_unit(k);
        if (alpha.is_zero())
            fail("u_" + std::to_string(k) + ": no pure v_" + std::to_string(k) + " term");
        else if (!alpha.is_unit())
            fail("u_" + std::to_string(k) + ": leading coefficient " + alpha.str() +
                 " is not a 2-local unit");
        for (const auto& t : p) {
            if (t.v.size() == 1 && t.v.begin()->first == k && t.v.begin()->second == 1)
                continue;  // the leading term
            // membership in (2, v_1, ..., v_{k-1}) is syntactic
            bool lower = !t.v.empty() && t.v.begin()->first < k;
            bool even = !t.coeff.is_unit();
            if (!lower && !even)
                fail("u_" + std::to_string(k) + ": correction term " + "of weight " +
                     std::to_string(vterm_weight(t)) +
                     " lies outside (2, v_1..v_" + std::to_string(k - 1) + ")");
        }
    }
    return res;
}

GenSequence GenSequence::inverse() const {
    Validation v = validate();
    if (!v.ok)
        throw InputError("GenSequence: cannot invert an invalid sequence: " +
                         (v.diagnostics.empty() ? "" : v.diagnostics.front()));
    GenSequence inv;
    inv.exp_.resize(n_max() + 1);
    // v_k = alpha_k^{-1} (u_k - corrections(v_1..v_{k-1})), lower v's already
    // rewritten in the u letters
    for (int k = 1; k <= n_max(); ++k) {
        VTerm uk;
        uk.v[k] = 1;
        VPoly acc = {uk};
        for (const auto& t : expansion(k)) {
            if (t.v.size() == 1 && t.v.begin()->first == k && t.v.begin()->second == 1)
                continue;
            // rewrite the correction term through the already-inverted letters
            VPoly term = {VTerm{-t.coeff, {}}};
            for (const auto& [i, e] : t.v)
                for (long long c = 0; c < e; ++c)
                    term = vpoly_mul(term, inv.exp_[i]);
            acc = vpoly_add(acc, term);
        }
        inv.exp_[k] = vpoly_scale(acc, leading_unit(k).inverse());
    }
    return inv;
}

Element substitute(const Element& e, const GenSequence& subst) {
    Element out;
    for (const Monomial& m : e) {
        if (m.uinv != 0)
            throw InputError("substitute: inverted generators cannot be substituted");
        VPoly p = {VTerm{m.coeff, {}}};
        long long u0 = 0;
        for (const auto& [k, ex] : m.uexp) {
            if (k == 0) {
                u0 = ex;
                continue;
            }
            for (long long c = 0; c < ex; ++c)
                p = vpoly_mul(p, subst.expansion(k));
        }
        for (const auto& t : p) {
            Monomial r;
            r.coeff = t.coeff;
            if (u0 > 0)
                r.uexp[0] = u0;
            for (const auto& [i, ex] : t.v)
                r.uexp[i] = ex;
            r.sigma = m.sigma;
            r.aexp = m.aexp;
            out.push_back(std::move(r));
        }
    }
    return out;
}

nlohmann::json GenSequence::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (int k = 1; k <= n_max(); ++k) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& t : exp_[k]) {
            int top = t.v.empty() ? 0 : t.v.rbegin()->first;
            std::vector<long long> exps(top, 0);
            for (const auto& [i, e] : t.v)
                exps[i - 1] = e;
            nlohmann::json coeff;
            if (t.coeff.den() == 1)
                coeff = t.coeff.num().str();
            else
                coeff = {t.coeff.num().str(), t.coeff.den().str()};
            terms.push_back({coeff, exps});
        }
        arr.push_back({{"k", k}, {"expansion_in_v", terms}});
    }
    return arr;
}

namespace {
TwoLocal coeff_from_json(const nlohmann::json& j) {
    auto parse_int = [](const nlohmann::json& v) -> Int {
        if (v.is_number_integer())
            return Int(v.get<long long>());
        if (v.is_string())
            return Int(v.get<std::string>());
        throw InputError("GenSequence: bad coefficient encoding");
    };
    if (j.is_array()) {
        if (j.size() != 2)
            throw InputError("GenSequence: coefficient array must be [num, den]");
        return TwoLocal(parse_int(j[0]), parse_int(j[1]));
    }
    return TwoLocal(parse_int(j));
}
}  // namespace

GenSequence GenSequence::from_json(const nlohmann::json& j, int n_max) {
    GenSequence g = identity(n_max);
    if (j.is_null())
        return g;
    for (const auto& entry : j) {
        int k = entry.at("k").get<int>();
        if (k < 1 || k > n_max)
            throw InputError("GenSequence: generator index " + std::to_string(k) +
                             " outside 1.." + std::to_string(n_max));
        VPoly p;
        for (const auto& term : entry.at("expansion_in_v")) {
            if (!term.is_array() || term.size() != 2)
                throw InputError("GenSequence: expansion term must be [coeff, exps]");
            VTerm t;
            t.coeff = coeff_from_json(term[0]);
            const auto& exps = term[1];
            for (size_t i = 0; i < exps.size(); ++i) {
                long long e = exps[i].get<long long>();
                if (e < 0)
                    throw InputError("GenSequence: negative exponent");
                if (e > 0)
                    t.v[static_cast<int>(i) + 1] = e;
            }
            p.push_back(std::move(t));
        }
        g.set_expansion(k, std::move(p));
    }
    return g;
}

}  // namespace ro2
