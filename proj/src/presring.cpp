#include "ro2alg/presring.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "ro2alg/errors.hpp"

namespace ro2 {

namespace {

std::vector<long long> default_powers(int n_max) {
    std::vector<long long> p(n_max + 1);
    for (int k = 0; k <= n_max; ++k)
        p[k] = (1LL << (k + 1)) - 1;
    return p;
}

}  // namespace

PresRing PresRing::bp(int n_max, long long sigma_lo, long long sigma_hi, long long a_max,
                      GenSequence gens, RingOptions opts) {
    if (n_max < 0 || sigma_lo > sigma_hi || a_max < 0)
        throw InputError("PresRing: malformed window");
    PresRing r;
    r.kind_ = RingKind::bp;
    r.n_ = -1;
    r.n_max_ = n_max;
    r.sigma_lo_ = sigma_lo;
    r.sigma_hi_ = sigma_hi;
    r.a_max_ = a_max;
    r.nilpotency_ = opts.nilpotency;
    r.a_powers_ = opts.a_powers.empty() ? default_powers(n_max) : opts.a_powers;
    if (static_cast<int>(r.a_powers_.size()) != n_max + 1)
        throw InputError("PresRing: a_powers must have one entry per index 0..n_max");
    r.gens_ = gens.n_max() >= 1 ? std::move(gens) : GenSequence::identity(n_max);
    return r;
}

PresRing PresRing::en(int n, long long sigma_lo, long long sigma_hi, long long a_max,
                      GenSequence gens, RingOptions opts) {
    if (n < 1)
        throw InputError("PresRing: periodic style needs n >= 1");
    PresRing r = bp(n, sigma_lo, sigma_hi, a_max, std::move(gens), std::move(opts));
    r.kind_ = RingKind::en;
    r.n_ = n;
    return r;
}

PresRing PresRing::trivial_ring() {
    PresRing r;
    r.trivial_ = true;
    r.n_max_ = 0;
    r.a_powers_ = default_powers(0);
    r.gens_ = GenSequence::identity(0);
    return r;
}

long long PresRing::a_power(int k) const {
    if (k < 0 || k > n_max_)
        throw InputError("PresRing: no annihilation exponent for index " + std::to_string(k));
    return a_powers_[k];
}

bool PresRing::a_is_nilpotent() const {
    if (trivial_)
        return true;
    return kind_ == RingKind::en && nilpotency_;
}

long long PresRing::sigma_divisor_for(const Monomial& m) const {
    int kmin = m.kmin();
    if (kmin >= 0) {
        int lvl = kind_ == RingKind::en ? std::min(kmin, n_) : kmin;
        return 1LL << (lvl + 1);
    }
    if (kind_ == RingKind::en)
        return 1LL << (n_ + 1);
    return 0;  // sigma must vanish: no carrier available
}

std::optional<Monomial> PresRing::reduce_monomial(Monomial m) const {
    if (trivial_ || m.coeff.is_zero())
        return std::nullopt;

    for (auto it = m.uexp.begin(); it != m.uexp.end();) {
        if (it->second == 0) {
            it = m.uexp.erase(it);
            continue;
        }
        if (it->second < 0)
            throw InputError("monomial: negative exponent of u_" + std::to_string(it->first));
        if (it->first < 0)
            throw InputError("monomial: negative generator index");
        if (it->first > n_max_)
            throw WindowError("monomial: generator u_" + std::to_string(it->first) +
                              " outside the window (n_max = " + std::to_string(n_max_) + ")");
        ++it;
    }
    if (m.uinv < 0)
        throw InputError("monomial: negative exponent of the inverted generator");
    if (m.uinv > 0 && kind_ != RingKind::en)
        throw InputError("monomial: no inverted generator in this presentation");
    if (m.aexp < 0 && !a_inverted_)
        throw InputError("monomial: negative exponent of a");

    // u_n^{-1} cancellation (periodic style)
    if (kind_ == RingKind::en && m.uinv > 0) {
        auto it = m.uexp.find(n_);
        if (it != m.uexp.end()) {
            long long t = std::min(m.uinv, it->second);
            m.uinv -= t;
            it->second -= t;
            if (it->second == 0)
                m.uexp.erase(it);
        }
    }

    // raw divisibility of the pooled sigma exponent
    long long div = sigma_divisor_for(m);
    if (div == 0) {
        if (m.sigma != 0)
            throw DivisibilityError("monomial: sigma^" + std::to_string(m.sigma) +
                                    " has no carrier in the polynomial style");
    } else if (m.sigma % div != 0) {
        throw DivisibilityError("monomial: sigma exponent " + std::to_string(m.sigma) +
                                " not divisible by " + std::to_string(div));
    }

    if (m.sigma < sigma_lo_ || m.sigma > sigma_hi_)
        throw WindowError("monomial: sigma exponent " + std::to_string(m.sigma) +
                          " outside window [" + std::to_string(sigma_lo_) + "," +
                          std::to_string(sigma_hi_) + "]");
    long long aabs = m.aexp < 0 ? -m.aexp : m.aexp;
    if (aabs > a_max_)
        throw WindowError("monomial: a exponent " + std::to_string(m.aexp) +
                          " outside window (a_max = " + std::to_string(a_max_) + ")");

    if (a_inverted_ && nilpotency_) {
        // with a invertible every annihilated generator dies, and 2 = u_0 = 0
        if (!m.uexp.empty() || m.uinv > 0)
            return std::nullopt;
        if (m.coeff.mod2() == 0)
            return std::nullopt;
        m.coeff = TwoLocal(1);
        return m;
    }

    if (nilpotency_) {
        if (kind_ == RingKind::en && m.aexp >= a_powers_[n_])
            return std::nullopt;  // u_n invertible forces a^{c_n} = 0
        int kmin = m.kmin();
        if (kmin >= 0 && m.aexp >= a_powers_[kmin])
            return std::nullopt;
        if (m.aexp >= a_powers_[0]) {
            // 2 a^{c_0} = u_0 a^{c_0} = 0: the coefficient lives mod 2
            if (m.coeff.mod2() == 0)
                return std::nullopt;
            m.coeff = TwoLocal(1);
        }
    }

    // re-home u_0 factors as the scalar 2 while the rest stays admissible
    while (true) {
        auto it = m.uexp.find(0);
        if (it == m.uexp.end())
            break;
        Monomial rest = m;
        auto rit = rest.uexp.find(0);
        if (--rit->second == 0)
            rest.uexp.erase(rit);
        long long rdiv = sigma_divisor_for(rest);
        bool ok = rdiv == 0 ? rest.sigma == 0 : rest.sigma % rdiv == 0;
        if (!ok)
            break;
        rest.coeff = rest.coeff * TwoLocal(2);
        m = std::move(rest);
    }

    return m;
}

Element PresRing::collect(std::vector<Monomial> ms) const {
    std::sort(ms.begin(), ms.end());
    Element merged;
    for (auto& m : ms) {
        if (!merged.empty() && merged.back().same_exponents(m))
            merged.back().coeff = merged.back().coeff + m.coeff;
        else
            merged.push_back(std::move(m));
    }
    Element out;
    for (auto& m : merged) {
        auto r = reduce_monomial(std::move(m));
        if (r)
            out.push_back(std::move(*r));
    }
    return out;
}

Element PresRing::normal_form(const Element& raw) const {
    std::vector<Monomial> ms;
    ms.reserve(raw.size());
    for (const Monomial& m : raw) {
        auto r = reduce_monomial(m);
        if (r)
            ms.push_back(std::move(*r));
    }
    return collect(std::move(ms));
}

Element PresRing::normal_form(const Monomial& raw) const {
    return normal_form(Element{raw});
}

Element PresRing::add(const Element& x, const Element& y) const {
    std::vector<Monomial> ms = x;
    ms.insert(ms.end(), y.begin(), y.end());
    return collect(std::move(ms));
}

Element PresRing::neg(const Element& x) const {
    Element out = x;
    for (auto& m : out)
        m.coeff = -m.coeff;
    return out;
}

Element PresRing::sub(const Element& x, const Element& y) const { return add(x, neg(y)); }

Element PresRing::mul(const Element& x, const Element& y) const {
    std::vector<Monomial> ms;
    ms.reserve(x.size() * y.size());
    for (const Monomial& a : x)
        for (const Monomial& b : y) {
            Monomial p;
            p.coeff = a.coeff * b.coeff;
            p.uexp = a.uexp;
            for (const auto& [k, e] : b.uexp)
                p.uexp[k] += e;
            p.uinv = a.uinv + b.uinv;
            p.sigma = a.sigma + b.sigma;
            p.aexp = a.aexp + b.aexp;
            auto r = reduce_monomial(std::move(p));
            if (r)
                ms.push_back(std::move(*r));
        }
    return collect(std::move(ms));
}

Element PresRing::pow(const Element& x, long long e) const {
    if (e < 0)
        throw InputError("pow: negative exponent");
    Element acc = one();
    for (long long i = 0; i < e; ++i)
        acc = mul(acc, x);
    return acc;
}

bool PresRing::equals(const Element& x, const Element& y) const {
    return normal_form(x) == normal_form(y);
}

bool PresRing::is_zero(const Element& x) const { return normal_form(x).empty(); }

Element PresRing::one() const { return scalar(TwoLocal(1)); }

Element PresRing::scalar(const TwoLocal& c) const {
    Monomial m;
    m.coeff = c;
    return normal_form(m);
}

ROdeg PresRing::degree_of(const Monomial& m) const {
    ROdeg d;
    for (const auto& [k, e] : m.uexp) {
        long long w = ((1LL << k) - 1) * e;
        d.one += w;
        d.alpha += w;
    }
    if (m.uinv != 0) {
        long long w = ((1LL << n_) - 1) * m.uinv;
        d.one -= w;
        d.alpha -= w;
    }
    d.one -= m.sigma;
    d.alpha += m.sigma;
    d.alpha -= m.aexp;
    return d;
}

std::optional<ROdeg> PresRing::degree_of(const Element& e) const {
    if (e.empty())
        return std::nullopt;
    ROdeg d = degree_of(e.front());
    for (size_t i = 1; i < e.size(); ++i)
        if (degree_of(e[i]) != d)
            throw HeterogeneousDegreeError("element mixes bidegrees " + d.str() + " and " +
                                           degree_of(e[i]).str());
    return d;
}

PresRing::LocalizeResult PresRing::localize_a() const {
    if (trivial_)
        return {*this, true, "ring is already trivial"};
    if (a_is_nilpotent())
        return {trivial_ring(), true,
                "a is nilpotent (u_n invertible forces a^" + std::to_string(a_powers_[n_]) +
                    " = 0), so inverting it collapses the ring: 1 = 0"};
    PresRing r = *this;
    r.a_inverted_ = true;
    std::string note = nilpotency_
                           ? "a inverted; every u_k is annihilated and 2 = u_0 = 0"
                           : "a inverted";
    return {std::move(r), false, note};
}

PresRing::LocalizeResult PresRing::localize_u(int k) const {
    if (trivial_)
        return {*this, true, "ring is already trivial"};
    if (k < 1 || k > n_max_)
        throw InputError("localize: index " + std::to_string(k) + " outside 1..n_max");
    if (kind_ == RingKind::en) {
        if (k == n_)
            return {*this, false, "u_" + std::to_string(k) + " is already invertible"};
        throw InputError("localize: only the periodicity generator u_" + std::to_string(n_) +
                         " can be inverted in this presentation");
    }
    PresRing r = *this;
    r.kind_ = RingKind::en;
    r.n_ = k;
    return {std::move(r), false,
            "u_" + std::to_string(k) + " and sigma^" + std::to_string(1LL << (k + 1)) +
                " inverted"};
}

std::vector<Monomial> PresRing::basis(long long v_weight_max) const {
    std::vector<Monomial> out;
    if (trivial_)
        return out;

    // enumerate v-multisets of bounded weight over the indices 1..n_max
    std::vector<std::map<int, long long>> multisets;
    std::map<int, long long> cur;
    auto rec = [&](auto&& self, int k, long long budget) -> void {
        if (k > n_max_) {
            multisets.push_back(cur);
            return;
        }
        long long w = (1LL << k) - 1;
        for (long long e = 0; e * w <= budget; ++e) {
            if (e > 0)
                cur[k] = e;
            self(self, k + 1, budget - e * w);
            if (e > 0)
                cur.erase(k);
        }
    };
    rec(rec, 1, v_weight_max);

    long long uinv_max = 0;
    if (kind_ == RingKind::en)
        uinv_max = v_weight_max / ((1LL << n_) - 1);

    for (const auto& ms : multisets)
        for (long long u0 = 0; u0 <= 1; ++u0)
            for (long long ui = 0; ui <= uinv_max; ++ui) {
                if (ui > 0 && ms.count(n_))
                    continue;  // would cancel
                Monomial base;
                base.uexp = ms;
                if (u0)
                    base.uexp[0] = 1;
                base.uinv = ui;
                long long div = sigma_divisor_for(base);
                long long jstep = div == 0 ? 1 : div;
                long long jlo = div == 0 ? 0 : sigma_lo_;
                long long jhi = div == 0 ? 0 : sigma_hi_;
                for (long long j = jlo; j <= jhi; ++j) {
                    if (div != 0 && j % jstep != 0)
                        continue;
                    for (long long e = 0; e <= a_max_; ++e) {
                        Monomial m = base;
                        m.sigma = j;
                        m.aexp = e;
                        auto r = reduce_monomial(m);
                        if (r && r->same_exponents(m) && r->coeff.is_one())
                            out.push_back(std::move(*r));
                    }
                }
            }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// text format

std::string PresRing::format(const Monomial& m) const {
    std::vector<std::string> parts;
    for (const auto& [k, e] : m.uexp) {
        std::string p = "u" + std::to_string(k);
        if (e != 1)
            p += "^" + std::to_string(e);
        parts.push_back(p);
    }
    if (m.uinv != 0)
        parts.push_back("u" + std::to_string(n_) + "^-" + std::to_string(m.uinv));
    if (m.sigma != 0)
        parts.push_back("s^" + std::to_string(m.sigma));
    if (m.aexp != 0)
        parts.push_back(m.aexp == 1 ? "a" : "a^" + std::to_string(m.aexp));
    std::string body;
    for (size_t i = 0; i < parts.size(); ++i)
        body += (i ? "*" : "") + parts[i];
    if (body.empty())
        return m.coeff.str();
    if (m.coeff.is_one())
        return body;
    if ((-m.coeff).is_one())
        return "-" + body;
    return m.coeff.str() + "*" + body;
}

std::string PresRing::format(const Element& e) const {
    if (e.empty())
        return "0";
    std::string s;
    for (size_t i = 0; i < e.size(); ++i) {
        std::string t = format(e[i]);
        if (i == 0) {
            s = t;
        } else if (!t.empty() && t[0] == '-') {
            s += " - " + t.substr(1);
        } else {
            s += " + " + t;
        }
    }
    return s;
}

namespace {

struct Lexer {
    const std::string& s;
    size_t i = 0;
    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
    }
    bool eof() {
        skip();
        return i >= s.size();
    }
    char peek() {
        skip();
        return s[i];
    }
    char get() {
        skip();
        return s[i++];
    }
    long long integer() {
        skip();
        bool neg = false;
        if (i < s.size() && (s[i] == '-' || s[i] == '+'))
            neg = s[i++] == '-';
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
            throw InputError("element parse: expected integer at position " + std::to_string(i));
        long long v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            v = v * 10 + (s[i++] - '0');
        return neg ? -v : v;
    }
};

}  // namespace

Element PresRing::parse(const std::string& str) const {
    Lexer lx{str};
    std::vector<Monomial> raw;
    bool first = true;
    while (!lx.eof()) {
        int sign = 1;
        if (!first || lx.peek() == '+' || lx.peek() == '-') {
            char c = lx.get();
            if (c == '-')
                sign = -1;
            else if (c != '+')
                throw InputError(std::string("element parse: expected '+' or '-', got '") + c +
                                 "'");
        }
        first = false;
        Monomial m;
        m.coeff = TwoLocal(sign);
        bool factor_expected = true;
        while (factor_expected) {
            if (lx.eof())
                throw InputError("element parse: dangling operator");
            char c = lx.peek();
            if (std::isdigit(static_cast<unsigned char>(c))) {
                long long num = lx.integer();
                if (!lx.eof() && lx.peek() == '/') {
                    lx.get();
                    long long den = lx.integer();
                    m.coeff = m.coeff * TwoLocal(Int(num), Int(den));
                } else {
                    m.coeff = m.coeff * TwoLocal(num);
                }
            } else if (c == 'u') {
                lx.get();
                long long k = lx.integer();
                long long e = 1;
                if (!lx.eof() && lx.peek() == '^') {
                    lx.get();
                    e = lx.integer();
                }
                if (e < 0) {
                    if (kind_ != RingKind::en || k != n_)
                        throw InputError("element parse: u" + std::to_string(k) +
                                         " is not invertible here");
                    m.uinv += -e;
                } else {
                    m.uexp[static_cast<int>(k)] += e;
                }
            } else if (c == 's') {
                lx.get();
                long long e = 1;
                if (!lx.eof() && lx.peek() == '^') {
                    lx.get();
                    e = lx.integer();
                }
                m.sigma += e;
            } else if (c == 'a') {
                lx.get();
                long long e = 1;
                if (!lx.eof() && lx.peek() == '^') {
                    lx.get();
                    e = lx.integer();
                }
                m.aexp += e;
            } else {
                throw InputError(std::string("element parse: unexpected character '") + c + "'");
            }
            factor_expected = false;
            if (!lx.eof() && lx.peek() == '*') {
                lx.get();
                factor_expected = true;
            }
        }
        raw.push_back(std::move(m));
    }
    return normal_form(raw);
}

// ---------------------------------------------------------------------------
// json

namespace {

nlohmann::json int_to_json(const Int& v) {
    static const Int lo = std::numeric_limits<long long>::min();
    static const Int hi = std::numeric_limits<long long>::max();
    if (v >= lo && v <= hi)
        return static_cast<long long>(v);
    return v.str();
}

Int int_from_json(const nlohmann::json& j) {
    if (j.is_number_integer())
        return Int(j.get<long long>());
    if (j.is_string())
        return Int(j.get<std::string>());
    throw InputError("json: expected integer");
}

}  // namespace

nlohmann::json PresRing::to_json() const {
    nlohmann::json j;
    j["kind"] = kind_ == RingKind::bp ? "bp" : "en";
    if (kind_ == RingKind::en)
        j["n"] = n_;
    j["n_max"] = n_max_;
    j["sigma_window"] = {sigma_lo_, sigma_hi_};
    j["a_max"] = a_max_;
    j["generators"] = gens_.to_json();
    if (!nilpotency_)
        j["nilpotency"] = false;
    return j;
}

PresRing PresRing::from_json(const nlohmann::json& j) {
    std::string kind = j.at("kind").get<std::string>();
    int n_max = j.at("n_max").get<int>();
    auto win = j.at("sigma_window");
    long long slo = win.at(0).get<long long>();
    long long shi = win.at(1).get<long long>();
    long long amax = j.at("a_max").get<long long>();
    GenSequence gens = GenSequence::from_json(j.contains("generators") ? j["generators"]
                                                                       : nlohmann::json(),
                                              n_max);
    RingOptions opts;
    if (j.contains("nilpotency"))
        opts.nilpotency = j["nilpotency"].get<bool>();
    if (kind == "bp")
        return bp(n_max, slo, shi, amax, std::move(gens), std::move(opts));
    if (kind == "en") {
        int n = j.at("n").get<int>();
        if (n != n_max)
            throw InputError("ring json: periodic style requires n == n_max");
        return en(n, slo, shi, amax, std::move(gens), std::move(opts));
    }
    throw InputError("ring json: unknown kind '" + kind + "'");
}

nlohmann::json PresRing::element_to_json(const Element& e) const {
    nlohmann::json arr = nlohmann::json::array();
    for (const Monomial& m : e) {
        nlohmann::json jm;
        jm["coeff"] = {int_to_json(m.coeff.num()), int_to_json(m.coeff.den())};
        nlohmann::json u = nlohmann::json::object();
        for (const auto& [k, ex] : m.uexp)
            u[std::to_string(k)] = ex;
        jm["u"] = u;
        jm["uinv"] = m.uinv;
        jm["sigma"] = m.sigma;
        jm["a"] = m.aexp;
        arr.push_back(std::move(jm));
    }
    return arr;
}

Element PresRing::element_from_json(const nlohmann::json& j) const {
    if (!j.is_array())
        throw InputError("element json: expected an array of monomials");
    std::vector<Monomial> raw;
    for (const auto& jm : j) {
        Monomial m;
        if (jm.contains("coeff")) {
            const auto& c = jm["coeff"];
            if (!c.is_array() || c.size() != 2)
                throw InputError("element json: coeff must be [num, den]");
            m.coeff = TwoLocal(int_from_json(c[0]), int_from_json(c[1]));
        }
        if (jm.contains("u"))
            for (auto it = jm["u"].begin(); it != jm["u"].end(); ++it)
                m.uexp[std::stoi(it.key())] = it.value().get<long long>();
        if (jm.contains("uinv"))
            m.uinv = jm["uinv"].get<long long>();
        if (jm.contains("sigma"))
            m.sigma = jm["sigma"].get<long long>();
        if (jm.contains("a"))
            m.aexp = jm["a"].get<long long>();
        raw.push_back(std::move(m));
    }
    return normal_form(raw);
}

// ---------------------------------------------------------------------------
// ideal comparison

IdealCompareReport ideal_equal(const IdealSpec& a, const IdealSpec& b, int n_max,
                               long long sigma_lo, long long sigma_hi, long long a_max) {
    auto powers_of = [&](const IdealSpec& s) {
        if (s.a_powers.empty())
            return default_powers(n_max);
        if (static_cast<int>(s.a_powers.size()) != n_max + 1)
            throw InputError("ideal_equal: a_powers must cover indices 0..n_max");
        return s.a_powers;
    };

    IdealCompareReport rep;
    const IdealSpec* specs[2] = {&a, &b};
    for (int dir = 0; dir < 2; ++dir) {
        const IdealSpec& src = *specs[dir];
        const IdealSpec& dst = *specs[1 - dir];
        std::vector<long long> src_p = powers_of(src);
        RingOptions opts;
        opts.a_powers = powers_of(dst);
        PresRing rewrite = PresRing::bp(n_max, sigma_lo, sigma_hi, a_max,
                                        GenSequence::identity(n_max), opts);
        GenSequence to_dst = dst.gens.n_max() >= 1 ? dst.gens.inverse()
                                                   : GenSequence::identity(n_max);
        GenSequence src_gens = src.gens.n_max() >= 1 ? src.gens
                                                     : GenSequence::identity(n_max);
        for (int k = 0; k <= n_max; ++k) {
            if (src_p[k] > a_max)
                continue;  // annihilator exponent not representable in the window
            long long step = 1LL << (k + 1);
            for (long long j = (sigma_lo / step) * step; j <= sigma_hi; j += step) {
                if (j < sigma_lo)
                    continue;
                Element gen;
                if (k == 0) {
                    Monomial m;
                    m.uexp[0] = 1;
                    m.sigma = j;
                    m.aexp = src_p[0];
                    gen.push_back(std::move(m));
                } else {
                    for (const VTerm& t : src_gens.expansion(k)) {
                        Monomial m;
                        m.coeff = t.coeff;
                        for (const auto& [i, e] : t.v)
                            m.uexp[i] = e;
                        m.sigma = j;
                        m.aexp = src_p[k];
                        gen.push_back(std::move(m));
                    }
                }
                Element image = substitute(gen, to_dst);
                Element nf = rewrite.normal_form(image);
                ++rep.generators_checked;
                if (!nf.empty()) {
                    rep.equal = false;
                    rep.first_failure = "generator " + rewrite.format(gen) + " of ideal " +
                                        std::to_string(dir + 1) + " reduces to " +
                                        rewrite.format(nf) + " (not 0)";
                    return rep;
                }
            }
        }
    }
    return rep;
}

}  // namespace ro2
