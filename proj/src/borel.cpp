#include "ro2alg/borel.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <set>
#include <sstream>

#include "ro2alg/errors.hpp"

namespace ro2 {

namespace {

int nu2(long long j) {
    assert(j != 0);
    int k = 0;
    while (j % 2 == 0) {
        j /= 2;
        ++k;
    }
    return k;
}

}  // namespace

void SSWindow::validate() const {
    if (n_max < 0 || sigma_lo > sigma_hi || a_max < 0 || v_weight_max < 0)
        throw InputError("SSWindow: malformed window");
}

nlohmann::json SSWindow::to_json() const {
    return {{"n_max", n_max},
            {"sigma_window", {sigma_lo, sigma_hi}},
            {"a_max", a_max},
            {"v_weight_max", v_weight_max}};
}

SSWindow SSWindow::from_json(const nlohmann::json& j) {
    SSWindow w;
    w.n_max = j.at("n_max").get<int>();
    w.sigma_lo = j.at("sigma_window").at(0).get<long long>();
    w.sigma_hi = j.at("sigma_window").at(1).get<long long>();
    w.a_max = j.at("a_max").get<long long>();
    if (j.contains("v_weight_max"))
        w.v_weight_max = j["v_weight_max"].get<long long>();
    else
        w.v_weight_max = 4 * ((1LL << w.n_max) - 1) + 4;
    w.validate();
    return w;
}

SSName::Key SSName::key() const {
    std::vector<std::pair<int, long long>> vv(v.begin(), v.end());
    return {std::move(vv), sigma, a};
}

long long SSName::weight() const {
    long long w = 0;
    for (const auto& [k, e] : v)
        w += ((1LL << k) - 1) * e;
    return w;
}

std::string SSName::str() const {
    std::vector<std::string> parts;
    if (v0 > 0)
        parts.push_back(v0 == 1 ? "v0" : "v0^" + std::to_string(v0));
    for (const auto& [k, e] : v)
        parts.push_back("v" + std::to_string(k) + (e == 1 ? "" : "^" + std::to_string(e)));
    if (sigma != 0)
        parts.push_back("s^" + std::to_string(sigma));
    if (a != 0)
        parts.push_back(a == 1 ? "a" : "a^" + std::to_string(a));
    if (parts.empty())
        return "1";
    std::string s = parts[0];
    for (size_t i = 1; i < parts.size(); ++i)
        s += "*" + parts[i];
    return s;
}

std::optional<int> SSPage::active_k() const {
    if (final_page)
        return std::nullopt;
    for (int k = 0; k <= win.n_max; ++k)
        if ((1LL << (k + 1)) - 1 >= r)
            return k;
    return std::nullopt;
}

void SSPage::rebuild_index() const {
    index_.clear();
    for (size_t i = 0; i < classes.size(); ++i)
        index_[classes[i].name.key()] = i;
}

const SSClass* SSPage::find(const SSName& name) const {
    if (index_.size() != classes.size())
        rebuild_index();
    auto it = index_.find(name.key());
    return it == index_.end() ? nullptr : &classes[it->second];
}

ROdeg SSPage::degree_of(const SSName& n) const {
    ROdeg d;
    long long w = n.weight();
    d.one = w - n.sigma;
    d.alpha = w + n.sigma - n.a;
    return d;
}

void SSPage::sort_classes() {
    std::sort(classes.begin(), classes.end(),
              [](const SSClass& x, const SSClass& y) { return x.name.key() < y.name.key(); });
    index_.clear();
}

nlohmann::json SSPage::to_json() const {
    nlohmann::json alive = nlohmann::json::array();
    nlohmann::json flagged = nlohmann::json::array();
    auto group_str = [](const Int& order) {
        return order == 0 ? std::string("Z") : "Z/" + order.str();
    };
    for (const SSClass& c : classes) {
        ROdeg d = degree_of(c.name);
        nlohmann::json jc = {{"s", c.name.a},
                             {"deg", {d.one, d.alpha}},
                             {"name", c.name.str()},
                             {"group", group_str(c.order)}};
        (c.flagged ? flagged : alive).push_back(std::move(jc));
    }
    nlohmann::json jr = {{"r", r},
                         {"window", win.to_json()},
                         {"classes", alive},
                         {"edge_flagged", flagged}};
    if (final_page)
        jr["final"] = true;
    nlohmann::json jrules = nlohmann::json::array();
    for (const DiffRule& rule : rules)
        jrules.push_back({{"k", rule.k}, {"r", rule.r}, {"rule", rule.v_form},
                          {"rule_in_u", rule.u_form}});
    jr["rules"] = jrules;
    return jr;
}

SSPage build_e1(const SSWindow& win, GenSequence u) {
    win.validate();
    if (u.n_max() < 1)
        u = GenSequence::identity(win.n_max);
    if (u.n_max() != win.n_max)
        throw InputError("build_e1: generator sequence truncation differs from the window");
    auto val = u.validate();
    if (!val.ok)
        throw InputError("build_e1: invalid generator sequence: " + val.diagnostics.front());

    SSPage p;
    p.r = 1;
    p.win = win;
    p.gens = u;

    std::map<int, long long> cur;
    auto rec = [&](auto&& self, int k, long long budget) -> void {
        if (k > win.n_max) {
            for (long long j = win.sigma_lo; j <= win.sigma_hi; ++j)
                for (long long e = 0; e <= win.a_max; ++e) {
                    SSClass c;
                    c.name.v = cur;
                    c.name.sigma = j;
                    c.name.a = e;
                    c.order = 0;
                    p.classes.push_back(std::move(c));
                }
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
    rec(rec, 1, win.v_weight_max);
    p.sort_classes();

    for (int k = 0; k <= win.n_max; ++k) {
        DiffRule rule;
        rule.k = k;
        rule.r = (1LL << (k + 1)) - 1;
        std::string lhs = "d_" + std::to_string(rule.r) + "(s^" + std::to_string(-(1LL << k)) +
                          ")";
        std::string rhs = "v" + std::to_string(k) + "*a^" + std::to_string(rule.r);
        rule.v_form = lhs + " = " + rhs;
        if (k == 0) {
            rule.u_form = lhs + " = u0*a^" + std::to_string(rule.r) + " = 2*a^" +
                          std::to_string(rule.r);
        } else {
            TwoLocal alpha = u.leading_unit(k);
            std::string coeff = alpha.is_one() ? "" : alpha.inverse().str() + "*";
            rule.u_form = lhs + " = " + coeff + "u" + std::to_string(k) + "*a^" +
                          std::to_string(rule.r) + " (mod classes dead on this page)";
        }
        p.rules.push_back(std::move(rule));
    }
    return p;
}

namespace {

struct Fire {
    size_t target = SIZE_MAX;  // index into classes, SIZE_MAX = out of window
    Int entry;                 // matrix coefficient on generators
    bool in_window = true;
};

std::optional<SSName> target_name(const SSName& src, int k, const SSWindow& win, bool* fits) {
    const long long rd = (1LL << (k + 1)) - 1;
    SSName t = src;
    t.sigma += 1LL << k;
    t.a += rd;
    if (k >= 1)
        t.v[k] += 1;
    *fits = t.sigma <= win.sigma_hi && t.sigma >= win.sigma_lo && t.a <= win.a_max &&
            t.weight() <= win.v_weight_max;
    return t;
}

}  // namespace

SSPage turn_page(const SSPage& p) {
    auto ak = p.active_k();
    if (!ak)
        return p;
    const int k = *ak;
    const long long rd = (1LL << (k + 1)) - 1;

    SSPage q;
    q.win = p.win;
    q.gens = p.gens;
    q.rules = p.rules;
    q.r = rd + 1;

    std::vector<SSClass> cls = p.classes;
    std::map<SSName::Key, size_t> index;
    for (size_t i = 0; i < cls.size(); ++i)
        index[cls[i].name.key()] = i;

    auto fires_structurally = [&](const SSClass& c) {
        return c.name.sigma != 0 && nu2(c.name.sigma) == k;
    };
    auto fires = [&](const SSClass& c) { return !c.flagged && fires_structurally(c); };

    // resolve targets once
    std::vector<Fire> fire(cls.size());
    for (size_t i = 0; i < cls.size(); ++i) {
        fire[i].target = SIZE_MAX;
        if (!fires_structurally(cls[i]))
            continue;
        bool fits = false;
        SSName t = *target_name(cls[i].name, k, p.win, &fits);
        if (!fits) {
            fire[i].in_window = false;
            continue;
        }
        auto it = index.find(t.key());
        if (it == index.end())
            continue;  // target died on an earlier page: zero map
        fire[i].target = it->second;
        // Leibniz coefficient: sigma^J = (sigma^{2^k})^q differentiates to
        // q * v_k a^{2^{k+1}-1} * sigma^{J + 2^k} up to sign; for k = 0 the
        // alternating cellular differential contributes v_0 = 2 exactly on the
        // odd powers. Generators carry 2^{v0}.
        Int coeff = k == 0 ? Int(2) : Int(cls[i].name.sigma >> k);
        coeff <<= static_cast<unsigned>(cls[i].name.v0);
        assert(cls[fire[i].target].name.v0 == 0 && "torsion targets never carry a lock");
        fire[i].entry = coeff;
    }

    // edge flags: a differential that enters or leaves the window poisons the
    // classes it touches, as does contact with an already flagged class
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < cls.size(); ++i) {
            if (fires_structurally(cls[i])) {
                if (!fire[i].in_window && !cls[i].flagged) {
                    cls[i].flagged = true;
                    changed = true;
                    continue;
                }
                if (fire[i].target != SIZE_MAX) {
                    SSClass& t = cls[fire[i].target];
                    if (cls[i].flagged && !t.flagged) {
                        t.flagged = true;
                        changed = true;
                    }
                    if (t.flagged && !cls[i].flagged) {
                        cls[i].flagged = true;
                        changed = true;
                    }
                }
            }
            // inflow edge: a would-be source just below the sigma window
            if (!cls[i].flagged && cls[i].name.a >= rd &&
                cls[i].name.sigma % (1LL << (k + 1)) == 0 &&
                (k == 0 || cls[i].name.v.count(k))) {
                long long sj = cls[i].name.sigma - (1LL << k);
                if (sj < p.win.sigma_lo) {
                    cls[i].flagged = true;
                    changed = true;
                }
            }
        }
    }

    // group classes by bidegree spot and take homology spot by spot
    using Spot = std::tuple<long long, long long, long long>;
    std::map<Spot, std::vector<size_t>> spots;
    for (size_t i = 0; i < cls.size(); ++i) {
        if (cls[i].flagged)
            continue;
        spots[{cls[i].name.weight(), cls[i].name.sigma, cls[i].name.a}].push_back(i);
    }
    std::map<Spot, std::vector<size_t>> incoming;
    for (size_t i = 0; i < cls.size(); ++i)
        if (!cls[i].flagged && fires(cls[i]) && fire[i].target != SIZE_MAX &&
            !cls[fire[i].target].flagged) {
            const SSName& t = cls[fire[i].target].name;
            incoming[{t.weight(), t.sigma, t.a}].push_back(i);
        }

    for (auto& [spot, members] : spots) {
        (void)spot;
        // outgoing matrix
        std::vector<size_t> out_members;
        std::map<size_t, size_t> out_row;
        for (size_t i : members)
            if (fires(cls[i]) && fire[i].target != SIZE_MAX && !cls[fire[i].target].flagged) {
                size_t t = fire[i].target;
                if (!out_row.count(t)) {
                    out_row[t] = out_members.size();
                    out_members.push_back(t);
                }
            }
        Mat B(out_members.size(), members.size());
        for (size_t c = 0; c < members.size(); ++c) {
            size_t i = members[c];
            if (fires(cls[i]) && fire[i].target != SIZE_MAX && !cls[fire[i].target].flagged)
                B.at(out_row[fire[i].target], c) = fire[i].entry;
        }
        std::vector<Int> orders_out;
        for (size_t t : out_members)
            orders_out.push_back(cls[t].order);

        // incoming matrix
        std::vector<size_t> in_members;
        if (auto it = incoming.find(spot); it != incoming.end())
            in_members = it->second;
        std::map<size_t, size_t> col_of;
        for (size_t c = 0; c < members.size(); ++c)
            col_of[members[c]] = c;
        Mat A(members.size(), in_members.size());
        for (size_t c = 0; c < in_members.size(); ++c) {
            size_t i = in_members[c];
            A.at(col_of[fire[i].target], c) = fire[i].entry;
        }

        std::vector<Int> orders_mid;
        for (size_t i : members)
            orders_mid.push_back(cls[i].order);

        HomologyResult h = presented_homology(A, orders_mid, B, orders_out, true);
        for (size_t g = 0; g < h.gens.size(); ++g) {
            // extract the class name: generators stay single monomials here
            size_t support = SIZE_MAX;
            int min_nu = 0;
            for (size_t c = 0; c < h.gens[g].size(); ++c) {
                if (h.gens[g][c] == 0)
                    continue;
                Int v = h.gens[g][c];
                int nu = 0;
                while (v % 2 == 0) {
                    v /= 2;
                    ++nu;
                }
                if (support == SIZE_MAX || nu < min_nu) {
                    support = c;
                    min_nu = nu;
                }
            }
            assert(support != SIZE_MAX);
            SSClass nc;
            nc.name = cls[members[support]].name;
            nc.name.v0 += min_nu;
            nc.order = h.orders[g];
            q.classes.push_back(std::move(nc));
        }
    }

    for (const SSClass& c : cls)
        if (c.flagged)
            q.classes.push_back(c);
    q.sort_classes();
    return q;
}

SSPage run_to_einfty(const SSWindow& win, GenSequence u) {
    SSPage p = build_e1(win, std::move(u));
    while (p.active_k())
        p = turn_page(p);

    // Classes whose first differential lies past the truncation: the rule
    // family continues with d_{2^{nu+1}-1}(sigma^J) = v_nu sigma^{J+2^nu}
    // a^{2^{nu+1}-1} for nu = nu_2(J) > n_max. When the name carries some v_j
    // (j >= 1) that target is killed first, at page 2^{j+1}-1, by the source
    // obtained by trading v_j for v_nu, so the class survives as named. A bare
    // sigma^J power is its own target's only killer: in filtration 0 exactly
    // its double survives, in positive filtration it dies.
    std::vector<SSClass> kept;
    for (SSClass c : p.classes) {
        if (!c.flagged && c.name.sigma != 0 && nu2(c.name.sigma) > win.n_max &&
            c.name.v.empty()) {
            if (c.name.a == 0) {
                if (c.name.v0 == 0)
                    c.name.v0 = 1;
            } else {
                continue;
            }
        }
        kept.push_back(std::move(c));
    }
    p.classes = std::move(kept);
    p.final_page = true;
    p.sort_classes();
    return p;
}

bool differential_degree_check(const SSPage& p) {
    auto ak = p.active_k();
    if (!ak)
        return true;
    const int k = *ak;
    const long long rd = (1LL << (k + 1)) - 1;
    for (const SSClass& c : p.classes) {
        if (c.flagged || c.name.sigma == 0 || nu2(c.name.sigma) != k)
            continue;
        bool fits = false;
        SSName t = *target_name(c.name, k, p.win, &fits);
        ROdeg ds = p.degree_of(c.name);
        ROdeg dt = p.degree_of(t);
        if (dt != ds - ROdeg{1, 0})
            return false;
        if (t.a != c.name.a + rd)
            return false;
    }
    return true;
}

C2Cohomology group_cohomology_c2(const C2Module& m, long long s_max) {
    const size_t n = m.degrees.size();
    if (m.involution.rows != n || m.involution.cols != n)
        throw InputError("group_cohomology_c2: involution shape mismatch");
    Mat sq = m.involution * m.involution;
    if (sq != Mat::identity(n))
        throw InputError("group_cohomology_c2: matrix is not an involution");

    // block-decompose by degree; the involution must preserve degrees
    std::map<ROdeg, std::vector<size_t>> blocks;
    for (size_t i = 0; i < n; ++i)
        blocks[m.degrees[i]].push_back(i);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (m.involution.at(i, j) != 0 && m.degrees[i] != m.degrees[j])
                throw InputError("group_cohomology_c2: involution does not preserve degrees");

    C2Cohomology out;
    for (const auto& [deg, idx] : blocks) {
        const size_t b = idx.size();
        Mat gminus(b, b), gplus(b, b);
        for (size_t i = 0; i < b; ++i)
            for (size_t j = 0; j < b; ++j) {
                const Int& v = m.involution.at(idx[i], idx[j]);
                gminus.at(i, j) = (i == j ? Int(1) : Int(0)) - v;
                gplus.at(i, j) = (i == j ? Int(1) : Int(0)) + v;
            }
        std::vector<Int> free_orders(b, Int(0));
        Mat none(b, 0);
        for (long long s = 0; s <= s_max; ++s) {
            HomologyResult h;
            if (s == 0)
                h = presented_homology(none, free_orders, gminus, free_orders, true);
            else if (s % 2 == 1)
                h = presented_homology(gminus, free_orders, gplus, free_orders, true);
            else
                h = presented_homology(gplus, free_orders, gminus, free_orders, true);
            if (!h.orders.empty()) {
                std::vector<Int> orders = h.orders;
                std::sort(orders.begin(), orders.end());
                out[{deg, s}] = std::move(orders);
            }
        }
    }
    return out;
}

OracleCompareReport compare_page_with_c2_oracle(const SSPage& page) {
    OracleCompareReport rep;

    // coefficients: truncated polynomial part times sigma powers, extended
    // below the window so that every page spot has its oracle line
    std::vector<std::map<int, long long>> multisets;
    std::map<int, long long> cur;
    auto rec = [&](auto&& self, int k, long long budget) -> void {
        if (k > page.win.n_max) {
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
    rec(rec, 1, page.win.v_weight_max);

    C2Module mod;
    std::vector<std::pair<long long, size_t>> lines;  // (sigma exponent, multiset idx)
    for (long long q = page.win.sigma_lo - page.win.a_max; q <= page.win.sigma_hi; ++q)
        for (size_t mi = 0; mi < multisets.size(); ++mi) {
            long long w = 0;
            for (const auto& [k, e] : multisets[mi])
                w += ((1LL << k) - 1) * e;
            mod.degrees.push_back(ROdeg{w - q, w + q});
            lines.push_back({q, mi});
        }
    mod.involution = Mat(mod.degrees.size(), mod.degrees.size());
    for (size_t i = 0; i < lines.size(); ++i)
        mod.involution.at(i, i) = lines[i].first % 2 == 0 ? 1 : -1;

    C2Cohomology oracle = group_cohomology_c2(mod, page.win.a_max);

    // oracle classes placed at (line degree - (s,0), s)
    std::map<std::tuple<long long, long long, long long>, std::vector<Int>> want;
    for (const auto& [key, orders] : oracle) {
        ROdeg spot_deg = key.first - ROdeg{key.second, 0};
        auto& w = want[{spot_deg.one, spot_deg.alpha, key.second}];
        w.insert(w.end(), orders.begin(), orders.end());
    }
    for (auto& [spot, orders] : want)
        std::sort(orders.begin(), orders.end());

    std::map<std::tuple<long long, long long, long long>, std::vector<Int>> got;
    std::set<std::tuple<long long, long long, long long>> excluded;
    for (const SSClass& c : page.classes) {
        ROdeg d = page.degree_of(c.name);
        std::tuple<long long, long long, long long> spot{d.one, d.alpha, c.name.a};
        if (c.flagged)
            excluded.insert(spot);
        else
            got[spot].push_back(c.order);
    }
    for (auto& [spot, orders] : got)
        std::sort(orders.begin(), orders.end());

    // every unflagged page spot must agree with the oracle; oracle spots that
    // the page window cannot represent are skipped
    std::set<std::tuple<long long, long long, long long>> spots;
    for (const auto& [s, o] : got)
        spots.insert(s);
    for (const auto& [s, o] : want) {
        // spot -> (J, e): J = (alpha + one + e*0...) solved from the page name
        long long e = std::get<2>(s);
        // w - J = one, w + J - e = alpha => J = (alpha + e - one)/2
        long long twoJ = std::get<1>(s) + e - std::get<0>(s);
        if (twoJ % 2 != 0)
            continue;
        long long J = twoJ / 2;
        long long w = std::get<0>(s) + J;
        if (J < page.win.sigma_lo || J > page.win.sigma_hi || e > page.win.a_max || w < 0 ||
            w > page.win.v_weight_max)
            continue;
        spots.insert(s);
    }
    for (const auto& spot : spots) {
        if (excluded.count(spot))
            continue;
        ++rep.spots_compared;
        auto gi = got.find(spot);
        auto wi = want.find(spot);
        const std::vector<Int> empty;
        const std::vector<Int>& g = gi == got.end() ? empty : gi->second;
        const std::vector<Int>& w = wi == want.end() ? empty : wi->second;
        if (g != w) {
            rep.match = false;
            std::ostringstream os;
            os << "spot (" << std::get<0>(spot) << "," << std::get<1>(spot) << ") s="
               << std::get<2>(spot) << ": page has [";
            for (const Int& o : g)
                os << o.str() << " ";
            os << "], oracle has [";
            for (const Int& o : w)
                os << o.str() << " ";
            os << "]";
            rep.first_mismatch = os.str();
            return rep;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// comparison with the closed-form presentation

namespace {

// a page element: class index -> coefficient on the class generator
using PageElem = std::map<size_t, TwoLocal>;

struct PageCtx {
    const SSPage& page;
    std::map<SSName::Key, size_t> index;

    explicit PageCtx(const SSPage& p) : page(p) {
        for (size_t i = 0; i < p.classes.size(); ++i)
            index[p.classes[i].name.key()] = i;
    }

    // reduce a v-letter polynomial (from PresRing monomials with u meaning v)
    // to a page element; nullopt when it touches a flagged class or a locked
    // generator fails to divide the coefficient
    std::optional<PageElem> reduce(const Element& vpoly) {
        PageElem out;
        for (const Monomial& m : vpoly) {
            SSName n;
            n.sigma = m.sigma;
            n.a = m.aexp;
            TwoLocal c = m.coeff;
            for (const auto& [k, e] : m.uexp) {
                if (k == 0) {
                    for (long long i = 0; i < e; ++i)
                        c = c * TwoLocal(2);
                } else {
                    n.v[k] = e;
                }
            }
            auto it = index.find(n.key());
            if (it == index.end())
                continue;  // zero on the page
            const SSClass& cls = page.classes[it->second];
            if (cls.flagged)
                return std::nullopt;
            // generator is 2^{v0} * monomial
            for (long long i = 0; i < cls.name.v0; ++i) {
                if (c.num() % 2 != 0)
                    return std::nullopt;
                c = TwoLocal(c.num() / 2, c.den());
            }
            if (cls.order != 0) {
                Int m2 = c.num() % cls.order;
                if (m2 < 0)
                    m2 += cls.order;
                c = TwoLocal(m2, 1);
            }
            if (c.is_zero())
                continue;
            auto [jt, inserted] = out.emplace(it->second, c);
            if (!inserted) {
                jt->second = jt->second + c;
                if (cls.order != 0) {
                    Int m2 = jt->second.num() % cls.order;
                    if (m2 < 0)
                        m2 += cls.order;
                    jt->second = TwoLocal(m2, 1);
                }
                if (jt->second.is_zero())
                    out.erase(jt);
            }
        }
        return out;
    }
};

}  // namespace

CompareReport compare_einfty(const SSPage& page, const PresRing& ring, int product_samples,
                             unsigned seed) {
    if (!page.final_page)
        throw InputError("compare_einfty: page is not a final page");
    if (ring.kind() != RingKind::bp)
        throw InputError("compare_einfty: comparison targets the polynomial-style presentation");
    if (ring.n_max() != page.win.n_max || ring.sigma_lo() != page.win.sigma_lo ||
        ring.sigma_hi() != page.win.sigma_hi || ring.a_max() != page.win.a_max)
        throw WindowError("compare_einfty: ring and page windows differ");

    CompareReport rep;
    using Spot = std::tuple<long long, long long, long long>;

    std::set<Spot> excluded;
    std::map<Spot, std::vector<Int>> got;
    for (const SSClass& c : page.classes) {
        ROdeg d = page.degree_of(c.name);
        Spot spot{d.one, d.alpha, c.name.a};
        if (c.flagged)
            excluded.insert(spot);
        else
            got[spot].push_back(c.order);
    }
    rep.excluded_spots = static_cast<int>(excluded.size());

    std::vector<Monomial> basis = ring.basis(page.win.v_weight_max);
    std::map<Spot, std::vector<Int>> want;
    for (const Monomial& m : basis) {
        ROdeg d = ring.degree_of(m);
        Spot spot{d.one, d.alpha, m.aexp};
        want[spot].push_back(m.aexp == 0 ? Int(0) : Int(2));
    }

    std::set<Spot> spots;
    for (const auto& [s, o] : got)
        spots.insert(s);
    for (const auto& [s, o] : want)
        spots.insert(s);
    for (const Spot& spot : spots) {
        if (excluded.count(spot))
            continue;
        ++rep.spots_compared;
        auto gi = got.find(spot);
        auto wi = want.find(spot);
        std::vector<Int> g = gi == got.end() ? std::vector<Int>{} : gi->second;
        std::vector<Int> w = wi == want.end() ? std::vector<Int>{} : wi->second;
        std::sort(g.begin(), g.end());
        std::sort(w.begin(), w.end());
        rep.classes_compared += static_cast<int>(g.size());
        if (g != w) {
            rep.match = false;
            std::ostringstream os;
            os << "bidegree (" << std::get<0>(spot) << "," << std::get<1>(spot) << ") s="
               << std::get<2>(spot) << ": page groups [";
            for (const Int& o : g)
                os << (o == 0 ? std::string("Z") : "Z/" + o.str()) << " ";
            os << "] vs presentation [";
            for (const Int& o : w)
                os << (o == 0 ? std::string("Z") : "Z/" + o.str()) << " ";
            os << "]";
            rep.first_mismatch = os.str();
            return rep;
        }
    }

    // sampled multiplicative agreement: ring products of basis monomials vs
    // page products of their images
    PageCtx ctx(page);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, basis.empty() ? 0 : basis.size() - 1);
    int attempts = 0;
    while (rep.products_checked < product_samples && attempts < product_samples * 50 &&
           !basis.empty()) {
        ++attempts;
        const Monomial& x = basis[pick(rng)];
        const Monomial& y = basis[pick(rng)];
        Element ring_prod;
        try {
            ring_prod = ring.mul({x}, {y});
        } catch (const WindowError&) {
            continue;  // product leaves the window: not samplable
        }
        Element xv = substitute({x}, ring.gens());
        Element yv = substitute({y}, ring.gens());
        // plain polynomial product in the v letters (no relations)
        std::vector<Monomial> prod;
        for (const Monomial& a : xv)
            for (const Monomial& b : yv) {
                Monomial m;
                m.coeff = a.coeff * b.coeff;
                m.uexp = a.uexp;
                for (const auto& [kk, ee] : b.uexp)
                    m.uexp[kk] += ee;
                m.sigma = a.sigma + b.sigma;
                m.aexp = a.aexp + b.aexp;
                prod.push_back(std::move(m));
            }
        Element rhs_v = substitute(ring_prod, ring.gens());
        auto lhs = ctx.reduce(prod);
        auto rhs = ctx.reduce(rhs_v);
        if (!lhs || !rhs)
            continue;  // touches a flagged spot: excluded from sampling
        ++rep.products_checked;
        if (*lhs != *rhs) {
            ++rep.product_mismatches;
            if (rep.match) {
                rep.match = false;
                rep.first_mismatch = "product " + ring.format(Element{x}) + " * " +
                                     ring.format(Element{y}) +
                                     " disagrees between page and presentation";
            }
        }
    }
    return rep;
}

}  // namespace ro2
