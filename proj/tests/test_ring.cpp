#include <doctest.h>

#include <random>

#include "ro2alg/presring.hpp"

using namespace ro2;

namespace {

PresRing bp2() { return PresRing::bp(2, -64, 64, 20); }
PresRing en_ring(int n) {
    long long span = 1LL << (n + 4);
    return PresRing::en(n, -span, span, (1LL << (n + 1)) + 4);
}

}  // namespace

TEST_CASE("degrees of the generating classes") {
    PresRing r = bp2();
    // a has bidegree -alpha
    CHECK(r.degree_of(r.parse("a").front()) == ROdeg{0, -1});
    // 1 sits in degree (0,0)
    Monomial one;
    CHECK(r.degree_of(one) == ROdeg{0, 0});
    // u_k sigma^j: (2^k - 1)(1 + alpha) + j(alpha - 1)
    CHECK(r.degree_of(r.parse("u1*s^4").front()) == ROdeg{1 - 4, 1 + 4});
    // y(2) = u_2^3 sigma^-8 has degree lambda(2) + alpha = 17 + alpha
    PresRing e2 = en_ring(2);
    CHECK(e2.degree_of(e2.parse("u2^3*s^-8").front()) == ROdeg{17, 1});
}

TEST_CASE("degree closed form for y(n) up to n = 8") {
    for (int n = 1; n <= 8; ++n) {
        long long span = (1LL << (n + 1)) * ((1LL << (n - 1)) - 1) + (1LL << (n + 1));
        PresRing r = PresRing::en(n, -span, span, 4);
        Monomial y;
        y.uexp[n] = (1LL << n) - 1;
        y.sigma = -(1LL << (n + 1)) * ((1LL << (n - 1)) - 1);
        long long lambda = (1LL << (2 * n + 1)) - (1LL << (n + 2)) + 1;
        CHECK(r.degree_of(y) == ROdeg{lambda, 1});
    }
}

TEST_CASE("heterogeneous sums are rejected by degree_of") {
    PresRing r = bp2();
    Element e = r.parse("u1*s^4 + a");
    CHECK_THROWS_AS(r.degree_of(e), HeterogeneousDegreeError);
    CHECK(!r.degree_of(r.zero()).has_value());
}

TEST_CASE("normal form: the relation family") {
    PresRing r = bp2();
    // u_0 with no sigma becomes the scalar 2
    CHECK(r.format(r.parse("u0")) == "2");
    // u_1 sigma^4 a^3 = 0
    CHECK(r.is_zero(r.parse("u1*s^4*a^3")));
    // pooled product: u_2 s^8 * u_1 s^4 collapses to one monomial
    Element p = r.mul(r.parse("u2*s^8"), r.parse("u1*s^4"));
    REQUIRE(p.size() == 1);
    CHECK(r.format(p) == "u1*u2*s^12");
    // 2a = 0: both through the scalar and through u_0 a
    CHECK(r.is_zero(r.parse("2*a")));
    CHECK(r.is_zero(r.parse("u0*a")));
    // u_0 s^2 is retained (sigma not divisible enough to re-home)
    CHECK(r.format(r.parse("u0*s^2")) == "u0*s^2");
    CHECK(r.is_zero(r.parse("u0*s^2*a")));
    // u_0^2 re-homes one step: 2 * u0 s^2
    CHECK(r.format(r.parse("u0^2*s^2")) == "2*u0*s^2");
    CHECK(r.format(r.parse("u0^2")) == "4");
}

TEST_CASE("normal form errors") {
    PresRing r = bp2();
    // sigma with no carrier
    CHECK_THROWS_AS(r.parse("s^2"), DivisibilityError);
    // sigma exponent not divisible by 2^{k+1}
    CHECK_THROWS_AS(r.parse("u1*s^2"), DivisibilityError);
    // window overflow
    CHECK_THROWS_AS(r.parse("u1*s^68"), WindowError);
    CHECK_THROWS_AS(r.parse("a^40"), WindowError);
    CHECK_THROWS_AS(r.parse("u3*s^16"), WindowError);  // index past n_max
}

TEST_CASE("ring operations") {
    PresRing r = bp2();
    Element x = r.parse("u1*s^4 + u2*s^8");
    CHECK(r.equals(r.mul(r.one(), x), x));
    // commutativity on a sample
    CHECK(r.equals(r.mul(x, r.parse("a")), r.mul(r.parse("a"), x)));
    // associativity sample
    Element y = r.parse("u1*s^-4"), z = r.parse("a^2");
    CHECK(r.equals(r.mul(r.mul(x, y), z), r.mul(x, r.mul(y, z))));
    // subtraction
    CHECK(r.is_zero(r.sub(x, x)));
}

TEST_CASE("torsion collection: coefficients mod 2 in the presence of a") {
    PresRing r = bp2();
    Element s = r.add(r.parse("u1*s^4*a"), r.parse("u1*s^4*a"));
    CHECK(r.is_zero(s));
    Element t = r.add(r.parse("3*u1*s^4*a"), r.parse("0"));
    CHECK(r.format(t) == "u1*s^4*a");
}

TEST_CASE("periodic style: inverses and global nilpotence") {
    PresRing r = en_ring(2);
    // y(2) y(2)^{-1} = 1
    Element prod = r.mul(r.parse("u2^3*s^-8"), r.parse("u2^-3*s^8"));
    CHECK(r.equals(prod, r.one()));
    // a^7 = 0 once u_2 is invertible, with or without u_2 in the operand
    CHECK(r.is_zero(r.mul(r.parse("a^2"), r.parse("a^5"))));
    CHECK(r.is_zero(r.parse("u2*s^8*a^7")));
    CHECK(!r.is_zero(r.parse("a^6")));
    // standalone sigma powers exist at multiples of 2^{n+1}
    CHECK(!r.is_zero(r.parse("s^8")));
    CHECK_THROWS_AS(r.parse("s^4"), DivisibilityError);
    // u_0 s^8 re-homes, u_0 s^2 retained
    CHECK(r.format(r.parse("u0*s^8")) == "2*s^8");
    CHECK(r.format(r.parse("u0*s^2")) == "u0*s^2");
}

TEST_CASE("localization at a") {
    // periodic style: a nilpotent, ring collapses
    auto loc = en_ring(1).localize_a();
    CHECK(loc.collapsed);
    CHECK(loc.ring.is_trivial());
    CHECK(loc.ring.is_zero(loc.ring.one()));
    // polynomial style: a is not nilpotent; u_k and 2 die instead
    auto bp = bp2().localize_a();
    CHECK(!bp.collapsed);
    CHECK(bp.ring.is_zero(bp.ring.parse("u1*s^4")));
    CHECK(bp.ring.is_zero(bp.ring.parse("2")));
    CHECK(!bp.ring.is_zero(bp.ring.parse("a^3")));
    CHECK(!bp.ring.is_zero(bp.ring.parse("a^-3")));
    // dropping the annihilation family keeps a alive after localization
    RingOptions opts;
    opts.nilpotency = false;
    PresRing weak = PresRing::en(1, -32, 32, 8, {}, opts);
    auto wloc = weak.localize_a();
    CHECK(!wloc.collapsed);
    CHECK(!wloc.ring.is_zero(wloc.ring.parse("a^5")));
}

TEST_CASE("localization at u_n") {
    auto loc = bp2().localize_u(2);
    CHECK(!loc.collapsed);
    CHECK(loc.ring.kind() == RingKind::en);
    CHECK(loc.ring.n() == 2);
    CHECK(loc.ring.equals(loc.ring.mul(loc.ring.parse("u2"), loc.ring.parse("u2^-1")),
                          loc.ring.one()));
    // localizing at the already inverted generator is a no-op
    auto again = loc.ring.localize_u(2);
    CHECK(!again.collapsed);
    CHECK_THROWS_AS(loc.ring.localize_u(1), InputError);
}

TEST_CASE("ideal comparison") {
    // identical families agree
    IdealSpec sv = IdealSpec::standard(2);
    auto rep = ideal_equal(sv, sv, 2, -32, 32, 8);
    CHECK(rep.equal);
    CHECK(rep.generators_checked > 0);

    // u_1 = 3 v_1, u_2 = v_2 + v_1^3
    GenSequence u = GenSequence::identity(2);
    u.set_expansion(1, {VTerm{TwoLocal(3), {{1, 1}}}});
    u.set_expansion(2, {VTerm{TwoLocal(1), {{2, 1}}}, VTerm{TwoLocal(1), {{1, 3}}}});
    IdealSpec su{u, {}};
    CHECK(ideal_equal(su, sv, 2, -32, 32, 8).equal);
    CHECK(ideal_equal(sv, su, 2, -32, 32, 8).equal);

    // weakening u_1 a^3 = 0 to u_1 a^2 = 0 breaks the comparison
    IdealSpec weak = IdealSpec::standard(2);
    weak.a_powers = {1, 2, 7};
    auto bad = ideal_equal(sv, weak, 2, -32, 32, 8);
    CHECK(!bad.equal);
    CHECK(!bad.first_failure.empty());
}

TEST_CASE("confluence: random products reduce identically in any order") {
    PresRing r = bp2();
    std::mt19937 rng(2026);
    std::uniform_int_distribution<int> kd(0, 2), ed(0, 3), ad(0, 4), cd(-5, 5);
    std::uniform_int_distribution<int> ld(-2, 2);
    int done = 0;
    while (done < 10000) {
        // build 3 random admissible raw factors
        std::vector<Monomial> factors;
        for (int f = 0; f < 3; ++f) {
            Monomial m;
            int c = cd(rng);
            m.coeff = TwoLocal(c == 0 ? 1 : c);
            int k = kd(rng);
            int e = ed(rng);
            if (e > 0) {
                m.uexp[k] = e;
                m.sigma = static_cast<long long>(ld(rng)) * (1LL << (k + 1));
            }
            m.aexp = ad(rng);
            factors.push_back(std::move(m));
        }
        try {
            // two association orders plus a permutation
            Element p1 = r.mul(r.mul(r.normal_form(factors[0]), r.normal_form(factors[1])),
                               r.normal_form(factors[2]));
            Element p2 = r.mul(r.normal_form(factors[2]),
                               r.mul(r.normal_form(factors[1]), r.normal_form(factors[0])));
            // single-shot pooled reduction of the full product
            Monomial pooled;
            pooled.coeff = factors[0].coeff * factors[1].coeff * factors[2].coeff;
            for (const auto& f : factors) {
                for (const auto& [k, e] : f.uexp)
                    pooled.uexp[k] += e;
                pooled.sigma += f.sigma;
                pooled.aexp += f.aexp;
            }
            Element p3 = r.normal_form(pooled);
            CHECK(p1 == p2);
            CHECK(p1 == p3);
            ++done;
        } catch (const WindowError&) {
            // products can leave the window; those samples do not count
        }
    }
}

TEST_CASE("homogeneity: normal form preserves the bidegree") {
    PresRing r = bp2();
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> kd(0, 2), ed(1, 3), ad(0, 3), ld(-2, 2);
    for (int i = 0; i < 2000; ++i) {
        Monomial m;
        int k = kd(rng);
        m.uexp[k] = ed(rng);
        m.sigma = static_cast<long long>(ld(rng)) * (1LL << (k + 1));
        m.aexp = ad(rng);
        m.coeff = TwoLocal(3);
        ROdeg before = r.degree_of(m);
        Element nf = r.normal_form(m);
        for (const Monomial& t : nf)
            CHECK(r.degree_of(t) == before);
    }
}

TEST_CASE("nilpotency law for the least index") {
    PresRing r = PresRing::bp(2, -256, 256, 40);
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> ed(1, 2), ld(-2, 2), hd(0, 2);
    for (int n = 1; n <= 2; ++n) {
        for (int i = 0; i < 200; ++i) {
            Monomial m;
            m.uexp[n] = ed(rng);
            int high = hd(rng);
            if (high > 0 && n + 1 <= 2)
                m.uexp[n + 1] = high;
            m.sigma = static_cast<long long>(ld(rng)) * (1LL << (n + 1));
            Element x = r.normal_form(m);
            Monomial apow;
            apow.aexp = (1LL << (n + 1)) - 1;
            CHECK(r.is_zero(r.mul(x, {apow})));
        }
    }
}

TEST_CASE("element json round trip") {
    PresRing r = bp2();
    Element e = r.parse("3/5*u1*u2*s^12 + u0*s^2 + 7*a^2");
    auto j = r.element_to_json(e);
    Element back = r.element_from_json(j);
    CHECK(r.equals(e, back));
}

TEST_CASE("ring json round trip") {
    GenSequence u = GenSequence::identity(2);
    u.set_expansion(1, {VTerm{TwoLocal(3), {{1, 1}}}});
    PresRing r = PresRing::bp(2, -32, 32, 8, u);
    PresRing back = PresRing::from_json(r.to_json());
    CHECK(back.kind() == RingKind::bp);
    CHECK(back.n_max() == 2);
    CHECK(back.sigma_lo() == -32);
    CHECK(back.gens().leading_unit(1) == TwoLocal(3));
    CHECK(back.format(back.parse("u1*s^4*a^3")) == "0");
}
