#include <doctest.h>

#include "ro2alg/borel.hpp"

using namespace ro2;

namespace {

SSWindow win0() { return SSWindow{0, -12, 12, 8, 0}; }
SSWindow win1() { return SSWindow{1, -16, 16, 8, 6}; }

int nu2ll(long long j) {
    int k = 0;
    while (j % 2 == 0) {
        j /= 2;
        ++k;
    }
    return k;
}

}  // namespace

TEST_CASE("build_e1: free basis and seeded rules") {
    SSPage p = build_e1(win0());
    // basis sigma^J a^e over the window
    CHECK(p.classes.size() == 25u * 9u);
    for (const SSClass& c : p.classes) {
        CHECK(c.order == 0);
        CHECK(!c.flagged);
    }
    REQUIRE(p.rules.size() == 1);
    CHECK(p.rules[0].v_form == "d_1(s^-1) = v0*a^1");
    CHECK(p.rules[0].u_form.find("2*a^1") != std::string::npos);

    // empty window: only the unit class, nothing fires
    SSPage tiny = build_e1(SSWindow{0, 0, 0, 0, 0});
    REQUIRE(tiny.classes.size() == 1);
    CHECK(tiny.classes[0].name.str() == "1");
    SSPage done = run_to_einfty(SSWindow{0, 0, 0, 0, 0});
    CHECK(done.classes.size() == 1);
}

TEST_CASE("build_e1: substituted rule display") {
    GenSequence u = GenSequence::identity(1);
    u.set_expansion(1, {VTerm{TwoLocal(3), {{1, 1}}}});
    SSPage p = build_e1(win1(), u);
    REQUIRE(p.rules.size() == 2);
    CHECK(p.rules[1].v_form == "d_3(s^-2) = v1*a^3");
    CHECK(p.rules[1].u_form.find("1/3*u1*a^3") != std::string::npos);
}

TEST_CASE("page after d_1 equals the group cohomology oracle") {
    SSPage p1 = turn_page(build_e1(win0()));
    CHECK(p1.r == 2);
    auto rep = compare_page_with_c2_oracle(p1);
    INFO(rep.first_mismatch);
    CHECK(rep.match);
    CHECK(rep.spots_compared > 50);

    // also with polynomial content in the coefficients
    SSPage q1 = turn_page(build_e1(win1()));
    auto rep1 = compare_page_with_c2_oracle(q1);
    INFO(rep1.first_mismatch);
    CHECK(rep1.match);
}

TEST_CASE("page after d_1: surviving a-towers are 2-torsion") {
    SSPage p1 = turn_page(build_e1(win0()));
    // the infinite cycle 1 stays free
    SSName one;
    const SSClass* c1 = p1.find(one);
    REQUIRE(c1);
    CHECK(c1->order == 0);
    // a^e towers are Z/2
    for (long long e = 1; e <= 7; ++e) {
        SSName n;
        n.a = e;
        const SSClass* c = p1.find(n);
        REQUIRE(c);
        CHECK(c->order == 2);
    }
    // odd sigma powers die
    SSName odd;
    odd.sigma = 3;
    CHECK(p1.find(odd) == nullptr);
    // sigma^{2l} survive free at filtration 0
    SSName ev;
    ev.sigma = 4;
    const SSClass* ce = p1.find(ev);
    REQUIRE(ce);
    CHECK(ce->order == 0);
}

TEST_CASE("turn_page with no active differential is the identity") {
    SSPage p = turn_page(build_e1(win0()));  // r = 2, n_max = 0: nothing active
    SSPage q = turn_page(p);
    CHECK(q.classes.size() == p.classes.size());
    CHECK(q.r == p.r);
}

TEST_CASE("d_r o d_r vanishes structurally on every page") {
    SSPage p = build_e1(win1());
    while (auto ak = p.active_k()) {
        int k = *ak;
        for (const SSClass& c : p.classes) {
            if (c.flagged || c.name.sigma == 0 || nu2ll(c.name.sigma) != k)
                continue;
            // the target of a firing class never fires on the same page
            long long tj = c.name.sigma + (1LL << k);
            CHECK((tj == 0 || nu2ll(tj) > k));
        }
        CHECK(differential_degree_check(p));
        p = turn_page(p);
    }
}

TEST_CASE("full run for n_max = 1: the closed-form survivors") {
    SSPage f = run_to_einfty(win1());
    CHECK(f.final_page);

    // u_1 sigma^{4l} towers survive freely at filtration 0
    for (long long l : {-2, -1, 0, 1, 2}) {
        SSName n;
        n.v[1] = 1;
        n.sigma = 4 * l;
        const SSClass* c = f.find(n);
        REQUIRE(c);
        CHECK(c->order == 0);
        CHECK(!c->flagged);
        CHECK(c->name.v0 == 0);
    }
    // u_1 sigma^{4l} a^{1,2} survive as Z/2, a^3 kills
    for (long long e = 1; e <= 3; ++e) {
        SSName n;
        n.v[1] = 1;
        n.sigma = 4;
        n.a = e;
        const SSClass* c = f.find(n);
        if (e <= 2) {
            REQUIRE(c);
            CHECK(c->order == 2);
        } else {
            CHECK(c == nullptr);
        }
    }
    // sigma^{4l+2} locks to twice the generator (the u_0 classes)
    SSName lockname;
    lockname.sigma = 6;
    const SSClass* lock = f.find(lockname);
    REQUIRE(lock);
    CHECK(lock->order == 0);
    CHECK(lock->name.v0 == 1);
    // pure sigma^{4l} powers lock as well (their first differential is past
    // the truncation and only its double survives)
    SSName l4;
    l4.sigma = 4;
    const SSClass* c4 = f.find(l4);
    REQUIRE(c4);
    CHECK(c4->name.v0 == 1);
}

TEST_CASE("einfty page matches the closed-form presentation (n_max = 0, 1)") {
    {
        SSWindow w = win0();
        SSPage f = run_to_einfty(w);
        PresRing ring = PresRing::bp(0, w.sigma_lo, w.sigma_hi, w.a_max);
        auto rep = compare_einfty(f, ring, 64);
        INFO(rep.first_mismatch);
        CHECK(rep.match);
        CHECK(rep.spots_compared > 10);
        CHECK(rep.products_checked > 0);
    }
    {
        SSWindow w = win1();
        SSPage f = run_to_einfty(w);
        PresRing ring = PresRing::bp(1, w.sigma_lo, w.sigma_hi, w.a_max);
        auto rep = compare_einfty(f, ring, 64);
        INFO(rep.first_mismatch);
        CHECK(rep.match);
    }
}

TEST_CASE("negative control: a corrupted presentation is detected") {
    SSWindow w = win1();
    SSPage f = run_to_einfty(w);
    // weaken u_1 a^3 = 0 to u_1 a^2 = 0: the presentation gains classes
    RingOptions opts;
    opts.a_powers = {1, 2};
    PresRing bad = PresRing::bp(1, w.sigma_lo, w.sigma_hi, w.a_max, {}, opts);
    auto rep = compare_einfty(f, bad, 16);
    CHECK(!rep.match);
    CHECK(!rep.first_mismatch.empty());
}

TEST_CASE("generator independence at window scale") {
    SSWindow w = win1();
    GenSequence u = GenSequence::identity(1);
    u.set_expansion(1, {VTerm{TwoLocal(3), {{1, 1}}}});

    SSPage fv = run_to_einfty(w);
    SSPage fu = run_to_einfty(w, u);
    // identical per-bidegree groups
    REQUIRE(fv.classes.size() == fu.classes.size());
    for (size_t i = 0; i < fv.classes.size(); ++i) {
        CHECK(fv.classes[i].name == fu.classes[i].name);
        CHECK(fv.classes[i].order == fu.classes[i].order);
    }
    // and the u presentation matches the page computed with u
    PresRing ring_u = PresRing::bp(1, w.sigma_lo, w.sigma_hi, w.a_max, u);
    auto rep = compare_einfty(fu, ring_u, 64);
    INFO(rep.first_mismatch);
    CHECK(rep.match);
}

TEST_CASE("group cohomology oracle: classical values") {
    // trivial action on Z
    C2Module triv;
    triv.degrees = {ROdeg{0, 0}};
    triv.involution = Mat::identity(1);
    auto h = group_cohomology_c2(triv, 5);
    CHECK(h.at({ROdeg{0, 0}, 0}) == std::vector<Int>{0});
    CHECK(h.find({ROdeg{0, 0}, 1}) == h.end());
    CHECK(h.at({ROdeg{0, 0}, 2}) == std::vector<Int>{2});
    CHECK(h.find({ROdeg{0, 0}, 3}) == h.end());
    CHECK(h.at({ROdeg{0, 0}, 4}) == std::vector<Int>{2});

    // sign action on Z
    C2Module sign;
    sign.degrees = {ROdeg{0, 0}};
    sign.involution = Mat::identity(1);
    sign.involution.at(0, 0) = -1;
    auto hs = group_cohomology_c2(sign, 4);
    CHECK(hs.find({ROdeg{0, 0}, 0}) == hs.end());
    CHECK(hs.at({ROdeg{0, 0}, 1}) == std::vector<Int>{2});
    CHECK(hs.find({ROdeg{0, 0}, 2}) == hs.end());
    CHECK(hs.at({ROdeg{0, 0}, 3}) == std::vector<Int>{2});

    // zero module
    C2Module zero;
    zero.involution = Mat(0, 0);
    CHECK(group_cohomology_c2(zero, 3).empty());

    // non-involutive matrix rejected
    C2Module bad;
    bad.degrees = {ROdeg{0, 0}};
    bad.involution = Mat::identity(1);
    bad.involution.at(0, 0) = 2;
    CHECK_THROWS_AS(group_cohomology_c2(bad, 1), InputError);
}

TEST_CASE("window validation") {
    CHECK_THROWS_AS(build_e1(SSWindow{-1, 0, 0, 0, 0}), InputError);
    CHECK_THROWS_AS(build_e1(SSWindow{0, 4, -4, 0, 0}), InputError);
}

TEST_CASE("page json dump shape") {
    SSPage f = run_to_einfty(win0());
    auto j = f.to_json();
    CHECK(j.contains("classes"));
    CHECK(j.contains("edge_flagged"));
    CHECK(j["r"].get<long long>() == 2);
    REQUIRE(!j["classes"].empty());
    const auto& c = j["classes"][0];
    CHECK(c.contains("s"));
    CHECK(c.contains("deg"));
    CHECK(c.contains("name"));
    CHECK(c.contains("group"));
}
