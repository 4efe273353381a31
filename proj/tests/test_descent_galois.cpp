#include <doctest.h>

#include "ro2alg/descent/galois.hpp"

using namespace ro2::descent;
using ro2::Int;
using ro2::InputError;

namespace {

RingPtr f4() { return Ring::polyquot(2, {1, 1, 1}); }

RingMap unit_map(const RingPtr& a, const RingPtr& b, const Elem& one_img) {
    RingMap f;
    f.src = a;
    f.dst = b;
    f.images = {one_img};
    f.check();
    return f;
}

GroupAction frobenius_action(const RingPtr& r) {
    GroupAction act;
    act.group = Group::cyclic(2);
    act.ring = r;
    RingMap frob;
    frob.src = r;
    frob.dst = r;
    frob.images = {r->one, r->add(r->unit(1), r->one)};
    act.maps = {RingMap::identity(r), frob};
    act.check();
    return act;
}

/// A -> A x A with the factor swap (or cyclic rotation for |G| = k).
struct TrivialExt {
    RingPtr A, B;
    RingMap f;
    GroupAction act;
};

TrivialExt trivial_ext(const RingPtr& a, int k) {
    TrivialExt e;
    e.A = a;
    std::vector<RingPtr> factors(k, a);
    e.B = Ring::product(factors);
    e.f.src = a;
    e.f.dst = e.B;
    const size_t t = a->ngens();
    for (size_t i = 0; i < t; ++i) {
        Elem img = e.B->zero();
        for (int c = 0; c < k; ++c)
            img[c * t + i] = 1;
        e.f.images.push_back(e.B->reduce(std::move(img)));
    }
    e.f.check();
    e.act.group = Group::cyclic(k);
    e.act.ring = e.B;
    for (int g = 0; g < k; ++g) {
        RingMap m;
        m.src = e.B;
        m.dst = e.B;
        for (int c = 0; c < k; ++c)
            for (size_t i = 0; i < t; ++i) {
                Elem img = e.B->zero();
                img[((c + g) % k) * t + i] = 1;
                m.images.push_back(e.B->reduce(std::move(img)));
            }
        m.check();
        e.act.maps.push_back(std::move(m));
    }
    e.act.check();
    return e;
}

GaloisContext f2_f4_context() {
    RingPtr a = Ring::zmod(2);
    RingPtr b = f4();
    return GaloisContext(unit_map(a, b, b->one), frobenius_action(b));
}

}  // namespace

TEST_CASE("F2 -> F4 with Frobenius is Galois") {
    GaloisContext ctx = f2_f4_context();
    CHECK(ctx.report().fixed_ring_iso);
    CHECK(ctx.report().h_iso);
    CHECK(ctx.report().fixed_ring_size == 2);
    // witness: h composed with its inverse is the identity on coordinates
    const auto& rep = ctx.report();
    ro2::Mat prod = rep.h_matrix * rep.h_inverse;
    const size_t n = prod.rows;
    std::vector<Int> orders;
    for (int c = 0; c < 2; ++c)
        for (const Int& d : ctx.B()->orders)
            orders.push_back(d);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            Int v = prod.at(i, j) - (i == j ? 1 : 0);
            CHECK(v % orders[i] == 0);
        }
    // exhaustive injectivity of h on all 16 tensor classes
    auto elems = ctx.tensor().result->elements();
    CHECK(elems.size() == 16);
    std::vector<std::vector<Int>> images;
    for (const Elem& e : elems) {
        std::vector<Int> img;
        for (int g = 0; g < 2; ++g) {
            Elem c = ctx.pi(g).apply(e);
            img.insert(img.end(), c.begin(), c.end());
        }
        CHECK(std::find(images.begin(), images.end(), img) == images.end());
        images.push_back(img);
    }
}

TEST_CASE("F3 -> F9 with Frobenius is Galois") {
    RingPtr f9 = Ring::polyquot(3, {1, 0, 1});  // x^2 + 1 irreducible over F3
    RingPtr f3 = Ring::zmod(3);
    GroupAction act;
    act.group = Group::cyclic(2);
    act.ring = f9;
    RingMap frob;
    frob.src = f9;
    frob.dst = f9;
    // x -> x^3 = -x
    frob.images = {f9->one, f9->neg(f9->unit(1))};
    frob.check();
    act.maps = {RingMap::identity(f9), frob};
    act.check();
    GaloisReport rep = is_galois(unit_map(f3, f9, f9->one), act);
    CHECK(rep.galois());
}

TEST_CASE("split extensions A -> prod_G A are Galois") {
    for (int k : {2, 3}) {
        TrivialExt z4 = trivial_ext(Ring::zmod(4), k);
        CHECK(is_galois(z4.f, z4.act).galois());
        TrivialExt dual = trivial_ext(Ring::polyquot(2, {0, 0, 1}), k);
        CHECK(is_galois(dual.f, dual.act).galois());
    }
}

TEST_CASE("non-example: F2 -> F2[x]/(x^2) with trivial action") {
    RingPtr dual = Ring::polyquot(2, {0, 0, 1});
    RingPtr f2 = Ring::zmod(2);
    GroupAction act;
    act.group = Group::cyclic(2);
    act.ring = dual;
    act.maps = {RingMap::identity(dual), RingMap::identity(dual)};
    act.check();
    GaloisReport rep = is_galois(unit_map(f2, dual, dual->one), act);
    CHECK(!rep.galois());
    CHECK(!rep.h_iso);           // nilpotents collapse under h
    CHECK(!rep.fixed_ring_iso);  // the fixed ring is all of B
    CHECK(!rep.diagnostics.empty());
}

TEST_CASE("canonical datum satisfies the cocycle condition") {
    GaloisContext ctx = f2_f4_context();
    ModulePtr m = Module::free_module(ctx.A(), 2);
    DescentDatum d = canonical_datum(ctx, m);
    CHECK(check_cocycle(ctx, d));

    // identity datum on N = B with the trivial twist
    ModulePtr nb = Module::free_module(ctx.A(), 1);
    DescentDatum d1 = canonical_datum(ctx, nb);
    CHECK(check_cocycle(ctx, d1));
}

TEST_CASE("a broken datum fails the cocycle condition") {
    GaloisContext ctx = f2_f4_context();
    ModulePtr m = Module::free_module(ctx.A(), 2);
    DescentDatum d = canonical_datum(ctx, m);
    // compose phi with multiplication by a unit of T: always a T-linear
    // automorphism of the target, a descent datum only for cocycle units
    const RingPtr& T = ctx.tensor().result;
    auto telems = T->elements();
    auto is_unit = [&](const Elem& u) {
        for (const Elem& v : telems)
            if (T->mul(u, v) == T->one)
                return true;
        return false;
    };
    bool broke = false;
    int units = 0;
    for (const Elem& u : telems) {
        if (!is_unit(u))
            continue;
        ++units;
        DescentDatum twisted = d;
        for (auto& img : twisted.phi.images)
            img = d.side2.result->scalar(u, img);
        twisted.phi.check_linear();
        REQUIRE(twisted.phi.is_bijective());
        if (!check_cocycle(ctx, twisted))
            broke = true;
    }
    CHECK(units == 9);  // (F4 x F4)^* has 3 * 3 units
    CHECK(broke);
}

TEST_CASE("datum and semilinear action translate back and forth") {
    GaloisContext ctx = f2_f4_context();
    ModulePtr m = Module::free_module(ctx.A(), 2);
    DescentDatum d = canonical_datum(ctx, m);
    SemilinearModule s = datum_to_action(ctx, d);
    // the canonical datum gives id (x) g
    SemilinearModule se = extend(ctx, m);
    for (int g = 0; g < 2; ++g)
        CHECK(s.sigma[g] == se.sigma[g]);
    // round trip: action -> datum -> action
    DescentDatum d2 = action_to_datum(ctx, s);
    CHECK(check_cocycle(ctx, d2));
    SemilinearModule s2 = datum_to_action(ctx, d2);
    for (int g = 0; g < 2; ++g)
        CHECK(s2.sigma[g] == s.sigma[g]);
    // and datum -> action -> datum returns the same phi
    for (size_t i = 0; i < d.phi.images.size(); ++i)
        CHECK(d2.phi.images[i] == d.phi.images[i]);
}

TEST_CASE("trivial group: every datum is the identity action") {
    TrivialExt e = trivial_ext(Ring::zmod(2), 1);
    GaloisContext ctx(e.f, e.act);
    CHECK(ctx.galois());
    ModulePtr m = Module::free_module(ctx.A(), 2);
    SemilinearModule s = extend(ctx, m);
    REQUIRE(s.sigma.size() == 1);
    CHECK(s.sigma[0] == ro2::Mat::identity(s.module->ngens()));
}

TEST_CASE("extend and descend round trips") {
    GaloisContext ctx = f2_f4_context();
    // M = A: N = B with the tautological action, descending back to A
    ModulePtr a1 = Module::free_module(ctx.A(), 1);
    CHECK(unit_is_iso(ctx, a1));
    // M = F2^2
    ModulePtr a2 = Module::free_module(ctx.A(), 2);
    CHECK(unit_is_iso(ctx, a2));
    SemilinearModule s2 = extend(ctx, a2);
    CHECK(counit_is_iso(ctx, s2));
}

TEST_CASE("twisted Frobenius action on F4 descends to rank 1") {
    GaloisContext ctx = f2_f4_context();
    // N = F4 as a module over itself with sigma = (multiplication by x) o frob:
    // still semilinear of order 2 when x * frob(x) = x * x^2 = 1... that is
    // norm 1, Hilbert 90 in action
    ModulePtr nb = Module::restriction(ctx.B(), RingMap::identity(ctx.B()));
    const RingPtr& B = ctx.B();
    Elem x = B->unit(1);
    // sigma(n) = x * frob(n)
    ro2::Mat frobm(2, 2), mulx(2, 2);
    RingMap frob = ctx.action().of(1);
    for (size_t j = 0; j < 2; ++j) {
        Elem fj = frob.apply(B->unit(j));
        Elem mj = B->mul(x, B->unit(j));
        for (size_t i = 0; i < 2; ++i) {
            frobm.at(i, j) = fj[i];
            mulx.at(i, j) = mj[i];
        }
    }
    ro2::Mat sig = mulx * frobm;
    SemilinearModule s;
    s.module = nb;
    s.sigma = {ro2::Mat::identity(2), sig};
    s.check(ctx.action());
    Descended dd = descend(ctx, s);
    CHECK(dd.module->size() == 2);  // rank 1 over F2
    CHECK(counit_is_iso(ctx, s));
    // its datum passes the cocycle check
    DescentDatum d = action_to_datum(ctx, s);
    CHECK(check_cocycle(ctx, d));
}

TEST_CASE("functoriality: extend of a direct sum") {
    GaloisContext ctx = f2_f4_context();
    ModulePtr m1 = Module::free_module(ctx.A(), 1);
    ModulePtr m2 = Module::free_module(ctx.A(), 2);
    SemilinearModule lhs = extend(ctx, Module::direct_sum(m1, m2));
    SemilinearModule s1 = extend(ctx, m1);
    SemilinearModule s2 = extend(ctx, m2);
    // direct sum of the two semilinear modules
    SemilinearModule rhs;
    rhs.module = Module::direct_sum(s1.module, s2.module);
    for (int g = 0; g < 2; ++g) {
        ro2::Mat m(rhs.module->ngens(), rhs.module->ngens());
        for (size_t i = 0; i < s1.module->ngens(); ++i)
            for (size_t j = 0; j < s1.module->ngens(); ++j)
                m.at(i, j) = s1.sigma[g].at(i, j);
        size_t off = s1.module->ngens();
        for (size_t i = 0; i < s2.module->ngens(); ++i)
            for (size_t j = 0; j < s2.module->ngens(); ++j)
                m.at(off + i, off + j) = s2.sigma[g].at(i, j);
        rhs.sigma.push_back(std::move(m));
    }
    rhs.check(ctx.action());
    CHECK(semilinear_isomorphic(lhs, rhs, ctx));
}

TEST_CASE("module class enumeration over small rings") {
    auto f2cls = module_classes(Ring::zmod(2), 16);
    // F2 vector spaces of sizes 1, 2, 4, 8, 16
    CHECK(f2cls.size() == 5);
    auto z4cls = module_classes(Ring::zmod(4), 8);
    // 1, Z/2, Z/4, Z/2^2, Z/4+Z/2, Z/2^3
    CHECK(z4cls.size() == 6);
}

TEST_CASE("equivalence report for F2 -> F4 at a small bound") {
    GaloisContext ctx = f2_f4_context();
    EquivalenceReport rep = equivalence_report(ctx, 16);
    for (const auto& n : rep.notes)
        INFO(n);
    CHECK(rep.complete);
    CHECK(rep.bijective);
    CHECK(rep.a_classes == 5);          // F2 dims 0..4
    CHECK(rep.semilinear_classes == 3); // F4 dims 0..2 within the bound
}

TEST_CASE("equivalence report refuses non-Galois input") {
    RingPtr dual = Ring::polyquot(2, {0, 0, 1});
    RingPtr f2 = Ring::zmod(2);
    GroupAction act;
    act.group = Group::cyclic(2);
    act.ring = dual;
    act.maps = {RingMap::identity(dual), RingMap::identity(dual)};
    GaloisContext ctx(unit_map(f2, dual, dual->one), act);
    EquivalenceReport rep = equivalence_report(ctx, 8);
    CHECK(!rep.complete);
    CHECK(!rep.bijective);
    CHECK(!rep.notes.empty());
}
