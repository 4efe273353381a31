#include <doctest.h>

#include "ro2alg/twolocal.hpp"

using namespace ro2;

TEST_CASE("two-local normalization") {
    CHECK(TwoLocal(Int(6), Int(3)) == TwoLocal(2));
    CHECK(TwoLocal(Int(-6), Int(-3)) == TwoLocal(2));
    CHECK(TwoLocal(Int(4), Int(9)).str() == "4/9");
    CHECK(TwoLocal(0).str() == "0");
    CHECK_THROWS_AS(TwoLocal(Int(1), Int(2)), InputError);
    CHECK_THROWS_AS(TwoLocal(Int(1), Int(0)), InputError);
}

TEST_CASE("units and inverses") {
    CHECK(TwoLocal(3).is_unit());
    CHECK(!TwoLocal(4).is_unit());
    CHECK(TwoLocal(Int(3), Int(5)).inverse() == TwoLocal(Int(5), Int(3)));
    CHECK_THROWS_AS(TwoLocal(2).inverse(), InputError);
    CHECK(TwoLocal(Int(-3), Int(7)).inverse() * TwoLocal(Int(-3), Int(7)) == TwoLocal(1));
}

TEST_CASE("arithmetic and mod 2") {
    TwoLocal a(Int(1), Int(3)), b(Int(1), Int(5));
    CHECK(a + b == TwoLocal(Int(8), Int(15)));
    CHECK(a * b == TwoLocal(Int(1), Int(15)));
    CHECK((a - a).is_zero());
    CHECK(TwoLocal(Int(3), Int(5)).mod2() == 1);
    CHECK(TwoLocal(Int(4), Int(5)).mod2() == 0);
}

TEST_CASE("field-of-fractions identities hold on random samples") {
    // (x + y) * z == x*z + y*z with odd denominators
    unsigned long long state = 12345;
    auto rnd = [&]() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        long long num = static_cast<long long>(state >> 40) - (1 << 23);
        long long den = static_cast<long long>((state >> 20) % 99) * 2 + 1;
        return TwoLocal(Int(num), Int(den));
    };
    for (int i = 0; i < 500; ++i) {
        TwoLocal x = rnd(), y = rnd(), z = rnd();
        CHECK((x + y) * z == x * z + y * z);
        CHECK(x * y == y * x);
        CHECK((x + y) + z == x + (y + z));
    }
}
