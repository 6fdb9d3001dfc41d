#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "operadforge/field.hpp"

using namespace opf;

TEST_CASE("rational arithmetic is exact") {
    field q = field::rationals();
    scalar a(q, rational(1) / 3), b(q, rational(1) / 6);
    CHECK((a + b).str() == "1/2");
    CHECK((a - b).str() == "1/6");
    CHECK((a * b).str() == "1/18");
    CHECK((a / b).str() == "2/1");
    CHECK((a + (-a)).is_zero());
    CHECK(a.inverse().str() == "3/1");
}

TEST_CASE("prime field arithmetic") {
    field f5 = field::prime(5);
    scalar a(f5, 3), b(f5, 4);
    CHECK((a + b).str() == "2");
    CHECK((a * b).str() == "2");
    CHECK((-a).str() == "2");
    CHECK(a.inverse().str() == "2");  // 3*2 = 6 = 1 mod 5
    CHECK((a / b) * b == a);
    CHECK(scalar(f5, 5).is_zero());
    CHECK(scalar(f5, -1).str() == "4");
}

TEST_CASE("rational reduced mod p") {
    field f7 = field::prime(7);
    // 1/2 mod 7 = 4 since 2*4 = 8 = 1
    CHECK(scalar(f7, rational(1) / 2).str() == "4");
    CHECK(scalar(f7, rational(-3) / 5).str() == "5");  // -3 * 5^{-1} = 4*3 = 12 = 5
}

TEST_CASE("default-constructed zero is usable with either field") {
    scalar z;
    field q = field::rationals(), f2 = field::prime(2);
    CHECK(z.is_zero());
    CHECK((z + scalar::one(q)).is_one());
    CHECK((z + scalar::one(f2)).is_one());
    CHECK((z * scalar::one(f2)).is_zero());
    CHECK(z == scalar::zero(q));
    CHECK(z == scalar::zero(f2));
}

TEST_CASE("parse round trip") {
    field q = field::rationals();
    scalar a = scalar::parse(q, "-7/3");
    CHECK(a.str() == "-7/3");
    CHECK(scalar::parse(q, "5").str() == "5/1");
    field f3 = field::prime(3);
    CHECK(scalar::parse(f3, "5").str() == "2");
    CHECK(field::parse("f101").p == 101);
    CHECK(field::parse("q").is_rational());
    CHECK_THROWS(field::parse("f4"));
}

TEST_CASE("mod_inverse") {
    for (int64_t p : {2, 3, 5, 7, 101}) {
        for (int64_t a = 1; a < p; ++a) CHECK(a * mod_inverse(a, p) % p == 1);
    }
}
