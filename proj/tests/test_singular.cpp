#include <doctest.h>

#include <cmath>

#include "tuplesieve/singular_series.hpp"

using namespace tuplesieve;

namespace {
const PrimeTable& table_1e6() {
    static PrimeTable t = PrimeTable::build(1'000'000);
    return t;
}
}  // namespace

TEST_CASE("singleton tuple has singular series exactly 1") {
    auto s = singular_series(HTuple({0}), 10'000, &table_1e6());
    CHECK(s.value == 1.0);
    CHECK(s.admissible());
}

TEST_CASE("inadmissible tuples give exact zero") {
    CHECK(singular_series(HTuple({0, 1}), 10'000, &table_1e6()).value == 0.0);
    CHECK(singular_series(HTuple({0, 2, 4}), 10'000, &table_1e6()).value == 0.0);
}

TEST_CASE("twin tuple value and truncation stability") {
    auto s5 = singular_series(HTuple({0, 2}), 100'000, &table_1e6());
    auto s6 = singular_series(HTuple({0, 2}), 1'000'000, &table_1e6());
    // twice the twin prime constant
    CHECK(s6.value == doctest::Approx(1.3203236).epsilon(1e-5));
    // two truncations agree within the coarser tail bound
    CHECK(std::abs(s5.value - s6.value) < s5.tail_bound * s5.value);
    CHECK(std::abs(s5.value - s6.value) < 1e-6);
    CHECK(s5.tail_bound == doctest::Approx(8.0 / (1e5 * std::log(1e5))).epsilon(1e-12));
}

TEST_CASE("raising truncation from 1e5 to 1e7 moves the value less than the tail bound") {
    auto s5 = singular_series(HTuple({0, 2}), 100'000);
    auto s7 = singular_series(HTuple({0, 2}), 10'000'000);
    CHECK(std::abs(s5.value - s7.value) <= s5.tail_bound * s5.value);
}

TEST_CASE("truncation precondition is enforced") {
    // diameter 100 needs P >= 200
    CHECK_THROWS_AS(singular_series(HTuple({0, 100}), 150, &table_1e6()),
                    std::invalid_argument);
}

TEST_CASE("augmented series") {
    const auto& t = table_1e6();
    auto base = singular_series(HTuple({0, 2}), 10'000, &t);
    // member absorption: union adds nothing
    CHECK(singular_series_augmented(HTuple({0, 2}), 2, 10'000, &t).value == base.value);
    // definition: S({0} u {2}) = S({0,2})
    CHECK(singular_series_augmented(HTuple({0}), 2, 10'000, &t).value ==
          doctest::Approx(base.value).epsilon(1e-14));
    // inadmissible union vanishes
    CHECK(singular_series_augmented(HTuple({0, 4}), 2, 10'000, &t).value == 0.0);
}

TEST_CASE("admissibility iff nonzero singular series over a corpus") {
    const auto& t = table_1e6();
    for (const char* csv : {"0,2", "0,4", "0,1", "0,2,6", "0,2,4", "0,4,6,10,12,16",
                            "0,2,6,8,12", "0,6,12"}) {
        HTuple H = HTuple::parse(csv);
        bool adm = is_admissible(H).admissible;
        auto s = singular_series(H, 10'000, &t);
        CHECK(adm == (s.value != 0.0));
    }
}

TEST_CASE("translation invariance to ten digits") {
    const auto& t = table_1e6();
    auto a = singular_series(HTuple({0, 2}), 100'000, &t);
    auto b = singular_series(HTuple({5, 7}), 100'000, &t);
    CHECK(std::abs(a.value - b.value) < 1e-10);
    auto c = singular_series(HTuple({0, 4, 6}), 100'000, &t);
    auto d = singular_series(HTuple({3, 7, 9}), 100'000, &t);
    CHECK(std::abs(c.value - d.value) < 1e-10);
}

TEST_CASE("six-tuple regression value") {
    auto s = singular_series(HTuple({0, 4, 6, 10, 12, 16}), 1'000'000, &table_1e6());
    CHECK(s.value == doctest::Approx(17.2986299).epsilon(1e-6));
}

TEST_CASE("gallagher ratio: singleton window is exactly one") {
    CHECK(gallagher_ratio(1, 10, GallagherConvention::Ordered, 10'000, &table_1e6()) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gallagher conventions coincide") {
    const auto& t = table_1e6();
    double ord = gallagher_ratio(2, 30, GallagherConvention::Ordered, 10'000, &t);
    double uno = gallagher_ratio(2, 30, GallagherConvention::Unordered, 10'000, &t);
    CHECK(ord == doctest::Approx(uno).epsilon(1e-14));
}

TEST_CASE("gallagher window sanity at modest h") {
    double r = gallagher_ratio(2, 50, GallagherConvention::Ordered, 10'000, &table_1e6());
    CHECK(r > 0.8);
    CHECK(r < 1.1);
}

TEST_CASE("gallagher guards") {
    CHECK_THROWS_AS(gallagher_ratio(4, 10, GallagherConvention::Ordered), resource_limit_error);
    CHECK_THROWS_AS(gallagher_ratio(2, 1, GallagherConvention::Ordered), std::invalid_argument);
}
