#include <doctest.h>

#include <algorithm>

#include "torusrel/errors.hpp"
#include "torusrel/oracle.hpp"

#include "helpers.hpp"

using namespace torusrel;
using namespace torusrel::testing;

namespace {

const Fiber* fiber_of(const std::vector<Fiber>& fibers, const std::string& value) {
    for (const auto& f : fibers)
        if (to_text(f.value) == value) return &f;
    return nullptr;
}

} // namespace

TEST_CASE("single row fibers are singletons") {
    auto fibers = enumerate_fibers(rep1(), 1, 3, 2, 100000);
    CHECK(!fibers.empty());
    for (const auto& f : fibers) {
        CHECK(f.members.size() == 1);
        CHECK(flatten(f.members[0]) == f.value);
    }
    CHECK(markov_degree_upper(rep1(), 1, 3, 2, 100000) == 0);
}

TEST_CASE("degree four variables split a single row fiber") {
    // (x*y)^2 and x*x*y*y flatten identically but share no factor.
    auto fibers = enumerate_fibers(rep1(), 1, 2, 4, 100000);
    const Fiber* f = fiber_of(fibers, "x*x*y*y");
    REQUIRE(f != nullptr);
    CHECK(f->members.size() == 2);
    CHECK_FALSE(fiber_connected_under(*f, 3));
    CHECK(fiber_connected_under(*f, 4));
    CHECK(markov_degree_upper(rep1(), 1, 2, 4, 100000) == 4);
}

TEST_CASE("two row fibers group and sort their members") {
    auto fibers = enumerate_fibers(rep1(), 2, 2, 2, 100000);

    const Fiber* swap = fiber_of(fibers, "x*y|x*y");
    REQUIRE(swap != nullptr);
    REQUIRE(swap->members.size() == 2);
    CHECK(to_text(swap->members[0]) == "(x|y)(y|x)");
    CHECK(to_text(swap->members[1]) == "(x*y|x*y)");
    CHECK(fiber_connected_under(*swap, 2));
    CHECK_FALSE(fiber_connected_under(*swap, 1));

    const Fiber* deep = fiber_of(fibers, "x*x*y*y|x*x*y*y");
    REQUIRE(deep != nullptr);
    CHECK(deep->members.size() == 2);

    for (const auto& f : fibers) {
        CHECK(std::is_sorted(f.members.begin(), f.members.end()));
        for (const auto& m : f.members) CHECK(flatten(m) == f.value);
    }
}

TEST_CASE("markov degree is the worst fiber bottleneck") {
    // The two-factor universe needs degree four moves to reconnect the
    // products of degree two variables.
    CHECK(markov_degree_upper(rep1(), 2, 2, 2, 100000) == 4);

    // Capping the total degree at two removes those fibers.
    CHECK(markov_degree_upper(rep1(), 2, 2, 2, 100000, 2) == 2);
}

TEST_CASE("enumeration respects the product cap") {
    CHECK_THROWS_AS(enumerate_fibers(rep1(), 2, 3, 2, 10), resource_cap_error);
    CHECK_THROWS_AS(enumerate_fibers(rep1(), 2, -1, 2, 100000), config_error);
    CHECK(enumerate_fibers(rep1(), 2, 0, 2, 100000).empty());
}

TEST_CASE("rank two fibers stay within the pipeline bound") {
    long long s = markov_degree_upper(rep2(), 2, 2, 2, 200000);
    CHECK(s >= 0);
    CHECK(s <= 3187054116); // pinned d1 at radius 3/4
}
