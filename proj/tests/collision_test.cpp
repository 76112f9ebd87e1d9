// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include <mptlab/collision.hpp>
#include <mptlab/errors.hpp>
#include <mptlab/keccak.hpp>
#include <mptlab/world_state.hpp>

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace mptlab;

namespace
{
CollisionTarget target_of(const std::string& prefix, const std::string& tag)
{
    return CollisionTarget{NibblePath::from_string(prefix), tag, std::nullopt};
}
}  // namespace

TEST_CASE("single-nibble target collides within a small budget")
{
    const auto spec = GrindSpec::addresses(/*start_counter=*/1000);
    const auto result = collide_single(target_of("1", "t"), spec, 1'000);
    REQUIRE(result.has_value());
    CHECK(result->trials <= 1'000);
    CHECK(result->matched_len == 1);

    // soundness: digest recomputes from the crafted input and carries the prefix
    REQUIRE(result->input.size() == 20);
    CHECK(keccak256(result->input) == result->digest);
    CHECK(path_from_digest(result->digest).starts_with(NibblePath::from_string("1")));
}

TEST_CASE("empty prefixes and bad specs are rejected")
{
    const auto spec = GrindSpec::addresses();
    CHECK_THROWS_AS(
        collide_single(CollisionTarget{NibblePath{}, "t", std::nullopt}, spec, 10),
        StructuralError);
    CHECK_THROWS_AS(collide_multi({}, spec, 10), StructuralError);
    CHECK_THROWS_AS(collide_single(target_of("1", "t"), spec, 0), DomainError);

    auto bad = spec;
    bad.counter_offset = 15;  // 8 counter bytes no longer fit
    CHECK_THROWS_AS(collide_single(target_of("1", "t"), bad, 10), StructuralError);

    CHECK_THROWS_AS(
        collide_multi({target_of("1", "a"), target_of("2", "a")}, spec, 10), StructuralError);
}

TEST_CASE("multi-target with one target behaves exactly like the single call")
{
    const auto spec = GrindSpec::addresses(/*start_counter=*/555);
    const auto single = collide_single(target_of("ab", "t"), spec, 100'000);
    const auto multi = collide_multi({target_of("ab", "t")}, spec, 100'000);
    REQUIRE(single.has_value());
    REQUIRE(multi.complete);
    const auto* entry = multi.find("t");
    REQUIRE(entry != nullptr);
    CHECK(entry->input == single->input);
    CHECK(entry->counter == single->counter);
    CHECK(multi.total_trials == single->trials);
}

TEST_CASE("results are identical across worker counts")
{
    std::vector<CollisionTarget> targets = {
        target_of("11", "a"), target_of("2f", "b"), target_of("c0", "c")};

    auto spec1 = GrindSpec::addresses(/*start_counter=*/42);
    spec1.worker_count = 1;
    auto spec4 = spec1;
    spec4.worker_count = 4;

    const auto r1 = collide_multi(targets, spec1, 1'000'000);
    const auto r4 = collide_multi(targets, spec4, 1'000'000);
    REQUIRE(r1.complete);
    REQUIRE(r4.complete);
    CHECK(r1.total_trials == r4.total_trials);
    for (const auto& tag : {"a", "b", "c"})
    {
        const auto* e1 = r1.find(tag);
        const auto* e4 = r4.find(tag);
        REQUIRE(e1 != nullptr);
        REQUIRE(e4 != nullptr);
        CHECK(e1->input == e4->input);
        CHECK(e1->counter == e4->counter);
        CHECK(e1->trials == e4->trials);
    }
}

TEST_CASE("budget exhaustion returns the matched subset")
{
    // an 8-nibble prefix will not fall inside 4096 candidates
    const auto spec = GrindSpec::addresses();
    const auto result =
        collide_multi({target_of("1", "easy"), target_of("123456Aa", "hard")}, spec, 4'096);
    CHECK_FALSE(result.complete);
    CHECK(result.total_trials == 4'096);
    CHECK(result.find("easy") != nullptr);
    CHECK(result.find("hard") == nullptr);
}

TEST_CASE("distinct prefixes never share a crafted input")
{
    const auto spec = GrindSpec::addresses(/*start_counter=*/10);
    const auto result = collide_multi({target_of("7a", "x"), target_of("7b", "y")}, spec, 500'000);
    REQUIRE(result.complete);
    CHECK(result.find("x")->input != result.find("y")->input);

    SUBCASE("identical prefixes are satisfied by the same input")
    {
        const auto twin =
            collide_multi({target_of("7a", "x"), target_of("7a", "x2")}, spec, 500'000);
        REQUIRE(twin.complete);
        CHECK(twin.find("x")->input == twin.find("x2")->input);
    }
}

TEST_CASE("exclude_next pins the common prefix length exactly")
{
    CollisionTarget t;
    t.prefix = NibblePath::from_string("3c");
    t.tag = "exact";
    t.exclude_next = Nibble{5};  // digest nibble 2 must not be 5

    const auto spec = GrindSpec::addresses(/*start_counter=*/33);
    const auto result = collide_single(t, spec, 200'000);
    REQUIRE(result.has_value());
    const auto path = path_from_digest(result->digest);
    CHECK(path.starts_with(t.prefix));
    CHECK(path[2] != 5);
}

TEST_CASE("mapping-key domain derives indexings through the slot id")
{
    const auto spec = GrindSpec::mapping_keys(/*position=*/3, /*start_counter=*/7);
    const auto result = collide_single(target_of("a", "slot"), spec, 2'000);
    REQUIRE(result.has_value());
    REQUIRE(result->input.size() == 32);

    Key32 key{};
    std::memcpy(key.data(), result->input.data(), 32);
    CHECK(slot_indexing(key, 3) == path_from_digest(result->digest));
    CHECK(path_from_digest(result->digest).starts_with(NibblePath::from_string("a")));
}

TEST_CASE("seeded mean trials for a short prefix sit near the model")
{
    // light statistical sniff; the full seeded sweep runs in the acceptance suite
    const size_t runs = 40;
    double total = 0;
    for (size_t i = 0; i < runs; ++i)
    {
        const auto spec = GrindSpec::addresses(/*start_counter=*/1'000'000ull * (i + 1));
        const auto result = collide_single(target_of("42", "t"), spec, 1u << 16);
        REQUIRE(result.has_value());
        total += static_cast<double>(result->trials);
    }
    const double mean = total / static_cast<double>(runs);
    CHECK(mean > 256.0 * 0.4);
    CHECK(mean < 256.0 * 2.5);
}

TEST_CASE("expected trials model")
{
    CHECK(expected_trials(4096.0, 1.0) == doctest::Approx(4096.0));
    CHECK(expected_trials(1000.0, std::exp(2.0)) == doctest::Approx(2000.0));
    CHECK(theta_for_prefix_len(3) == doctest::Approx(4096.0));
    CHECK_THROWS_AS(expected_trials(4096.0, 0.5), DomainError);

    TrialModel model;
    model.theta = 4096.0;
    model.targets = 8.0;
    model.hash_rate = 1'000'000.0;
    CHECK(model.expected_total_trials() == doctest::Approx(4096.0 * std::log(8.0)));
    CHECK(model.single_worker_hours() ==
          doctest::Approx(4096.0 * std::log(8.0) / 1'000'000.0));
}
