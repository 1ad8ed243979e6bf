#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include <scanrate/scan.hpp>

using namespace scanrate;

TEST_CASE("direct scan blocks are prefixes") {
    const ScanPath s = direct_scan(3);
    CHECK(s.block_of_size(1) == BlockWindow{1, 1});
    CHECK(s.block_of_size(2) == BlockWindow{1, 2});
    CHECK(s.block_of_size(3) == BlockWindow{1, 3});

    CHECK(direct_scan(1).shrinks().empty());
    CHECK(direct_scan(4).block_of_size(2) == BlockWindow{1, 2});
    CHECK_THROWS_AS(direct_scan(0), std::invalid_argument);
}

TEST_CASE("reverse scan blocks are suffixes") {
    const ScanPath s = reverse_scan(3);
    CHECK(s.block_of_size(1) == BlockWindow{3, 1});
    CHECK(s.block_of_size(2) == BlockWindow{2, 2});
    CHECK(s.block_of_size(3) == BlockWindow{1, 3});

    CHECK(reverse_scan(1) == direct_scan(1));
    CHECK(reverse_scan(5).block_of_size(2) == BlockWindow{4, 2});
}

TEST_CASE("every scan ends with the full block") {
    RandomStream stream(123);
    for (int n : {1, 2, 5, 17}) {
        for (int rep = 0; rep < 20; ++rep) {
            const ScanPath s = uniform_random_scan(n, stream);
            CHECK(s.block_of_size(n) == BlockWindow{1, n});
        }
    }
    CHECK(direct_scan(5).block_of_size(3) == BlockWindow{1, 3});
    CHECK(reverse_scan(5).block_of_size(3) == BlockWindow{3, 3});
}

TEST_CASE("blocks nest") {
    RandomStream stream(99);
    for (int rep = 0; rep < 50; ++rep) {
        const ScanPath s = uniform_random_scan(23, stream);
        for (int k = 1; k < 23; ++k)
            CHECK(s.block_of_size(k + 1).contains(s.block_of_size(k)));
    }
}

TEST_CASE("enumeration yields 2^(n-1) distinct scans") {
    CHECK(enumerate_scans(1).size() == 1);
    CHECK(enumerate_scans(4).size() == 8);

    for (int n = 1; n <= 12; ++n) {
        const auto scans = enumerate_scans(n);
        REQUIRE(scans.size() == (std::size_t{1} << (n - 1)));
        std::set<std::string> keys;
        for (const auto& s : scans) keys.insert(s.to_string());
        CHECK(keys.size() == scans.size());
    }

    CHECK(enumerate_scans(10).size() == 512);
    CHECK_THROWS_AS(enumerate_scans(21), std::length_error);
    CHECK(enumerate_scans(21, 25).size() == (1u << 20));
}

TEST_CASE("containment counts match the enumeration tally") {
    CHECK(count_scans_containing(4, {1, 4}) == 8);
    CHECK(count_scans_containing(4, {2, 2}) == 4);
    CHECK_THROWS_AS(count_scans_containing(4, {4, 2}), std::domain_error);

    for (int n = 1; n <= 10; ++n) {
        const auto scans = enumerate_scans(n);
        for (int k = 1; k <= n; ++k) {
            std::map<int, std::uint64_t> tally;
            for (const auto& s : scans) ++tally[s.block_of_size(k).start];
            std::uint64_t total = 0;
            for (int i = 1; i + k - 1 <= n; ++i) {
                CHECK(count_scans_containing(n, {i, k}) == tally[i]);
                total += tally[i];
            }
            CHECK(total == scans.size());
        }
    }
}

TEST_CASE("uniform scan generator is deterministic given the stream") {
    RandomStream a(7), b(7);
    for (int rep = 0; rep < 10; ++rep)
        CHECK(uniform_random_scan(31, a) == uniform_random_scan(31, b));
}

TEST_CASE("uniform scan generator covers both n=2 outcomes evenly") {
    RandomStream stream(5);
    int starts_at_two = 0;
    const int draws = 4000;
    for (int i = 0; i < draws; ++i)
        starts_at_two += uniform_random_scan(2, stream).block_of_size(1).start == 2;
    CHECK(starts_at_two > draws / 2 - 200);
    CHECK(starts_at_two < draws / 2 + 200);
}

TEST_CASE("scan serialization") {
    CHECK(direct_scan(4).to_string() == "1:RRR");
    CHECK(reverse_scan(4).to_string() == "4:LLL");
    CHECK(direct_scan(1).to_string() == "1:");

    // start index equals 1 + number of Left shrinks
    const ScanPath s(5, {Shrink::Left, Shrink::Right, Shrink::Left, Shrink::Right});
    CHECK(s.start_index() == 3);
}
