#include <gtest/gtest.h>

#include <random>

#include "f2ext/io.hpp"

using namespace f2ext;
using io::json;

namespace {

// Emit, re-parse the text, decode, emit again: the two documents must agree.
template <class T, class Decode>
void round_trip(const T& value, Decode decode) {
    const json first = io::to_json(value);
    const json back = io::parse(io::dump(first));
    EXPECT_EQ(io::dump(io::to_json(decode(back))), io::dump(first));
}

} // namespace

TEST(IO, PolyMapRoundTrip) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_map(3 + trial % 6, 1 + trial % 4, 1 + trial % 3, rng);
        const auto back = io::polymap_from_json(io::parse(io::dump(io::to_json(p))));
        EXPECT_EQ(back, p);
        EXPECT_EQ(io::digest(back), io::digest(p));
    }
    const auto j = io::to_json(PolyMap::identity(2));
    EXPECT_EQ(j["schema"], "f2ext/1");
    EXPECT_EQ(j["type"], "polymap");
}

TEST(IO, DistributionRoundTrip) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const auto d = distribution_of(random_map(6, 3, 2, rng));
        const auto back = io::distribution_from_json(io::parse(io::dump(io::to_json(d))));
        EXPECT_EQ(back, d);
        EXPECT_EQ(back.denominator(), d.denominator());
    }
    DiscreteDistribution::Counts c{{0, BigInt(1)}, {5, BigInt(2)}};
    const DiscreteDistribution odd(3, BigInt(3), c);
    EXPECT_EQ(io::distribution_from_json(io::to_json(odd)), odd);
}

TEST(IO, StructuredRoundTrips) {
    std::mt19937_64 rng(3);
    round_trip(sidon_source(3), io::nobf_from_json);
    round_trip(FamilyMember(HashFamily(3, 2, 2), 0x2a), io::member_from_json);
    round_trip(support_of(sidon_source(2)), io::support_from_json);
    BipartiteGraph g(3, 4);
    g.add_edge(0, 1);
    g.add_edge(2, 3);
    round_trip(g, io::graph_from_json);

    SearchParams p{1, 2, 2, Rational(2), 1, Rational(0), 2, 20};
    round_trip(p, io::params_from_json);
    const auto rep = algorithm1_search(p);
    const auto back = io::report_from_json(io::parse(io::dump(io::to_json(rep))));
    EXPECT_EQ(back, rep);

    const auto red = reduce_source(PolyMap::identity(8), 2, 6, rng);
    round_trip(red, io::reduction_from_json);
}

TEST(IO, CheckpointRoundTrip) {
    SearchParams p{2, 3, 3, Rational(3), 1, Rational(1, 4), 2, 20};
    Checkpoint c;
    c.params_hash = p.hash();
    c.next_seed = 17;
    c.best_seed = 3;
    c.best_error_num = 9;
    c.best_source_index = 2;
    const auto [c2, p2] = io::checkpoint_from_json(io::parse(io::dump(io::to_json(c, p))));
    EXPECT_EQ(p2, p);
    EXPECT_EQ(c2.params_hash, c.params_hash);
    EXPECT_EQ(c2.next_seed, c.next_seed);
    EXPECT_EQ(c2.best_seed, c.best_seed);
    EXPECT_EQ(c2.best_error_num, c.best_error_num);
    EXPECT_EQ(c2.best_source_index, c.best_source_index);
}

TEST(IO, RationalsAreExactStrings) {
    json j;
    io::put_rational(j, "x", Rational(1, 3));
    EXPECT_EQ(j["x"], "1/3");
    EXPECT_NEAR(j["x_float"].get<double>(), 1.0 / 3, 1e-15);
    EXPECT_EQ(io::get_rational(j, "x"), Rational(1, 3));
}

TEST(IO, MalformedInputsThrowParseError) {
    EXPECT_THROW(io::parse("{not json"), parse_error);
    EXPECT_THROW(io::polymap_from_json(io::parse(R"({"schema":"f2ext/0","type":"polymap","m":2,"outputs":[]})")), parse_error);
    EXPECT_THROW(io::polymap_from_json(io::parse(R"({"schema":"f2ext/1","type":"nobf"})")), parse_error);
    EXPECT_THROW(io::polymap_from_json(io::parse(R"({"schema":"f2ext/1","type":"polymap","m":2,"outputs":[[[5]]]})")), parse_error);
    EXPECT_THROW(io::polymap_from_json(io::parse(R"({"schema":"f2ext/1","type":"polymap","outputs":[]})")), parse_error);
    EXPECT_THROW(io::parse_bits("10x", 3), parse_error);
    EXPECT_THROW(io::parse_bits("101", 4), parse_error);
    EXPECT_THROW(io::parse_hex("0xzz"), parse_error);
}
