#include <cstdint>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "nilkex/commutator.hpp"
#include "nilkex/errors.hpp"
#include "nilkex/numeric.hpp"
#include "nilkex/protocol.hpp"
#include "test_util.hpp"

using namespace nilkex;
using namespace nilkex::test;

namespace {

SessionParams p1_ut35(std::optional<std::uint64_t> seed = 1) {
    return SessionParams{ProtocolId::protocol1, ut_platform(3, 5), 2,
                         {tv(3, 5, 0, 1, 1), tv(3, 5, 1, 2, 1)}, seed};
}

SessionParams p2_wreath3(std::optional<std::uint64_t> seed = 1) {
    const auto platform = wreath_platform(3);
    Rng rng(99);
    const auto [x, g] = sample_protocol2_pair(platform, rng);
    return SessionParams{ProtocolId::protocol2, platform, 2, {x, g}, seed};
}

std::uint64_t exponent_product(const std::vector<UserState>& states, std::uint64_t q) {
    std::uint64_t prod = 1;
    for (const UserState& s : states) prod = mulmod(prod, s.exponent, q);
    return prod;
}

} // namespace

TEST_CASE("session setup deals exponents and scrubs the seed") {
    const auto states = setup_session(p1_ut35(7));
    REQUIRE(states.size() == 3);
    for (unsigned j = 0; j < 3; ++j) {
        CHECK(states[j].index == j + 1);
        CHECK(states[j].exponent >= 1);
        CHECK(states[j].exponent <= 4);
        CHECK_FALSE(states[j].params.rng_seed.has_value());
    }
    const auto again = setup_session(p1_ut35(7));
    for (unsigned j = 0; j < 3; ++j) {
        CHECK(states[j].exponent == again[j].exponent);
    }
}

TEST_CASE("session setup rejects bad parameters") {
    // Degenerate bases: the central element commutes with everything.
    auto degenerate = p1_ut35();
    degenerate.bases = {tv(3, 5, 0, 2, 1), tv(3, 5, 0, 1, 1)};
    CHECK_THROWS_AS(setup_session(degenerate), SetupError);

    auto wrong_degree = p1_ut35();
    wrong_degree.degree = 3;
    CHECK_THROWS_AS(setup_session(wrong_degree), SetupError);

    auto too_low = p1_ut35();
    too_low.degree = 1;
    too_low.bases = {tv(3, 5, 0, 1, 1)};
    CHECK_THROWS_AS(setup_session(too_low), SetupError);

    auto short_bases = p1_ut35();
    short_bases.bases.pop_back();
    CHECK_THROWS_AS(setup_session(short_bases), SetupError);

    auto foreign_base = p1_ut35();
    foreign_base.bases[1] = tv(3, 7, 1, 2, 1);
    CHECK_THROWS_AS(setup_session(foreign_base), SetupError);

    CHECK_THROWS_AS(setup_session(p1_ut35(std::nullopt)), SetupError);

    // Protocol 2 degree must match the platform claims.
    auto p2 = p2_wreath3();
    p2.degree = 3;
    CHECK_THROWS_AS(setup_session(p2), SetupError);
    auto p2short = p2_wreath3();
    p2short.bases.pop_back();
    CHECK_THROWS_AS(setup_session(p2short), SetupError);
    // A pair whose repeated commutator vanishes is refused even on a good
    // platform: g = identity kills every chain.
    auto p2dead = p2_wreath3();
    p2dead.bases[1] = group_identity(wreath_platform(3));
    CHECK_THROWS_AS(setup_session(p2dead), SetupError);
}

TEST_CASE("injected exponents are validated") {
    const std::vector<std::uint64_t> good{2, 3, 4};
    CHECK(setup_session(p1_ut35(), good).size() == 3);
    const std::vector<std::uint64_t> zero{2, 0, 4};
    CHECK_THROWS_AS(setup_session(p1_ut35(), zero), std::invalid_argument);
    const std::vector<std::uint64_t> large{2, 5, 4};
    CHECK_THROWS_AS(setup_session(p1_ut35(), large), std::invalid_argument);
    const std::vector<std::uint64_t> short_list{2, 3};
    CHECK_THROWS_AS(setup_session(p1_ut35(), short_list), std::invalid_argument);
}

TEST_CASE("broadcasts carry one power per base slot") {
    const auto states = setup_session(p1_ut35(), std::vector<std::uint64_t>{2, 3, 4});
    const BroadcastMessage msg = round_broadcast(states[1]);
    CHECK(msg.sender == 2);
    REQUIRE(msg.payload.size() == 2);
    CHECK(msg.payload[0].first == 1);
    CHECK(msg.payload[0].second == serialize(tv(3, 5, 0, 1, 3)));
    CHECK(msg.payload[1].first == 2);
    CHECK(msg.payload[1].second == serialize(tv(3, 5, 1, 2, 3)));

    const auto p2states = setup_session(p2_wreath3(), std::vector<std::uint64_t>{1, 2, 2});
    const BroadcastMessage p2msg = round_broadcast(p2states[2]);
    CHECK(p2msg.sender == 3);
    REQUIRE(p2msg.payload.size() == 1);
    CHECK(p2msg.payload[0].first == 2);
    CHECK(p2msg.payload[0].second ==
          serialize(power(p2states[2].params.bases[1], 2)));
}

TEST_CASE("three users agree on a corner-entry key") {
    const auto result = run_session(p1_ut35(), std::vector<std::uint64_t>{2, 3, 4});
    REQUIRE(result.keys.size() == 3);
    // 2 * 3 * 4 = 24 = 4 mod 5.
    CHECK(result.keys[0].element == tv(3, 5, 0, 2, 4));
    for (const SharedKey& k : result.keys) {
        CHECK(k.bytes == result.keys[0].bytes);
    }
    CHECK_FALSE(is_identity(result.keys[0].element));
}

TEST_CASE("four users agree through a weight-three commutator") {
    const SessionParams params{ProtocolId::protocol1, ut_platform(4, 101), 3,
                               {tv(4, 101, 0, 1, 1), tv(4, 101, 1, 2, 1),
                                tv(4, 101, 2, 3, 1)},
                               1};
    const auto result = run_session(params, std::vector<std::uint64_t>{2, 3, 4, 5});
    REQUIRE(result.keys.size() == 4);
    // 2 * 3 * 4 * 5 = 120 = 19 mod 101.
    CHECK(result.keys[0].element == tv(4, 101, 0, 3, 19));
    for (const SharedKey& k : result.keys) {
        CHECK(k.bytes == result.keys[0].bytes);
    }
}

TEST_CASE("unit exponents reproduce the bare commutator") {
    const auto result = run_session(p1_ut35(), std::vector<std::uint64_t>{1, 1, 1});
    CHECK(result.keys[0].element == tv(3, 5, 0, 2, 1));
}

TEST_CASE("two-party session on the smallest noncommutative platform") {
    const SessionParams params{ProtocolId::protocol2, ut_platform(3, 101), 1,
                               {tv(3, 101, 0, 1, 1), tv(3, 101, 1, 2, 1)}, 1};
    const auto result = run_session(params, std::vector<std::uint64_t>{3, 4});
    REQUIRE(result.keys.size() == 2);
    CHECK(result.keys[0].element == tv(3, 101, 0, 2, 12));
    CHECK(result.keys[0].bytes == result.keys[1].bytes);
}

TEST_CASE("derived keys match the closed form") {
    SUBCASE("broadcast-per-base protocol") {
        const auto platform = ut_platform(4, 101);
        const std::uint64_t q = 101;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            Rng rng(seed);
            const auto bases = sample_protocol1_bases(platform, 3, rng);
            const SessionParams params{ProtocolId::protocol1, platform, 3, bases, seed};
            const auto states = setup_session(params);
            const auto result = run_session(params);
            const GroupElement expect =
                power(simple_commutator(bases),
                      static_cast<std::int64_t>(exponent_product(states, q)));
            CHECK(result.keys[0].element == expect);
            CHECK_FALSE(is_identity(result.keys[0].element));
        }
    }
    SUBCASE("single-broadcast protocol") {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            auto params = p2_wreath3(seed);
            const auto states = setup_session(params);
            const auto result = run_session(params);
            const GroupElement expect =
                power(engel_commutator(params.bases[0], params.bases[1], 2),
                      static_cast<std::int64_t>(exponent_product(states, 3)));
            CHECK(result.keys[0].element == expect);
        }
    }
    SUBCASE("single-broadcast protocol on a large matrix platform") {
        const auto platform = ut_platform(5, 101);
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            Rng rng(seed);
            const auto [x, g] = sample_protocol2_pair(platform, rng);
            const SessionParams params{ProtocolId::protocol2, platform, 3, {x, g}, seed};
            const auto states = setup_session(params);
            const auto result = run_session(params);
            const GroupElement expect =
                power(engel_commutator(x, g, 3),
                      static_cast<std::int64_t>(exponent_product(states, 101)));
            CHECK(result.keys[0].element == expect);
        }
    }
}

TEST_CASE("the key depends only on the multiset of exponents") {
    const auto a = run_session(p1_ut35(), std::vector<std::uint64_t>{2, 3, 4});
    const auto b = run_session(p1_ut35(), std::vector<std::uint64_t>{4, 3, 2});
    CHECK(a.keys[0].bytes == b.keys[0].bytes);
    CHECK(a.transcript != b.transcript);
}

TEST_CASE("equal seeds reproduce the session, fresh seeds do not") {
    const auto r1 = run_session(p1_ut35(42));
    const auto r2 = run_session(p1_ut35(42));
    CHECK(r1.transcript == r2.transcript);
    CHECK(encode_transcript(r1.transcript) == encode_transcript(r2.transcript));
    CHECK(r1.keys[0].bytes == r2.keys[0].bytes);

    const auto r3 = run_session(p1_ut35(43));
    CHECK(r1.transcript != r3.transcript);
}

TEST_CASE("key derivation rejects foreign transcripts") {
    const auto params = p1_ut35();
    const auto states = setup_session(params, std::vector<std::uint64_t>{2, 3, 4});

    auto other = p1_ut35();
    other.bases = {tv(3, 5, 0, 1, 2), tv(3, 5, 1, 2, 1)};
    const auto other_result = run_session(other, std::vector<std::uint64_t>{2, 3, 4});
    CHECK_THROWS_AS(derive_key(states[0], other_result.transcript), SetupError);

    const auto p2result = run_session(p2_wreath3(), std::vector<std::uint64_t>{1, 2, 2});
    CHECK_THROWS_AS(derive_key(states[0], p2result.transcript), SetupError);
}

TEST_CASE("key derivation surfaces tampered payloads") {
    const auto params = p1_ut35();
    const auto states = setup_session(params, std::vector<std::uint64_t>{2, 3, 4});
    std::vector<BroadcastMessage> messages;
    for (const UserState& s : states) messages.push_back(round_broadcast(s));
    Transcript t = build_transcript(params, messages);

    Transcript out_of_range = t;
    out_of_range.messages[0].payload[0].second[0] = 7; // entry value 7 >= q = 5
    CHECK_THROWS_AS(derive_key(states[1], out_of_range), DecodeError);

    Transcript missing = t;
    missing.messages.erase(missing.messages.begin());
    CHECK_THROWS_AS(derive_key(states[1], missing), DecodeError);

    Transcript no_entry = t;
    no_entry.messages[0].payload.erase(no_entry.messages[0].payload.begin());
    CHECK_THROWS_AS(derive_key(states[1], no_entry), DecodeError);

    // In-range tampering cannot be detected structurally; it just changes the
    // derived key.
    Transcript twisted = t;
    twisted.messages[0].payload[0].second[0] = 1;
    const SharedKey honest = derive_key(states[1], t);
    const SharedKey skewed = derive_key(states[1], twisted);
    CHECK(honest.bytes != skewed.bytes);
}

TEST_CASE("transcript assembly validates message order") {
    const auto params = p1_ut35();
    const auto states = setup_session(params, std::vector<std::uint64_t>{2, 3, 4});
    std::vector<BroadcastMessage> messages;
    for (const UserState& s : states) messages.push_back(round_broadcast(s));
    std::swap(messages[0], messages[1]);
    CHECK_THROWS_AS(build_transcript(params, messages), std::invalid_argument);
    messages.pop_back();
    CHECK_THROWS_AS(build_transcript(params, messages), std::invalid_argument);
}

TEST_CASE("transcript wire format is stable") {
    const auto result = run_session(p1_ut35(), std::vector<std::uint64_t>{2, 3, 4});
    const std::vector<std::uint8_t> bytes = encode_transcript(result.transcript);
    const std::vector<std::uint8_t> expect{
        'N', 'K', 'E', 'X',          // magic
        0x01,                        // format version
        0x01,                        // protocol tag
        0x01, 0, 0, 0, 3, 0, 0, 0, 5, // platform: matrix family, m = 3, q = 5
        0x00, 0x02,                  // degree
        0x01, 0x00, 0x00,            // base 1
        0x00, 0x00, 0x01,            // base 2
        0x00, 0x01, 0x00, 0x02,      // sender 1, two entries
        0x00, 0x01, 0x02, 0x00, 0x00,
        0x00, 0x02, 0x00, 0x00, 0x02,
        0x00, 0x02, 0x00, 0x02,      // sender 2
        0x00, 0x01, 0x03, 0x00, 0x00,
        0x00, 0x02, 0x00, 0x00, 0x03,
        0x00, 0x03, 0x00, 0x02,      // sender 3
        0x00, 0x01, 0x04, 0x00, 0x00,
        0x00, 0x02, 0x00, 0x00, 0x04,
    };
    CHECK(bytes == expect);
    CHECK(parse_transcript(bytes) == result.transcript);
}

TEST_CASE("transcripts round trip through the wire format") {
    const auto p1 = run_session(p1_ut35(11));
    CHECK(parse_transcript(encode_transcript(p1.transcript)) == p1.transcript);

    const auto p2 = run_session(p2_wreath3(11));
    CHECK(parse_transcript(encode_transcript(p2.transcript)) == p2.transcript);

    const SessionParams big{ProtocolId::protocol1, ut_platform(4, 2147483647), 3,
                            {tv(4, 2147483647, 0, 1, 1), tv(4, 2147483647, 1, 2, 1),
                             tv(4, 2147483647, 2, 3, 1)},
                            11};
    const auto p3 = run_session(big);
    CHECK(parse_transcript(encode_transcript(p3.transcript)) == p3.transcript);
}

TEST_CASE("malformed transcript bytes are rejected") {
    const auto result = run_session(p1_ut35(), std::vector<std::uint64_t>{2, 3, 4});
    const std::vector<std::uint8_t> good = encode_transcript(result.transcript);

    auto bad_magic = good;
    bad_magic[0] = 'M';
    CHECK_THROWS_AS(parse_transcript(bad_magic), DecodeError);

    auto bad_version = good;
    bad_version[4] = 0x02;
    CHECK_THROWS_AS(parse_transcript(bad_version), DecodeError);

    auto bad_proto = good;
    bad_proto[5] = 0x03;
    CHECK_THROWS_AS(parse_transcript(bad_proto), DecodeError);

    auto truncated = good;
    truncated.pop_back();
    CHECK_THROWS_AS(parse_transcript(truncated), DecodeError);

    auto trailing = good;
    trailing.push_back(0);
    CHECK_THROWS_AS(parse_transcript(trailing), DecodeError);

    auto bad_sender = good;
    bad_sender[24] = 0x02; // first sender id, low byte
    CHECK_THROWS_AS(parse_transcript(bad_sender), DecodeError);

    CHECK_THROWS_AS(parse_transcript(std::vector<std::uint8_t>{}), DecodeError);

    // A tampered element value parses (payloads decode lazily) but fails key
    // derivation.
    auto bad_entry = good;
    bad_entry[29] = 9; // first payload element byte, 9 >= q = 5
    const Transcript t = parse_transcript(bad_entry);
    const auto states = setup_session(p1_ut35(), std::vector<std::uint64_t>{2, 3, 4});
    CHECK_THROWS_AS(derive_key(states[1], t), DecodeError);
}

TEST_CASE("session reports carry the public data and keys") {
    const auto result = run_session(p1_ut35(), std::vector<std::uint64_t>{2, 3, 4});
    const nlohmann::json j = session_json(result.transcript, result.keys);
    CHECK(j["protocol"] == 1);
    CHECK(j["degree"] == 2);
    CHECK(j["users"] == 3);
    CHECK(j["platform"]["spec"] == "ut:3:5");
    CHECK(j["bases"].size() == 2);
    CHECK(j["messages"].size() == 3);
    CHECK(j["messages"][0]["sender"] == 1);
    CHECK(j["messages"][0]["entries"].size() == 2);
    CHECK(j["keys"].size() == 3);
    CHECK(j["keys"][0] == to_hex(result.keys[0].bytes));

    const nlohmann::json bare = session_json(result.transcript);
    CHECK_FALSE(bare.contains("keys"));
}

TEST_CASE("public parameter samplers return usable instances") {
    Rng rng(5);
    const auto bases = sample_protocol1_bases(ut_platform(3, 5), 2, rng);
    REQUIRE(bases.size() == 2);
    CHECK_FALSE(is_identity(simple_commutator(bases)));
    CHECK_THROWS_AS(sample_protocol1_bases(ut_platform(3, 5), 3, rng), SetupError);

    const auto [x, g] = sample_protocol2_pair(ut_platform(4, 101), rng);
    CHECK_FALSE(is_identity(engel_commutator(x, g, 2)));
    CHECK_THROWS_AS(sample_protocol2_pair(ut_platform(2, 5), rng), SetupError);
}
