// End-to-end acceptance checks. Each test case prints exactly one
// [PASS]/[FAIL] line with its runtime; REQUIRE is used throughout so a
// failure unwinds through the banner.

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "nilkex/attack.hpp"
#include "nilkex/certify.hpp"
#include "nilkex/commutator.hpp"
#include "nilkex/dlp.hpp"
#include "nilkex/group.hpp"
#include "nilkex/numeric.hpp"
#include "nilkex/protocol.hpp"
#include "nilkex/rng.hpp"
#include "test_util.hpp"

using namespace nilkex;
using namespace nilkex::test;

namespace {

struct Banner {
    std::string label;
    double budget_seconds;
    int pending = std::uncaught_exceptions();
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    Banner(std::string l, double budget) : label(std::move(l)), budget_seconds(budget) {}

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }

    ~Banner() {
        const bool failed = std::uncaught_exceptions() > pending;
        std::printf("[%s] %s (%.2f s, budget %.0f s)\n", failed ? "FAIL" : "PASS",
                    label.c_str(), elapsed(), budget_seconds);
        std::fflush(stdout);
    }
};

std::int64_t signed_exponent(Rng& rng, std::uint64_t q) {
    const auto a = static_cast<std::int64_t>(rng.nonzero_below(q));
    return rng.coin() ? -a : a;
}

std::uint64_t product_mod(const std::vector<std::uint64_t>& xs, std::uint64_t q) {
    std::uint64_t p = 1;
    for (std::uint64_t x : xs) p = mulmod(p, x % q, q);
    return p;
}

std::vector<std::uint64_t> draw_exponents(Rng& rng, unsigned users, std::uint64_t q) {
    std::vector<std::uint64_t> out;
    for (unsigned j = 0; j < users; ++j) out.push_back(rng.nonzero_below(q));
    return out;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + NILKEX_CLI_PATH + "\" " + args +
                            " >/dev/null 2>/dev/null";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::vector<std::uint8_t> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("acceptance 1: commutator identity suite") {
    Banner banner("criterion 1: expansion, sliding, slot, and product-form identities on "
                  "500 instances per platform",
                  10.0);
    const std::vector<PlatformDescriptor> platforms = {
        ut_platform(3, 5), ut_platform(4, 7), ut_platform(4, 101), ut_platform(5, 101),
        wreath_platform(3)};
    Rng rng(0xacce0001);

    for (const auto& platform : platforms) {
        const unsigned cls = platform.nilpotency_class();
        const std::uint64_t q = platform.modulus().value();
        REQUIRE(cls >= 2);

        for (int i = 0; i < 500; ++i) {
            const GroupElement x = random_element(platform, rng);
            const GroupElement y = random_element(platform, rng);
            const GroupElement z = random_element(platform, rng);
            REQUIRE(verify_property_1(x, y, z));

            std::vector<GroupElement> args;
            for (unsigned k = 0; k < cls; ++k) args.push_back(random_element(platform, rng));
            REQUIRE(verify_lemma1(args, signed_exponent(rng, q)));
            REQUIRE(verify_proposition(args, 1 + rng.below(cls), signed_exponent(rng, q)));

            // Product form: powering every slot multiplies the exponents.
            std::vector<GroupElement> powered;
            std::uint64_t prod = 1;
            for (unsigned k = 0; k < cls; ++k) {
                const std::uint64_t a = rng.nonzero_below(q);
                powered.push_back(power(args[k], static_cast<std::int64_t>(a)));
                prod = mulmod(prod, a, q);
            }
            REQUIRE(simple_commutator(powered) ==
                    power(simple_commutator(args), static_cast<std::int64_t>(prod)));
        }
    }
    REQUIRE(banner.elapsed() < banner.budget_seconds);
}

TEST_CASE("acceptance 2: exhaustive wreath certification") {
    Banner banner("criterion 2: Z_3 wr Z_3 has class exactly 3 and a 2-Engel failure witness",
                  30.0);
    const auto platform = wreath_platform(3);

    const ClassCertification certification = certify_class(platform);
    REQUIRE(std::holds_alternative<ClassCertificate>(certification));
    const auto& cert = std::get<ClassCertificate>(certification);
    REQUIRE(cert.exhaustive);
    REQUIRE(cert.nilpotency_class == 3);
    REQUIRE(cert.gamma_orders == std::vector<std::uint64_t>{81, 9, 3, 1});
    REQUIRE(cert.gamma_orders[2] != 1); // third term of the series is nontrivial
    REQUIRE(cert.gamma_orders[3] == 1); // fourth term collapses
    REQUIRE(cert.class_witness.size() == 3);
    REQUIRE(!is_identity(simple_commutator(cert.class_witness)));

    const EngelCertificate engel = certify_engel(platform, 2);
    REQUIRE(engel.exhaustive);
    REQUIRE(!engel.is_k_engel);
    REQUIRE(engel.witness.has_value());
    REQUIRE(!is_identity(engel_commutator(engel.witness->first, engel.witness->second, 2)));
    REQUIRE(banner.elapsed() < banner.budget_seconds);
}

TEST_CASE("acceptance 3: broadcast-per-base protocol end to end") {
    Banner banner("criterion 3: 50 sessions at degrees 2 and 3 derive the closed-form key "
                  "for all users",
                  5.0);
    Rng rng(0xacce0003);

    for (unsigned n : {2u, 3u}) {
        const auto platform = ut_platform(n + 1, 101);
        for (int s = 0; s < 50; ++s) {
            SessionParams params{ProtocolId::protocol1, platform};
            params.degree = n;
            params.bases = sample_protocol1_bases(platform, n, rng);
            const std::vector<std::uint64_t> exponents =
                draw_exponents(rng, params.users(), 101);
            const SessionResult result = run_session(params, exponents);

            REQUIRE(result.keys.size() == n + 1);
            for (const auto& key : result.keys) {
                REQUIRE(key.bytes == result.keys[0].bytes);
            }
            REQUIRE(!is_identity(result.keys[0].element));
            const GroupElement expected =
                power(simple_commutator(params.bases),
                      static_cast<std::int64_t>(product_mod(exponents, 101)));
            REQUIRE(result.keys[0].bytes == serialize(expected));

            if (n == 3) {
                // Four users share a key built from the trilinear map.
                REQUIRE(params.users() == 4);
                std::vector<GroupElement> powered;
                for (unsigned k = 0; k < 3; ++k) {
                    powered.push_back(power(params.bases[k],
                                            static_cast<std::int64_t>(exponents[k])));
                }
                const std::vector<std::uint64_t> head(exponents.begin(),
                                                      exponents.begin() + 3);
                REQUIRE(multilinear_e(powered) ==
                        power(multilinear_e(params.bases),
                              static_cast<std::int64_t>(product_mod(head, 101))));
            }
        }
    }
    REQUIRE(banner.elapsed() < banner.budget_seconds);
}

TEST_CASE("acceptance 4: single-broadcast protocol end to end") {
    Banner banner("criterion 4: 50 sessions on the wreath and matrix platforms match the "
                  "iterated-commutator key",
                  5.0);
    Rng rng(0xacce0004);

    struct Shape {
        PlatformDescriptor platform;
        unsigned degree;
    };
    const std::vector<Shape> shapes = {{wreath_platform(3), 2}, {ut_platform(5, 101), 3}};

    for (const auto& shape : shapes) {
        const std::uint64_t q = shape.platform.modulus().value();
        for (int s = 0; s < 50; ++s) {
            SessionParams params{ProtocolId::protocol2, shape.platform};
            params.degree = shape.degree;
            auto [x, g] = sample_protocol2_pair(shape.platform, rng);
            params.bases = {x, g};
            const std::vector<std::uint64_t> exponents =
                draw_exponents(rng, params.users(), q);
            const SessionResult result = run_session(params, exponents);

            for (const auto& key : result.keys) {
                REQUIRE(key.bytes == result.keys[0].bytes);
            }
            REQUIRE(!is_identity(result.keys[0].element));
            const GroupElement expected =
                power(engel_commutator(x, g, shape.degree),
                      static_cast<std::int64_t>(product_mod(exponents, q)));
            REQUIRE(result.keys[0].bytes == serialize(expected));
        }
    }
    REQUIRE(banner.elapsed() < banner.budget_seconds);
}

TEST_CASE("acceptance 5: transcript-only attack recovers every key") {
    Banner banner("criterion 5: 100/100 key recoveries per protocol at a small and a "
                  "31-bit modulus",
                  10.0);
    Rng rng(0xacce0005);

    for (const std::uint64_t q : {std::uint64_t{101}, std::uint64_t{2147483647}}) {
        const auto p1 = ut_platform(4, q);
        for (int s = 0; s < 100; ++s) {
            SessionParams params{ProtocolId::protocol1, p1};
            params.degree = 3;
            params.bases = sample_protocol1_bases(p1, 3, rng);
            const std::vector<std::uint64_t> exponents = draw_exponents(rng, 4, q);
            const SessionResult honest = run_session(params, exponents);

            const AttackReport report = break_protocol1_ut(honest.transcript);
            REQUIRE(report.success);
            REQUIRE(report.key_bytes == honest.keys[0].bytes);
            REQUIRE(report.exponents == exponents);
        }

        const auto p2 = ut_platform(5, q);
        for (int s = 0; s < 100; ++s) {
            SessionParams params{ProtocolId::protocol2, p2};
            params.degree = 3;
            auto [x, g] = sample_protocol2_pair(p2, rng);
            params.bases = {x, g};
            const std::vector<std::uint64_t> exponents = draw_exponents(rng, 4, q);
            const SessionResult honest = run_session(params, exponents);

            const AttackReport report = break_protocol2_ut(honest.transcript);
            REQUIRE(report.success);
            REQUIRE(report.key_bytes == honest.keys[0].bytes);
            REQUIRE(report.exponents == exponents);
        }
    }
    REQUIRE(banner.elapsed() < banner.budget_seconds);
}

TEST_CASE("acceptance 6: discrete log solver cross-check") {
    Banner banner("criterion 6: 200 solver agreements plus a 31-bit instance within the "
                  "operation budget",
                  30.0);
    Rng rng(0xacce0006);
    const std::vector<PlatformDescriptor> platforms = {
        ut_platform(3, 5), ut_platform(3, 101), wreath_platform(3)};

    for (int trial = 0; trial < 200; ++trial) {
        const auto& platform = platforms[static_cast<std::size_t>(trial) % platforms.size()];
        const GroupElement base = random_element(platform, rng);
        const std::uint64_t bound = 1 + rng.below(1ULL << 16);
        const std::uint64_t a = rng.below(bound + 1);
        const DlpInstance inst{base, power(base, static_cast<std::int64_t>(a)), bound};

        const DlpResult brute = dlp_bruteforce(inst);
        const DlpResult bsgs = dlp_bsgs(inst);
        REQUIRE(brute.exponent.has_value());
        REQUIRE(bsgs.exponent.has_value());
        REQUIRE(*brute.exponent == *bsgs.exponent);
        REQUIRE(power(base, static_cast<std::int64_t>(*bsgs.exponent)) == inst.target);
    }

    const std::uint64_t q = 2147483647;
    const std::uint64_t bound = 1ULL << 31;
    const std::uint64_t a = 1977326743;
    const DlpInstance big{tv(3, q, 0, 2, 1), tv(3, q, 0, 2, a), bound};
    const DlpResult res = dlp_bsgs(big);
    REQUIRE(res.exponent == a);
    REQUIRE(res.group_operations <=
            static_cast<std::uint64_t>(3.0 * std::sqrt(static_cast<double>(bound))));
    REQUIRE(banner.elapsed() < banner.budget_seconds);
}

TEST_CASE("acceptance 7: wire determinism") {
    Banner banner("criterion 7: 1000 serialization round trips per platform and "
                  "seed-reproducible transcript files",
                  30.0);
    Rng rng(0xacce0007);
    const std::vector<PlatformDescriptor> platforms = {
        ut_platform(3, 5),   ut_platform(4, 7), ut_platform(4, 101),
        ut_platform(5, 101), wreath_platform(3), ut_platform(4, 2147483647)};

    for (const auto& platform : platforms) {
        for (int i = 0; i < 1000; ++i) {
            const GroupElement e = random_element(platform, rng);
            REQUIRE(deserialize(serialize(e), platform) == e);
        }
    }

    const std::string f1 = "/tmp/nilkex_accept_" + std::to_string(::getpid()) + "_a.bin";
    const std::string f2 = "/tmp/nilkex_accept_" + std::to_string(::getpid()) + "_b.bin";
    REQUIRE(run_cli("kex --platform ut:4:101 --seed 2024 --output " + f1) == 0);
    REQUIRE(run_cli("kex --platform ut:4:101 --seed 2024 --output " + f2) == 0);
    const auto bytes1 = slurp(f1);
    REQUIRE(!bytes1.empty());
    REQUIRE(bytes1 == slurp(f2));
    REQUIRE(banner.elapsed() < banner.budget_seconds);
}
