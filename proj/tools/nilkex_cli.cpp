#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nilkex/attack.hpp"
#include "nilkex/certify.hpp"
#include "nilkex/commutator.hpp"
#include "nilkex/errors.hpp"
#include "nilkex/group.hpp"
#include "nilkex/protocol.hpp"
#include "nilkex/rng.hpp"

namespace {

using namespace nilkex;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSetup = 3;
constexpr int kExitUnsupported = 4;
constexpr int kExitDecode = 5;

struct VerifyOptions {
    std::string platform = "ut:4:101";
    std::uint64_t samples = 500;
    std::uint64_t seed = 1;
    bool exhaustive = false;
    std::string format = "text";
};

struct KexOptions {
    int protocol = 1;
    std::string platform = "ut:4:101";
    unsigned degree = 0; // 0 picks the largest degree the platform supports
    std::uint64_t seed = 1;
    std::string output;
    std::string format = "text";
};

struct AttackOptions {
    std::string input;
    std::string format = "text";
};

struct CertifyOptions {
    std::string platform = "wreath:3";
    std::uint64_t samples = 500;
    std::uint64_t seed = 1;
    bool exhaustive = false;
    std::string format = "text";
};

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DecodeError("cannot open input file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw DecodeError("cannot read input file: " + path);
    return bytes;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DecodeError("cannot open output file: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DecodeError("cannot write output file: " + path);
}

std::int64_t random_exponent(Rng& rng, std::uint64_t q) {
    const auto a = static_cast<std::int64_t>(rng.nonzero_below(q));
    return rng.coin() ? -a : a;
}

int run_verify(const VerifyOptions& opts) {
    const PlatformDescriptor platform = parse_platform_spec(opts.platform);
    const unsigned cls = platform.nilpotency_class();
    const std::uint64_t q = platform.modulus().value();
    Rng rng(opts.seed);

    std::uint64_t expansion_failures = 0;
    std::uint64_t sliding_failures = 0;
    std::uint64_t slot_failures = 0;
    std::uint64_t sliding_checked = 0;

    for (std::uint64_t s = 0; s < opts.samples; ++s) {
        const GroupElement x = random_element(platform, rng);
        const GroupElement y = random_element(platform, rng);
        const GroupElement z = random_element(platform, rng);
        if (!verify_property_1(x, y, z)) ++expansion_failures;

        if (cls < 2) continue;
        std::vector<GroupElement> args;
        for (unsigned i = 0; i < cls; ++i) args.push_back(random_element(platform, rng));
        if (!verify_lemma1(args, random_exponent(rng, q))) ++sliding_failures;
        const std::size_t slot = 1 + rng.below(cls);
        if (!verify_proposition(args, slot, random_exponent(rng, q))) ++slot_failures;
        ++sliding_checked;
    }

    const bool identities_ok =
        expansion_failures == 0 && sliding_failures == 0 && slot_failures == 0;

    std::optional<ClassCertification> certification;
    if (opts.exhaustive) certification = certify_class(platform);
    const bool certified =
        !certification || std::holds_alternative<ClassCertificate>(*certification);

    if (opts.format == "json") {
        nlohmann::json j;
        j["platform"] = platform.spec_string();
        j["samples"] = opts.samples;
        j["commutator_expansion"] = {{"checked", opts.samples},
                                     {"failures", expansion_failures}};
        j["exponent_sliding"] = {{"checked", sliding_checked},
                                 {"failures", sliding_failures}};
        j["single_slot"] = {{"checked", sliding_checked}, {"failures", slot_failures}};
        if (certification) j["class_certificate"] = to_json(*certification);
        j["pass"] = identities_ok && certified;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "platform: " << platform.spec_string() << "\n";
        std::cout << "commutator expansion identities: "
                  << (opts.samples - expansion_failures) << "/" << opts.samples << "\n";
        if (cls >= 2) {
            std::cout << "exponent sliding identities: "
                      << (sliding_checked - sliding_failures) << "/" << sliding_checked
                      << "\n";
            std::cout << "single-slot linearity: " << (sliding_checked - slot_failures)
                      << "/" << sliding_checked << "\n";
        } else {
            std::cout << "exponent sliding identities: skipped (class 1)\n";
        }
        if (certification) {
            if (certified) {
                const auto& cert = std::get<ClassCertificate>(*certification);
                std::cout << "class certificate: class " << cert.nilpotency_class
                          << ", exhaustive (" << cert.checked
                          << " commutator evaluations)\n";
            } else {
                const auto& failure = std::get<CertificationFailure>(*certification);
                std::cout << "class certificate: FAILED (" << failure.detail << ")\n";
            }
        }
        std::cout << "result: " << (identities_ok && certified ? "pass" : "FAIL") << "\n";
    }
    return identities_ok && certified ? kExitOk : kExitCheckFailed;
}

int run_kex(const KexOptions& opts) {
    const PlatformDescriptor platform = parse_platform_spec(opts.platform);
    const unsigned cls = platform.nilpotency_class();
    const auto protocol =
        opts.protocol == 1 ? ProtocolId::protocol1 : ProtocolId::protocol2;

    unsigned degree = opts.degree;
    if (degree == 0) {
        if (protocol == ProtocolId::protocol1) {
            degree = cls;
        } else if (cls < 2) {
            throw SetupError("platform of class 1 cannot host the single-broadcast protocol");
        } else {
            degree = cls - 1;
        }
    }

    SessionParams params{protocol, platform};
    params.degree = degree;
    params.rng_seed = Rng::derive(opts.seed, 2);
    Rng base_rng(Rng::derive(opts.seed, 1));
    if (protocol == ProtocolId::protocol1) {
        params.bases = sample_protocol1_bases(platform, degree, base_rng);
    } else {
        auto [x, g] = sample_protocol2_pair(platform, base_rng);
        params.bases = {x, g};
    }

    const SessionResult result = run_session(params);
    for (const auto& key : result.keys) {
        if (key.bytes != result.keys[0].bytes) {
            throw Error("internal error: derived keys disagree");
        }
    }
    const std::vector<std::uint8_t> wire = encode_transcript(result.transcript);
    if (!opts.output.empty()) write_file(opts.output, wire);

    if (opts.format == "json") {
        nlohmann::json j;
        j["protocol"] = opts.protocol;
        j["platform"] = platform.spec_string();
        j["degree"] = degree;
        j["users"] = params.users();
        j["seed"] = opts.seed;
        j["transcript_bytes"] = wire.size();
        j["key"] = to_hex(result.keys[0].bytes);
        j["session"] = session_json(result.transcript, result.keys);
        if (!opts.output.empty()) j["output"] = opts.output;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "protocol: " << opts.protocol << "\n";
        std::cout << "platform: " << platform.spec_string() << "\n";
        std::cout << "degree: " << degree << "\n";
        std::cout << "users: " << params.users() << "\n";
        std::cout << "seed: " << opts.seed << "\n";
        std::cout << "transcript bytes: " << wire.size() << "\n";
        for (std::size_t j = 0; j < result.keys.size(); ++j) {
            std::cout << "user " << (j + 1) << " key: " << to_hex(result.keys[j].bytes)
                      << "\n";
        }
        std::cout << "shared key: " << to_hex(result.keys[0].bytes) << "\n";
        if (!opts.output.empty()) std::cout << "transcript written: " << opts.output << "\n";
    }
    return kExitOk;
}

int run_attack(const AttackOptions& opts) {
    const std::vector<std::uint8_t> bytes = read_file(opts.input);
    const Transcript transcript = parse_transcript(bytes);
    const AttackReport report = nilkex::run_attack(transcript);

    if (opts.format == "json") {
        std::cout << to_json(report).dump(2) << "\n";
    } else {
        std::cout << "transcript: " << report.transcript_id << "\n";
        std::cout << "protocol: " << static_cast<int>(report.protocol) << "\n";
        std::cout << "platform: " << report.platform << "\n";
        if (report.success) {
            std::cout << "recovered exponents:";
            for (std::uint64_t a : report.exponents) std::cout << " " << a;
            std::cout << "\n";
            std::cout << "recovered key: " << to_hex(report.key_bytes) << "\n";
            std::cout << "group operations: " << report.group_operations << "\n";
            std::cout << "result: success\n";
        } else {
            if (!report.note.empty()) std::cout << "note: " << report.note << "\n";
            if (report.error == AttackReport::ErrorKind::decode) {
                std::cout << "result: decode error\n";
            } else if (report.invalid_session) {
                std::cout << "result: invalid session\n";
            } else {
                std::cout << "result: failure\n";
            }
        }
    }
    if (report.success) return kExitOk;
    return report.error == AttackReport::ErrorKind::decode ? kExitDecode : kExitCheckFailed;
}

int run_certify(const CertifyOptions& opts) {
    const PlatformDescriptor platform = parse_platform_spec(opts.platform);
    std::optional<SampleSpec> sampling;
    if (!opts.exhaustive) sampling = SampleSpec{opts.samples, opts.seed};

    const ClassCertification classification = certify_class(platform, sampling);
    const bool class_ok = std::holds_alternative<ClassCertificate>(classification);

    // The family claims: not k-Engel for the recorded k, and the nilpotency
    // class c always gives c-Engel.
    std::vector<std::pair<EngelCertificate, bool>> engel;
    if (const auto k = platform.not_engel()) {
        engel.emplace_back(certify_engel(platform, *k, sampling), false);
    }
    engel.emplace_back(certify_engel(platform, platform.nilpotency_class(), sampling), true);

    bool engel_ok = true;
    for (const auto& [cert, expected] : engel) {
        if (cert.is_k_engel != expected) engel_ok = false;
    }

    if (opts.format == "json") {
        nlohmann::json j;
        j["platform"] = platform_json(platform);
        j["class"] = to_json(classification);
        j["engel"] = nlohmann::json::array();
        for (const auto& [cert, expected] : engel) {
            nlohmann::json e = to_json(cert);
            e["expected_k_engel"] = expected;
            j["engel"].push_back(std::move(e));
        }
        j["certified"] = class_ok && engel_ok;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "platform: " << platform.spec_string() << "\n";
        if (class_ok) {
            const auto& cert = std::get<ClassCertificate>(classification);
            std::cout << "nilpotency class: " << cert.nilpotency_class
                      << (cert.exhaustive ? " (exhaustive)" : " (sampled)") << "\n";
            if (!cert.gamma_orders.empty()) {
                std::cout << "lower central series orders:";
                for (std::uint64_t n : cert.gamma_orders) std::cout << " " << n;
                std::cout << "\n";
            }
        } else {
            const auto& failure = std::get<CertificationFailure>(classification);
            std::cout << "class certification FAILED: " << failure.detail << "\n";
        }
        for (const auto& [cert, expected] : engel) {
            std::cout << "engel degree " << cert.k << ": "
                      << (cert.is_k_engel ? "holds" : "fails")
                      << " (expected to " << (expected ? "hold" : "fail") << ", checked "
                      << cert.checked << " pairs)\n";
        }
        std::cout << "result: " << (class_ok && engel_ok ? "certified" : "NOT certified")
                  << "\n";
    }
    return class_ok && engel_ok ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"key exchange from commutator identities in nilpotent matrix and "
                 "wreath product groups"};
    app.require_subcommand(1);

    VerifyOptions verify_opts;
    auto* verify = app.add_subcommand(
        "verify", "Check the commutator identities the key exchange relies on");
    verify->add_option("--platform", verify_opts.platform, "Platform spec, ut:<m>:<q> or wreath:<p>")
        ->capture_default_str();
    verify->add_option("--samples", verify_opts.samples, "Random instances per identity")
        ->capture_default_str();
    verify->add_option("--seed", verify_opts.seed, "Randomness seed")->capture_default_str();
    verify->add_flag("--exhaustive", verify_opts.exhaustive,
                     "Also certify the nilpotency class by full enumeration (small platforms)");
    verify->add_option("--format", verify_opts.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    KexOptions kex_opts;
    auto* kex = app.add_subcommand("kex", "Run one honest key-exchange session");
    kex->add_option("--protocol", kex_opts.protocol, "1: broadcast per base, 2: single broadcast")
        ->check(CLI::IsMember({1, 2}))
        ->capture_default_str();
    kex->add_option("--platform", kex_opts.platform, "Platform spec, ut:<m>:<q> or wreath:<p>")
        ->capture_default_str();
    kex->add_option("--n", kex_opts.degree,
                    "Commutator degree (the session has n+1 users); 0 derives it from the platform")
        ->capture_default_str();
    kex->add_option("--seed", kex_opts.seed, "Seed for bases and private exponents")
        ->capture_default_str();
    kex->add_option("--output", kex_opts.output, "Write the wire transcript to this file");
    kex->add_option("--format", kex_opts.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    AttackOptions attack_opts;
    auto* attack = app.add_subcommand(
        "attack", "Recover exponents and the shared key from a recorded transcript");
    attack->add_option("--input", attack_opts.input, "Wire transcript file")->required();
    attack->add_option("--format", attack_opts.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    CertifyOptions certify_opts;
    auto* certify = app.add_subcommand(
        "certify", "Certify the nilpotency class and Engel claims of a platform");
    certify->add_option("--platform", certify_opts.platform, "Platform spec, ut:<m>:<q> or wreath:<p>")
        ->capture_default_str();
    certify->add_option("--samples", certify_opts.samples, "Sampling budget per claim")
        ->capture_default_str();
    certify->add_option("--seed", certify_opts.seed, "Randomness seed")->capture_default_str();
    certify->add_flag("--exhaustive", certify_opts.exhaustive,
                      "Enumerate the whole group instead of sampling (small platforms)");
    certify->add_option("--format", certify_opts.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (verify->parsed()) return run_verify(verify_opts);
        if (kex->parsed()) return run_kex(kex_opts);
        if (attack->parsed()) return run_attack(attack_opts);
        if (certify->parsed()) return run_certify(certify_opts);
    } catch (const SetupError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSetup;
    } catch (const UnsupportedPlatformError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnsupported;
    } catch (const DecodeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDecode;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}
