#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nilkex/protocol.hpp"
#include "nilkex/ut_matrix.hpp"

namespace nilkex {

enum class ExtractStatus : std::uint8_t {
    ok,            // unique exponent mod q recovered
    indeterminate, // base is the identity; every exponent fits
    not_a_power,   // target cannot be a power of the base
};

struct ExponentExtraction {
    ExtractStatus status = ExtractStatus::not_a_power;
    std::uint64_t exponent = 0; // mod q, meaningful when status == ok
};

/// Solves h = g^a for a mod q in constant time per entry: on the first
/// nonzero band of g powering acts linearly, so each nonzero band entry of g
/// determines a as a ratio. Entries must agree and h must vanish wherever the
/// band of g does, else the target is not a power.
ExponentExtraction extract_exponent_ut(const UTMatrix& g, const UTMatrix& h);

/// Outcome of a passive-adversary run against one transcript.
struct AttackReport {
    enum class ErrorKind : std::uint8_t { none, decode };

    std::string transcript_id; // fingerprint of the encoded transcript
    ProtocolId protocol = ProtocolId::protocol1;
    std::string platform;
    bool success = false;
    /// The transcript is structurally fine but could not have come from an
    /// honest session (trivial key commutator, exponent 0 mod q).
    bool invalid_session = false;
    ErrorKind error = ErrorKind::none;
    std::string note;
    std::vector<std::uint64_t> exponents; // recovered a_j mod q, per user
    std::vector<std::uint8_t> key_bytes;  // recovered shared key
    std::uint64_t group_operations = 0;   // verification + key reconstruction
};

/// Recovers every private exponent mod q from a broadcast-per-base transcript
/// on a unitriangular platform, verifies them against all observed elements,
/// and reconstructs the shared key. Throws UnsupportedPlatformError off the
/// matrix family; decode failures are reported, not thrown.
AttackReport break_protocol1_ut(const Transcript& transcript);

/// Same against a single-broadcast transcript: each user reveals g^{a_j}.
AttackReport break_protocol2_ut(const Transcript& transcript);

/// Dispatch on the transcript's protocol.
AttackReport run_attack(const Transcript& transcript);

nlohmann::json to_json(const AttackReport& report);

} // namespace nilkex
