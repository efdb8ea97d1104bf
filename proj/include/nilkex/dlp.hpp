#pragma once

#include <cstdint>
#include <optional>

#include "nilkex/group.hpp"

namespace nilkex {

/// Find the least a with base^a = target and 0 <= a <= order_bound.
struct DlpInstance {
    GroupElement base;
    GroupElement target;
    std::uint64_t order_bound = 0;
};

struct DlpResult {
    /// Least solution in range; empty when target is not a power of base
    /// within the bound.
    std::optional<std::uint64_t> exponent;
    std::uint64_t group_operations = 0;
    std::uint64_t table_entries = 0;
    std::uint64_t table_bytes = 0;
};

/// Sequential scan a = 0, 1, ..., order_bound. Linear time, no memory.
DlpResult dlp_bruteforce(const DlpInstance& instance);

/// Baby-step giant-step: about 2*sqrt(order_bound) group operations and a
/// table of ceil(sqrt(order_bound + 1)) serialized baby steps.
DlpResult dlp_bsgs(const DlpInstance& instance);

} // namespace nilkex
