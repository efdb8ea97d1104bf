#include "nilkex/dlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "nilkex/errors.hpp"

namespace nilkex {

namespace {

void check_instance(const DlpInstance& inst) {
    if (!(platform_of(inst.base) == platform_of(inst.target))) {
        throw PlatformMismatchError("dlp: base and target are on different platforms");
    }
    if (inst.order_bound >= (1ULL << 62)) {
        throw std::invalid_argument("dlp: order bound too large");
    }
}

std::string byte_key(const GroupElement& e) {
    const std::vector<std::uint8_t> bytes = serialize(e);
    return std::string(bytes.begin(), bytes.end());
}

/// Smallest m with m*m >= n.
std::uint64_t isqrt_ceil(std::uint64_t n) {
    if (n == 0) {
        return 0;
    }
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r < n) {
        ++r;
    }
    while (r > 0 && (r - 1) * (r - 1) >= n) {
        --r;
    }
    return r;
}

} // namespace

DlpResult dlp_bruteforce(const DlpInstance& inst) {
    check_instance(inst);
    DlpResult res;
    GroupElement acc = group_identity(platform_of(inst.base));
    for (std::uint64_t a = 0;; ++a) {
        if (acc == inst.target) {
            // Recompute independently; iteration and powering must agree.
            if (power_counted(inst.base, static_cast<std::int64_t>(a),
                              res.group_operations) != inst.target) {
                throw Error("internal error: inconsistent discrete log solution");
            }
            res.exponent = a;
            return res;
        }
        if (a == inst.order_bound) {
            return res;
        }
        acc = multiply(acc, inst.base);
        ++res.group_operations;
    }
}

DlpResult dlp_bsgs(const DlpInstance& inst) {
    check_instance(inst);
    DlpResult res;
    const std::uint64_t bound = inst.order_bound;
    const std::uint64_t m = isqrt_ceil(bound + 1);

    // Baby steps: base^j for j < m, keyed by canonical bytes, least j kept.
    std::unordered_map<std::string, std::uint64_t> table;
    table.reserve(m);
    {
        GroupElement cur = group_identity(platform_of(inst.base));
        for (std::uint64_t j = 0; j < m; ++j) {
            table.emplace(byte_key(cur), j);
            if (j + 1 < m) {
                cur = multiply(cur, inst.base);
                ++res.group_operations;
            }
        }
    }
    res.table_entries = table.size();
    res.table_bytes =
        table.size() * (element_byte_size(platform_of(inst.base)) + sizeof(std::uint64_t));

    // Giant steps: target * base^{-im} against the table, i ascending. With
    // least-j entries this yields the least solution overall.
    const GroupElement giant =
        inverse(power_counted(inst.base, static_cast<std::int64_t>(m),
                              res.group_operations));
    ++res.group_operations;
    GroupElement y = inst.target;
    for (std::uint64_t i = 0; i * m <= bound; ++i) {
        const auto it = table.find(byte_key(y));
        if (it != table.end()) {
            const std::uint64_t a = i * m + it->second;
            if (a > bound) {
                break; // matches only grow with i; nothing in range remains
            }
            if (power_counted(inst.base, static_cast<std::int64_t>(a),
                              res.group_operations) != inst.target) {
                throw Error("internal error: inconsistent discrete log solution");
            }
            res.exponent = a;
            return res;
        }
        if ((i + 1) * m <= bound) {
            y = multiply(y, giant);
            ++res.group_operations;
        }
    }
    return res;
}

} // namespace nilkex
