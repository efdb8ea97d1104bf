#pragma once

#include <cstdint>
#include <vector>

#include "nilkex/residue.hpp"

namespace nilkex {

/// An m x m upper unitriangular matrix over Z_q: ones on the diagonal, zeros
/// below it. These form a group under multiplication, nilpotent of class m-1.
/// Instances are immutable values; all operations return fresh matrices.
class UTMatrix {
public:
    /// Identity matrix.
    UTMatrix(unsigned dim, Modulus mod);

    /// From a full m*m row-major entry list. Entries are reduced mod q and the
    /// result must be unitriangular.
    UTMatrix(unsigned dim, Modulus mod, const std::vector<std::uint64_t>& entries);

    static UTMatrix identity(unsigned dim, Modulus mod) { return UTMatrix(dim, mod); }

    /// I + c*E(i,j) for i < j, the elementary transvection.
    static UTMatrix transvection(unsigned dim, Modulus mod, unsigned i, unsigned j,
                                 std::uint64_t c);

    unsigned dim() const noexcept { return dim_; }
    const Modulus& modulus() const noexcept { return mod_; }

    /// Canonical value of entry (i, j).
    std::uint64_t at(unsigned i, unsigned j) const { return entries_[i * dim_ + j].value(); }

    UTMatrix multiply(const UTMatrix& other) const;
    UTMatrix inverse() const;

    bool is_identity() const;

    /// Smallest d >= 1 such that the d-th superdiagonal has a nonzero entry;
    /// 0 for the identity. Entries on this band scale linearly under powering.
    unsigned first_band() const;

    /// The entries (i, i+d) for i = 0..dim-1-d.
    std::vector<std::uint64_t> band(unsigned d) const;

    friend bool operator==(const UTMatrix&, const UTMatrix&) = default;

private:
    void check_same_platform(const UTMatrix& o) const;

    unsigned dim_;
    Modulus mod_;
    std::vector<Residue> entries_; // row-major, dim_ * dim_
};

} // namespace nilkex
