#include "nilkex/ut_matrix.hpp"

#include <stdexcept>

#include "nilkex/errors.hpp"
#include "nilkex/numeric.hpp"

namespace nilkex {

UTMatrix::UTMatrix(unsigned dim, Modulus mod) : dim_(dim), mod_(mod) {
    if (dim < 2) throw std::invalid_argument("UTMatrix: dim must be at least 2");
    entries_.reserve(static_cast<std::size_t>(dim) * dim);
    for (unsigned i = 0; i < dim; ++i)
        for (unsigned j = 0; j < dim; ++j)
            entries_.emplace_back(i == j ? 1 : 0, mod);
}

UTMatrix::UTMatrix(unsigned dim, Modulus mod, const std::vector<std::uint64_t>& entries)
    : dim_(dim), mod_(mod) {
    if (dim < 2) throw std::invalid_argument("UTMatrix: dim must be at least 2");
    if (entries.size() != static_cast<std::size_t>(dim) * dim)
        throw std::invalid_argument("UTMatrix: entry count must be dim*dim");
    entries_.reserve(entries.size());
    for (std::uint64_t v : entries) entries_.emplace_back(v, mod);
    for (unsigned i = 0; i < dim; ++i) {
        if (at(i, i) != 1)
            throw std::invalid_argument("UTMatrix: diagonal entries must be 1");
        for (unsigned j = 0; j < i; ++j)
            if (at(i, j) != 0)
                throw std::invalid_argument("UTMatrix: entries below the diagonal must be 0");
    }
}

UTMatrix UTMatrix::transvection(unsigned dim, Modulus mod, unsigned i, unsigned j,
                                std::uint64_t c) {
    if (i >= j || j >= dim)
        throw std::invalid_argument("UTMatrix::transvection: requires i < j < dim");
    UTMatrix m(dim, mod);
    m.entries_[i * dim + j] = Residue(c, mod);
    return m;
}

void UTMatrix::check_same_platform(const UTMatrix& o) const {
    if (dim_ != o.dim_ || !(mod_ == o.mod_))
        throw PlatformMismatchError("UTMatrix: elements from different platforms");
}

UTMatrix UTMatrix::multiply(const UTMatrix& other) const {
    check_same_platform(other);
    UTMatrix out(dim_, mod_);
    for (unsigned i = 0; i < dim_; ++i) {
        for (unsigned j = i + 1; j < dim_; ++j) {
            Residue acc(0, mod_);
            for (unsigned k = i; k <= j; ++k)
                acc = acc + entries_[i * dim_ + k] * other.entries_[k * dim_ + j];
            out.entries_[i * dim_ + j] = acc;
        }
    }
    return out;
}

UTMatrix UTMatrix::inverse() const {
    // (I + N)^-1 = sum_{k=0}^{dim-1} (-N)^k, N strictly upper so N^dim = 0.
    const std::uint64_t q = mod_.value();
    const std::size_t n = static_cast<std::size_t>(dim_) * dim_;
    std::vector<std::uint64_t> neg_n(n, 0), term(n, 0), acc(n, 0);
    for (unsigned i = 0; i < dim_; ++i) {
        term[i * dim_ + i] = 1;
        for (unsigned j = i + 1; j < dim_; ++j) {
            const std::uint64_t v = at(i, j);
            neg_n[i * dim_ + j] = v == 0 ? 0 : q - v;
        }
    }
    for (unsigned k = 0; k < dim_; ++k) {
        for (std::size_t idx = 0; idx < n; ++idx)
            acc[idx] = addmod(acc[idx], term[idx], q);
        std::vector<std::uint64_t> next(n, 0);
        for (unsigned i = 0; i < dim_; ++i)
            for (unsigned j = i + 1; j < dim_; ++j) {
                std::uint64_t s = 0;
                for (unsigned l = i; l <= j; ++l)
                    s = addmod(s, mulmod(term[i * dim_ + l], neg_n[l * dim_ + j], q), q);
                next[i * dim_ + j] = s;
            }
        term = std::move(next);
    }
    return UTMatrix(dim_, mod_, acc);
}

bool UTMatrix::is_identity() const {
    for (unsigned i = 0; i < dim_; ++i)
        for (unsigned j = i + 1; j < dim_; ++j)
            if (at(i, j) != 0) return false;
    return true;
}

unsigned UTMatrix::first_band() const {
    for (unsigned d = 1; d < dim_; ++d)
        for (unsigned i = 0; i + d < dim_; ++i)
            if (at(i, i + d) != 0) return d;
    return 0;
}

std::vector<std::uint64_t> UTMatrix::band(unsigned d) const {
    if (d == 0 || d >= dim_) throw std::invalid_argument("UTMatrix::band: bad band index");
    std::vector<std::uint64_t> out;
    out.reserve(dim_ - d);
    for (unsigned i = 0; i + d < dim_; ++i) out.push_back(at(i, i + d));
    return out;
}

} // namespace nilkex
