#pragma once

#include "nilforge/integer.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nilforge {

/// Square integer matrix.
class IntMatrix {
public:
    explicit IntMatrix(std::size_t n);
    static IntMatrix identity(std::size_t n);

    std::size_t dimension() const { return n_; }
    Integer& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    // Bareiss fraction-free elimination.
    Integer determinant() const;
    // Entries reduced into [0, p).
    std::vector<std::int64_t> mod(std::int64_t p) const;

    IntMatrix operator*(const IntMatrix& other) const;
    bool operator==(const IntMatrix& other) const = default;

    std::string to_string() const;

private:
    std::size_t n_;
    std::vector<Integer> a_;
};

} // namespace nilforge
