#include "nilforge/int_matrix.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>

namespace nilforge {

IntMatrix::IntMatrix(std::size_t n) : n_(n), a_(n * n, Integer(0)) {}

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

Integer IntMatrix::determinant() const
{
    if (n_ == 0)
        return 1;
    std::vector<Integer> m = a_;
    auto at = [&](std::size_t i, std::size_t j) -> Integer& { return m[i * n_ + j]; };
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n_; ++k) {
        if (at(k, k) == 0) {
            std::size_t swap = k + 1;
            while (swap < n_ && at(swap, k) == 0)
                ++swap;
            if (swap == n_)
                return 0;
            for (std::size_t j = 0; j < n_; ++j)
                std::swap(at(k, j), at(swap, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n_; ++i) {
            for (std::size_t j = k + 1; j < n_; ++j) {
                Integer t = at(i, j) * at(k, k) - at(i, k) * at(k, j);
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                at(i, j) = t;
            }
        }
        prev = at(k, k);
    }
    return sign * at(n_ - 1, n_ - 1);
}

std::vector<std::int64_t> IntMatrix::mod(std::int64_t p) const
{
    std::vector<std::int64_t> out(a_.size());
    Integer pp(p);
    for (std::size_t i = 0; i < a_.size(); ++i) {
        Integer r;
        mpz_fdiv_r(r.get_mpz_t(), a_[i].get_mpz_t(), pp.get_mpz_t());
        out[i] = r.get_si();
    }
    return out;
}

IntMatrix IntMatrix::operator*(const IntMatrix& other) const
{
    if (n_ != other.n_)
        throw std::invalid_argument("matrix dimension mismatch");
    IntMatrix out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k)
            if ((*this)(i, k) != 0)
                for (std::size_t j = 0; j < n_; ++j)
                    out(i, j) += (*this)(i, k) * other(k, j);
    return out;
}

std::string IntMatrix::to_string() const
{
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < n_; ++i) {
        os << (i ? "; " : "");
        for (std::size_t j = 0; j < n_; ++j)
            os << (j ? " " : "") << (*this)(i, j);
    }
    os << "]";
    return os.str();
}

} // namespace nilforge
