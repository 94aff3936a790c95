#pragma once

#include "nilforge/basis.hpp"
#include "nilforge/integer.hpp"

#include <array>
#include <cstdlib>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace nilforge {

template <class Int>
using Exponents = std::array<Int, kMaxSymbols>;

namespace detail {

template <class Int>
struct Letter {
    std::size_t symbol;
    Int exponent;
};

inline std::int64_t abs_value(std::int64_t a) { return a < 0 ? -a : a; }
inline Integer abs_value(const Integer& a) { return abs(a); }

// Fixed-capacity stack for machine integers, heap vector otherwise.
template <class Int>
class LetterStack {
public:
    LetterStack()
    {
        if constexpr (!kInline)
            heap_.reserve(16);
    }
    bool empty() const
    {
        if constexpr (kInline)
            return size_ == 0;
        else
            return heap_.empty();
    }
    void push(std::size_t s, Int e)
    {
        if constexpr (kInline) {
            if (size_ == inline_.size())
                throw std::length_error("collector stack overflow");
            inline_[size_++] = {s, e};
        } else {
            heap_.push_back({s, std::move(e)});
        }
    }
    Letter<Int> pop()
    {
        if constexpr (kInline) {
            return inline_[--size_];
        } else {
            Letter<Int> top = std::move(heap_.back());
            heap_.pop_back();
            return top;
        }
    }

private:
    static constexpr bool kInline = std::is_trivially_copyable_v<Int>;
    std::array<Letter<Int>, (kInline ? 64 : 1)> inline_;
    std::size_t size_ = 0;
    std::vector<Letter<Int>> heap_;
};

} // namespace detail

/// Collection from the left over a NilpotentBasis of class <= 3.
///
/// The collected prefix is kept as an exponent vector. Multiplying it by a
/// letter g_k^n moves g_k^n past the tail g_{k+1}^{v_{k+1}}... by conjugating
/// the tail; the conjugated tail is pushed back as letters. Powers of the
/// inner automorphism are expanded in closed form, so the cost does not
/// depend on the size of the exponents.
template <class Int>
class Collector {
public:
    explicit Collector(const NilpotentBasis& basis) : basis_(basis) {}

    const NilpotentBasis& basis() const { return basis_; }

    // v <- v * g_sym^n
    void multiply_letter(Exponents<Int>& v, std::size_t sym, const Int& n) const
    {
        detail::LetterStack<Int> stack;
        stack.push(sym, n);
        drain(v, stack);
    }

    // v <- v * b, with b in normal form.
    void multiply(Exponents<Int>& v, const Exponents<Int>& b) const
    {
        const std::size_t n = basis_.size();
        for (std::size_t s = 0; s < n; ++s)
            if (b[s] != 0)
                multiply_letter(v, s, b[s]);
    }

    Exponents<Int> inverse(const Exponents<Int>& a) const
    {
        Exponents<Int> v{};
        for (std::size_t s = basis_.size(); s-- > 0;)
            if (a[s] != 0)
                multiply_letter(v, s, Int(-a[s]));
        return v;
    }

    Exponents<Int> power(Exponents<Int> a, Int n) const
    {
        if (n < 0) {
            a = inverse(a);
            n = -n;
        }
        Exponents<Int> result{};
        while (n > 0) {
            if (n % 2 != 0)
                multiply(result, a);
            n /= 2;
            if (n > 0) {
                Exponents<Int> sq = a;
                multiply(sq, a);
                a = sq;
            }
        }
        return result;
    }

private:
    static void add_scaled(Exponents<Int>& v, const RuleVector& r, const Int& factor, std::size_t from,
                           std::size_t to)
    {
        for (std::size_t s = from; s < to; ++s)
            if (r[s] != 0)
                v[s] += factor * r[s];
    }

    void drain(Exponents<Int>& v, detail::LetterStack<Int>& stack) const
    {
        const std::size_t n = basis_.size();
        // At most one letter per tail symbol plus one per (generator, middle) pair.
        std::array<detail::Letter<Int>, 3 * kMaxSymbols> out;
        while (!stack.empty()) {
            auto [k, e] = stack.pop();
            if (e == 0)
                continue;
            if (basis_.kind(k) != SymbolKind::generator) {
                // Everything after a non-generator is a non-generator, and
                // those commute with each other in class <= 3.
                v[k] += e;
                continue;
            }
            const bool neg = e < 0;
            const Int m = detail::abs_value(e);
            std::size_t count = 0;
            for (std::size_t j = k + 1; j < n; ++j) {
                if (v[j] == 0 || basis_.kind(j) == SymbolKind::central || basis_.commutes(j, k))
                    continue;
                Int vj = v[j];
                v[j] = 0;
                if (basis_.kind(j) == SymbolKind::middle) {
                    // (s^vj)^(g^e) = s^vj t^(e vj) with t = [s, g] central.
                    const RuleVector& rule = basis_.conjugate(j, k, neg);
                    Int factor = m * vj;
                    add_scaled(v, rule, factor, j + 1, n);
                    out[count++] = {j, vj};
                    continue;
                }
                // Generator g_j: conjugation by g_k^(+-1) sends g_j to g_j U W
                // and each middle s to s t_s. Then
                //   (g_j)^(g_k^(+-m)) = g_j U^m W^m U'^(m(m-1)/2),
                //   (g_j U^m Z)^vj   = g_j^vj U^(m vj) [U^m, g_j]^(vj(vj-1)/2) Z^vj.
                const auto& pd = basis_.pair_data(j, k, neg);
                out[count++] = {j, vj};
                for (std::size_t s = j + 1; s < n; ++s) {
                    if (pd.middle[s] == 0)
                        continue;
                    out[count++] = {s, Int(m * vj * pd.middle[s])};
                }
                Int vm = vj * m;
                add_scaled(v, pd.central, vm, j + 1, n);
                Int bm = vj * binom2(m);
                add_scaled(v, pd.middle_shift, bm, j + 1, n);
                Int bv = binom2(vj) * m;
                for (std::size_t s = j + 1; s < n; ++s) {
                    if (pd.middle[s] == 0)
                        continue;
                    Int f = bv * pd.middle[s];
                    add_scaled(v, basis_.central_commutator(s, j), f, s + 1, n);
                }
            }
            v[k] += e;
            while (count > 0) {
                --count;
                stack.push(out[count].symbol, out[count].exponent);
            }
        }
    }

    const NilpotentBasis& basis_;
};

} // namespace nilforge
