#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nilforge {

// Upper bound on the number of basis symbols of any supported ambient group.
inline constexpr std::size_t kMaxSymbols = 8;

using RuleVector = std::array<std::int64_t, kMaxSymbols>;

enum class SymbolKind {
    generator, // weight 1
    middle,    // 1 < weight < class: commutes with other non-generators
    central,   // weight == class
};

struct BasisSymbol {
    std::string name;
    int weight = 1;
    // Defining bracket [first, second] for weight >= 2; indices of earlier symbols.
    std::optional<std::pair<std::size_t, std::size_t>> bracket;
};

/// Ordered Hall basis of a free nilpotent group of class <= 3, together with
/// the conjugation rules used by the collector.
///
/// Commutators follow [a,b] = a^-1 b^-1 a b and are left-normed:
/// [a,b,c] = [[a,b],c]. For every pair high > low the basis stores the
/// normal forms of high^low and high^(low^-1); these are derived from the
/// defining brackets, never entered by hand.
class NilpotentBasis {
public:
    static std::shared_ptr<const NilpotentBasis> create(std::string name, std::size_t rank,
                                                        int nilpotency_class,
                                                        std::vector<BasisSymbol> symbols);

    const std::string& name() const { return name_; }
    std::size_t rank() const { return rank_; }
    int nilpotency_class() const { return class_; }
    std::size_t size() const { return symbols_.size(); }

    const BasisSymbol& symbol(std::size_t i) const { return symbols_.at(i); }
    int weight(std::size_t i) const { return symbols_[i].weight; }
    SymbolKind kind(std::size_t i) const { return kinds_[i]; }
    std::optional<std::size_t> find(std::string_view name) const;

    /// Normal form of high^low (inverse_conjugator = false) or high^(low^-1).
    const RuleVector& conjugate(std::size_t high, std::size_t low, bool inverse_conjugator) const
    {
        return (inverse_conjugator ? neg_ : pos_)[high * kMaxSymbols + low];
    }
    bool commutes(std::size_t high, std::size_t low) const
    {
        return trivial_[high * kMaxSymbols + low];
    }

    // Collector tables, indexed [high * kMaxSymbols + low].
    // For generator pairs: the middle and central parts of the conjugation
    // rule and the central part U' of conjugating the middle part once more.
    struct GeneratorPairData {
        RuleVector middle{};
        RuleVector central{};
        RuleVector middle_shift{};
    };
    const GeneratorPairData& pair_data(std::size_t high, std::size_t low, bool inverse_conjugator) const
    {
        return (inverse_conjugator ? pair_neg_ : pair_pos_)[high * kMaxSymbols + low];
    }
    /// Central part of s^g for a non-generator s and generator g, i.e. [s, g].
    const RuleVector& central_commutator(std::size_t s, std::size_t g) const
    {
        return comm_[s * kMaxSymbols + g];
    }

private:
    NilpotentBasis() = default;
    void derive_rules();

    std::string name_;
    std::size_t rank_ = 0;
    int class_ = 0;
    std::vector<BasisSymbol> symbols_;
    std::vector<SymbolKind> kinds_;
    std::vector<RuleVector> pos_, neg_;
    std::vector<bool> trivial_;
    std::vector<GeneratorPairData> pair_pos_, pair_neg_;
    std::vector<RuleVector> comm_;
};

using BasisPtr = std::shared_ptr<const NilpotentBasis>;

/// "F23": rank 2, class 3 with symbols x, y, [y,x], [y,x,x], [y,x,y].
/// "F32": rank 3, class 2 with symbols x, y, z, [y,x], [z,x], [z,y].
/// Rules are checked against the truncated series embedding on first use.
BasisPtr builtin_basis(std::string_view name);

} // namespace nilforge
