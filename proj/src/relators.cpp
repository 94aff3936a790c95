#include "nilforge/quotient.hpp"

namespace nilforge {

std::string_view kind_name(RelatorKind kind)
{
    switch (kind) {
    case RelatorKind::N_r:
        return "N_r";
    case RelatorKind::K:
        return "K";
    case RelatorKind::M:
        return "M";
    case RelatorKind::DH_M_r:
        return "M_r";
    }
    return "?";
}

RelatorSet standard_relators(RelatorKind kind, std::int64_t p, std::int64_t r)
{
    const bool two_generated = kind != RelatorKind::DH_M_r;
    if (!is_prime(p) || (two_generated && p <= 3) || (!two_generated && p == 2))
        throw std::invalid_argument("invalid prime " + std::to_string(p) + " for " + std::string(kind_name(kind)));
    const bool uses_r = kind == RelatorKind::N_r || kind == RelatorKind::DH_M_r;
    if (uses_r && (r < 1 || r >= p))
        throw std::invalid_argument("r must lie in [1, p-1], got " + std::to_string(r));

    RelatorSet rel;
    rel.prime = p;
    rel.label = std::string(kind_name(kind)) + "(p=" + std::to_string(p) +
                (uses_r ? ",r=" + std::to_string(r) : std::string()) + ")";
    const long P = static_cast<long>(p), R = static_cast<long>(r);

    if (two_generated) {
        auto b = builtin_basis("F23");
        rel.basis = b;
        auto add = [&](std::initializer_list<long> e) { rel.relators.emplace_back(b, e); };
        if (kind == RelatorKind::M) {
            add({P, 0, 0, 0, 0});
            add({0, 1, 0, 0, 0});
            return rel;
        }
        add({P * P, 0, 0, 0, 0});
        add({0, P, 0, 0, 0});
        if (kind == RelatorKind::N_r)
            add({-R * P, 0, 0, 1, 0});
        add({0, 0, 0, 0, 1});
        return rel;
    }

    auto b = builtin_basis("F32");
    rel.basis = b;
    auto add = [&](std::initializer_list<long> e) { rel.relators.emplace_back(b, e); };
    add({0, 0, 0, P, 0, 0});
    add({0, 0, 0, 0, P, 0});
    add({0, 0, 0, 0, 0, P});
    // Without these the literal subgroup has index r^3 p^6: the quotient
    // then has an extra abelian factor of order r^3 and is not a p-group.
    add({P * P, 0, 0, 0, 0, 0});
    add({0, P * P, 0, 0, 0, 0});
    add({0, 0, P * P, 0, 0, 0});
    add({R * P, 0, 0, 1, 0, 0});
    add({0, R * P, 0, 0, 1, 0});
    add({0, 0, R * P, 0, -1, 1});
    return rel;
}

} // namespace nilforge
