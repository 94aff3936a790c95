#pragma once

#include <string_view>

namespace nilforge {

// Bump when results or file formats change; cached quotients are keyed on it.
inline constexpr std::string_view kCodeVersion = "0.1.0";
inline constexpr std::string_view kReportSchema = "nilforge-report/1";
inline constexpr std::string_view kCacheSchema = "nilforge-quotient/1";

} // namespace nilforge
