#pragma once

#include "codafin/coda/sbp.hpp"
#include "codafin/ratios/ratio_spec.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace codafin::ratios {

// Fixed part identifiers. D3 order is (STL, LTL, EQ) = (x1, x2, x3);
// D4 order is (LTL, STL, FA, CA) = (x1, x2, x3, x4).
inline constexpr const char* kShortTermLiabilities = "STL";
inline constexpr const char* kLongTermLiabilities = "LTL";
inline constexpr const char* kEquity = "EQ";
inline constexpr const char* kFixedAssets = "FA";
inline constexpr const char* kCurrentAssets = "CA";

enum class Scheme { d3, d4 };

[[nodiscard]] std::string_view to_string(Scheme scheme);
/// Accepts "d3"/"D3"/"d4"/"D4". @throws SpecificationError otherwise.
[[nodiscard]] Scheme parse_scheme(std::string_view text);

[[nodiscard]] std::vector<std::string> scheme_labels(Scheme scheme);

/// (STL | (LTL | EQ)): short-term liabilities against long-term capital, then LTL against equity.
[[nodiscard]] coda::SbpTree liabilities_sbp();

/// ((LTL | STL) | (FA | CA)): liabilities against assets, then within each side.
[[nodiscard]] coda::SbpTree balance_sheet_sbp();

struct Catalog {
    Scheme scheme;
    std::vector<std::string> labels;
    coda::SbpTree sbp;
    std::vector<RatioSpec> ratios;

    /// Exact name, or a catalog name plus "_p" for its permutation.
    /// @throws LookupError if nothing matches.
    [[nodiscard]] RatioSpec find(std::string_view name) const;
};

/**
 * Named ratios for a scheme.
 *
 * D3: r1 = STL/(LTL+EQ), r1_p, r2 = LTL/EQ, r2_p, z1, z2.
 * D4: r1 = (LTL+STL)/(FA+CA), r2 = LTL/STL, r3 = FA/CA, r1_p, z1, z2, z3.
 *
 * Compositional entries follow the scheme's SBP in coordinate order.
 */
[[nodiscard]] Catalog standard_catalog(Scheme scheme);

/// Catalog name, permuted catalog name, or a full text declaration.
[[nodiscard]] RatioSpec resolve_ratio(const Catalog& catalog, std::string_view text);

}  // namespace codafin::ratios
