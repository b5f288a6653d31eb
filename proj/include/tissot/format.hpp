#pragma once

#include <string>

namespace tissot {

/// Fixed-point text with `places` decimals; "-0.000…" is printed without the
/// sign and non-finite values as "nan", "inf" or "-inf". Every numeric field
/// the tools emit goes through here.
std::string format_fixed(double value, int places);

}  // namespace tissot
