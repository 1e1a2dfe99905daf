#pragma once

#include <string>

namespace fdrlab {

// Shortest decimal string that parses back to the same double ("inf",
// "-inf" and "nan" for non-finite values).
std::string format_double(double value);

}  // namespace fdrlab
