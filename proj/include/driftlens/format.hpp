#pragma once

#include <string>

namespace driftlens {

// Shortest decimal that parses back to the same double.
std::string shortest(double v);
// Two-decimal fixed notation used for accuracy percentages.
std::string fixed2(double v);

}  // namespace driftlens
