#pragma once

#include <string>
#include <string_view>

namespace snipfit::corpus {

/// Classic Porter (1980) suffix stripper. Input is expected lowercase ASCII;
/// words of length <= 2 are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace snipfit::corpus
