#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace csm {

std::string base64_encode(std::span<const std::uint8_t> bytes);

/// Strict decoder: standard alphabet with '=' padding; throws FormatError on
/// anything else.
std::vector<std::uint8_t> base64_decode(const std::string& text);

}  // namespace csm
