#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nmrdiscord/nmrsim.hpp"

namespace nmrdiscord {

/// Line-oriented sequence description with explicit units, one event per line:
///
///   pulse A 90 deg phase 270 deg     (target A | B | both; phase defaults to 0)
///   delay 2.283 ms zz                (s | ms | us; coupling zz | isotropic, default zz)
///   grad
///   spinlock 16.4 s
///
/// Blank lines and text after '#' are ignored. Angles accept deg or rad. Keywords are
/// case-insensitive. Throws ParseError naming the offending line.
std::vector<SequenceEvent> parse_sequence(std::string_view text);

/// Inverse of parse_sequence; angles in deg, times in s, printed with round-trip precision.
std::string format_sequence(const std::vector<SequenceEvent>& events);

}  // namespace nmrdiscord
