#pragma once

#include <string>
#include <string_view>

namespace stressdetect {

// Porter (1980) suffix stripper, following the behaviour of Martin Porter's
// reference ANSI C release, including its two departures from the original
// description ("bli" -> "ble" and "logi" -> "log" in step 2). Operates on
// bytes; words of one or two characters are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace stressdetect
