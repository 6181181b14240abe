#pragma once

namespace netprof {

// Fixed build string; machine-readable outputs embed it, so no timestamps here.
inline constexpr const char* kToolVersion = "netprof 1.0.0";

}  // namespace netprof
