#pragma once

namespace psflab {
inline constexpr const char* kEngineVersion = "psflab/1.0.0";
}
