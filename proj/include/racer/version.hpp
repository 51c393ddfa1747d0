#ifndef RACER_VERSION_HPP
#define RACER_VERSION_HPP

namespace racer {

inline constexpr const char* kCodeVersion = "0.1.0";

}  // namespace racer

#endif  // RACER_VERSION_HPP
