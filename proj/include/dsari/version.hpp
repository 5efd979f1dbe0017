#ifndef DSARI_VERSION_HPP
#define DSARI_VERSION_HPP

namespace dsari {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dsari

#endif  // DSARI_VERSION_HPP
