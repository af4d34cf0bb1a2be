#ifndef FTN_VERSION_HPP
#define FTN_VERSION_HPP

namespace ftn {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
