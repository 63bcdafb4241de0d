#ifndef RWALK_VERSION_HPP
#define RWALK_VERSION_HPP

#include <string_view>

namespace rwalk {

inline constexpr std::string_view tool_name = "rwalk";
inline constexpr std::string_view tool_version = "0.1.0";

}  // namespace rwalk

#endif  // RWALK_VERSION_HPP
