#pragma once

#include <iosfwd>

namespace friable::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kDomain = 2;
inline constexpr int kCapacity = 3;

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace friable::cli
