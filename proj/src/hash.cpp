#include "splforge/hash.hpp"

#include <cstdio>

namespace splforge {

std::string to_hex16(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return std::string(buf, 16);
}

} // namespace splforge
