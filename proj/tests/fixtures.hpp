#pragma once

#include "kong/net_formats.hpp"

#include <string>

namespace kong::testing {

inline std::string data_path(const std::string& name) { return std::string(KONG_TEST_DATA) + "/" + name; }

inline NetDocument load_fixture(const std::string& name) { return load_net_file(data_path(name)); }

inline NetDocument seq2() { return parse_net_text("pl a 1\npl b\ntr t : a -> b\n"); }

inline NetDocument fork() { return parse_net_text("pl p0 1\npl p1\npl p2\ntr t : p0 -> p1 p2\n"); }

} // namespace kong::testing
