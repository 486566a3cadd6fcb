#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace namelex {

/// Malformed input files and inconsistent run inputs. The CLI maps this to
/// exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

template <typename... Parts>
std::string msg(Parts&&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

}  // namespace detail

template <typename... Parts>
[[noreturn]] void fail_input(Parts&&... parts) {
  throw InputError(detail::msg(std::forward<Parts>(parts)...));
}

/// Parse failure at a specific line of a source file/stream.
template <typename... Parts>
[[noreturn]] void fail_parse(const std::string& source, std::size_t line,
                             Parts&&... parts) {
  throw InputError(detail::msg(source, ":", line, ": ",
                               std::forward<Parts>(parts)...));
}

}  // namespace namelex
