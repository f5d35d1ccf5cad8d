#include "fdsa/core.hpp"

namespace fdsa {

std::string_view to_string(Scheme s) noexcept {
  return s == Scheme::symmetric ? "sym" : "one";
}

std::string_view to_string(Coupling c) noexcept {
  return c == Coupling::crn ? "crn" : "ind";
}

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::inversion:
      return "inv";
    case Method::rejection:
      return "rej";
    case Method::composition_two_uniform:
      return "comp2";
    case Method::composition_derived:
      return "compd";
  }
  return "?";
}

}  // namespace fdsa
