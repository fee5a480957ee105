#pragma once

#include <optional>

#include "core/error.hpp"

// Error code thrown by fn, or nullopt when it returns normally.
template <class F>
std::optional<dlab::Errc> error_code(F&& fn) {
  try {
    fn();
  } catch (const dlab::Error& e) {
    return e.code();
  }
  return std::nullopt;
}
