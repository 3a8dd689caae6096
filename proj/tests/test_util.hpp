#pragma once

#include <doctest.h>

#include <functional>
#include <string>

#include "core/common.hpp"

namespace olab_test {

// Asserts that fn() throws olab::Error with the given code and a message
// containing `needle`.
inline void expect_error(olab::errc code, const std::string& needle,
                         const std::function<void()>& fn) {
  try {
    fn();
    FAIL_CHECK("expected an error containing \"" << needle << "\"; nothing was thrown");
  } catch (const olab::Error& e) {
    CHECK(static_cast<int>(e.code) == static_cast<int>(code));
    CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, "message \"",
                  e.what(), "\" lacks \"", needle, "\"");
  }
}

}  // namespace olab_test
