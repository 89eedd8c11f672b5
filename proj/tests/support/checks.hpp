#pragma once

#include <doctest.h>

#include "sketchsearch/error.hpp"

/// Asserts that an expression throws sketchsearch::Error with the given code.
#define CHECK_ERROR_CODE(expr, expected)                              \
  do {                                                                \
    bool thrown_ = false;                                             \
    try {                                                             \
      (void)(expr);                                                   \
    } catch (const ::sketchsearch::Error& e_) {                       \
      thrown_ = true;                                                 \
      CHECK_MESSAGE(e_.code() == (expected), e_.what());              \
    }                                                                 \
    CHECK_MESSAGE(thrown_, "expected " #expected " from " #expr);     \
  } while (false)
