#pragma once

#include <doctest.h>

#include <cstddef>

#include "error.hpp"
#include "params.hpp"

namespace radner::testing {

// Code of the radner::Error thrown by fn; fails the test when nothing is thrown.
template <class F>
ErrorCode code_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kInvalidArgument;
}

// Base point with the noise switched off; everything is polynomial in t.
inline ModelParams degenerate(double a = 1.0) {
  ModelParams p = ModelParams::figure1_base(a);
  p.sigma_Yp = 0.0;
  return p;
}

// Uniform grid on [0, end] with n points.
inline double grid_t(std::size_t k, std::size_t n, double end = 1.0) {
  return k + 1 == n ? end : end * static_cast<double>(k) / static_cast<double>(n - 1);
}

}  // namespace radner::testing
