#pragma once

namespace opk::detail {

// Compensated accumulator; long double instantiation is used wherever a long
// chain of additions has to stay well below the 1e-9 relative tolerances.
template <class T>
struct KahanSum {
  T sum{};
  T comp{};
  void add(T v) {
    const T y = v - comp;
    const T t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

}  // namespace opk::detail
