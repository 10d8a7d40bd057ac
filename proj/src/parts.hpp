#pragma once

#include <span>

#include <boost/container/small_vector.hpp>

#include "kcdag/store.hpp"

namespace kcdag {

/// Short vertex list kept inline for the common case.
struct Parts : boost::container::small_vector<VertexId, 8> {
  using small_vector::small_vector;
  operator std::span<const VertexId>() const noexcept { return {data(), size()}; }
};

}  // namespace kcdag
