#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "qauth/linalg/matrix.hpp"

namespace qauth::linalg {

/// Tensor-factor dimensions of a composite space, left to right. The
/// leftmost factor is the slowest-varying index of the flattened basis.
class SubsystemLayout {
 public:
  SubsystemLayout(std::vector<std::size_t> factor_dims) : dims_(std::move(factor_dims)) {
    if (dims_.empty()) throw DimensionError("SubsystemLayout: no factors");
    for (auto d : dims_) {
      if (d == 0) throw DimensionError("SubsystemLayout: zero-dimensional factor");
    }
  }
  SubsystemLayout(std::initializer_list<std::size_t> dims) : SubsystemLayout(std::vector<std::size_t>(dims)) {}

  const std::vector<std::size_t>& factor_dims() const noexcept { return dims_; }
  std::size_t factor_count() const noexcept { return dims_.size(); }

  std::size_t total_dim() const {
    return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>{});
  }

 private:
  std::vector<std::size_t> dims_;
};

/// Traces out the factors listed in `traced`; the result lives on the
/// remaining factors in their original order. Tracing every factor yields a
/// 1x1 matrix holding tr(m).
inline ComplexMatrix partial_trace(const ComplexMatrix& m, const SubsystemLayout& layout,
                                   const std::set<std::size_t>& traced) {
  if (!m.is_square()) throw DimensionError("partial_trace: matrix is " + m.shape());
  if (m.rows() != layout.total_dim()) {
    throw DimensionError("partial_trace: matrix " + m.shape() + " does not match layout dimension " +
                         std::to_string(layout.total_dim()));
  }
  for (auto idx : traced) {
    if (idx >= layout.factor_count()) {
      throw DimensionError("partial_trace: factor index " + std::to_string(idx) + " out of range for " +
                           std::to_string(layout.factor_count()) + " factors");
    }
  }

  const auto& dims = layout.factor_dims();
  const std::size_t n = dims.size();

  // Strides of each factor in the flattened index.
  std::vector<std::size_t> stride(n);
  std::size_t s = 1;
  for (std::size_t k = n; k-- > 0;) {
    stride[k] = s;
    s *= dims[k];
  }

  std::vector<std::size_t> kept, gone;
  for (std::size_t k = 0; k < n; ++k) (traced.count(k) ? gone : kept).push_back(k);

  std::size_t kept_dim = 1, gone_dim = 1;
  for (auto k : kept) kept_dim *= dims[k];
  for (auto k : gone) gone_dim *= dims[k];

  // Map a mixed-radix index over a factor subset to its flattened offset.
  auto offset_of = [&](std::size_t index, const std::vector<std::size_t>& factors) {
    std::size_t off = 0;
    for (std::size_t j = factors.size(); j-- > 0;) {
      const auto k = factors[j];
      off += (index % dims[k]) * stride[k];
      index /= dims[k];
    }
    return off;
  };

  std::vector<std::size_t> kept_off(kept_dim), gone_off(gone_dim);
  for (std::size_t i = 0; i < kept_dim; ++i) kept_off[i] = offset_of(i, kept);
  for (std::size_t i = 0; i < gone_dim; ++i) gone_off[i] = offset_of(i, gone);

  ComplexMatrix out(kept_dim, kept_dim);
  for (std::size_t r = 0; r < kept_dim; ++r)
    for (std::size_t c = 0; c < kept_dim; ++c) {
      Complex acc{};
      for (std::size_t g = 0; g < gone_dim; ++g) acc += m(kept_off[r] + gone_off[g], kept_off[c] + gone_off[g]);
      out(r, c) = acc;
    }
  return out;
}

}  // namespace qauth::linalg
