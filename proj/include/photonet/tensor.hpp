// Copyright 2026 The Photonet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "photonet/types.hpp"

namespace photonet {

/// Dense complex tensor, row-major. A rank-0 tensor holds a single scalar.
class Tensor {
 public:
  Tensor() : data_{Complex(1.0)} {}
  explicit Tensor(std::vector<int> shape);
  Tensor(std::vector<int> shape, std::vector<Complex> data);

  static Tensor scalar(Complex value) { return Tensor({}, {value}); }
  static Tensor identity(int dim);

  const std::vector<int>& shape() const { return shape_; }
  size_t rank() const { return shape_.size(); }
  size_t size() const { return data_.size(); }

  Complex& operator[](size_t flat) { return data_[flat]; }
  const Complex& operator[](size_t flat) const { return data_[flat]; }
  Complex& at(std::span<const int> index) { return data_[flat_index(index)]; }
  const Complex& at(std::span<const int> index) const { return data_[flat_index(index)]; }
  size_t flat_index(std::span<const int> index) const;

  std::span<const Complex> data() const { return data_; }
  std::span<Complex> data() { return data_; }

  /// Axis `i` of the result is axis `perm[i]` of this tensor.
  Tensor permuted(std::span<const int> perm) const;
  Tensor conj() const;
  Tensor& operator*=(Complex k);
  Tensor& operator+=(const Tensor& other);

  double max_abs_diff(const Tensor& other) const;

 private:
  std::vector<int> shape_;
  std::vector<Complex> data_;
};

/// Calls `fn(index)` for every multi-index of `shape` in row-major order.
template <class Fn>
void for_each_index(std::span<const int> shape, Fn&& fn) {
  std::vector<int> index(shape.size(), 0);
  for (int d : shape) {
    if (d <= 0) return;
  }
  while (true) {
    fn(std::span<const int>(index));
    int axis = static_cast<int>(shape.size()) - 1;
    while (axis >= 0) {
      if (++index[static_cast<size_t>(axis)] < shape[static_cast<size_t>(axis)]) break;
      index[static_cast<size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) return;
  }
}

/// Contracts `a` (axes labelled `la`) with `b` (axes labelled `lb`) over every
/// label they share. The result carries the free labels of `a` followed by the
/// free labels of `b`, written to `out_labels`. The multiply-add count of the
/// contraction (product of the dimensions of all distinct labels) is added to
/// `*madds` when non-null.
Tensor contract_pair(const Tensor& a, std::span<const int> la, const Tensor& b,
                     std::span<const int> lb, std::vector<int>& out_labels,
                     std::uint64_t* madds = nullptr);

}  // namespace photonet
