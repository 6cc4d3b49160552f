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

#include "photonet/tensor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "photonet/errors.hpp"

namespace photonet {

namespace {

size_t product(std::span<const int> dims) {
  size_t n = 1;
  for (int d : dims) n *= static_cast<size_t>(d);
  return n;
}

std::vector<size_t> strides_of(std::span<const int> shape) {
  std::vector<size_t> strides(shape.size(), 1);
  for (int i = static_cast<int>(shape.size()) - 2; i >= 0; --i) {
    strides[static_cast<size_t>(i)] =
        strides[static_cast<size_t>(i) + 1] * static_cast<size_t>(shape[static_cast<size_t>(i) + 1]);
  }
  return strides;
}

}  // namespace

Tensor::Tensor(std::vector<int> shape) : shape_(std::move(shape)), data_(product(shape_), Complex(0.0)) {}

Tensor::Tensor(std::vector<int> shape, std::vector<Complex> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != product(shape_)) {
    throw ShapeMismatch("tensor data size does not match its shape");
  }
}

Tensor Tensor::identity(int dim) {
  Tensor t({dim, dim});
  for (int i = 0; i < dim; ++i) t[static_cast<size_t>(i * dim + i)] = 1.0;
  return t;
}

size_t Tensor::flat_index(std::span<const int> index) const {
  size_t flat = 0;
  for (size_t i = 0; i < shape_.size(); ++i) {
    flat = flat * static_cast<size_t>(shape_[i]) + static_cast<size_t>(index[i]);
  }
  return flat;
}

Tensor Tensor::permuted(std::span<const int> perm) const {
  if (perm.size() != shape_.size()) throw ShapeMismatch("permutation rank mismatch");
  bool trivial = true;
  for (size_t i = 0; i < perm.size(); ++i) trivial = trivial && perm[i] == static_cast<int>(i);
  if (trivial) return *this;

  std::vector<int> new_shape(perm.size());
  for (size_t i = 0; i < perm.size(); ++i) new_shape[i] = shape_[static_cast<size_t>(perm[i])];
  const auto old_strides = strides_of(shape_);
  std::vector<size_t> src_strides(perm.size());
  for (size_t i = 0; i < perm.size(); ++i) src_strides[i] = old_strides[static_cast<size_t>(perm[i])];

  Tensor out(new_shape);
  size_t flat = 0;
  for_each_index(new_shape, [&](std::span<const int> idx) {
    size_t src = 0;
    for (size_t i = 0; i < idx.size(); ++i) src += src_strides[i] * static_cast<size_t>(idx[i]);
    out.data_[flat++] = data_[src];
  });
  return out;
}

Tensor Tensor::conj() const {
  Tensor out = *this;
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

Tensor& Tensor::operator*=(Complex k) {
  for (auto& z : data_) z *= k;
  return *this;
}

Tensor& Tensor::operator+=(const Tensor& other) {
  if (other.shape_ != shape_) throw ShapeMismatch("tensor sum of different shapes");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

double Tensor::max_abs_diff(const Tensor& other) const {
  if (other.shape_ != shape_) throw ShapeMismatch("comparing tensors of different shapes");
  double m = 0.0;
  for (size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::abs(data_[i] - other.data_[i]));
  return m;
}

Tensor contract_pair(const Tensor& a, std::span<const int> la, const Tensor& b, std::span<const int> lb,
                     std::vector<int>& out_labels, std::uint64_t* madds) {
  if (la.size() != a.rank() || lb.size() != b.rank()) throw ShapeMismatch("label count differs from rank");

  std::vector<int> free_a, shared_a, shared_b, free_b;
  for (size_t i = 0; i < la.size(); ++i) {
    auto it = std::find(lb.begin(), lb.end(), la[i]);
    if (it == lb.end()) {
      free_a.push_back(static_cast<int>(i));
    } else {
      shared_a.push_back(static_cast<int>(i));
      shared_b.push_back(static_cast<int>(it - lb.begin()));
    }
  }
  for (size_t j = 0; j < lb.size(); ++j) {
    if (std::find(la.begin(), la.end(), lb[j]) == la.end()) free_b.push_back(static_cast<int>(j));
  }

  size_t m = 1, k = 1, n = 1;
  for (int i : free_a) m *= static_cast<size_t>(a.shape()[static_cast<size_t>(i)]);
  for (size_t s = 0; s < shared_a.size(); ++s) {
    int da = a.shape()[static_cast<size_t>(shared_a[s])];
    int db = b.shape()[static_cast<size_t>(shared_b[s])];
    if (da != db) throw ShapeMismatch("shared label with different dimensions");
    k *= static_cast<size_t>(da);
  }
  for (int j : free_b) n *= static_cast<size_t>(b.shape()[static_cast<size_t>(j)]);
  if (madds) *madds += static_cast<std::uint64_t>(m) * k * n;

  std::vector<int> perm_a = free_a;
  perm_a.insert(perm_a.end(), shared_a.begin(), shared_a.end());
  std::vector<int> perm_b = shared_b;
  perm_b.insert(perm_b.end(), free_b.begin(), free_b.end());
  const Tensor pa = a.permuted(perm_a);
  const Tensor pb = b.permuted(perm_b);

  using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> ma(pa.data().data(), static_cast<long>(m), static_cast<long>(k));
  Eigen::Map<const RowMat> mb(pb.data().data(), static_cast<long>(k), static_cast<long>(n));

  std::vector<int> shape;
  out_labels.clear();
  for (int i : free_a) {
    shape.push_back(a.shape()[static_cast<size_t>(i)]);
    out_labels.push_back(la[static_cast<size_t>(i)]);
  }
  for (int j : free_b) {
    shape.push_back(b.shape()[static_cast<size_t>(j)]);
    out_labels.push_back(lb[static_cast<size_t>(j)]);
  }
  Tensor out(shape);
  Eigen::Map<RowMat> mc(out.data().data(), static_cast<long>(m), static_cast<long>(n));
  if (k == 0 || m == 0 || n == 0) {
    mc.setZero();
  } else {
    mc.noalias() = ma * mb;
  }
  return out;
}

}  // namespace photonet
