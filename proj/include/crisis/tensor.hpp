#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace crisis {

// Dense row-major matrix with a paired gradient buffer. Vectors are rows=n,
// cols=1. Names identify tensors across checkpoint save/restore.
struct Tensor {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> value;
  std::vector<double> grad;

  Tensor() = default;
  Tensor(std::string name, std::size_t rows, std::size_t cols)
      : name(std::move(name)),
        rows(rows),
        cols(cols),
        value(rows * cols, 0.0),
        grad(rows * cols, 0.0) {}

  std::size_t size() const { return value.size(); }
  double& at(std::size_t r, std::size_t c) { return value[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return value[r * cols + c]; }
  double& gat(std::size_t r, std::size_t c) { return grad[r * cols + c]; }
  void zero_grad() { std::fill(grad.begin(), grad.end(), 0.0); }
};

}  // namespace crisis
