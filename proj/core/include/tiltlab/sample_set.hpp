#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tiltlab/errors.hpp"

namespace tiltlab {

// n points in R^d stored row-major.
class SampleSet {
 public:
  SampleSet() = default;
  explicit SampleSet(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw InvalidArgument("SampleSet: dimension must be at least 1");
  }
  SampleSet(std::size_t dim, std::vector<double> flat) : dim_(dim), data_(std::move(flat)) {
    if (dim == 0) throw InvalidArgument("SampleSet: dimension must be at least 1");
    if (data_.size() % dim != 0) throw InvalidArgument("SampleSet: flat size is not a multiple of dim");
  }

  static SampleSet scalar(std::vector<double> values) { return SampleSet(1, std::move(values)); }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : data_.size() / dim_; }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const double> operator[](std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<double> operator[](std::size_t i) { return {data_.data() + i * dim_, dim_}; }

  void push_back(std::span<const double> point) {
    if (point.size() != dim_) throw InvalidArgument("SampleSet: point dimension mismatch");
    data_.insert(data_.end(), point.begin(), point.end());
  }
  void reserve(std::size_t n) { data_.reserve(n * dim_); }

  // Scalar view; only valid for dim() == 1.
  std::span<const double> values() const {
    if (dim_ != 1) throw InvalidArgument("SampleSet: values() requires dimension 1");
    return data_;
  }
  const std::vector<double>& flat() const noexcept { return data_; }

  // Coordinate j of every point.
  std::vector<double> column(std::size_t j) const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = data_[i * dim_ + j];
    return out;
  }

  bool operator==(const SampleSet&) const = default;

 private:
  std::size_t dim_ = 1;
  std::vector<double> data_;
};

}  // namespace tiltlab
