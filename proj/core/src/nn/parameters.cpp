#include "srlfuse/nn/parameters.hpp"

#include <cmath>

#include "srlfuse/error.hpp"

namespace srlfuse::nn {

Parameter::Parameter(std::string name, Matrix init, bool trainable)
    : value(std::move(init)), name_(std::move(name)), trainable_(trainable) {
  grad = Matrix::Zero(value.rows(), value.cols());
}

Parameter& ParameterSet::create(std::string name, Matrix init, bool trainable) {
  if (index_.contains(name)) fail(ErrorKind::kInvalidArgument, "duplicate parameter " + name);
  index_.emplace(name, params_.size());
  return params_.emplace_back(std::move(name), std::move(init), trainable);
}

Parameter& ParameterSet::uniform(std::string name, Eigen::Index rows, Eigen::Index cols, double scale, Rng& rng) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = dist(rng);
  return create(std::move(name), std::move(m));
}

Parameter& ParameterSet::glorot(std::string name, Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  const double scale = std::sqrt(6.0 / static_cast<double>(rows + cols));
  return uniform(std::move(name), rows, cols, scale, rng);
}

Parameter& ParameterSet::zeros(std::string name, Eigen::Index rows, Eigen::Index cols) {
  return create(std::move(name), Matrix::Zero(rows, cols));
}

Parameter* ParameterSet::find(std::string_view name) {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &params_[it->second];
}

const Parameter* ParameterSet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &params_[it->second];
}

Parameter& ParameterSet::at(std::string_view name) {
  auto* p = find(name);
  if (!p) fail(ErrorKind::kModel, "unknown parameter " + std::string(name));
  return *p;
}

std::vector<Parameter*> ParameterSet::all() {
  std::vector<Parameter*> out;
  out.reserve(params_.size());
  for (auto& p : params_) out.push_back(&p);
  return out;
}

std::vector<const Parameter*> ParameterSet::all() const {
  std::vector<const Parameter*> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.push_back(&p);
  return out;
}

std::size_t ParameterSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += static_cast<std::size_t>(p.value.size());
  return n;
}

void ParameterSet::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

double ParameterSet::grad_norm() const {
  double sq = 0.0;
  for (const auto& p : params_)
    if (p.trainable()) sq += p.grad.squaredNorm();
  return std::sqrt(sq);
}

void ParameterSet::clip_grad_norm(double max_norm) {
  const double norm = grad_norm();
  if (max_norm <= 0.0 || norm <= max_norm) return;
  const double s = max_norm / norm;
  for (auto& p : params_) p.grad *= s;
}

void ParameterSet::assign_from(const ParameterSet& other) {
  for (auto& p : params_) {
    const auto* src = other.find(p.name());
    if (!src) fail(ErrorKind::kModel, "parameter " + p.name() + " missing from source");
    if (src->value.rows() != p.value.rows() || src->value.cols() != p.value.cols())
      fail(ErrorKind::kModel, "parameter " + p.name() + " has a different shape in source");
    p.value = src->value;
  }
}

bool ParameterSet::values_equal(const ParameterSet& other) const {
  if (other.size() != size()) return false;
  for (const auto& p : params_) {
    const auto* q = other.find(p.name());
    if (!q || q->value.rows() != p.value.rows() || q->value.cols() != p.value.cols() || q->value != p.value)
      return false;
  }
  return true;
}

}  // namespace srlfuse::nn
