#pragma once

#include <deque>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace srlfuse::nn {

using Matrix = Eigen::MatrixXd;
using Rng = std::mt19937_64;

class Parameter {
 public:
  Parameter(std::string name, Matrix init, bool trainable = true);

  const std::string& name() const noexcept { return name_; }
  bool trainable() const noexcept { return trainable_; }
  void set_trainable(bool t) noexcept { trainable_ = t; }
  void zero_grad() { grad.setZero(); }

  Matrix value;
  Matrix grad;

 private:
  std::string name_;
  bool trainable_;
};

// Owns parameters in creation order. Addresses are stable for the lifetime of
// the set, so layers hold plain pointers into it.
class ParameterSet {
 public:
  ParameterSet() = default;
  ParameterSet(const ParameterSet&) = delete;
  ParameterSet& operator=(const ParameterSet&) = delete;

  Parameter& create(std::string name, Matrix init, bool trainable = true);
  Parameter& uniform(std::string name, Eigen::Index rows, Eigen::Index cols, double scale, Rng& rng);
  // Glorot-uniform initialisation.
  Parameter& glorot(std::string name, Eigen::Index rows, Eigen::Index cols, Rng& rng);
  Parameter& zeros(std::string name, Eigen::Index rows, Eigen::Index cols);

  Parameter* find(std::string_view name);
  const Parameter* find(std::string_view name) const;
  Parameter& at(std::string_view name);

  std::vector<Parameter*> all();
  std::vector<const Parameter*> all() const;
  std::size_t size() const noexcept { return params_.size(); }
  std::size_t scalar_count() const;

  void zero_grad();
  double grad_norm() const;
  void clip_grad_norm(double max_norm);

  // Copies values from another set with the same names and shapes.
  void assign_from(const ParameterSet& other);
  bool values_equal(const ParameterSet& other) const;

 private:
  std::deque<Parameter> params_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace srlfuse::nn
