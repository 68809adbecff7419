#include <algorithm>
#include <stdexcept>

#include "hvi/models.hpp"

namespace hvi {

ModelParameters::ModelParameters(std::vector<std::string> theta_names, std::vector<double> theta_values,
                                 std::vector<std::string> phi_names, std::vector<double> phi_values) {
  if (theta_names.size() != theta_values.size() || phi_names.size() != phi_values.size())
    throw std::invalid_argument("ModelParameters: name/value length mismatch");
  theta_size_ = theta_names.size();
  names_ = std::move(theta_names);
  names_.insert(names_.end(), phi_names.begin(), phi_names.end());
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (std::find(names_.begin(), names_.begin() + static_cast<std::ptrdiff_t>(i), names_[i]) !=
        names_.begin() + static_cast<std::ptrdiff_t>(i))
      throw std::invalid_argument("ModelParameters: duplicate name '" + names_[i] + "'");
  }
  values_.resize(static_cast<Eigen::Index>(names_.size()));
  std::size_t k = 0;
  for (double v : theta_values) values_[static_cast<Eigen::Index>(k++)] = v;
  for (double v : phi_values) values_[static_cast<Eigen::Index>(k++)] = v;
}

void ModelParameters::set_values(const Vector& values) {
  if (static_cast<std::size_t>(values.size()) != names_.size())
    throw std::invalid_argument("ModelParameters: expected " + std::to_string(names_.size()) +
                                " values, got " + std::to_string(values.size()));
  values_ = values;
}

const std::string& ModelParameters::name_of(std::size_t index) const {
  if (index >= names_.size()) throw std::out_of_range("ModelParameters: index out of range");
  return names_[index];
}

std::size_t ModelParameters::index_of(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw std::out_of_range("ModelParameters: unknown parameter '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

}  // namespace hvi
